#include <doctest.h>

#include "mixint/model.hpp"

using namespace mixint;

namespace {

std::vector<std::vector<int>> rows_of(const ExponentMatrix& A) {
  std::vector<std::vector<int>> rows(A.d, std::vector<int>(A.n()));
  for (int v = 0; v < A.n(); ++v)
    for (int i = 0; i < A.d; ++i) rows[i][v] = A.cols[v][i];
  return rows;
}

}  // namespace

TEST_CASE("model spec invariants") {
  ModelSpec scroll{{1, 2}, {1, 1}};
  CHECK(scroll.d() == 4);
  CHECK(scroll.column_sum() == 3);
  CHECK(scroll.state_count() == 8);
  CHECK(scroll.reduced_count() == 6);

  ModelSpec coin{{4}, {1}};
  CHECK(coin.d() == 2);
  CHECK(coin.state_count() == 16);
  CHECK(coin.reduced_count() == 5);

  CHECK_THROWS_AS((ModelSpec{{0}, {1}}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((ModelSpec{{1}, {0}}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((ModelSpec{{1, 1}, {1}}.validate()), std::invalid_argument);
}

TEST_CASE("rational normal scroll matrix") {
  // Three binary variables, the last two identically distributed.
  ExponentMatrix A = build_matrix({{1, 2}, {1, 1}});
  CHECK(rows_of(A) == std::vector<std::vector<int>>{
                          {1, 1, 1, 1, 0, 0, 0, 0},
                          {0, 0, 0, 0, 1, 1, 1, 1},
                          {2, 1, 1, 0, 2, 1, 1, 0},
                          {0, 1, 1, 2, 0, 1, 1, 2},
                      });
  CHECK(A.rank_dim() == 3);

  ReducedModel red = reduce_matrix(A);
  CHECK(red.matrix.n() == 6);
  CHECK(red.multiplicities == std::vector<long>{1, 2, 1, 1, 2, 1});
}

TEST_CASE("binomial mixture matrix") {
  ExponentMatrix A = build_matrix({{4}, {1}});
  CHECK(A.n() == 16);
  CHECK(A.colsum == 4);
  ReducedModel red = reduce_matrix(A);
  CHECK(rows_of(red.matrix) == std::vector<std::vector<int>>{
                                   {4, 3, 2, 1, 0},
                                   {0, 1, 2, 3, 4},
                               });
  CHECK(red.multiplicities == std::vector<long>{1, 4, 6, 4, 1});
}

TEST_CASE("matrix size budget") {
  CHECK_THROWS_AS(build_matrix({{30}, {1}}), BudgetError);
  CHECK_THROWS_AS(build_matrix({{10}, {1}}, 1000), BudgetError);
  CHECK_NOTHROW(build_matrix({{10}, {1}}, 1024));
}

TEST_CASE("explicit matrices") {
  ExponentMatrix A = explicit_matrix({{4, 3, 2, 1, 0}, {0, 1, 2, 3, 4}});
  CHECK(A.n() == 5);
  CHECK(A.d == 2);
  CHECK(A.colsum == 4);
  CHECK(A.groups() == 1);
  CHECK_THROWS_AS(explicit_matrix({{1, 2}, {1, 1}}), std::invalid_argument);
}

TEST_CASE("sufficient statistic") {
  ReducedModel red = reduce_matrix(build_matrix({{4}, {1}}));
  DataVector U{{51, 18, 73, 25, 75}};
  CHECK(sufficient_statistic(red.matrix, U) == std::vector<long>{429, 539});
}

TEST_CASE("normalizing constant") {
  DataVector U{{2, 2, 2, 2, 2}};
  CHECK(normalizing_constant(U) == Rat(113400));
  std::vector<long> mult{1, 4, 6, 4, 1};
  CHECK(normalizing_constant(U, &mult) == Rat(113400) * Rat(9216));
  DataVector empty{{0, 0}};
  CHECK(normalizing_constant(empty) == 1);
}

TEST_CASE("independence marginal, uniform prior") {
  ReducedModel red = reduce_matrix(build_matrix({{4}, {1}}));
  DataVector U{{2, 2, 2, 2, 2}};
  // b = (20, 20), so the integral is 20! 20! / 41!.
  Rat expected = Rat(113400 * 9216L) *
                 make_rat(factorial(20) * factorial(20), factorial(41));
  CHECK(independence_marginal(red.matrix, U, &red.multiplicities) == expected);
}

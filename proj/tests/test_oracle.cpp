#include <doctest.h>

#include "mixint/lattice.hpp"
#include "mixint/oracle.hpp"

using namespace mixint;

namespace {

ExponentMatrix binom_matrix() { return reduce_matrix(build_matrix({{4}, {1}})).matrix; }

}  // namespace

TEST_CASE("direct expansion reproduces the printed two-coin value") {
  ExponentMatrix At = binom_matrix();
  DataVector U{{2, 2, 2, 2, 2}};
  CHECK(brute_force_integral(At, U) ==
        Rat("66364720654753/59057383987217015339940000"));
}

TEST_CASE("direct expansion of empty data") {
  ExponentMatrix At = binom_matrix();
  DataVector U{{0, 0, 0, 0, 0}};
  CHECK(brute_force_integral(At, U) == 1);
}

TEST_CASE("direct expansion budget") {
  ExponentMatrix At = binom_matrix();
  DataVector U{{51, 18, 73, 25, 75}};
  CHECK_THROWS_AS(brute_force_integral(At, U, {}, OracleBudget{20, 1000, 1000}),
                  BudgetError);
}

TEST_CASE("binary scan for phi") {
  ExponentMatrix At = binom_matrix();
  DataVector U{{1, 1, 1, 1, 1}};
  CHECK(brute_force_phi(At, U, std::vector<long>{0, 0}) == 1);
  CHECK(brute_force_phi(At, U, std::vector<long>{10, 10}) == 1);
  CHECK(brute_force_phi(At, U, std::vector<long>{5, 3}) == 2);
  DataVector big{{10, 10, 10, 10, 10}};
  CHECK_THROWS_AS(brute_force_phi(At, big, std::vector<long>{0, 0}), BudgetError);
}

TEST_CASE("lattice scan of a single segment") {
  ExponentMatrix A = explicit_matrix({{4}, {0}});
  DataVector U{{2}};
  CHECK(brute_force_lattice_points(A, U) == 3);  // 0, a, 2a
}

TEST_CASE("lattice scan matches the subset formula") {
  ExponentMatrix At = binom_matrix();
  DataVector U{{1, 1, 1, 1, 1}};
  CHECK(brute_force_lattice_points(At, U) == zonotope_lattice_count(At, U));
}

TEST_CASE("unimodular two-by-two table model") {
  ExponentMatrix A = build_matrix({{1, 1}, {1, 1}});
  DataVector U{{2, 1, 1, 2}};
  auto bounds = monomial_bounds(A, U);
  CHECK(bounds.unimodular);
  Int scanned = brute_force_lattice_points(A, U);
  CHECK(scanned == bounds.upper_bound);
  CHECK(scanned == bounds.lower_bound);
}

TEST_CASE("lattice scan budget") {
  ExponentMatrix At = binom_matrix();
  DataVector U{{51, 18, 73, 25, 75}};
  OracleBudget tight;
  tight.max_box = 100;
  CHECK_THROWS_AS(brute_force_lattice_points(At, U, tight), BudgetError);
}

#include <doctest.h>

#include "mixint/lattice.hpp"

using namespace mixint;

namespace {

IMat mat(std::vector<std::vector<long>> rows) {
  IMat m;
  for (auto& r : rows) m.emplace_back(r.begin(), r.end());
  return m;
}

IMat mul(const IMat& a, const IMat& b) {
  IMat r(a.size(), std::vector<Int>(b[0].size(), Int(0)));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k)
      for (std::size_t j = 0; j < b[0].size(); ++j) r[i][j] += a[i][k] * b[k][j];
  return r;
}

}  // namespace

TEST_CASE("row Hermite form") {
  IMat M = mat({{2, 4}, {1, 3}});
  auto h = row_hnf(M);
  CHECK(h.H == mat({{1, 1}, {0, 2}}));
  CHECK(mul(h.V, M) == h.H);

  auto id = row_hnf(mat({{1, 0}, {0, 1}}));
  CHECK(id.H == mat({{1, 0}, {0, 1}}));

  // Rank-deficient input keeps zero rows at the bottom.
  auto r1 = row_hnf(mat({{2, 2}, {4, 4}}));
  CHECK(r1.H == mat({{2, 2}, {0, 0}}));
}

TEST_CASE("column Hermite form") {
  IMat M = mat({{2, 1}, {4, 3}});
  auto h = col_hnf(M);
  CHECK(mul(M, h.V) == h.H);
  for (std::size_t i = 0; i < h.H.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) CHECK(h.H[i][j] == 0);
}

TEST_CASE("subset index in the image lattice") {
  ExponentMatrix At = reduce_matrix(build_matrix({{4}, {1}})).matrix;
  // L = {(x, y) : 4 | x + y}; the sublattice spanned by (4,0) and (0,4) has
  // index 4 in it.
  CHECK(index_of_subset(At, {0, 4}) == 4);
  CHECK(index_of_subset(At, {0, 1}) == 1);
  CHECK(index_of_subset(At, {1, 3}) == 2);  // (3,1),(1,3): det 8, index 8/4
  CHECK(index_of_subset(At, {2}) == 1);
  CHECK_THROWS_AS(index_of_subset(At, {0, 0}), std::invalid_argument);
}

TEST_CASE("independent subset enumeration includes the empty set") {
  ExponentMatrix At = reduce_matrix(build_matrix({{4}, {1}})).matrix;
  long count = 0;
  bool saw_empty = false;
  enumerate_independent_subsets(At, [&](const IndependentSubset& s) {
    ++count;
    if (s.columns.empty()) {
      saw_empty = true;
      CHECK(s.index == 1);
    }
  });
  CHECK(count == 16);  // 1 + 5 + C(5,2)
  CHECK(saw_empty);
}

TEST_CASE("zonotope lattice count and bounds for the binomial model") {
  ExponentMatrix At = reduce_matrix(build_matrix({{4}, {1}})).matrix;
  DataVector U{{51, 18, 73, 25, 75}};
  auto bounds = monomial_bounds(At, U);
  CHECK(bounds.lower_bound == 22273);
  CHECK(bounds.upper_bound == 48646);
  CHECK(bounds.lattice_count == 48646);
  CHECK_FALSE(bounds.unimodular);
  CHECK(bounds.subset_count == 16);
  CHECK(zonotope_lattice_count(At, U) == 48646);
}

TEST_CASE("the 4x4 two-factor matrix is unimodular") {
  ExponentMatrix A = build_matrix({{1, 1}, {3, 3}});
  DataVector U{{4, 2, 2, 2, 2, 4, 2, 2, 2, 2, 4, 2, 2, 2, 2, 4}};
  auto bounds = monomial_bounds(A, U);
  CHECK(bounds.unimodular);
  CHECK(bounds.subset_count == 16145);
  CHECK(bounds.lattice_count == Int("3892097"));
  CHECK(bounds.lower_bound == bounds.upper_bound);
}

TEST_CASE("image lattice membership") {
  ExponentMatrix At = reduce_matrix(build_matrix({{4}, {1}})).matrix;
  IMat M = to_imat(At);
  CHECK(in_image_lattice(M, {Int(3), Int(1)}));
  CHECK(in_image_lattice(M, {Int(0), Int(0)}));
  CHECK(in_image_lattice(M, {Int(-4), Int(0)}));
  CHECK_FALSE(in_image_lattice(M, {Int(1), Int(0)}));
  CHECK_FALSE(in_image_lattice(M, {Int(2), Int(1)}));
}

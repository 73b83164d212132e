#pragma once

#include <functional>
#include <vector>

#include "mixint/model.hpp"

namespace mixint {

/// Dense integer matrix, row major.
using IMat = std::vector<std::vector<Int>>;

IMat to_imat(const ExponentMatrix& A);

/// A Hermite normal form together with the unimodular transform that
/// produced it: H = V * M for the row form, H = M * V for the column form.
struct HermiteForms {
  IMat H;
  IMat V;
};

/// Row Hermite normal form: H_ij = 0 for i > j, pivots positive, entries
/// above a pivot reduced into [0, pivot). Fraction-free row reduction with
/// minimal-absolute-value pivoting.
HermiteForms row_hnf(IMat M);

/// Column Hermite normal form in the convention with zeros below the
/// diagonal: H_ij = 0 for i > j, pivot of row i placed at column i whenever
/// the column count allows, row entries right of a pivot reduced mod it.
HermiteForms col_hnf(IMat M);

/// A linearly independent set of columns with its lattice index
/// index(S) = [RS cap L : ZS], where L = Z A.
struct IndependentSubset {
  std::vector<int> columns;
  Int index;
};

/// index(S) via the pivot-product formula: row HNF of A with S reordered
/// first, then the column HNF of that form; the ratio of the leading |S|
/// pivot products. Throws std::invalid_argument for dependent S.
Int index_of_subset(const ExponentMatrix& A, const std::vector<int>& subset);

/// Streams every linearly independent subset of the column multiset exactly
/// once, the empty set included, by depth-first extension with rank
/// tracking. The subset's index is computed before each callback.
void enumerate_independent_subsets(const ExponentMatrix& A,
                                   const std::function<void(const IndependentSubset&)>& fn);

/// Lattice-point count of the zonotope Z_A(U):
/// sum over independent S of index(S) * prod_{v in S} U_v.
Int zonotope_lattice_count(const ExponentMatrix& A, const DataVector& U);

/// Bounds on the number of monomials in the expanded mixture likelihood.
struct ZonotopeReport {
  Int lattice_count;
  Int lower_bound;
  Int upper_bound;     // equals lattice_count
  bool unimodular = false;
  long subset_count = 0;
};

ZonotopeReport monomial_bounds(const ExponentMatrix& A, const DataVector& U);

/// Whether b lies in the image lattice L = A * Z^n. Used by the brute-force
/// invariants, not by the main algorithms.
bool in_image_lattice(const IMat& A, const std::vector<Int>& b);

}  // namespace mixint

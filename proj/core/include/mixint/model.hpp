#pragma once

#include <vector>

#include "mixint/arith.hpp"

namespace mixint {

/// The pair (s, t) defining a Segre-Veronese independence model: k groups of
/// identically distributed variables, group i holding s[i] variables with
/// t[i] + 1 states each.
struct ModelSpec {
  std::vector<int> s;
  std::vector<int> t;

  int groups() const { return static_cast<int>(s.size()); }
  int d() const;             // sum(t_i) + k
  int column_sum() const;    // a = sum(s_i)
  Int state_count() const;   // n = prod (t_i+1)^{s_i}
  Int reduced_count() const; // n~ = prod C(s_i+t_i, s_i)

  void validate() const;
};

/// The d x n matrix A whose columns are the monomial exponent vectors of the
/// model parametrization. Rows are grouped: group i occupies t_i + 1
/// consecutive rows. Explicit (escape-hatch) matrices are carried as a single
/// group spanning all rows.
struct ExponentMatrix {
  int d = 0;
  int colsum = 0;                       // common L1 norm of every column
  std::vector<std::vector<int>> cols;   // column-major
  std::vector<int> group_s;             // s_i per group
  std::vector<int> group_rows;          // t_i + 1 rows per group
  bool structured = false;              // built from a ModelSpec

  int n() const { return static_cast<int>(cols.size()); }
  int groups() const { return static_cast<int>(group_s.size()); }
  int group_offset(int i) const;
  int rank_dim() const;                 // d0 = d - k + 1
};

/// Counts per state; pairs with A (full) or A~ (reduced).
struct DataVector {
  std::vector<long> counts;

  long sample_size() const;
};

/// A~ with distinct columns plus the multiplicity of each column in A.
struct ReducedModel {
  ExponentMatrix matrix;
  std::vector<long> multiplicities;
};

/// Enumerates the state space in lexicographic order (groups in index order,
/// positions within a group varying with state 0 < 1 < ... < t_i, rightmost
/// position fastest) and emits the exponent vector of each state.
/// Throws BudgetError when n exceeds max_columns.
ExponentMatrix build_matrix(const ModelSpec& spec, long max_columns = 10'000'000);

/// Wraps a raw integer matrix (given as rows) for models outside the (s, t)
/// family. All columns must share the same coordinate sum.
ExponentMatrix explicit_matrix(const std::vector<std::vector<int>>& rows);

/// Removes repeated columns, keeping first-occurrence order (which for
/// build_matrix output indexes columns by weakly increasing state vectors).
ReducedModel reduce_matrix(const ExponentMatrix& A);

/// Sufficient statistic b = A * U.
std::vector<long> sufficient_statistic(const ExponentMatrix& A, const DataVector& U);

/// N!/prod(U_v!), times prod alpha_i^{U_i} when multiplicities are given
/// (reduced data).
Rat normalizing_constant(const DataVector& U, const std::vector<long>* multiplicities = nullptr);

/// Exact marginal likelihood of U under the independence model with the
/// uniform prior: the normalizing constant times
/// prod_i t_i! b^(i)_0! ... b^(i)_{t_i}! / (s_i N + t_i)!.
Rat independence_marginal(const ExponentMatrix& A, const DataVector& U,
                          const std::vector<long>* multiplicities = nullptr);

}  // namespace mixint

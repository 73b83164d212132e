#include "mixint/lattice.hpp"

#include <algorithm>
#include <cstdlib>

namespace mixint {

IMat to_imat(const ExponentMatrix& A) {
  IMat M(A.d, std::vector<Int>(A.n()));
  for (int j = 0; j < A.n(); ++j)
    for (int i = 0; i < A.d; ++i) M[i][j] = A.cols[j][i];
  return M;
}

namespace {

IMat identity(int n) {
  IMat I(n, std::vector<Int>(n, 0));
  for (int i = 0; i < n; ++i) I[i][i] = 1;
  return I;
}

void row_axpy(IMat& M, int dst, int src, const Int& f) {
  if (sgn(f) == 0) return;
  auto& r = M[dst];
  const auto& s = M[src];
  for (std::size_t j = 0; j < r.size(); ++j) r[j] -= f * s[j];
}

void col_axpy(IMat& M, int dst, int src, const Int& f) {
  if (sgn(f) == 0) return;
  for (auto& row : M) row[dst] -= f * row[src];
}

void negate_row(IMat& M, int i) {
  for (auto& x : M[i]) x = -x;
}

void negate_col(IMat& M, int j) {
  for (auto& row : M) row[j] = -row[j];
}

Int floor_div(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

}  // namespace

HermiteForms row_hnf(IMat M) {
  int d = static_cast<int>(M.size());
  int n = d ? static_cast<int>(M[0].size()) : 0;
  IMat V = identity(d);
  int r = 0;
  for (int j = 0; j < n && r < d; ++j) {
    // Euclidean elimination below row r, minimal |pivot| first.
    for (;;) {
      int p = -1;
      for (int i = r; i < d; ++i)
        if (sgn(M[i][j]) != 0 && (p < 0 || cmp(abs(M[i][j]), abs(M[p][j])) < 0)) p = i;
      if (p < 0) break;
      bool others = false;
      for (int i = r; i < d; ++i) {
        if (i == p || sgn(M[i][j]) == 0) continue;
        Int q;
        mpz_tdiv_q(q.get_mpz_t(), M[i][j].get_mpz_t(), M[p][j].get_mpz_t());
        row_axpy(M, i, p, q);
        row_axpy(V, i, p, q);
        if (sgn(M[i][j]) != 0) others = true;
      }
      if (!others) {
        std::swap(M[p], M[r]);
        std::swap(V[p], V[r]);
        break;
      }
    }
    if (sgn(M[r][j]) == 0) continue;
    if (sgn(M[r][j]) < 0) {
      negate_row(M, r);
      negate_row(V, r);
    }
    for (int i = 0; i < r; ++i) {
      Int f = floor_div(M[i][j], M[r][j]);
      row_axpy(M, i, r, f);
      row_axpy(V, i, r, f);
    }
    ++r;
  }
  return {std::move(M), std::move(V)};
}

HermiteForms col_hnf(IMat M) {
  int d = static_cast<int>(M.size());
  int n = d ? static_cast<int>(M[0].size()) : 0;
  IMat V = identity(n);
  std::vector<bool> active(n, true);
  std::vector<std::pair<int, int>> pivots;  // (row, current column)
  for (int i = d - 1; i >= 0; --i) {
    for (;;) {
      int p = -1;
      for (int c = 0; c < n; ++c)
        if (active[c] && sgn(M[i][c]) != 0 && (p < 0 || cmp(abs(M[i][c]), abs(M[i][p])) < 0))
          p = c;
      if (p < 0) break;
      bool others = false;
      for (int c = 0; c < n; ++c) {
        if (!active[c] || c == p || sgn(M[i][c]) == 0) continue;
        Int q;
        mpz_tdiv_q(q.get_mpz_t(), M[i][c].get_mpz_t(), M[i][p].get_mpz_t());
        col_axpy(M, c, p, q);
        col_axpy(V, c, p, q);
        if (sgn(M[i][c]) != 0) others = true;
      }
      if (!others) {
        if (sgn(M[i][p]) < 0) {
          negate_col(M, p);
          negate_col(V, p);
        }
        active[p] = false;
        pivots.emplace_back(i, p);
        break;
      }
    }
  }
  // Place each pivot column on the diagonal of its pivot row when the column
  // count allows; otherwise pack pivots left in increasing row order.
  std::sort(pivots.begin(), pivots.end());
  bool diagonal = std::all_of(pivots.begin(), pivots.end(),
                              [n](const auto& p) { return p.first < n; });
  std::vector<int> target(n, -1);
  std::vector<bool> taken(n, false);
  for (std::size_t k = 0; k < pivots.size(); ++k) {
    int pos = diagonal ? pivots[k].first : static_cast<int>(k);
    target[pivots[k].second] = pos;
    taken[pos] = true;
  }
  {
    int free_pos = 0;
    std::vector<int> perm(n);  // perm[new] = old
    for (int c = 0; c < n; ++c)
      if (target[c] >= 0) perm[target[c]] = c;
    for (int c = 0; c < n; ++c) {
      if (target[c] >= 0) continue;
      while (taken[free_pos]) ++free_pos;
      perm[free_pos] = c;
      taken[free_pos] = true;
    }
    IMat M2(d, std::vector<Int>(n));
    IMat V2(n, std::vector<Int>(n));
    for (int c = 0; c < n; ++c) {
      for (int i = 0; i < d; ++i) M2[i][c] = M[i][perm[c]];
      for (int i = 0; i < n; ++i) V2[i][c] = V[i][perm[c]];
    }
    M = std::move(M2);
    V = std::move(V2);
    for (auto& pv : pivots) pv.second = diagonal ? pv.first : int(&pv - pivots.data());
  }
  // Reduce entries right of each pivot, deepest pivot row first.
  for (auto it = pivots.rbegin(); it != pivots.rend(); ++it) {
    auto [row, col] = *it;
    for (int c = col + 1; c < n; ++c) {
      Int f = floor_div(M[row][c], M[row][col]);
      col_axpy(M, c, col, f);
      col_axpy(V, c, col, f);
    }
  }
  return {std::move(M), std::move(V)};
}

namespace {

IMat reorder_columns_first(const ExponentMatrix& A, const std::vector<int>& subset) {
  int n = A.n();
  std::vector<bool> in_subset(n, false);
  for (int v : subset) {
    if (v < 0 || v >= n) throw std::invalid_argument("subset column index out of range");
    in_subset[v] = true;
  }
  IMat M(A.d);
  std::vector<int> order(subset);
  for (int v = 0; v < n; ++v)
    if (!in_subset[v]) order.push_back(v);
  for (int i = 0; i < A.d; ++i) {
    M[i].resize(n);
    for (int j = 0; j < n; ++j) M[i][j] = A.cols[order[j]][i];
  }
  return M;
}

}  // namespace

Int index_of_subset(const ExponentMatrix& A, const std::vector<int>& subset) {
  std::size_t m = subset.size();
  if (m == 0) return Int(1);
  IMat H = row_hnf(reorder_columns_first(A, subset)).H;
  Int num(1);
  for (std::size_t i = 0; i < m; ++i) {
    if (sgn(H[i][i]) == 0)
      throw std::invalid_argument("index_of_subset: columns are linearly dependent");
    num *= H[i][i];
  }
  IMat Hc = col_hnf(H).H;
  Int den(1);
  for (std::size_t i = 0; i < m; ++i) den *= Hc[i][i];
  Int idx;
  if (!mpz_divisible_p(num.get_mpz_t(), den.get_mpz_t()))
    throw std::logic_error("index_of_subset: pivot product not divisible");
  mpz_divexact(idx.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return idx;
}

namespace {

// Incremental fraction-free elimination basis used for rank pruning in the
// subset DFS. Rows are kept in echelon order by pivot position.
struct EchelonBasis {
  std::vector<std::vector<Int>> rows;
  std::vector<int> pivot;

  // Returns true (and extends the basis) when v is independent of the basis.
  bool try_add(std::vector<Int> v) {
    for (std::size_t r = 0; r < rows.size(); ++r) {
      int p = pivot[r];
      if (sgn(v[p]) == 0) continue;
      Int f = v[p];
      Int g = rows[r][p];
      for (std::size_t j = 0; j < v.size(); ++j) v[j] = v[j] * g - rows[r][j] * f;
    }
    int p = -1;
    for (std::size_t j = 0; j < v.size(); ++j)
      if (sgn(v[j]) != 0) {
        p = static_cast<int>(j);
        break;
      }
    if (p < 0) return false;
    rows.push_back(std::move(v));
    pivot.push_back(p);
    return true;
  }

  void pop() {
    rows.pop_back();
    pivot.pop_back();
  }
};

void subset_dfs(const ExponentMatrix& A, int start, std::vector<int>& current,
                EchelonBasis& basis,
                const std::function<void(const IndependentSubset&)>& fn) {
  IndependentSubset s;
  s.columns = current;
  s.index = index_of_subset(A, current);
  fn(s);
  for (int v = start; v < A.n(); ++v) {
    std::vector<Int> col(A.d);
    for (int i = 0; i < A.d; ++i) col[i] = A.cols[v][i];
    if (!basis.try_add(std::move(col))) continue;
    current.push_back(v);
    subset_dfs(A, v + 1, current, basis, fn);
    current.pop_back();
    basis.pop();
  }
}

}  // namespace

void enumerate_independent_subsets(const ExponentMatrix& A,
                                   const std::function<void(const IndependentSubset&)>& fn) {
  std::vector<int> current;
  EchelonBasis basis;
  subset_dfs(A, 0, current, basis, fn);
}

ZonotopeReport monomial_bounds(const ExponentMatrix& A, const DataVector& U) {
  if (static_cast<int>(U.counts.size()) != A.n())
    throw std::invalid_argument("data vector length does not match the matrix");
  ZonotopeReport rep;
  rep.lattice_count = 0;
  rep.lower_bound = 0;
  rep.unimodular = true;
  enumerate_independent_subsets(A, [&](const IndependentSubset& s) {
    ++rep.subset_count;
    if (s.index != 1) rep.unimodular = false;
    Int prod(1);
    for (int v : s.columns) prod *= U.counts[v];
    rep.lower_bound += prod;
    rep.lattice_count += s.index * prod;
  });
  rep.upper_bound = rep.lattice_count;
  return rep;
}

Int zonotope_lattice_count(const ExponentMatrix& A, const DataVector& U) {
  return monomial_bounds(A, U).lattice_count;
}

bool in_image_lattice(const IMat& A, const std::vector<Int>& b) {
  if (A.empty()) return true;
  if (b.size() != A.size()) throw std::invalid_argument("vector length does not match matrix");
  auto forms = row_hnf(A);
  int d = static_cast<int>(A.size());
  std::vector<Int> y(d, 0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) y[i] += forms.V[i][j] * b[j];
  IMat Hc = col_hnf(forms.H).H;
  int n = static_cast<int>(Hc[0].size());
  // Upper-triangular basis columns; consume pivots from the deepest row up.
  for (int j = std::min(d, n) - 1; j >= 0; --j) {
    if (sgn(Hc[j][j]) == 0) continue;
    if (!mpz_divisible_p(y[j].get_mpz_t(), Hc[j][j].get_mpz_t())) return false;
    Int q;
    mpz_divexact(q.get_mpz_t(), y[j].get_mpz_t(), Hc[j][j].get_mpz_t());
    for (int i = 0; i <= j; ++i) y[i] -= q * Hc[i][j];
  }
  for (const auto& v : y)
    if (sgn(v) != 0) return false;
  return true;
}

}  // namespace mixint

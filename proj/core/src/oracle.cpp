#include "mixint/oracle.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "mixint/lattice.hpp"

namespace mixint {

namespace {

// Simplex integral of one likelihood monomial, written directly from the
// monomial integration formula rather than shared with the integrator.
Rat monomial_integral(const ExponentMatrix& A, const PriorSpec& prior, long m_sigma0,
                      long m_sigma1, const std::vector<long>& theta_exp,
                      const std::vector<long>& rho_exp) {
  long N = m_sigma0 + m_sigma1;
  Rat w;
  if (!prior.dirichlet) {
    w = make_rat(factorial(m_sigma0) * factorial(m_sigma1), factorial(N + 1));
    int row = 0;
    for (int g = 0; g < A.groups(); ++g) {
      int ti = A.group_rows[g] - 1;
      long sb = 0, sc = 0;
      Int num = factorial(ti) * factorial(ti);
      for (int j = 0; j <= ti; ++j) {
        num *= factorial(theta_exp[row + j]) * factorial(rho_exp[row + j]);
        sb += theta_exp[row + j];
        sc += rho_exp[row + j];
      }
      w *= make_rat(num, factorial(sb + ti) * factorial(sc + ti));
      row += A.group_rows[g];
    }
    return w;
  }
  w = rising(prior.alpha[0], m_sigma0) * rising(prior.alpha[1], m_sigma1) /
      rising(prior.alpha[0] + prior.alpha[1], N);
  int row = 0;
  for (int g = 0; g < A.groups(); ++g) {
    Rat bsum = 0, gsum = 0;
    long sb = 0, sc = 0;
    for (int j = 0; j < A.group_rows[g]; ++j) {
      bsum += prior.beta[g][j];
      gsum += prior.gamma[g][j];
      w *= rising(prior.beta[g][j], theta_exp[row + j]);
      w *= rising(prior.gamma[g][j], rho_exp[row + j]);
      sb += theta_exp[row + j];
      sc += rho_exp[row + j];
    }
    w /= rising(bsum, sb) * rising(gsum, sc);
    row += A.group_rows[g];
  }
  return w;
}

}  // namespace

Rat brute_force_integral(const ExponentMatrix& A, const DataVector& U,
                         const PriorSpec& prior, const OracleBudget& budget) {
  if (static_cast<int>(U.counts.size()) != A.n())
    throw std::invalid_argument("data vector length does not match the matrix");
  prior.validate(A);
  long combos = 1;
  for (long u : U.counts) {
    combos *= u + 1;
    if (combos > budget.max_enumeration)
      throw BudgetError("brute-force enumeration of D(U) exceeds the budget");
  }

  long N = U.sample_size();
  Rat total = 0;
  std::vector<long> x(A.n(), 0);
  std::vector<long> theta_exp(A.d), rho_exp(A.d);
  for (;;) {
    Int coeff = 1;
    long m = 0;
    for (int v = 0; v < A.n(); ++v) {
      coeff *= binomial(U.counts[v], x[v]);
      m += x[v];
    }
    std::fill(theta_exp.begin(), theta_exp.end(), 0);
    std::fill(rho_exp.begin(), rho_exp.end(), 0);
    for (int v = 0; v < A.n(); ++v)
      for (int i = 0; i < A.d; ++i) {
        theta_exp[i] += A.cols[v][i] * x[v];
        rho_exp[i] += A.cols[v][i] * (U.counts[v] - x[v]);
      }
    total += Rat(coeff) * monomial_integral(A, prior, m, N - m, theta_exp, rho_exp);

    int v = A.n() - 1;
    while (v >= 0 && x[v] == U.counts[v]) x[v--] = 0;
    if (v < 0) break;
    ++x[v];
  }
  return total;
}

Int brute_force_phi(const ExponentMatrix& A, const DataVector& U,
                    std::span<const long> b, const OracleBudget& budget) {
  if (U.sample_size() > budget.max_sample)
    throw BudgetError("brute-force phi scan exceeds the sample-size budget");
  // Columns of the extended matrix A^U, one per unit of data.
  std::vector<int> expanded;
  for (int v = 0; v < A.n(); ++v)
    for (long r = 0; r < U.counts[v]; ++r) expanded.push_back(v);

  std::vector<long> residual(b.begin(), b.end());
  Int count = 0;
  std::function<void(std::size_t)> walk = [&](std::size_t pos) {
    if (pos == expanded.size()) {
      if (std::all_of(residual.begin(), residual.end(), [](long r) { return r == 0; }))
        ++count;
      return;
    }
    walk(pos + 1);  // z_pos = 0
    const auto& col = A.cols[expanded[pos]];
    bool ok = true;
    for (int i = 0; i < A.d; ++i)
      if (residual[i] < col[i]) {
        ok = false;
        break;
      }
    if (ok) {
      for (int i = 0; i < A.d; ++i) residual[i] -= col[i];
      walk(pos + 1);  // z_pos = 1
      for (int i = 0; i < A.d; ++i) residual[i] += col[i];
    }
  };
  walk(0);
  return count;
}

namespace {

// Is {A_S x_S = rhs} solvable with 0 <= x_S <= bounds? A_S has full column
// rank, so Gaussian elimination gives the unique candidate.
bool basic_solution_feasible(const ExponentMatrix& A, const std::vector<int>& S,
                             std::vector<Rat> rhs, const DataVector& U) {
  std::size_t r = S.size();
  std::vector<std::vector<Rat>> M(A.d, std::vector<Rat>(r));
  for (std::size_t j = 0; j < r; ++j)
    for (int i = 0; i < A.d; ++i) M[i][j] = A.cols[S[j]][i];

  std::vector<int> pivot_row(r, -1);
  int row = 0;
  for (std::size_t col = 0; col < r; ++col) {
    int p = -1;
    for (int i = row; i < A.d; ++i)
      if (sgn(M[i][col]) != 0) {
        p = i;
        break;
      }
    if (p < 0) return false;  // caller guarantees independence; defensive
    std::swap(M[p], M[row]);
    std::swap(rhs[p], rhs[row]);
    for (int i = 0; i < A.d; ++i) {
      if (i == row || sgn(M[i][col]) == 0) continue;
      Rat f = M[i][col] / M[row][col];
      for (std::size_t j = col; j < r; ++j) M[i][j] -= f * M[row][j];
      rhs[i] -= f * rhs[row];
    }
    pivot_row[col] = row;
    ++row;
  }
  for (int i = row; i < A.d; ++i)
    if (sgn(rhs[i]) != 0) return false;  // inconsistent
  for (std::size_t j = 0; j < r; ++j) {
    Rat x = rhs[pivot_row[j]] / M[pivot_row[j]][j];
    if (sgn(x) < 0 || x > U.counts[S[j]]) return false;
  }
  return true;
}

}  // namespace

Int brute_force_lattice_points(const ExponentMatrix& A, const DataVector& U,
                               const OracleBudget& budget) {
  if (static_cast<int>(U.counts.size()) != A.n())
    throw std::invalid_argument("data vector length does not match the matrix");
  std::vector<long> au = sufficient_statistic(A, U);
  long volume = 1;
  for (long hi : au) {
    volume *= hi + 1;
    if (volume > budget.max_box)
      throw BudgetError("lattice scan bounding box exceeds the budget");
  }

  IMat M = to_imat(A);
  auto hnf = row_hnf(M);
  int rank = 0;
  for (const auto& hrow : hnf.H) {
    bool zero = std::all_of(hrow.begin(), hrow.end(), [](const Int& x) { return x == 0; });
    if (!zero) ++rank;
  }
  // Any vertex of the fiber polytope keeps its non-tight coordinates on an
  // independent column set, so checking every maximal independent subset with
  // the remaining coordinates at their bounds decides feasibility.
  std::vector<std::vector<int>> bases;
  enumerate_independent_subsets(A, [&](const IndependentSubset& s) {
    if (static_cast<int>(s.columns.size()) == rank) bases.push_back(s.columns);
  });

  auto in_zonotope = [&](const std::vector<long>& b) {
    if (rank == 0) return std::all_of(b.begin(), b.end(), [](long x) { return x == 0; });
    for (const auto& S : bases) {
      std::vector<char> in_S(A.n(), 0);
      for (int v : S) in_S[v] = 1;
      std::vector<int> free;
      for (int v = 0; v < A.n(); ++v)
        if (!in_S[v] && U.counts[v] > 0) free.push_back(v);
      // All 2^|free| bound assignments of the non-basic columns.
      for (long mask = 0; mask < (1L << free.size()); ++mask) {
        std::vector<Rat> rhs(A.d);
        for (int i = 0; i < A.d; ++i) rhs[i] = b[i];
        for (std::size_t f = 0; f < free.size(); ++f)
          if (mask & (1L << f))
            for (int i = 0; i < A.d; ++i)
              rhs[i] -= Rat(A.cols[free[f]][i]) * U.counts[free[f]];
        if (basic_solution_feasible(A, S, rhs, U)) return true;
      }
    }
    return false;
  };

  Int count = 0;
  std::vector<long> b(A.d, 0);
  std::vector<Int> bz(A.d);
  for (;;) {
    for (int i = 0; i < A.d; ++i) bz[i] = b[i];
    if (in_image_lattice(M, bz) && in_zonotope(b)) ++count;
    int i = A.d - 1;
    while (i >= 0 && b[i] == au[i]) b[i--] = 0;
    if (i < 0) break;
    ++b[i];
  }
  return count;
}

}  // namespace mixint

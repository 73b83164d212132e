#include "mixint/model.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace mixint {

int ModelSpec::d() const {
  return std::accumulate(t.begin(), t.end(), 0) + groups();
}

int ModelSpec::column_sum() const {
  return std::accumulate(s.begin(), s.end(), 0);
}

Int ModelSpec::state_count() const {
  Int n = 1;
  for (int i = 0; i < groups(); ++i)
    for (int j = 0; j < s[i]; ++j) n *= t[i] + 1;
  return n;
}

Int ModelSpec::reduced_count() const {
  Int n = 1;
  for (int i = 0; i < groups(); ++i) n *= binomial(s[i] + t[i], s[i]);
  return n;
}

void ModelSpec::validate() const {
  if (s.empty() || s.size() != t.size())
    throw std::invalid_argument("model spec needs matching nonempty s and t");
  for (int v : s)
    if (v < 1) throw std::invalid_argument("every s_i must be >= 1");
  for (int v : t)
    if (v < 1) throw std::invalid_argument("every t_i must be >= 1");
}

int ExponentMatrix::group_offset(int i) const {
  int off = 0;
  for (int g = 0; g < i; ++g) off += group_rows[g];
  return off;
}

int ExponentMatrix::rank_dim() const { return d - groups() + 1; }

long DataVector::sample_size() const {
  long n = 0;
  for (long c : counts) {
    if (c < 0) throw std::invalid_argument("data counts must be nonnegative");
    n += c;
  }
  return n;
}

ExponentMatrix build_matrix(const ModelSpec& spec, long max_columns) {
  spec.validate();
  Int n = spec.state_count();
  if (n > max_columns)
    throw BudgetError("state space has " + n.get_str() +
                      " columns, above the configured limit of " +
                      std::to_string(max_columns) +
                      "; supply the reduced matrix or raise the limit");

  ExponentMatrix A;
  A.d = spec.d();
  A.colsum = spec.column_sum();
  A.group_s = spec.s;
  A.group_rows.resize(spec.groups());
  for (int i = 0; i < spec.groups(); ++i) A.group_rows[i] = spec.t[i] + 1;
  A.structured = true;

  // One digit per variable position, mixed radix, rightmost fastest.
  int positions = A.colsum;
  std::vector<int> radix(positions), group_of(positions);
  {
    int p = 0;
    for (int i = 0; i < spec.groups(); ++i)
      for (int j = 0; j < spec.s[i]; ++j, ++p) {
        radix[p] = spec.t[i] + 1;
        group_of[p] = i;
      }
  }
  std::vector<int> state(positions, 0);
  long total = n.get_si();
  A.cols.reserve(total);
  for (long c = 0; c < total; ++c) {
    std::vector<int> col(A.d, 0);
    for (int p = 0; p < positions; ++p)
      col[A.group_offset(group_of[p]) + state[p]] += 1;
    A.cols.push_back(std::move(col));
    for (int p = positions - 1; p >= 0; --p) {
      if (++state[p] < radix[p]) break;
      state[p] = 0;
    }
  }
  return A;
}

ExponentMatrix explicit_matrix(const std::vector<std::vector<int>>& rows) {
  if (rows.empty() || rows[0].empty())
    throw std::invalid_argument("explicit matrix must be nonempty");
  ExponentMatrix A;
  A.d = static_cast<int>(rows.size());
  int n = static_cast<int>(rows[0].size());
  for (const auto& r : rows)
    if (static_cast<int>(r.size()) != n)
      throw std::invalid_argument("explicit matrix rows have unequal lengths");
  A.cols.assign(n, std::vector<int>(A.d));
  for (int i = 0; i < A.d; ++i)
    for (int j = 0; j < n; ++j) {
      if (rows[i][j] < 0) throw std::invalid_argument("exponent entries must be nonnegative");
      A.cols[j][i] = rows[i][j];
    }
  for (int j = 0; j < n; ++j) {
    int sum = std::accumulate(A.cols[j].begin(), A.cols[j].end(), 0);
    if (j == 0)
      A.colsum = sum;
    else if (sum != A.colsum)
      throw std::invalid_argument("explicit matrix columns must share one coordinate sum");
  }
  if (A.colsum == 0) throw std::invalid_argument("explicit matrix columns must be nonzero");
  A.group_s = {A.colsum};
  A.group_rows = {A.d};
  A.structured = false;
  return A;
}

ReducedModel reduce_matrix(const ExponentMatrix& A) {
  ReducedModel R;
  R.matrix = A;
  R.matrix.cols.clear();
  std::map<std::vector<int>, int> seen;
  for (const auto& col : A.cols) {
    auto it = seen.find(col);
    if (it == seen.end()) {
      seen.emplace(col, static_cast<int>(R.matrix.cols.size()));
      R.matrix.cols.push_back(col);
      R.multiplicities.push_back(1);
    } else {
      ++R.multiplicities[it->second];
    }
  }
  return R;
}

std::vector<long> sufficient_statistic(const ExponentMatrix& A, const DataVector& U) {
  if (static_cast<int>(U.counts.size()) != A.n())
    throw std::invalid_argument("data vector length does not match the matrix");
  std::vector<long> b(A.d, 0);
  for (int v = 0; v < A.n(); ++v)
    for (int i = 0; i < A.d; ++i) b[i] += A.cols[v][i] * U.counts[v];
  return b;
}

Rat normalizing_constant(const DataVector& U, const std::vector<long>* multiplicities) {
  long n = U.sample_size();
  Int c = multinomial(n, U.counts);
  if (multiplicities) {
    if (multiplicities->size() != U.counts.size())
      throw std::invalid_argument("multiplicities length does not match the data vector");
    for (std::size_t i = 0; i < U.counts.size(); ++i) {
      Int p;
      mpz_ui_pow_ui(p.get_mpz_t(), (*multiplicities)[i], U.counts[i]);
      c *= p;
    }
  }
  return Rat(c);
}

Rat independence_marginal(const ExponentMatrix& A, const DataVector& U,
                          const std::vector<long>* multiplicities) {
  std::vector<long> b = sufficient_statistic(A, U);
  long n = U.sample_size();
  auto& cache = factorials();
  Rat result = normalizing_constant(U, multiplicities);
  for (int i = 0; i < A.groups(); ++i) {
    int ti = A.group_rows[i] - 1;
    long block_sum = static_cast<long>(A.group_s[i]) * n;
    cache.ensure(block_sum + ti);
    Int num = cache.at(ti);
    int off = A.group_offset(i);
    for (int j = 0; j <= ti; ++j) num *= cache.at(b[off + j]);
    result *= make_rat(num, cache.at(block_sum + ti));
  }
  return result;
}

}  // namespace mixint

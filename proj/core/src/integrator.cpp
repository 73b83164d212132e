#include "mixint/integrator.hpp"

#include <mpfr.h>

#include <algorithm>
#include <numeric>
#include <thread>

namespace mixint {

namespace {

void require_positive(const Rat& q, const char* what) {
  if (sgn(q) <= 0)
    throw std::invalid_argument(std::string(what) + " parameters must be positive");
}

}  // namespace

void PriorSpec::validate(const ExponentMatrix& A) const {
  if (!dirichlet) return;
  if (alpha.size() != 2)
    throw std::invalid_argument("the mixing-weight prior needs exactly two parameters");
  for (const Rat& q : alpha) require_positive(q, "mixing-weight");
  if (static_cast<int>(beta.size()) != A.groups() ||
      static_cast<int>(gamma.size()) != A.groups())
    throw std::invalid_argument("prior needs one parameter vector per group");
  for (int g = 0; g < A.groups(); ++g) {
    if (static_cast<int>(beta[g].size()) != A.group_rows[g] ||
        static_cast<int>(gamma[g].size()) != A.group_rows[g])
      throw std::invalid_argument("prior parameter vector length must be t_i + 1");
    for (const Rat& q : beta[g]) require_positive(q, "theta");
    for (const Rat& q : gamma[g]) require_positive(q, "rho");
  }
}

bool PriorSpec::all_ones() const {
  if (!dirichlet) return true;
  auto one = [](const Rat& q) { return q == 1; };
  if (!std::all_of(alpha.begin(), alpha.end(), one)) return false;
  for (const auto& v : beta)
    if (!std::all_of(v.begin(), v.end(), one)) return false;
  for (const auto& v : gamma)
    if (!std::all_of(v.begin(), v.end(), one)) return false;
  return true;
}

Rat term_weight(std::span<const long> b, std::span<const long> c,
                const ExponentMatrix& A, const PriorSpec& prior) {
  if (static_cast<int>(b.size()) != A.d || static_cast<int>(c.size()) != A.d)
    throw std::invalid_argument("term_weight: wrong dimension");
  long nb = std::accumulate(b.begin(), b.end(), 0L);
  long nc = std::accumulate(c.begin(), c.end(), 0L);
  if (nb % A.colsum != 0 || nc % A.colsum != 0)
    throw std::invalid_argument("lattice point norm is not a multiple of the column sum");
  unsigned long mb = nb / A.colsum, mc = nc / A.colsum;
  unsigned long N = mb + mc;

  if (!prior.dirichlet) {
    auto& fact = factorials();
    Rat w = make_rat(fact(mb) * fact(mc), fact(N + 1));
    int row = 0;
    for (int g = 0; g < A.groups(); ++g) {
      int ti = A.group_rows[g] - 1;
      Int num = fact(ti) * fact(ti);
      Int den = 1;
      long sb = 0, sc = 0;
      for (int j = 0; j <= ti; ++j) {
        num *= fact(b[row + j]) * fact(c[row + j]);
        sb += b[row + j];
        sc += c[row + j];
      }
      den = fact(sb + ti) * fact(sc + ti);
      w *= make_rat(num, den);
      row += A.group_rows[g];
    }
    return w;
  }

  Rat w = rising(prior.alpha[0], mb) * rising(prior.alpha[1], mc) /
          rising(prior.alpha[0] + prior.alpha[1], N);
  int row = 0;
  for (int g = 0; g < A.groups(); ++g) {
    Rat bsum = std::accumulate(prior.beta[g].begin(), prior.beta[g].end(), Rat(0));
    Rat gsum = std::accumulate(prior.gamma[g].begin(), prior.gamma[g].end(), Rat(0));
    long sb = 0, sc = 0;
    for (int j = 0; j < A.group_rows[g]; ++j) {
      w *= rising(prior.beta[g][j], b[row + j]);
      w *= rising(prior.gamma[g][j], c[row + j]);
      sb += b[row + j];
      sc += c[row + j];
    }
    w /= rising(bsum, sb) * rising(gsum, sc);
    row += A.group_rows[g];
  }
  return w;
}

namespace {

ExponentMatrix column_slice(const ExponentMatrix& A, int lo, int hi) {
  ExponentMatrix S = A;
  S.cols.assign(A.cols.begin() + lo, A.cols.begin() + hi);
  return S;
}

BlockPartition balanced_partition(int n, int m) {
  BlockPartition p;
  int base = n / m, extra = n % m;
  for (int j = 0; j < m; ++j) p.sizes.push_back(base + (j < extra ? 1 : 0));
  return p;
}

/// Smallest number of contiguous balanced blocks whose estimated table sizes
/// (zonotope lattice counts) all fit the budget.
BlockPartition choose_partition(const ExponentMatrix& A, const DataVector& U,
                                long budget) {
  int n = A.n();
  if (budget <= 0) return BlockPartition{{n}};
  for (int m = 1; m <= n; ++m) {
    BlockPartition p = balanced_partition(n, m);
    bool fits = true;
    int at = 0;
    for (int size : p.sizes) {
      ExponentMatrix block = column_slice(A, at, at + size);
      DataVector blockU{{U.counts.begin() + at, U.counts.begin() + at + size}};
      at += size;
      if (monomial_bounds(block, blockU).upper_bound > budget) {
        fits = false;
        break;
      }
    }
    if (fits) return p;
  }
  throw BudgetError(
      "no column partition keeps the coefficient tables within the budget of " +
      std::to_string(budget) + " entries");
}

/// Runs fn(level, b, c, phi_product) over every summand of the expansion,
/// splitting the outer table's entries across threads. make_acc(t) builds the
/// per-thread callback; exact addition makes the merge order irrelevant.
template <class MakeAcc>
Int sweep_terms(const std::vector<CoeffTable>& tables, const std::vector<long>& au,
                int threads, MakeAcc&& make_acc) {
  const KeyCodec& codec = tables[0].codec;
  using Key = KeyCodec::Key;

  std::vector<std::pair<Key, const Int*>> outer;
  outer.reserve(tables[0].entries.size() * (tables[0].folded ? 2 : 1));
  for (const auto& [key, phi] : tables[0].entries) {
    outer.emplace_back(key, &phi);
    if (tables[0].folded && key != tables[0].mirror_key - key)
      outer.emplace_back(tables[0].mirror_key - key, &phi);
  }

  threads = std::max<long>(1, std::min<long>(threads, static_cast<long>(outer.size())));
  std::vector<Int> counts(threads, 0);

  auto worker = [&](int t, std::size_t lo, std::size_t hi) {
    auto acc = make_acc(t);
    std::vector<long> b(au.size()), c(au.size());
    Int phi;
    std::function<void(std::size_t, Key, const Int&)> inner =
        [&](std::size_t block, Key key, const Int& prod) {
          if (block == tables.size()) {
            b = codec.decode(key);
            for (std::size_t i = 0; i < b.size(); ++i) c[i] = au[i] - b[i];
            counts[t] += 1;
            acc(codec.level_of(key), b, c, prod);
            return;
          }
          for (const auto& [k2, phi2] : tables[block].entries)
            inner(block + 1, key + k2, prod * phi2);
        };
    for (std::size_t e = lo; e < hi; ++e) inner(1, outer[e].first, *outer[e].second);
  };

  if (threads == 1) {
    worker(0, 0, outer.size());
  } else {
    std::vector<std::thread> pool;
    std::size_t chunk = (outer.size() + threads - 1) / threads;
    for (int t = 1; t < threads; ++t) {
      std::size_t lo = std::min(outer.size(), t * chunk);
      std::size_t hi = std::min(outer.size(), (t + 1) * chunk);
      pool.emplace_back(worker, t, lo, hi);
    }
    worker(0, 0, std::min(outer.size(), chunk));
    for (auto& th : pool) th.join();
  }

  Int total = 0;
  for (const Int& c : counts) total += c;
  return total;
}

}  // namespace

IntegralResult mixture_marginal(const ExponentMatrix& A, const DataVector& U,
                                const PriorSpec& prior, const MixtureOptions& opts) {
  if (static_cast<int>(U.counts.size()) != A.n())
    throw std::invalid_argument("data vector length does not match the matrix");
  for (long u : U.counts)
    if (u < 0) throw std::invalid_argument("data counts must be nonnegative");
  prior.validate(A);

  long N = U.sample_size();
  BlockPartition partition = opts.partition.sizes.empty()
                                 ? choose_partition(A, U, opts.max_table_entries)
                                 : opts.partition;
  partition.validate(A.n());

  RecurrenceOptions ropts;
  ropts.max_entries = opts.max_table_entries;
  ropts.fold_symmetric = opts.fold_symmetric && partition.sizes.size() == 1;
  std::vector<CoeffTable> tables = block_tables(A, U, partition, ropts);

  std::vector<long> au = sufficient_statistic(A, U);

  long fmax = N + 1;
  for (int g = 0; g < A.groups(); ++g)
    fmax = std::max(fmax, static_cast<long>(A.group_s[g]) * N + A.group_rows[g] - 1);
  factorials().ensure(fmax);

  bool uniform = !prior.dirichlet || prior.all_ones();
  int threads = std::max(1, opts.threads);

  IntegralResult result;
  if (uniform) {
    // Per-level integer accumulators: S_m collects phi * prod_j b_j! c_j!;
    // the level-only factors are applied once at the end.
    std::vector<std::vector<Int>> sums(threads, std::vector<Int>(N + 1, Int(0)));
    result.term_count = sweep_terms(tables, au, threads, [&](int t) {
      auto& S = sums[t];
      auto& fact = factorials();
      return [&S, &fact](long m, const std::vector<long>& b, const std::vector<long>& c,
                         const Int& phi) {
        Int p = phi;
        for (std::size_t j = 0; j < b.size(); ++j) p *= fact.at(b[j]) * fact.at(c[j]);
        S[m] += p;
      };
    });
    for (int t = 1; t < threads; ++t)
      for (long m = 0; m <= N; ++m) sums[0][m] += sums[t][m];

    auto& fact = factorials();
    Int tprod = 1;
    for (int g = 0; g < A.groups(); ++g) {
      int ti = A.group_rows[g] - 1;
      tprod *= fact.at(ti) * fact.at(ti);
    }
    Rat total = 0;
    for (long m = 0; m <= N; ++m) {
      if (sums[0][m] == 0) continue;
      Int den = fact.at(N + 1);
      for (int g = 0; g < A.groups(); ++g) {
        int ti = A.group_rows[g] - 1;
        long s = A.group_s[g];
        den *= fact.at(s * m + ti) * fact.at(s * (N - m) + ti);
      }
      total += make_rat(sums[0][m] * fact.at(m) * fact.at(N - m) * tprod, den);
    }
    result.integral = total;
  } else {
    // Rising-factorial tables per matrix row, then the same level-grouped
    // accumulation with rational entries.
    std::vector<std::vector<Rat>> numb(A.d), numg(A.d);
    int row = 0;
    for (int g = 0; g < A.groups(); ++g) {
      long bound = static_cast<long>(A.group_s[g]) * N;
      for (int j = 0; j < A.group_rows[g]; ++j) {
        auto fill = [&](const Rat& q, std::vector<Rat>& out) {
          out.resize(bound + 1);
          out[0] = 1;
          for (long x = 1; x <= bound; ++x) out[x] = out[x - 1] * (q + (x - 1));
        };
        fill(prior.beta[g][j], numb[row + j]);
        fill(prior.gamma[g][j], numg[row + j]);
      }
      row += A.group_rows[g];
    }
    std::vector<std::vector<Rat>> sums(threads, std::vector<Rat>(N + 1, Rat(0)));
    result.term_count = sweep_terms(tables, au, threads, [&](int t) {
      auto& S = sums[t];
      return [&S, &numb, &numg](long m, const std::vector<long>& b,
                                const std::vector<long>& c, const Int& phi) {
        Rat p(phi);
        for (std::size_t j = 0; j < b.size(); ++j) p *= numb[j][b[j]] * numg[j][c[j]];
        S[m] += p;
      };
    });
    for (int t = 1; t < threads; ++t)
      for (long m = 0; m <= N; ++m) sums[0][m] += sums[t][m];

    Rat total = 0;
    Rat asum = prior.alpha[0] + prior.alpha[1];
    for (long m = 0; m <= N; ++m) {
      if (sums[0][m] == 0) continue;
      Rat w = rising(prior.alpha[0], m) * rising(prior.alpha[1], N - m);
      for (int g = 0; g < A.groups(); ++g) {
        long s = A.group_s[g];
        Rat bsum = std::accumulate(prior.beta[g].begin(), prior.beta[g].end(), Rat(0));
        Rat gsum = std::accumulate(prior.gamma[g].begin(), prior.gamma[g].end(), Rat(0));
        w /= rising(bsum, s * m) * rising(gsum, s * (N - m));
      }
      total += sums[0][m] * w;
    }
    result.integral = total / rising(asum, N);
  }

  result.constant = normalizing_constant(U, opts.multiplicities);
  if (opts.compute_bounds) result.bounds = monomial_bounds(A, U);
  return result;
}

Rat independence_integral(const ExponentMatrix& A, const DataVector& U,
                          const PriorSpec& prior) {
  prior.validate(A);
  std::vector<long> b = sufficient_statistic(A, U);
  long N = U.sample_size();
  if (!prior.dirichlet || prior.all_ones()) {
    auto& fact = factorials();
    Rat w = 1;
    int row = 0;
    for (int g = 0; g < A.groups(); ++g) {
      int ti = A.group_rows[g] - 1;
      Int num = fact(ti);
      for (int j = 0; j <= ti; ++j) num *= fact(b[row + j]);
      w *= make_rat(num, fact(static_cast<long>(A.group_s[g]) * N + ti));
      row += A.group_rows[g];
    }
    return w;
  }
  Rat w = 1;
  int row = 0;
  for (int g = 0; g < A.groups(); ++g) {
    Rat bsum = std::accumulate(prior.beta[g].begin(), prior.beta[g].end(), Rat(0));
    for (int j = 0; j < A.group_rows[g]; ++j) w *= rising(prior.beta[g][j], b[row + j]);
    w /= rising(bsum, static_cast<long>(A.group_s[g]) * N);
    row += A.group_rows[g];
  }
  return w;
}

Rat bayes_factor(const ExponentMatrix& A, const DataVector& U, const PriorSpec& prior,
                 const MixtureOptions& opts) {
  MixtureOptions mopts = opts;
  mopts.compute_bounds = false;
  Rat mix = mixture_marginal(A, U, prior, mopts).integral;
  return independence_integral(A, U, prior) / mix;
}

namespace {

Rat pow_rat(const Rat& base, unsigned long e) {
  Rat r;
  mpz_pow_ui(mpq_numref(r.get_mpq_t()), mpq_numref(base.get_mpq_t()), e);
  mpz_pow_ui(mpq_denref(r.get_mpq_t()), mpq_denref(base.get_mpq_t()), e);
  return r;  // base canonical => powers canonical
}

void check_simplex(const std::vector<Rat>& point, const char* what) {
  static const Rat tol = make_rat(1, Int("1000000000000"));
  Rat sum = 0;
  for (const Rat& x : point) {
    if (sgn(x) < 0)
      throw std::invalid_argument(std::string(what) + " coordinates must be nonnegative");
    sum += x;
  }
  if (abs(sum - 1) > tol)
    throw std::invalid_argument(std::string(what) + " coordinates must sum to 1");
}

std::string render_fixed(mpfr_t x, unsigned digits) {
  if (mpfr_zero_p(x)) return "0";
  mpfr_exp_t exp = 0;
  char* raw = mpfr_get_str(nullptr, &exp, 10, digits, x, MPFR_RNDN);
  std::string s(raw);
  mpfr_free_str(raw);
  bool negative = !s.empty() && s[0] == '-';
  if (negative) s.erase(0, 1);
  std::string out = negative ? "-" : "";
  if (exp >= static_cast<long>(s.size())) {
    out += s;
    out.append(exp - s.size(), '0');
  } else if (exp >= 1) {
    out += s.substr(0, exp) + "." + s.substr(exp);
  } else {
    out += "0.";
    out.append(-exp, '0');
    out += s;
  }
  return out;
}

mpfr_prec_t prec_for(unsigned digits) {
  return static_cast<mpfr_prec_t>(digits * 4 + 128);
}

// log10 of the bare integral adjusted by the multiplicity powers, added into
// acc with the given sign.
void add_log10_integral(mpfr_t acc, const ExponentMatrix& A, const DataVector& U,
                        const std::vector<long>* multiplicities, int sign,
                        mpfr_prec_t prec) {
  MixtureOptions opts;
  opts.compute_bounds = false;
  Rat I = mixture_marginal(A, U, PriorSpec{}, opts).integral;
  if (multiplicities) {
    for (std::size_t v = 0; v < U.counts.size(); ++v)
      I *= pow_rat(Rat((*multiplicities)[v]), U.counts[v]);
  }
  mpfr_t t;
  mpfr_init2(t, prec);
  mpfr_set_q(t, I.get_mpq_t(), MPFR_RNDN);
  mpfr_log10(t, t, MPFR_RNDN);
  if (sign > 0)
    mpfr_add(acc, acc, t, MPFR_RNDN);
  else
    mpfr_sub(acc, acc, t, MPFR_RNDN);
  mpfr_clear(t);
}

// N * sum q_i log10 q_i with q = U/N, i.e. sum U_i (log10 U_i - log10 N).
void add_entropy_term(mpfr_t acc, const DataVector& U, int sign, mpfr_prec_t prec) {
  long N = U.sample_size();
  if (N == 0) return;
  mpfr_t t, logN;
  mpfr_init2(t, prec);
  mpfr_init2(logN, prec);
  mpfr_set_si(logN, N, MPFR_RNDN);
  mpfr_log10(logN, logN, MPFR_RNDN);
  for (long u : U.counts) {
    if (u == 0) continue;
    mpfr_set_si(t, u, MPFR_RNDN);
    mpfr_log10(t, t, MPFR_RNDN);
    mpfr_sub(t, t, logN, MPFR_RNDN);
    mpfr_mul_si(t, t, sign * u, MPFR_RNDN);
    mpfr_add(acc, acc, t, MPFR_RNDN);
  }
  mpfr_clear(t);
  mpfr_clear(logN);
}

}  // namespace

Rat likelihood_at(const ExponentMatrix& A, const DataVector& U, const MapPoint& point,
                  const std::vector<long>* multiplicities) {
  if (static_cast<int>(U.counts.size()) != A.n())
    throw std::invalid_argument("data vector length does not match the matrix");
  if (point.sigma.size() != 2)
    throw std::invalid_argument("sigma must have two coordinates");
  if (static_cast<int>(point.theta.size()) != A.groups() ||
      static_cast<int>(point.rho.size()) != A.groups())
    throw std::invalid_argument("theta and rho need one simplex point per group");
  check_simplex(point.sigma, "sigma");
  for (int g = 0; g < A.groups(); ++g) {
    if (static_cast<int>(point.theta[g].size()) != A.group_rows[g] ||
        static_cast<int>(point.rho[g].size()) != A.group_rows[g])
      throw std::invalid_argument("simplex point length must be t_i + 1");
    check_simplex(point.theta[g], "theta");
    check_simplex(point.rho[g], "rho");
  }

  auto monomial = [&](const std::vector<std::vector<Rat>>& coords, int v) {
    Rat m = 1;
    int row = 0;
    for (int g = 0; g < A.groups(); ++g) {
      for (int j = 0; j < A.group_rows[g]; ++j)
        if (int e = A.cols[v][row + j]; e > 0) m *= pow_rat(coords[g][j], e);
      row += A.group_rows[g];
    }
    return m;
  };

  Rat L(multinomial(U.sample_size(), U.counts));
  for (int v = 0; v < A.n(); ++v) {
    if (U.counts[v] == 0) continue;
    Rat p = point.sigma[0] * monomial(point.theta, v) +
            point.sigma[1] * monomial(point.rho, v);
    if (multiplicities) p *= (*multiplicities)[v];
    if (sgn(p) == 0) return Rat(0);
    L *= pow_rat(p, U.counts[v]);
  }
  return L;
}

std::string bic_score(const ExponentMatrix& A, long sample_size, const Rat& likelihood,
                      unsigned digits) {
  if (sgn(likelihood) <= 0)
    throw std::invalid_argument("BIC needs a positive likelihood");
  int k = A.groups();
  long dim = 2L * A.d - 2 * k + 1;
  mpfr_prec_t prec = prec_for(digits);
  mpfr_t acc, t;
  mpfr_init2(acc, prec);
  mpfr_init2(t, prec);
  mpfr_set_q(acc, likelihood.get_mpq_t(), MPFR_RNDN);
  mpfr_log10(acc, acc, MPFR_RNDN);
  mpfr_set_si(t, sample_size, MPFR_RNDN);
  mpfr_log10(t, t, MPFR_RNDN);
  mpfr_mul_si(t, t, dim, MPFR_RNDN);
  mpfr_div_ui(t, t, 2, MPFR_RNDN);
  mpfr_sub(acc, acc, t, MPFR_RNDN);
  std::string out = render_fixed(acc, digits);
  mpfr_clear(acc);
  mpfr_clear(t);
  return out;
}

std::string asymptotic_F(const ExponentMatrix& A, const DataVector& U, unsigned digits,
                         const std::vector<long>* multiplicities) {
  mpfr_prec_t prec = prec_for(digits);
  mpfr_t acc;
  mpfr_init2(acc, prec);
  mpfr_set_zero(acc, 1);
  add_entropy_term(acc, U, +1, prec);
  add_log10_integral(acc, A, U, multiplicities, -1, prec);
  std::string out = render_fixed(acc, digits);
  mpfr_clear(acc);
  return out;
}

std::string asymptotic_gap(const ExponentMatrix& A, const DataVector& U1,
                           const DataVector& U2, unsigned digits,
                           const std::vector<long>* multiplicities) {
  mpfr_prec_t prec = prec_for(digits);
  mpfr_t acc;
  mpfr_init2(acc, prec);
  mpfr_set_zero(acc, 1);
  add_entropy_term(acc, U2, +1, prec);
  add_entropy_term(acc, U1, -1, prec);
  add_log10_integral(acc, A, U2, multiplicities, -1, prec);
  add_log10_integral(acc, A, U1, multiplicities, +1, prec);
  std::string out = render_fixed(acc, digits);
  mpfr_clear(acc);
  return out;
}

}  // namespace mixint

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mixint/coefficients.hpp"
#include "mixint/lattice.hpp"
#include "mixint/model.hpp"

namespace mixint {

/// Prior on the mixture parameters (sigma, theta, rho). The uniform prior is
/// the Dirichlet with every parameter equal to 1.
struct PriorSpec {
  bool dirichlet = false;
  std::vector<Rat> alpha;              // mixing weights, size 2
  std::vector<std::vector<Rat>> beta;  // theta block, one vector per group
  std::vector<std::vector<Rat>> gamma; // rho block, same shape

  static PriorSpec uniform() { return {}; }

  /// All parameters positive and shaped to match A's groups.
  void validate(const ExponentMatrix& A) const;

  bool all_ones() const;
};

struct MixtureOptions {
  BlockPartition partition;   // empty -> single block, or split to fit budget
  long max_table_entries = 0; // per-block coefficient table budget; 0 = none
  int threads = 1;
  bool fold_symmetric = false; // halve the table via phi(b) = phi(AU-b)
  bool compute_bounds = true;  // fill IntegralResult::bounds (subset sums)
  // Column multiplicities of the reduced matrix; they enter only the
  // normalizing constant.
  const std::vector<long>* multiplicities = nullptr;
};

struct IntegralResult {
  Rat integral;        // the bare integral over the parameter space
  Rat constant;        // N!/prod U_v!, times prod alpha_v^{U_v} when reduced
  Int term_count = 0;  // lattice points with a nonzero coefficient
  std::optional<ZonotopeReport> bounds;

  Rat marginal() const { return integral * constant; }
};

/// Weight of one summand of the expansion: everything except phi_A(b, U).
/// c must equal A*U - b componentwise and |b| must be divisible by the
/// column sum.
Rat term_weight(std::span<const long> b, std::span<const long> c,
                const ExponentMatrix& A, const PriorSpec& prior);

/// Exact marginal likelihood integral of the two-component mixture: per-block
/// coefficient tables, then a nested sweep over their nonzero entries
/// accumulating phi * term_weight. Deterministic for any thread count.
IntegralResult mixture_marginal(const ExponentMatrix& A, const DataVector& U,
                                const PriorSpec& prior = {},
                                const MixtureOptions& opts = {});

/// Marginal likelihood of the independence model under the prior's theta
/// block (the bare integral, no normalizing constant).
Rat independence_integral(const ExponentMatrix& A, const DataVector& U,
                          const PriorSpec& prior = {});

/// independence marginal / mixture marginal; the normalizing constants cancel.
Rat bayes_factor(const ExponentMatrix& A, const DataVector& U,
                 const PriorSpec& prior = {}, const MixtureOptions& opts = {});

/// A parameter point of the mixture model.
struct MapPoint {
  std::vector<Rat> sigma;              // size 2
  std::vector<std::vector<Rat>> theta; // one simplex point per group
  std::vector<std::vector<Rat>> rho;
};

/// Likelihood N!/prod(U_v!) * prod p_v^{U_v} at the point, evaluated exactly.
/// Simplex constraints are checked to tolerance 1e-12. Multiplicities fold
/// repeated columns into the reduced state probabilities.
Rat likelihood_at(const ExponentMatrix& A, const DataVector& U, const MapPoint& point,
                  const std::vector<long>* multiplicities = nullptr);

/// log10(likelihood) - ((2d - 2k + 1) / 2) * log10(N), rendered to the given
/// significant digits.
std::string bic_score(const ExponentMatrix& A, long sample_size, const Rat& likelihood,
                      unsigned digits);

/// F_N(U) = N * sum q_i log10 q_i - log10 I_N(U) with q = U/N, where I_N is
/// the bare mixture integral times prod alpha_v^{U_v} for reduced data.
std::string asymptotic_F(const ExponentMatrix& A, const DataVector& U, unsigned digits,
                         const std::vector<long>* multiplicities = nullptr);

/// F(U2) - F(U1), computed in one precision sweep.
std::string asymptotic_gap(const ExponentMatrix& A, const DataVector& U1,
                           const DataVector& U2, unsigned digits,
                           const std::vector<long>* multiplicities = nullptr);

}  // namespace mixint

#pragma once

#include <random>
#include <vector>

#include "mixint/integrator.hpp"
#include "mixint/model.hpp"

namespace testsupport {

struct Instance {
  mixint::ExponentMatrix matrix;  // distinct columns
  mixint::DataVector data;
};

// Random model with at most max_cols distinct columns and sample size at
// most max_sample. Deterministic for a given engine state.
inline Instance random_instance(std::mt19937& rng, int max_cols, long max_sample) {
  static const std::vector<mixint::ModelSpec> pool = {
      {{1}, {1}}, {{1}, {2}}, {{2}, {1}}, {{3}, {1}},
      {{1, 1}, {1, 1}}, {{1, 1}, {1, 2}}, {{2, 1}, {1, 1}},
  };
  std::vector<const mixint::ModelSpec*> fits;
  for (const auto& spec : pool)
    if (spec.reduced_count() <= max_cols) fits.push_back(&spec);
  const mixint::ModelSpec& spec = *fits[rng() % fits.size()];

  Instance inst;
  inst.matrix = mixint::reduce_matrix(mixint::build_matrix(spec)).matrix;
  long remaining = max_sample;
  inst.data.counts.assign(inst.matrix.n(), 0);
  for (auto& u : inst.data.counts) {
    u = static_cast<long>(rng() % (remaining + 1));
    remaining -= u;
  }
  return inst;
}

inline mixint::Rat random_param(std::mt19937& rng) {
  long num = 1 + rng() % 6;
  long den = 1 + rng() % 4;
  return mixint::make_rat(num, den);
}

inline mixint::PriorSpec random_dirichlet(std::mt19937& rng,
                                          const mixint::ExponentMatrix& A) {
  mixint::PriorSpec prior;
  prior.dirichlet = true;
  prior.alpha = {random_param(rng), random_param(rng)};
  for (int g = 0; g < A.groups(); ++g) {
    std::vector<mixint::Rat> b, c;
    for (int j = 0; j < A.group_rows[g]; ++j) {
      b.push_back(random_param(rng));
      c.push_back(random_param(rng));
    }
    prior.beta.push_back(b);
    prior.gamma.push_back(c);
  }
  return prior;
}

}  // namespace testsupport

#include <doctest.h>

#include "mixint/integrator.hpp"
#include "mixint/oracle.hpp"

using namespace mixint;

namespace {

ExponentMatrix binom_matrix() { return reduce_matrix(build_matrix({{4}, {1}})).matrix; }

const Rat kSmallBinom =
    Rat("66364720654753/59057383987217015339940000");

}  // namespace

TEST_CASE("term weight, uniform, boundary term") {
  ExponentMatrix At = binom_matrix();
  DataVector U{{2, 2, 2, 2, 2}};
  std::vector<long> b{0, 0};
  std::vector<long> c = sufficient_statistic(At, U);  // (20, 20)
  Rat w = term_weight(b, c, At, {});
  Rat expected = make_rat(factorial(0) * factorial(10), factorial(11)) *
                 make_rat(factorial(20) * factorial(20), factorial(41));
  CHECK(w == expected);
  CHECK_THROWS_AS(term_weight(std::vector<long>{1, 0}, c, At, PriorSpec{}),
                  std::invalid_argument);
}

TEST_CASE("dirichlet weight with unit parameters equals the uniform weight") {
  ExponentMatrix At = binom_matrix();
  PriorSpec ones;
  ones.dirichlet = true;
  ones.alpha = {Rat(1), Rat(1)};
  ones.beta = {{Rat(1), Rat(1)}};
  ones.gamma = {{Rat(1), Rat(1)}};
  std::vector<long> b{5, 3}, c{11, 13};
  CHECK(term_weight(b, c, At, ones) == term_weight(b, c, At, {}));
}

TEST_CASE("two-coin mixture integral") {
  ExponentMatrix At = binom_matrix();
  DataVector U{{2, 2, 2, 2, 2}};
  std::vector<long> mult{1, 4, 6, 4, 1};
  MixtureOptions opts;
  opts.multiplicities = &mult;
  IntegralResult res = mixture_marginal(At, U, {}, opts);
  CHECK(res.integral == kSmallBinom);
  CHECK(res.term_count == 91);
  REQUIRE(res.bounds.has_value());
  CHECK(res.bounds->lattice_count == 91);
  CHECK(res.constant == Rat(113400) * Rat(9216));
}

TEST_CASE("empty data integrates to one") {
  ExponentMatrix At = binom_matrix();
  DataVector U{{0, 0, 0, 0, 0}};
  CHECK(mixture_marginal(At, U).integral == 1);
  CHECK(mixture_marginal(At, U).marginal() == 1);
  CHECK(independence_integral(At, U) == 1);
  CHECK(bayes_factor(At, U) == 1);
}

TEST_CASE("threads and folding do not change the result") {
  ExponentMatrix At = binom_matrix();
  DataVector U{{5, 1, 2, 0, 3}};
  MixtureOptions base;
  base.compute_bounds = false;
  Rat reference = mixture_marginal(At, U, {}, base).integral;
  for (int threads : {2, 8}) {
    for (bool fold : {false, true}) {
      MixtureOptions opts = base;
      opts.threads = threads;
      opts.fold_symmetric = fold;
      CHECK(mixture_marginal(At, U, {}, opts).integral == reference);
    }
  }
}

TEST_CASE("explicit partitions agree with the single block") {
  ExponentMatrix At = binom_matrix();
  DataVector U{{3, 2, 4, 1, 2}};
  MixtureOptions base;
  base.compute_bounds = false;
  Rat reference = mixture_marginal(At, U, {}, base).integral;
  for (auto sizes : std::vector<std::vector<int>>{{2, 3}, {1, 2, 2}, {1, 1, 1, 1, 1}}) {
    MixtureOptions opts = base;
    opts.partition.sizes = sizes;
    CHECK(mixture_marginal(At, U, {}, opts).integral == reference);
  }
}

TEST_CASE("mixture table budget") {
  ExponentMatrix At = binom_matrix();
  DataVector U{{51, 18, 73, 25, 75}};
  MixtureOptions opts;
  opts.partition.sizes = {5};
  opts.max_table_entries = 100;
  opts.compute_bounds = false;
  CHECK_THROWS_AS(mixture_marginal(At, U, {}, opts), BudgetError);
}

TEST_CASE("dirichlet prior with half-integer mixing weights") {
  // k=1, s=1, t=1, U=(1,0): small enough to cross-check the direct expansion.
  ExponentMatrix At = reduce_matrix(build_matrix({{1}, {1}})).matrix;
  DataVector U{{1, 0}};
  PriorSpec prior;
  prior.dirichlet = true;
  prior.alpha = {make_rat(1, 2), make_rat(1, 2)};
  prior.beta = {{Rat(1), Rat(2)}};
  prior.gamma = {{make_rat(3, 2), Rat(1)}};
  MixtureOptions opts;
  opts.compute_bounds = false;
  Rat fast = mixture_marginal(At, U, prior, opts).integral;
  CHECK(fast == brute_force_integral(At, U, prior));
  CHECK(fast > 0);
}

TEST_CASE("prior validation") {
  ExponentMatrix At = binom_matrix();
  PriorSpec bad;
  bad.dirichlet = true;
  bad.alpha = {Rat(1)};
  CHECK_THROWS_AS(bad.validate(At), std::invalid_argument);
  bad.alpha = {Rat(1), Rat(-1)};
  CHECK_THROWS_AS(bad.validate(At), std::invalid_argument);
  bad.alpha = {Rat(1), Rat(1)};
  bad.beta = {{Rat(1), Rat(1)}};
  bad.gamma = {{Rat(1)}};  // wrong length
  CHECK_THROWS_AS(bad.validate(At), std::invalid_argument);
}

TEST_CASE("bayes factor of near-independence data") {
  ExponentMatrix At = binom_matrix();
  DataVector U{{2, 2, 2, 2, 2}};
  Rat bf = bayes_factor(At, U);
  CHECK(bf == Rat("10449476037000/66364720654753"));
}

TEST_CASE("likelihood at the printed MAP point") {
  ReducedModel red = reduce_matrix(build_matrix({{4}, {1}}));
  DataVector U{{51, 18, 73, 25, 75}};
  MapPoint point;
  point.sigma = {parse_rat("0.3367691969"), parse_rat("0.6632308031")};
  point.theta = {{parse_rat("0.0287713237"), parse_rat("0.9712286763")}};
  point.rho = {{parse_rat("0.6536073424"), parse_rat("0.3463926576")}};
  Rat L = likelihood_at(red.matrix, U, point, &red.multiplicities);
  CHECK(decimal_of(L, 10) == "1.395471101e-19");

  // Swapping the two mixture components leaves the likelihood unchanged.
  MapPoint swapped;
  swapped.sigma = {point.sigma[1], point.sigma[0]};
  swapped.theta = point.rho;
  swapped.rho = point.theta;
  CHECK(likelihood_at(red.matrix, U, swapped, &red.multiplicities) == L);

  MapPoint off = point;
  off.sigma = {parse_rat("0.4"), parse_rat("0.7")};
  CHECK_THROWS_AS(likelihood_at(red.matrix, U, off, &red.multiplicities),
                  std::invalid_argument);
}

TEST_CASE("likelihood of empty data is one") {
  ReducedModel red = reduce_matrix(build_matrix({{4}, {1}}));
  DataVector U{{0, 0, 0, 0, 0}};
  MapPoint point;
  point.sigma = {make_rat(1, 2), make_rat(1, 2)};
  point.theta = {{make_rat(1, 2), make_rat(1, 2)}};
  point.rho = {{make_rat(1, 4), make_rat(3, 4)}};
  CHECK(likelihood_at(red.matrix, U, point, &red.multiplicities) == 1);
}

TEST_CASE("BIC score") {
  ExponentMatrix At = binom_matrix();
  Rat lik = make_rat(Int("1395471101"), Int("10000000000000000000000000000"));
  CHECK(bic_score(At, 242, lik, 10) == "-22.43100220");
  CHECK(bic_score(At, 1, Rat(1), 10) == "0");
  CHECK_THROWS_AS(bic_score(At, 242, Rat(0), 10), std::invalid_argument);
}

TEST_CASE("asymptotic statistic for the binomial mixture") {
  ReducedModel red = reduce_matrix(build_matrix({{4}, {1}}));
  auto scaled = [](long N) {
    return DataVector{{N / 16, 4 * N / 16, 6 * N / 16, 4 * N / 16, N / 16}};
  };
  std::string gap =
      asymptotic_gap(red.matrix, scaled(16), scaled(32), 12, &red.multiplicities);
  CHECK(gap.substr(0, 13) == "0.21027043824");
  // F itself is consistent with the gap.
  double f16 = std::stod(asymptotic_F(red.matrix, scaled(16), 12, &red.multiplicities));
  double f32 = std::stod(asymptotic_F(red.matrix, scaled(32), 12, &red.multiplicities));
  CHECK(std::abs((f32 - f16) - 0.21027043) < 1e-7);
}

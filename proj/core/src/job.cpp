#include "mixint/job.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mixint/coefficients.hpp"
#include "mixint/lattice.hpp"
#include "mixint/oracle.hpp"

namespace mixint {

void JobConfig::validate() const {
  bool structured = !spec.s.empty() || !spec.t.empty();
  if (structured == !explicit_rows.empty())
    throw std::invalid_argument("give either a (s, t) model or an explicit matrix");
  if (structured) spec.validate();
  if (counts.empty()) throw std::invalid_argument("a data vector is required");
  for (long u : counts)
    if (u < 0) throw std::invalid_argument("data counts must be nonnegative");
  if (algorithm != "recurrence" && algorithm != "naive")
    throw std::invalid_argument("algorithm must be 'recurrence' or 'naive'");
  if (digits < 1) throw std::invalid_argument("digits must be at least 1");
  if (threads < 1) throw std::invalid_argument("threads must be at least 1");
  for (int s : split)
    if (s <= 0) throw std::invalid_argument("split sizes must be positive");
}

namespace {

std::string rat_str(const Rat& r) { return r.get_str(); }

std::vector<std::vector<int>> as_rows(const ExponentMatrix& A) {
  std::vector<std::vector<int>> rows(A.d, std::vector<int>(A.n()));
  for (int v = 0; v < A.n(); ++v)
    for (int i = 0; i < A.d; ++i) rows[i][v] = A.cols[v][i];
  return rows;
}

}  // namespace

Report run(const JobConfig& config) {
  config.validate();

  bool structured = !config.spec.s.empty();
  ExponentMatrix A;
  ReducedModel red;
  if (structured) {
    A = build_matrix(config.spec);
    red = reduce_matrix(A);
  } else {
    red.matrix = explicit_matrix(config.explicit_rows);
    red.multiplicities.assign(red.matrix.n(), 1);
  }
  const ExponentMatrix& At = red.matrix;

  // The integration always runs on the distinct columns; a full-length data
  // vector is accumulated onto them first.
  DataVector Ut;
  Rat constant;
  if (config.reduced || !structured) {
    if (static_cast<int>(config.counts.size()) != At.n())
      throw std::invalid_argument("reduced data vector must have " +
                                  std::to_string(At.n()) + " entries");
    Ut.counts = config.counts;
    constant = normalizing_constant(Ut, &red.multiplicities);
  } else {
    if (static_cast<int>(config.counts.size()) != A.n())
      throw std::invalid_argument("data vector must have " + std::to_string(A.n()) +
                                  " entries (or use --reduced)");
    std::map<std::vector<int>, int> index;
    for (int j = 0; j < At.n(); ++j) index.emplace(At.cols[j], j);
    Ut.counts.assign(At.n(), 0);
    for (int v = 0; v < A.n(); ++v) Ut.counts[index.at(A.cols[v])] += config.counts[v];
    DataVector full{config.counts};
    constant = normalizing_constant(full);
  }

  config.prior.validate(At);

  Report rep;
  if (structured) {
    rep.matrix_rows = as_rows(A);
    rep.states = A.n();
  } else {
    rep.states = At.n();
  }
  rep.reduced_rows = as_rows(At);
  rep.multiplicities = red.multiplicities;
  rep.reduced_counts = Ut.counts;
  rep.sample_size = Ut.sample_size();
  rep.dimension = At.d;
  rep.reduced_states = At.n();
  rep.bounds_only = config.bounds_only;

  ZonotopeReport bounds = monomial_bounds(At, Ut);
  rep.bound_lower = bounds.lower_bound.get_str();
  rep.bound_upper = bounds.upper_bound.get_str();
  rep.lattice_count = bounds.lattice_count.get_str();
  rep.unimodular = bounds.unimodular;
  rep.subset_count = bounds.subset_count;
  if (config.bounds_only) return rep;

  Rat integral;
  Int terms;
  if (config.algorithm == "naive") {
    OracleBudget budget;
    budget.max_enumeration = config.memory_budget > 0 ? config.memory_budget
                                                      : budget.max_enumeration;
    integral = brute_force_integral(At, Ut, config.prior, budget);
    terms = 1;
    for (long u : Ut.counts) terms *= u + 1;
  } else {
    MixtureOptions opts;
    opts.partition.sizes = config.split;
    opts.max_table_entries = config.memory_budget;
    opts.threads = config.threads;
    opts.fold_symmetric = true;
    opts.compute_bounds = false;
    IntegralResult res = mixture_marginal(At, Ut, config.prior, opts);
    integral = res.integral;
    terms = res.term_count;
  }

  Rat marginal = integral * constant;
  rep.integral_exact = rat_str(integral);
  rep.integral_decimal = decimal_of(integral, config.digits);
  rep.marginal_exact = rat_str(marginal);
  rep.marginal_decimal = decimal_of(marginal, config.digits);
  rep.marginal_log10 = log10_of(marginal, 10);
  rep.term_count = terms.get_str();

  Rat indep = independence_integral(At, Ut, config.prior);
  Rat indep_marginal = indep * constant;
  rep.independence_exact = rat_str(indep_marginal);
  rep.independence_decimal = decimal_of(indep_marginal, config.digits);
  rep.bayes_factor_exact = rat_str(indep / integral);

  if (!config.dump_table.empty()) {
    RecurrenceOptions ropts;
    ropts.max_entries = config.memory_budget;
    CoeffTable table = phi_recurrence(At, Ut, ropts);
    std::ofstream out(config.dump_table);
    if (!out) throw std::invalid_argument("cannot open " + config.dump_table);
    write_table(out, table);
  }
  return rep;
}

namespace {

void print_matrix(std::ostringstream& out, const char* name,
                  const std::vector<std::vector<int>>& rows) {
  out << name << " (" << rows.size() << " x " << (rows.empty() ? 0 : rows[0].size())
      << "):\n";
  for (const auto& row : rows) {
    out << " ";
    for (int x : row) out << ' ' << x;
    out << '\n';
  }
}

}  // namespace

std::string Report::to_text() const {
  std::ostringstream out;
  out << "states: " << states << "  distinct: " << reduced_states
      << "  dimension: " << dimension << "  sample size: " << sample_size << '\n';
  if (!matrix_rows.empty()) print_matrix(out, "A", matrix_rows);
  print_matrix(out, "A~", reduced_rows);
  out << "multiplicities:";
  for (long m : multiplicities) out << ' ' << m;
  out << '\n';
  out << "data:";
  for (long u : reduced_counts) out << ' ' << u;
  out << '\n';
  out << "independent subsets: " << subset_count << '\n';
  out << "lattice points: " << lattice_count << '\n';
  out << "term bounds: " << bound_lower << " .. " << bound_upper << '\n';
  out << "unimodular: " << (unimodular ? "yes" : "no") << '\n';
  if (bounds_only) return out.str();
  out << "terms summed: " << term_count << '\n';
  out << "mixture integral: " << integral_exact << '\n';
  out << "mixture integral ~ " << integral_decimal << '\n';
  out << "mixture marginal: " << marginal_exact << '\n';
  out << "mixture marginal ~ " << marginal_decimal << '\n';
  out << "mixture marginal log10: " << marginal_log10 << '\n';
  out << "independence marginal: " << independence_exact << '\n';
  out << "independence marginal ~ " << independence_decimal << '\n';
  out << "bayes factor (M / M2): " << bayes_factor_exact << '\n';
  return out.str();
}

std::string Report::to_json() const {
  nlohmann::json j;
  j["states"] = states;
  j["distinct_states"] = reduced_states;
  j["dimension"] = dimension;
  j["sample_size"] = sample_size;
  if (!matrix_rows.empty()) j["matrix"] = matrix_rows;
  j["reduced_matrix"] = reduced_rows;
  j["multiplicities"] = multiplicities;
  j["data"] = reduced_counts;
  j["bounds"] = {{"independent_subsets", subset_count},
                 {"lattice_points", lattice_count},
                 {"lower", bound_lower},
                 {"upper", bound_upper},
                 {"unimodular", unimodular}};
  if (!bounds_only) {
    j["terms_summed"] = term_count;
    j["mixture"] = {{"integral", integral_exact},
                    {"integral_decimal", integral_decimal},
                    {"marginal", marginal_exact},
                    {"marginal_decimal", marginal_decimal},
                    {"marginal_log10", marginal_log10}};
    j["independence"] = {{"marginal", independence_exact},
                         {"marginal_decimal", independence_decimal}};
    j["bayes_factor"] = bayes_factor_exact;
  }
  return j.dump(2) + "\n";
}

}  // namespace mixint

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mixint/job.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitBudget = 3;

// Without --extended, refuse jobs whose term estimate says they will run for
// a long time.
constexpr long kQuickTermLimit = 5'000'000;

std::vector<std::vector<int>> parse_matrix(const std::string& text) {
  std::vector<std::vector<int>> rows;
  std::stringstream ss(text);
  std::string row_text;
  while (std::getline(ss, row_text, ';')) {
    for (char& c : row_text)
      if (c == ',') c = ' ';
    std::istringstream rs(row_text);
    std::vector<int> row;
    int x;
    while (rs >> x) row.push_back(x);
    if (!row.empty()) rows.push_back(row);
  }
  return rows;
}

void load_config_file(const std::string& path, mixint::JobConfig& config) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path);
  nlohmann::json j = nlohmann::json::parse(in);
  if (j.contains("s")) config.spec.s = j["s"].get<std::vector<int>>();
  if (j.contains("t")) config.spec.t = j["t"].get<std::vector<int>>();
  if (j.contains("U")) config.counts = j["U"].get<std::vector<long>>();
  if (j.contains("matrix"))
    config.explicit_rows = j["matrix"].get<std::vector<std::vector<int>>>();
  if (j.contains("reduced")) config.reduced = j["reduced"].get<bool>();
  if (j.contains("algorithm")) config.algorithm = j["algorithm"].get<std::string>();
  if (j.contains("split")) config.split = j["split"].get<std::vector<int>>();
  if (j.contains("digits")) config.digits = j["digits"].get<unsigned>();
  if (j.contains("memory_budget")) config.memory_budget = j["memory_budget"].get<long>();
  if (j.contains("threads")) config.threads = j["threads"].get<int>();
}

mixint::PriorSpec build_prior(const mixint::JobConfig& config, const std::string& kind,
                              const std::vector<std::string>& alpha,
                              const std::vector<std::string>& beta,
                              const std::vector<std::string>& gamma) {
  mixint::PriorSpec prior;
  if (kind == "uniform") {
    if (!alpha.empty() || !beta.empty() || !gamma.empty())
      throw std::invalid_argument("--alpha/--beta/--gamma need --prior dirichlet");
    return prior;
  }
  if (kind != "dirichlet")
    throw std::invalid_argument("--prior must be 'uniform' or 'dirichlet'");
  prior.dirichlet = true;

  // Row counts per group: t_i + 1, or d for an explicit matrix.
  std::vector<int> rows;
  if (!config.explicit_rows.empty()) {
    rows.push_back(static_cast<int>(config.explicit_rows.size()));
  } else {
    for (int t : config.spec.t) rows.push_back(t + 1);
  }
  std::size_t expected = 0;
  for (int r : rows) expected += r;

  auto fill = [&](const std::vector<std::string>& flat, const char* name) {
    if (flat.size() != expected)
      throw std::invalid_argument(std::string("--") + name + " needs " +
                                  std::to_string(expected) + " values");
    std::vector<std::vector<mixint::Rat>> out;
    std::size_t at = 0;
    for (int r : rows) {
      std::vector<mixint::Rat> group;
      for (int j = 0; j < r; ++j) group.push_back(mixint::parse_rat(flat[at++]));
      out.push_back(std::move(group));
    }
    return out;
  };
  if (alpha.size() != 2) throw std::invalid_argument("--alpha needs exactly 2 values");
  prior.alpha = {mixint::parse_rat(alpha[0]), mixint::parse_rat(alpha[1])};
  prior.beta = fill(beta, "beta");
  prior.gamma = fill(gamma, "gamma");
  return prior;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact marginal likelihood integrals for independence models "
               "and their two-component mixtures"};

  mixint::JobConfig config;
  std::string config_file, prior_kind = "uniform", matrix_text, output = "text";
  std::vector<std::string> alpha, beta, gamma;
  bool extended = false, timing = false;

  app.add_option("--config", config_file, "JSON config file; flags override it");
  app.add_option("--s", config.spec.s, "variables per group");
  app.add_option("--t", config.spec.t, "states per variable minus one, per group");
  app.add_option("--U", config.counts, "data vector");
  app.add_flag("--reduced", config.reduced, "U indexes the distinct columns of A~");
  app.add_option("--explicit-matrix", matrix_text,
                 "raw exponent matrix, rows separated by ';'");
  app.add_option("--prior", prior_kind, "uniform or dirichlet");
  app.add_option("--alpha", alpha, "Dirichlet parameters for the mixing weights (2)");
  app.add_option("--beta", beta, "Dirichlet parameters for theta, concatenated by group");
  app.add_option("--gamma", gamma, "Dirichlet parameters for rho, concatenated by group");
  app.add_option("--algorithm", config.algorithm, "recurrence or naive");
  app.add_option("--split", config.split, "explicit block sizes for the column partition");
  app.add_option("--digits", config.digits, "significant digits for decimal output");
  app.add_flag("--bounds-only", config.bounds_only, "stop after the term bounds");
  app.add_flag("--extended", extended, "allow long-running jobs");
  app.add_option("--threads", config.threads, "worker threads");
  app.add_option("--memory-budget", config.memory_budget,
                 "max coefficient-table entries (0 = unlimited)");
  app.add_option("--output", output, "text or json");
  app.add_option("--dump-table", config.dump_table,
                 "write the coefficient table to this file");
  app.add_flag("--timing", timing, "print timing to stderr");

  try {
    app.parse(argc, argv);
    if (!config_file.empty()) {
      mixint::JobConfig from_file;
      load_config_file(config_file, from_file);
      // Flags override the file: keep any field the command line set.
      if (config.spec.s.empty()) config.spec.s = from_file.spec.s;
      if (config.spec.t.empty()) config.spec.t = from_file.spec.t;
      if (config.counts.empty()) config.counts = from_file.counts;
      if (config.explicit_rows.empty()) config.explicit_rows = from_file.explicit_rows;
      if (!config.reduced) config.reduced = from_file.reduced;
      if (config.split.empty()) config.split = from_file.split;
      if (config.memory_budget == 0) config.memory_budget = from_file.memory_budget;
    }
    if (!matrix_text.empty()) config.explicit_rows = parse_matrix(matrix_text);
    if (output != "text" && output != "json")
      throw std::invalid_argument("--output must be 'text' or 'json'");
    config.prior = build_prior(config, prior_kind, alpha, beta, gamma);

    auto start = std::chrono::steady_clock::now();
    if (!extended && !config.bounds_only) {
      mixint::JobConfig probe = config;
      probe.bounds_only = true;
      mixint::Report b = run(probe);
      if (mixint::Int(b.bound_upper) > kQuickTermLimit)
        throw mixint::BudgetError("term estimate " + b.bound_upper +
                                  " exceeds the quick-run limit of " +
                                  std::to_string(kQuickTermLimit) +
                                  "; rerun with --extended");
    }
    mixint::Report report = run(config);
    std::cout << (output == "json" ? report.to_json() : report.to_text());
    if (timing) {
      std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
      std::cerr << "timing,total_seconds," << elapsed.count() << "\n";
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const mixint::BudgetError& e) {
    std::cerr << "budget error: " << e.what() << "\n";
    return kExitBudget;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

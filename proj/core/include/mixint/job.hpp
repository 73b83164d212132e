#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mixint/integrator.hpp"
#include "mixint/model.hpp"

namespace mixint {

/// One integration job: a model, a data vector and evaluation options.
struct JobConfig {
  ModelSpec spec;                               // used when explicit_rows empty
  std::vector<std::vector<int>> explicit_rows;  // raw matrix escape hatch
  std::vector<long> counts;
  bool reduced = false;        // counts indexed by distinct columns of A~
  PriorSpec prior;
  std::string algorithm = "recurrence";  // or "naive" (direct expansion)
  std::vector<int> split;      // explicit block sizes; empty = auto
  unsigned digits = 25;
  long memory_budget = 0;      // max coefficient-table entries; 0 = unlimited
  int threads = 1;
  bool bounds_only = false;
  std::string dump_table;      // write the coefficient table here if nonempty

  void validate() const;       // throws std::invalid_argument
};

/// Everything a run produces. All exact values are decimal-digit rational
/// strings; reparsing them reproduces the rationals bit for bit. Contains no
/// timing data, so reports are byte-identical across thread counts.
struct Report {
  std::vector<std::vector<int>> matrix_rows;   // A (structured models only)
  std::vector<std::vector<int>> reduced_rows;  // A~
  std::vector<long> multiplicities;
  std::vector<long> reduced_counts;
  long sample_size = 0;
  int dimension = 0;     // d
  int states = 0;        // n
  int reduced_states = 0;

  std::string bound_lower, bound_upper, lattice_count;
  bool unimodular = false;
  long subset_count = 0;

  bool bounds_only = false;

  std::string independence_exact, independence_decimal;  // with constant
  std::string integral_exact, integral_decimal;          // bare integral
  std::string marginal_exact, marginal_decimal, marginal_log10;
  std::string bayes_factor_exact;
  std::string term_count;

  std::string to_text() const;
  std::string to_json() const;
};

Report run(const JobConfig& config);

}  // namespace mixint

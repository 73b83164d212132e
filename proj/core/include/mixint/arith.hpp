#pragma once

#include <gmpxx.h>

#include <atomic>
#include <cstddef>
#include <deque>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace mixint {

/// Arbitrary-precision integer. Canonical zero, no overflow at any size.
using Int = mpz_class;

/// Arbitrary-precision rational, always in lowest terms with positive
/// denominator (gmp keeps mpq_class canonical through arithmetic).
using Rat = mpq_class;

/// Thrown when a computation would exceed a configured size or memory budget.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Builds a canonical rational from a numerator/denominator pair.
Rat make_rat(Int num, Int den);

/// Parses "p/q", an integer, or a plain decimal ("0.5") into an exact Rat.
Rat parse_rat(const std::string& text);

/// Growing table of factorials 0!..N!. Reads are lock-free once the table
/// covers the index; growth is serialized.
class FactorialCache {
 public:
  void ensure(std::size_t n);

  /// n! for n already covered by ensure(). No locking.
  const Int& at(std::size_t n) const {
    if (n >= size_.load(std::memory_order_acquire))
      throw std::logic_error("FactorialCache::at beyond precomputed range");
    return table_[n];
  }

  /// n!, growing the table when needed.
  Int operator()(std::size_t n) {
    ensure(n);
    return table_[n];
  }

  std::size_t size() const { return size_.load(std::memory_order_acquire); }

 private:
  std::deque<Int> table_;  // deque: growth never moves existing entries
  std::atomic<std::size_t> size_{0};
  std::mutex grow_mutex_;
};

/// Process-wide factorial cache shared by all modules.
FactorialCache& factorials();

/// n!
Int factorial(unsigned long n);

/// n choose k; zero when k > n (the convention used by recurrence bounds).
Int binomial(unsigned long n, unsigned long k);

/// N! / (parts[0]! ... parts[last]!). Requires sum(parts) == N.
Int multinomial(unsigned long n, const std::vector<long>& parts);

/// Rising factorial q(q+1)...(q+m-1) = Gamma(q+m)/Gamma(q); 1 when m == 0.
/// Requires q > 0 (Dirichlet parameters must be positive).
Rat rising(const Rat& q, unsigned long m);

/// Base-10 logarithm of r > 0, rendered as a fixed-point decimal string with
/// the requested number of significant digits (round-half-even).
std::string log10_of(const Rat& r, unsigned digits);

/// Scientific-notation rendering of r with the requested significant digits,
/// e.g. "7.788716338838678611335742e-23". Exact rationals remain the primary
/// representation; this is advisory output.
std::string decimal_of(const Rat& r, unsigned digits);

}  // namespace mixint

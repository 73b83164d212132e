#include "mixint/arith.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cstdlib>
#include <numeric>

namespace mixint {

Rat make_rat(Int num, Int den) {
  if (sgn(den) == 0) throw std::invalid_argument("rational with zero denominator");
  Rat r;
  mpq_set_num(r.get_mpq_t(), num.get_mpz_t());
  mpq_set_den(r.get_mpq_t(), den.get_mpz_t());
  r.canonicalize();
  return r;
}

Rat parse_rat(const std::string& text) {
  auto fail = [&] { throw std::invalid_argument("cannot parse rational: '" + text + "'"); };
  if (text.empty()) fail();
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    Int num, den;
    if (num.set_str(text.substr(0, slash), 10) != 0) fail();
    if (den.set_str(text.substr(slash + 1), 10) != 0 || sgn(den) == 0) fail();
    return make_rat(num, den);
  }
  auto dot = text.find('.');
  if (dot != std::string::npos) {
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    std::size_t frac_len = text.size() - dot - 1;
    if (digits.empty() || digits == "-" || digits == "+") fail();
    Int num;
    if (num.set_str(digits, 10) != 0) fail();
    Int den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_len);
    return make_rat(num, den);
  }
  Int num;
  if (num.set_str(text, 10) != 0) fail();
  return Rat(num);
}

void FactorialCache::ensure(std::size_t n) {
  if (n < size_.load(std::memory_order_acquire)) return;
  std::lock_guard<std::mutex> lock(grow_mutex_);
  std::size_t have = size_.load(std::memory_order_relaxed);
  if (n < have) return;
  if (have == 0) {
    table_.emplace_back(1);
    have = 1;
  }
  for (std::size_t i = have; i <= n; ++i) {
    Int next = table_[i - 1];
    next *= static_cast<unsigned long>(i);
    table_.push_back(std::move(next));
  }
  size_.store(n + 1, std::memory_order_release);
}

FactorialCache& factorials() {
  static FactorialCache cache;
  return cache;
}

Int factorial(unsigned long n) { return factorials()(n); }

Int binomial(unsigned long n, unsigned long k) {
  Int r;
  if (k > n) return r;  // zero
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

Int multinomial(unsigned long n, const std::vector<long>& parts) {
  long sum = 0;
  for (long p : parts) {
    if (p < 0) throw std::invalid_argument("multinomial part is negative");
    sum += p;
  }
  if (sum != static_cast<long>(n))
    throw std::invalid_argument("multinomial parts do not sum to N: inconsistent data vector");
  auto& cache = factorials();
  cache.ensure(n);
  Int result = cache.at(n);
  for (long p : parts)
    mpz_divexact(result.get_mpz_t(), result.get_mpz_t(), cache.at(p).get_mpz_t());
  return result;
}

Rat rising(const Rat& q, unsigned long m) {
  if (sgn(q) <= 0) throw std::invalid_argument("rising factorial requires q > 0");
  Rat result(1);
  Rat term(q);
  for (unsigned long i = 0; i < m; ++i) {
    result *= term;
    term += 1;
  }
  return result;
}

namespace {

// Renders mpfr digit output (value = 0.digits * 10^exp) as fixed-point.
std::string fixed_point(bool negative, const std::string& digits, long exp) {
  std::string out = negative ? "-" : "";
  if (exp >= static_cast<long>(digits.size())) {
    out += digits;
    out.append(exp - digits.size(), '0');
  } else if (exp >= 1) {
    out += digits.substr(0, exp);
    out += '.';
    out += digits.substr(exp);
  } else {
    out += "0.";
    out.append(-exp, '0');
    out += digits;
  }
  return out;
}

mpfr_prec_t prec_for(unsigned digits) {
  return static_cast<mpfr_prec_t>(digits * 4 + 96);
}

}  // namespace

std::string log10_of(const Rat& r, unsigned digits) {
  if (sgn(r) <= 0) throw std::invalid_argument("log10_of requires a positive rational");
  if (digits < 1) throw std::invalid_argument("log10_of requires digits >= 1");
  mpfr_t x;
  mpfr_init2(x, prec_for(digits + 10));
  mpfr_set_q(x, r.get_mpq_t(), MPFR_RNDN);
  mpfr_log10(x, x, MPFR_RNDN);
  if (mpfr_zero_p(x)) {
    mpfr_clear(x);
    return "0";
  }
  mpfr_exp_t exp = 0;
  char* raw = mpfr_get_str(nullptr, &exp, 10, digits, x, MPFR_RNDN);
  std::string s(raw);
  mpfr_free_str(raw);
  bool negative = mpfr_sgn(x) < 0;
  mpfr_clear(x);
  if (negative) s.erase(0, 1);
  return fixed_point(negative, s, exp);
}

std::string decimal_of(const Rat& r, unsigned digits) {
  if (digits < 1) throw std::invalid_argument("decimal_of requires digits >= 1");
  if (sgn(r) == 0) return "0";
  mpfr_t x;
  mpfr_init2(x, prec_for(digits));
  mpfr_set_q(x, r.get_mpq_t(), MPFR_RNDN);
  mpfr_exp_t exp = 0;
  char* raw = mpfr_get_str(nullptr, &exp, 10, digits, x, MPFR_RNDN);
  std::string s(raw);
  mpfr_free_str(raw);
  mpfr_clear(x);
  bool negative = false;
  if (!s.empty() && s[0] == '-') {
    negative = true;
    s.erase(0, 1);
  }
  std::string out = negative ? "-" : "";
  out += s.substr(0, 1);
  if (s.size() > 1) {
    out += '.';
    out += s.substr(1);
  }
  out += 'e';
  out += std::to_string(static_cast<long>(exp) - 1);
  return out;
}

}  // namespace mixint

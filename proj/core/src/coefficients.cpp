#include "mixint/coefficients.hpp"

#include <algorithm>
#include <functional>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace mixint {

namespace {

int bit_width_for(long bound) {
  int w = 1;
  while ((1L << w) <= bound) ++w;
  return w;
}

}  // namespace

KeyCodec::KeyCodec(const ExponentMatrix& A, long sample_size) {
  d_ = A.d;
  colsum_ = A.colsum;
  group_s_ = A.group_s;
  group_rows_ = A.group_rows;
  level_bound_ = sample_size;
  int level_bits = bit_width_for(sample_size);
  shift_.push_back(0);
  int used = level_bits;
  for (int g = 0; g < A.groups(); ++g) {
    long coord_bound = static_cast<long>(A.group_s[g]) * sample_size;
    int bits = bit_width_for(coord_bound);
    for (int j = 0; j + 1 < A.group_rows[g]; ++j) {
      shift_.push_back(used);
      used += bits;
    }
  }
  if (used > 127)
    throw BudgetError("coefficient key needs " + std::to_string(used) +
                      " bits; split the model or reduce the sample size");
}

KeyCodec::Key KeyCodec::encode(std::span<const long> full_b) const {
  if (static_cast<int>(full_b.size()) != d_)
    throw std::invalid_argument("lattice point has wrong dimension");
  long norm = std::accumulate(full_b.begin(), full_b.end(), 0L);
  if (norm % colsum_ != 0)
    throw std::invalid_argument("lattice point norm is not a multiple of the column sum");
  Key key = static_cast<Key>(norm / colsum_);
  int field = 1;
  int row = 0;
  for (std::size_t g = 0; g < group_s_.size(); ++g) {
    for (int j = 0; j + 1 < group_rows_[g]; ++j, ++field)
      key |= static_cast<Key>(full_b[row + j]) << shift_[field];
    row += group_rows_[g];
  }
  return key;
}

std::vector<long> KeyCodec::decode(Key key) const {
  std::vector<long> b(d_);
  long level = level_of(key);
  int field = 1;
  int row = 0;
  for (std::size_t g = 0; g < group_s_.size(); ++g) {
    long rest = group_s_[g] * level;
    for (int j = 0; j + 1 < group_rows_[g]; ++j, ++field) {
      int width = (field + 1 < dims() ? shift_[field + 1] : 128) - shift_[field];
      Key mask = width >= 128 ? ~Key(0) : ((Key(1) << width) - 1);
      long v = static_cast<long>((key >> shift_[field]) & mask);
      b[row + j] = v;
      rest -= v;
    }
    if (rest < 0) throw std::logic_error("KeyCodec::decode: negative implied coordinate");
    b[row + group_rows_[g] - 1] = rest;
    row += group_rows_[g];
  }
  return b;
}

long KeyCodec::level_of(Key key) const {
  int width = dims() > 1 ? shift_[1] : 128;
  Key mask = width >= 128 ? ~Key(0) : ((Key(1) << width) - 1);
  return static_cast<long>(key & mask);
}

KeyCodec::Key KeyCodec::column_delta(const ExponentMatrix& A, int v) const {
  std::vector<long> b(A.cols[v].begin(), A.cols[v].end());
  return encode(b);
}

Int CoeffTable::total() const {
  Int sum = 0;
  for (const auto& [key, value] : entries) {
    sum += value;
    if (folded && key != mirror_key - key) sum += value;
  }
  return sum;
}

Int CoeffTable::nonzero_count() const {
  Int count = 0;
  for (const auto& [key, value] : entries) {
    ++count;
    if (folded && key != mirror_key - key) ++count;
  }
  return count;
}

Int phi_naive(const ExponentMatrix& A, const DataVector& U, std::span<const long> b) {
  if (static_cast<int>(U.counts.size()) != A.n())
    throw std::invalid_argument("data vector length does not match the matrix");
  if (static_cast<int>(b.size()) != A.d)
    throw std::invalid_argument("lattice point has wrong dimension");
  int n = A.n();
  // Componentwise suffix sums of U_v * a_v bound the residual reachable from
  // the remaining columns; together with residual nonnegativity this realizes
  // the per-coordinate bounds l_j <= x_j <= u_j.
  std::vector<std::vector<long>> suffix(n + 1, std::vector<long>(A.d, 0));
  for (int v = n - 1; v >= 0; --v)
    for (int i = 0; i < A.d; ++i)
      suffix[v][i] = suffix[v + 1][i] + static_cast<long>(A.cols[v][i]) * U.counts[v];

  Int result = 0;
  std::vector<long> residual(b.begin(), b.end());
  for (long r : residual)
    if (r < 0) return result;

  std::function<void(int, const Int&)> walk = [&](int v, const Int& coeff) {
    if (v == n) {
      if (std::all_of(residual.begin(), residual.end(), [](long r) { return r == 0; }))
        result += coeff;
      return;
    }
    long hi = U.counts[v];
    for (int i = 0; i < A.d; ++i)
      if (A.cols[v][i] > 0) hi = std::min(hi, residual[i] / A.cols[v][i]);
    for (long x = 0; x <= hi; ++x) {
      bool reachable = true;
      for (int i = 0; i < A.d && reachable; ++i)
        reachable = residual[i] - static_cast<long>(A.cols[v][i]) * x <= suffix[v + 1][i];
      if (reachable) {
        for (int i = 0; i < A.d; ++i) residual[i] -= A.cols[v][i] * x;
        walk(v + 1, coeff * binomial(U.counts[v], x));
        for (int i = 0; i < A.d; ++i) residual[i] += A.cols[v][i] * x;
      }
    }
  };
  walk(0, Int(1));
  return result;
}

namespace {

CoeffTable recurrence_over_columns(const ExponentMatrix& A, const DataVector& U,
                                   const std::vector<int>& columns,
                                   const RecurrenceOptions& opts, const KeyCodec& codec,
                                   long total_sample_size) {
  CoeffTable table;
  table.codec = codec;
  table.sample_size = 0;
  for (int v : columns) table.sample_size += U.counts[v];

  KeyCodec::Key mirror = 0;
  if (opts.fold_symmetric) {
    std::vector<long> au(A.d, 0);
    for (int v : columns)
      for (int i = 0; i < A.d; ++i) au[i] += static_cast<long>(A.cols[v][i]) * U.counts[v];
    mirror = codec.encode(au);
  }

  table.entries.emplace(KeyCodec::Key(0), Int(1));
  std::size_t processed = 0;
  std::size_t active = 0;
  for (int v : columns)
    if (U.counts[v] > 0) ++active;
  (void)total_sample_size;

  for (int v : columns) {
    long uv = U.counts[v];
    if (uv == 0) continue;  // binomial profile {0 -> 1}
    ++processed;
    bool last = processed == active;
    bool fold_now = opts.fold_symmetric && last;
    KeyCodec::Key delta = codec.column_delta(A, v);

    std::vector<Int> binrow(uv + 1);
    binrow[0] = 1;
    for (long x = 1; x <= uv; ++x) {
      binrow[x] = binrow[x - 1];
      binrow[x] *= (uv - x + 1);
      mpz_divexact_ui(binrow[x].get_mpz_t(), binrow[x].get_mpz_t(), x);
    }

    decltype(table.entries) next;
    next.reserve(table.entries.size() * 2);
    for (const auto& [key, phi] : table.entries) {
      for (long x = 0; x <= uv; ++x) {
        KeyCodec::Key k = key + static_cast<KeyCodec::Key>(x) * delta;
        if (fold_now && k > mirror - k) continue;
        auto [it, inserted] = next.try_emplace(k);
        if (inserted)
          it->second = phi * binrow[x];
        else
          it->second += phi * binrow[x];
      }
    }
    table.entries = std::move(next);
    if (opts.max_entries > 0 &&
        static_cast<long>(table.entries.size()) > opts.max_entries)
      throw BudgetError("coefficient table grew past the budget of " +
                        std::to_string(opts.max_entries) + " entries (at " +
                        std::to_string(table.entries.size()) + "); use a finer partition");
  }
  table.folded = opts.fold_symmetric;
  table.mirror_key = mirror;
  return table;
}

}  // namespace

CoeffTable phi_recurrence(const ExponentMatrix& A, const DataVector& U,
                          const RecurrenceOptions& opts) {
  if (static_cast<int>(U.counts.size()) != A.n())
    throw std::invalid_argument("data vector length does not match the matrix");
  long n_total = U.sample_size();
  KeyCodec codec = opts.codec ? *opts.codec : KeyCodec(A, n_total);
  std::vector<int> columns(A.n());
  std::iota(columns.begin(), columns.end(), 0);
  return recurrence_over_columns(A, U, columns, opts, codec, n_total);
}

void BlockPartition::validate(int n) const {
  int sum = 0;
  for (int s : sizes) {
    if (s <= 0) throw std::invalid_argument("block sizes must be positive");
    sum += s;
  }
  if (sum != n) throw std::invalid_argument("block sizes must cover all columns");
}

std::vector<CoeffTable> block_tables(const ExponentMatrix& A, const DataVector& U,
                                     const BlockPartition& partition,
                                     const RecurrenceOptions& opts) {
  partition.validate(A.n());
  if (opts.fold_symmetric && partition.sizes.size() > 1)
    throw std::invalid_argument("symmetric folding applies only to a single block");
  long n_total = U.sample_size();
  KeyCodec codec = opts.codec ? *opts.codec : KeyCodec(A, n_total);
  RecurrenceOptions block_opts = opts;
  block_opts.codec = &codec;
  std::vector<CoeffTable> tables;
  int at = 0;
  for (int size : partition.sizes) {
    std::vector<int> columns(size);
    std::iota(columns.begin(), columns.end(), at);
    at += size;
    tables.push_back(recurrence_over_columns(A, U, columns, block_opts, codec, n_total));
  }
  return tables;
}

void write_table(std::ostream& out, const CoeffTable& table) {
  // Folded tables are expanded so the dump is always the full support,
  // sorted by lattice point.
  std::vector<std::pair<std::vector<long>, const Int*>> rows;
  rows.reserve(table.entries.size() * (table.folded ? 2 : 1));
  for (const auto& [key, value] : table.entries) {
    rows.emplace_back(table.codec.decode(key), &value);
    if (table.folded && key != table.mirror_key - key)
      rows.emplace_back(table.codec.decode(table.mirror_key - key), &value);
  }
  std::sort(rows.begin(), rows.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  out << "mixint-coefficient-table 1\n";
  out << "entries " << rows.size() << " sample-size " << table.sample_size << "\n";
  for (const auto& [b, value] : rows) {
    for (std::size_t i = 0; i < b.size(); ++i) out << b[i] << ' ';
    out << value->get_str() << "\n";
  }
}

CoeffTable read_table(std::istream& in, const ExponentMatrix& A) {
  std::string magic;
  int version = 0;
  in >> magic >> version;
  if (magic != "mixint-coefficient-table" || version != 1)
    throw std::invalid_argument("unrecognized coefficient table header");
  std::string word;
  std::size_t count = 0;
  long sample_size = 0;
  in >> word >> count >> word >> sample_size;
  CoeffTable table;
  table.sample_size = sample_size;
  table.codec = KeyCodec(A, sample_size);
  std::vector<long> b(A.d);
  for (std::size_t e = 0; e < count; ++e) {
    for (auto& x : b) in >> x;
    std::string digits;
    in >> digits;
    if (!in) throw std::invalid_argument("truncated coefficient table");
    table.entries.emplace(table.codec.encode(b), Int(digits));
  }
  return table;
}

}  // namespace mixint

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <unordered_map>
#include <vector>

#include "mixint/model.hpp"

namespace mixint {

/// Compressed key for a lattice point b: the level m = |b|/a packed together
/// with the per-group coordinates b^(i)_j for j < t_i (the last coordinate of
/// every group is implied by b^(i)_{t_i} = s_i m - sum of the others). The
/// packed dimension is d0 = d - k + 1 = rank(A).
class KeyCodec {
 public:
  using Key = unsigned __int128;

  KeyCodec() = default;
  KeyCodec(const ExponentMatrix& A, long sample_size);

  int dims() const { return static_cast<int>(shift_.size()); }

  Key encode(std::span<const long> full_b) const;
  std::vector<long> decode(Key key) const;
  long level_of(Key key) const;

  /// Encoded increment contributed by one use of column v; keys add.
  Key column_delta(const ExponentMatrix& A, int v) const;

 private:
  std::vector<int> shift_;        // bit offset per packed coordinate
  std::vector<int> group_s_;
  std::vector<int> group_rows_;
  int d_ = 0;
  int colsum_ = 1;
  long level_bound_ = 0;
};

struct KeyHash {
  std::size_t operator()(KeyCodec::Key k) const {
    auto lo = static_cast<std::uint64_t>(k);
    auto hi = static_cast<std::uint64_t>(k >> 64);
    std::uint64_t h = lo * 0x9e3779b97f4a7c15ULL;
    h ^= (hi + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
    return static_cast<std::size_t>(h * 0xff51afd7ed558ccdULL);
  }
};

/// Sparse table of the nonzero expansion coefficients phi_A(b, U).
struct CoeffTable {
  KeyCodec codec;
  std::unordered_map<KeyCodec::Key, Int, KeyHash> entries;
  long sample_size = 0;
  bool folded = false;          // symmetric half-storage (b vs AU - b)
  KeyCodec::Key mirror_key = 0; // encoded A*U, meaningful when folded

  /// Sum of all coefficients, expanding folded entries; equals 2^N.
  Int total() const;

  /// Number of distinct nonzero coefficients, expanding folded entries.
  Int nonzero_count() const;
};

struct RecurrenceOptions {
  long max_entries = 0;        // 0 = unlimited
  bool fold_symmetric = false; // store only the lexicographically smaller of (b, AU-b)
  const KeyCodec* codec = nullptr;  // shared codec for block tables
};

/// Direct evaluation of phi_A(b, U) by bounded enumeration of
/// {x in D(U) : A x = b}, summing prod_v C(U_v, x_v).
Int phi_naive(const ExponentMatrix& A, const DataVector& U, std::span<const long> b);

/// Full table of nonzero phi_A(b, U) via the column-by-column convolution
/// recurrence: seed with column 1's binomial profile, then fold in each
/// further column. Entries-outer loop order.
CoeffTable phi_recurrence(const ExponentMatrix& A, const DataVector& U,
                          const RecurrenceOptions& opts = {});

/// Partition of the columns into consecutive blocks.
struct BlockPartition {
  std::vector<int> sizes;

  void validate(int n) const;
};

/// Per-block coefficient tables, all sharing one codec sized for the full
/// data vector so that block keys add.
std::vector<CoeffTable> block_tables(const ExponentMatrix& A, const DataVector& U,
                                     const BlockPartition& partition,
                                     const RecurrenceOptions& opts = {});

/// Text dump: versioned header, then one line per entry with the decoded
/// lattice point and the decimal coefficient.
void write_table(std::ostream& out, const CoeffTable& table);
CoeffTable read_table(std::istream& in, const ExponentMatrix& A);

}  // namespace mixint

#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <vector>

namespace msic::gf2 {

/// Vector over GF(2) with one bit per message (bit i = message i).
using Word = std::uint64_t;

inline constexpr int kMaxBits = 64;

inline constexpr Word unit(int i) { return Word{1} << i; }

inline int parity(Word w) { return std::popcount(w) & 1; }

inline int leading_bit(Word w) { return 63 - std::countl_zero(w); }

/// Dynamic bitset over row indices, used to track which code rows were
/// combined during elimination.
class RowSet {
 public:
  RowSet() = default;
  explicit RowSet(std::size_t bits) : words_((bits + 63) / 64, 0) {}

  void flip(std::size_t i) { words_[i / 64] ^= Word{1} << (i % 64); }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1; }
  RowSet& operator^=(const RowSet& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] ^= o.words_[k];
    return *this;
  }
  std::vector<int> indices() const {
    std::vector<int> r;
    for (std::size_t k = 0; k < words_.size(); ++k) {
      for (Word w = words_[k]; w; w &= w - 1) {
        r.push_back(static_cast<int>(k * 64 + std::countr_zero(w)));
      }
    }
    return r;
  }

 private:
  std::vector<Word> words_;
};

/// Echelon basis with one row per pivot, the pivot being the row's highest
/// set bit. Pivots are always eliminated from the highest bit downwards, so
/// reduce() returns the same residual for every member of a coset and the
/// recorded row combinations are reproducible.
class TrackedBasis {
 public:
  explicit TrackedBasis(std::size_t num_sources) : num_sources_(num_sources) {
    pivot_.fill(-1);
  }

  struct Reduced {
    Word residual;
    RowSet combination;  // sources XORed into the input
  };

  Reduced reduce(Word v) const {
    Reduced r{v, RowSet(num_sources_)};
    for (int b = kMaxBits - 1; b >= 0 && r.residual; --b) {
      if (((r.residual >> b) & 1) && pivot_[b] >= 0) {
        const Row& row = rows_[pivot_[b]];
        r.residual ^= row.vec;
        r.combination ^= row.combination;
      }
    }
    return r;
  }

  /// Adds source row `source` with vector `v`. Returns false if dependent.
  bool insert(Word v, std::size_t source) {
    Reduced r = reduce(v);
    if (!r.residual) return false;
    r.combination.flip(source);
    pivot_[leading_bit(r.residual)] = static_cast<int>(rows_.size());
    rows_.push_back({r.residual, std::move(r.combination)});
    return true;
  }

  std::size_t rank() const { return rows_.size(); }

 private:
  struct Row {
    Word vec;
    RowSet combination;
  };
  std::size_t num_sources_;
  std::array<int, kMaxBits> pivot_{};
  std::vector<Row> rows_;
};

/// Plain echelon basis without tracking; `contains` answers span membership.
class Basis {
 public:
  Basis() { pivot_.fill(0); }

  Word reduce(Word v) const {
    for (int b = kMaxBits - 1; b >= 0 && v; --b) {
      if (((v >> b) & 1) && pivot_[b]) v ^= pivot_[b];
    }
    return v;
  }

  bool insert(Word v) {
    v = reduce(v);
    if (!v) return false;
    pivot_[leading_bit(v)] = v;
    ++rank_;
    return true;
  }

  bool contains(Word v) const { return reduce(v) == 0; }
  int rank() const { return rank_; }

 private:
  std::array<Word, kMaxBits> pivot_{};
  int rank_ = 0;
};

}  // namespace msic::gf2

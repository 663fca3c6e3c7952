#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace retime {

/// Square boolean matrix with rows packed into 64-bit words.
///
/// Tail bits past column n-1 are kept zero, so word-wise comparison,
/// popcount and subset tests are exact.
class BitMatrix {
 public:
  BitMatrix() = default;
  explicit BitMatrix(int n)
      : n_(n),
        wpr_((n + 63) / 64),
        words_(static_cast<std::size_t>(n) * static_cast<std::size_t>(wpr_), 0) {}

  int size() const { return n_; }
  int words_per_row() const { return wpr_; }

  bool get(int i, int j) const {
    return (word(i, j) >> (j & 63)) & 1u;
  }
  void set(int i, int j) { word(i, j) |= std::uint64_t{1} << (j & 63); }
  void reset(int i, int j) { word(i, j) &= ~(std::uint64_t{1} << (j & 63)); }
  void assign(int i, int j, bool v) {
    if (v) set(i, j); else reset(i, j);
  }

  const std::uint64_t* row(int i) const {
    return words_.data() + static_cast<std::size_t>(i) * wpr_;
  }
  std::uint64_t* row(int i) {
    return words_.data() + static_cast<std::size_t>(i) * wpr_;
  }

  void clear() { std::fill(words_.begin(), words_.end(), 0); }

  bool any() const {
    for (auto w : words_)
      if (w) return true;
    return false;
  }

  /// Number of set bits.
  int count() const {
    int c = 0;
    for (auto w : words_) c += std::popcount(w);
    return c;
  }

  int row_count(int i) const {
    int c = 0;
    const std::uint64_t* r = row(i);
    for (int k = 0; k < wpr_; ++k) c += std::popcount(r[k]);
    return c;
  }

  bool is_subset_of(const BitMatrix& o) const {
    for (std::size_t k = 0; k < words_.size(); ++k)
      if (words_[k] & ~o.words_[k]) return false;
    return true;
  }

  void or_with(const BitMatrix& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= o.words_[k];
  }

  void clear_diagonal() {
    for (int i = 0; i < n_; ++i) reset(i, i);
  }

  template <typename Fn>
  void for_each_set_in_row(int i, Fn&& fn) const {
    const std::uint64_t* r = row(i);
    for (int k = 0; k < wpr_; ++k) {
      std::uint64_t w = r[k];
      while (w) {
        int b = std::countr_zero(w);
        fn(k * 64 + b);
        w &= w - 1;
      }
    }
  }

  template <typename Fn>
  void for_each_set(Fn&& fn) const {
    for (int i = 0; i < n_; ++i)
      for_each_set_in_row(i, [&](int j) { fn(i, j); });
  }

  bool operator==(const BitMatrix&) const = default;

 private:
  std::uint64_t& word(int i, int j) {
    return words_[static_cast<std::size_t>(i) * wpr_ + (j >> 6)];
  }
  const std::uint64_t& word(int i, int j) const {
    return words_[static_cast<std::size_t>(i) * wpr_ + (j >> 6)];
  }

  int n_ = 0;
  int wpr_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Boolean matrix product: result[i][j] = OR_k a[i][k] AND b[k][j].
/// `parallel` enables the OpenMP row loop; worthwhile only for large n.
BitMatrix bit_multiply(const BitMatrix& a, const BitMatrix& b, bool parallel = false);

BitMatrix bit_transpose(const BitMatrix& a);

}  // namespace retime

#include "retime/bitmatrix.hpp"

#include <stdexcept>

namespace retime {

namespace {
// Below this size the OpenMP fork/join overhead dominates the work.
constexpr int kParallelMinRows = 128;

inline void multiply_row(const BitMatrix& a, const BitMatrix& b, BitMatrix& c, int i,
                         int wpr) {
  std::uint64_t* out = c.row(i);
  a.for_each_set_in_row(i, [&](int k) {
    const std::uint64_t* src = b.row(k);
    for (int w = 0; w < wpr; ++w) out[w] |= src[w];
  });
}
}  // namespace

BitMatrix bit_multiply(const BitMatrix& a, const BitMatrix& b, bool parallel) {
  const int n = a.size();
  if (b.size() != n) throw std::invalid_argument("bit_multiply: size mismatch");
  BitMatrix c(n);
  const int wpr = c.words_per_row();
  if (parallel && n >= kParallelMinRows) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) multiply_row(a, b, c, i, wpr);
  } else {
    for (int i = 0; i < n; ++i) multiply_row(a, b, c, i, wpr);
  }
  return c;
}

BitMatrix bit_transpose(const BitMatrix& a) {
  const int n = a.size();
  BitMatrix t(n);
  a.for_each_set([&](int i, int j) { t.set(j, i); });
  return t;
}

}  // namespace retime

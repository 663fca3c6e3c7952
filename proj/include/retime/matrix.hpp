#pragma once

#include <vector>

namespace retime {

/// Plain square matrix of scalars, row-major.
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(int n, T fill = T{})
      : n_(n), v_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), fill) {}

  int size() const { return n_; }
  T& at(int i, int j) { return v_[static_cast<std::size_t>(i) * n_ + j]; }
  const T& at(int i, int j) const { return v_[static_cast<std::size_t>(i) * n_ + j]; }

  bool operator==(const Matrix&) const = default;

 private:
  int n_ = 0;
  std::vector<T> v_;
};

using IntMatrix = Matrix<long long>;
using DoubleMatrix = Matrix<double>;

}  // namespace retime

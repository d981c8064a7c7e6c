#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "sshlight/kern/kernels.hpp"

namespace sshlight {

using cxd = std::complex<double>;

// Dense row-major matrix, sized at construction.
template <typename T>
class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Mat identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
  }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  T* row(std::size_t i) { return data_.data() + i * cols_; }
  const T* row(std::size_t i) const { return data_.data() + i * cols_; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }
  bool empty() const { return data_.empty(); }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<T> data_;
};

using RMat = Mat<double>;
using CMat = Mat<cxd>;

CMat matmul(const CMat& a, const CMat& b);
std::vector<cxd> matvec(const CMat& a, const std::vector<cxd>& x);
CMat adjoint(const CMat& a);
CMat transpose(const CMat& a);
CMat to_complex(const RMat& a);
CMat scaled(const CMat& a, cxd factor);
CMat add(const CMat& a, const CMat& b);
CMat sub(const CMat& a, const CMat& b);

double fro_norm(const CMat& a);
double fro_norm(const RMat& a);
double max_abs(const CMat& a);
// max row sum of |a_ij| (induced inf-norm)
double inf_norm(const CMat& a);

struct SymEig {
  std::vector<double> values;  // ascending
  RMat vectors;                // row m is the eigenvector of values[m]
  std::size_t sweeps = 0;
};

// Cyclic Jacobi diagonalization of a symmetric matrix. Stops when the
// off-diagonal Frobenius mass falls below rel_tol times the input norm;
// throws NumericalError after max_sweeps full sweeps.
SymEig jacobi_eigensym(RMat a, std::size_t max_sweeps = 100,
                       double rel_tol = 1e-14);

// exp(A) by scaling-and-squaring with a truncated Taylor series; term
// truncation at relative tolerance tol.
CMat matexp(const CMat& a, double tol = 1e-12);

// y = exp(t*Op) x applied through repeated operator action, for operators too
// large to exponentiate densely. op_norm_bound must upper-bound the induced
// norm of Op. apply(x, y) writes Op*x into y.
std::vector<cxd> expmv(
    const std::function<void(const cxd*, cxd*)>& apply, std::size_t dim,
    double op_norm_bound, cxd t, const std::vector<cxd>& x, double tol = 1e-14);

}  // namespace sshlight

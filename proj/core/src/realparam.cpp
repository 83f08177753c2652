#include "qpt/realparam.hpp"

#include <cmath>
#include <stdexcept>

namespace qpt {

namespace {
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
}

RVec HermParam::to_real(const Mat& m) const {
  if (m.rows() != dim || m.cols() != dim)
    throw std::invalid_argument("HermParam::to_real: dimension mismatch");
  RVec x(size());
  int k = 0;
  for (int i = 0; i < dim; ++i) x[k++] = m(i, i).real();
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) {
      // tr(B† M) for the symmetric and antisymmetric off-diagonal elements.
      x[k++] = (m(i, j).real() + m(j, i).real()) * kInvSqrt2;
      x[k++] = (m(j, i).imag() - m(i, j).imag()) * kInvSqrt2;
    }
  return x;
}

Mat HermParam::from_real(const RVec& x) const {
  if (x.size() != size()) throw std::invalid_argument("HermParam::from_real: size mismatch");
  Mat m = Mat::Zero(dim, dim);
  int k = 0;
  for (int i = 0; i < dim; ++i) m(i, i) = x[k++];
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) {
      const double re = x[k++] * kInvSqrt2;
      const double im = x[k++] * kInvSqrt2;
      m(i, j) = Complex(re, -im);
      m(j, i) = Complex(re, im);
    }
  return m;
}

}  // namespace qpt

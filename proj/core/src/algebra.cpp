#include "qpt/algebra.hpp"

#include <stdexcept>

namespace qpt {

bool is_hermitian(const Mat& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

Mat hermitize(const Mat& m) { return 0.5 * (m + m.adjoint()); }

const Mat& pauli1(int idx) {
  static const std::array<Mat, 4> table = [] {
    std::array<Mat, 4> t;
    const Complex i(0, 1);
    t[0] = Mat::Identity(2, 2);
    t[1] = Mat{{0, 1}, {1, 0}};
    t[2] = Mat{{0, -i}, {i, 0}};
    t[3] = Mat{{1, 0}, {0, -1}};
    return t;
  }();
  return table.at(static_cast<std::size_t>(idx));
}

Mat pauli2(int a, int b) { return kron(pauli1(a), pauli1(b)); }

Vec vectorize(const Mat& m) {
  const auto d = m.rows();
  Vec v(d * m.cols());
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) v[i * m.cols() + j] = m(i, j);
  return v;
}

Mat unvectorize(const Vec& v, int dim) {
  if (v.size() != Eigen::Index(dim) * dim)
    throw std::invalid_argument("unvectorize: size mismatch");
  Mat m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = v[i * dim + j];
  return m;
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

double trace_distance(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("trace_distance: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(a - b));
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace qpt

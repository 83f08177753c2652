#include "qpt/maps.hpp"

#include <stdexcept>

namespace qpt {

SuperoperatorMatrix chi_to_superoperator(const ChiMatrix& chi,
                                         const std::vector<HermitianMatrix>& basis) {
  if (chi.matrix.rows() != 16 || basis.size() != 16)
    throw std::invalid_argument("chi_to_superoperator: need 16x16 chi and 16 basis elements");
  Mat phi = Mat::Zero(16, 16);
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j)
      phi += chi.matrix(i, j) * kron(basis[i], basis[j].conjugate());
  return SuperoperatorMatrix{phi};
}

DensityEstimate apply_map(const SuperoperatorMatrix& superop, const DensityEstimate& state) {
  if (superop.matrix.rows() != 16 || state.matrix.rows() != 4)
    throw std::invalid_argument("apply_map: dimension mismatch");
  Mat out = unvectorize(superop.matrix * vectorize(state.matrix), 4);
  const double herm_dev = (out - out.adjoint()).cwiseAbs().maxCoeff();
  if (herm_dev > 1e-8)
    throw std::runtime_error("apply_map: output Hermiticity deviation " +
                             std::to_string(herm_dev) + " exceeds 1e-8");
  return DensityEstimate::from(hermitize(out));
}

namespace {
Mat reshuffle16(const Mat& m) {
  Mat out(16, 16);
  for (int a = 0; a < 4; ++a)
    for (int n = 0; n < 4; ++n)
      for (int mu = 0; mu < 4; ++mu)
        for (int nu = 0; nu < 4; ++nu) out(4 * a + n, 4 * mu + nu) = m(4 * a + mu, 4 * n + nu);
  return out;
}
}  // namespace

ChoiMatrix reshuffle(const SuperoperatorMatrix& superop) {
  if (superop.matrix.rows() != 16) throw std::invalid_argument("reshuffle: need 16x16");
  return ChoiMatrix{reshuffle16(superop.matrix)};
}

SuperoperatorMatrix reshuffle(const ChoiMatrix& choi) {
  if (choi.matrix.rows() != 16) throw std::invalid_argument("reshuffle: need 16x16");
  return SuperoperatorMatrix{reshuffle16(choi.matrix)};
}

KrausSet choi_to_kraus(const ChoiMatrix& choi) {
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(choi.matrix));
  if (es.eigenvalues().minCoeff() < -1e-6)
    throw std::runtime_error("choi_to_kraus: negative eigenvalue " +
                             std::to_string(es.eigenvalues().minCoeff()) +
                             ", input is not completely positive");
  KrausSet out;
  for (int i = 0; i < 16; ++i) {
    const double w = es.eigenvalues()[i];
    if (w > 1e-10) {
      out.operators.push_back(unvectorize(es.eigenvectors().col(i), 4));
      out.weights.push_back(w);
    }
  }
  return out;
}

ChoiMatrix kraus_to_choi(const KrausSet& kraus) {
  Mat d = Mat::Zero(16, 16);
  for (std::size_t i = 0; i < kraus.operators.size(); ++i) {
    Vec v = vectorize(kraus.operators[i]);
    d += kraus.weights[i] * v * v.adjoint();
  }
  return ChoiMatrix{d};
}

Mat choi_output_trace(const ChoiMatrix& choi) {
  Mat t = Mat::Zero(4, 4);
  // D[4m+n][4m+nu] sums to conj((K^dag K)(n,nu)); transpose restores the
  // textbook orientation (they agree for Hermitian D up to conjugation).
  for (int n = 0; n < 4; ++n)
    for (int nu = 0; nu < 4; ++nu)
      for (int m = 0; m < 4; ++m) t(nu, n) += choi.matrix(4 * m + n, 4 * m + nu);
  return t;
}

Mat choi_input_trace(const ChoiMatrix& choi) {
  Mat t = Mat::Zero(4, 4);
  for (int m = 0; m < 4; ++m)
    for (int mu = 0; mu < 4; ++mu)
      for (int n = 0; n < 4; ++n) t(m, mu) += choi.matrix(4 * m + n, 4 * mu + n);
  return t;
}

double tp_deviation(const ChoiMatrix& choi) {
  return (choi_output_trace(choi) - Mat::Identity(4, 4)).norm();
}

double unitality_deviation(const ChoiMatrix& choi) {
  return (choi_input_trace(choi) - Mat::Identity(4, 4)).norm();
}

}  // namespace qpt

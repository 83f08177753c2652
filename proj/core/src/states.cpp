#include "qpt/states.hpp"

#include <algorithm>
#include <stdexcept>

namespace qpt {

bool is_valid_density(const DensityEstimate& d, double psd_tol) {
  if (!is_hermitian(d.matrix, 1e-10)) return false;
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(d.matrix));
  if (es.eigenvalues().minCoeff() < -psd_tol) return false;
  return d.trace >= -psd_tol && d.trace <= 1.0 + psd_tol;
}

namespace {

// The five commuting Pauli triples, as (a,b) index pairs into pauli2.
constexpr int kTriples[5][3][2] = {
    {{3, 0}, {0, 3}, {3, 3}},  // ZI IZ ZZ  (computational)
    {{1, 0}, {0, 1}, {1, 1}},  // XI IX XX
    {{2, 0}, {0, 2}, {2, 2}},  // YI IY YY
    {{1, 2}, {2, 3}, {3, 1}},  // XY YZ ZX
    {{2, 1}, {3, 2}, {1, 3}},  // YX ZY XZ
};

// Common eigenbasis of one triple, ordered by the (+/-,+/-,+/-) sign pattern
// with + sorting first. The operator P1 + 2 P2 + 4 P3 has nondegenerate
// integer spectrum (±1 ± 2 ± 4), so its eigenvectors are the joint ones.
std::vector<Vec> triple_eigenbasis(int t) {
  std::array<Mat, 3> ops;
  for (int i = 0; i < 3; ++i) ops[i] = pauli2(kTriples[t][i][0], kTriples[t][i][1]);
  Eigen::SelfAdjointEigenSolver<Mat> es(ops[0] + 2.0 * ops[1] + 4.0 * ops[2]);
  std::vector<Vec> vecs;
  for (int i = 0; i < 4; ++i) vecs.push_back(es.eigenvectors().col(i));

  auto sign_key = [&](const Vec& v) {
    int key = 0;
    for (const auto& op : ops) {
      const double ev = (v.adjoint() * op * v)(0).real();
      key = key * 2 + (ev > 0 ? 0 : 1);
    }
    return key;
  };
  std::sort(vecs.begin(), vecs.end(),
            [&](const Vec& a, const Vec& b) { return sign_key(a) < sign_key(b); });

  // Deterministic global phase: largest-magnitude component real positive.
  for (auto& v : vecs) {
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    Complex ph = v[imax] / std::abs(v[imax]);
    v /= ph;
  }
  return vecs;
}

}  // namespace

PreparationSet build_mub_preparations() {
  PreparationSet out;
  for (int t = 0; t < 5; ++t) {
    for (const Vec& v : triple_eigenbasis(t)) {
      Mat proj = v * v.adjoint();
      out.states.push_back(DensityEstimate{proj, 1.0});
      out.labels.push_back(std::to_string(out.labels.size() + 1));
    }
  }
  return out;
}

std::vector<HermitianMatrix> build_operator_basis(const PreparationSet& preps) {
  if (preps.states.size() != 20)
    throw std::invalid_argument("build_operator_basis: expected 20 preparations");
  std::vector<HermitianMatrix> basis;
  for (int i = 0; i < 4; ++i) basis.push_back(preps.states[i].matrix);
  for (int b = 1; b < 5; ++b)
    for (int i = 0; i < 3; ++i) basis.push_back(preps.states[4 * b + i].matrix);

  // Hilbert-Schmidt Gram rank must be 16, or the MUB construction is broken.
  Mat gram(16, 16);
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) gram(i, j) = (basis[i].adjoint() * basis[j]).trace();
  Eigen::FullPivLU<Mat> lu(gram);
  lu.setThreshold(1e-10);
  if (lu.rank() < 16)
    throw std::runtime_error("build_operator_basis: selected projectors are rank-deficient");
  return basis;
}

}  // namespace qpt

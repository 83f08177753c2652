#pragma once
// Two-qubit state types and the preparation/operator bases used throughout:
// the 20 mutually-unbiased-basis projectors and the 16-element operator basis.

#include "qpt/algebra.hpp"

namespace qpt {

// A reconstructed (or ideal) state: PSD 4×4 with free sub-unit trace. The
// trace carries the population fraction relative to the equilibrium-normalized
// reference, so it is generally below 1 for tomography outputs.
struct DensityEstimate {
  Mat matrix;
  double trace = 0.0;

  static DensityEstimate from(const Mat& m) {
    return DensityEstimate{m, m.trace().real()};
  }
};

// Tolerance used by validity checks on DensityEstimate.
inline constexpr double kPsdTol = 1e-8;

bool is_valid_density(const DensityEstimate& d, double psd_tol = kPsdTol);

struct PreparationSet {
  std::vector<DensityEstimate> states;  // 20 unit-trace rank-1 projectors
  std::vector<std::string> labels;      // "1".."20"
};

// The four computational projectors followed by the 16 states of the four
// non-computational bases of the standard five-basis two-qubit MUB. Bases come
// from the common eigenvectors of the commuting Pauli triples
//   {ZI,IZ,ZZ}, {XI,IX,XX}, {YI,IY,YY}, {XY,YZ,ZX}, {YX,ZY,XZ},
// each basis ordered by the eigenvalue sign pattern (+++ , ++− , +−+ , ...).
PreparationSet build_mub_preparations();

// 16 linearly independent projectors spanning the full operator space: the 4
// computational ones plus the first 3 of each remaining MUB basis. Throws if
// the selection is numerically rank-deficient (rank < 16 at 1e-10), which
// would indicate a broken MUB construction.
std::vector<HermitianMatrix> build_operator_basis(const PreparationSet& preps);

}  // namespace qpt

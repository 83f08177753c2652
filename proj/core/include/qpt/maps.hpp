#pragma once
// Quantum map representations and conversions: process (chi) matrix in an
// operator basis, Liouville superoperator, Choi (dynamical) matrix, Kraus
// decomposition, and the trace-preservation / unitality diagnostics.

#include "qpt/algebra.hpp"
#include "qpt/states.hpp"

namespace qpt {

struct SuperoperatorMatrix {
  Mat matrix;  // 16×16, acts on row-major vectorized 4×4 matrices
};

struct ChoiMatrix {
  HermitianMatrix matrix;  // 16×16; PSD iff the map is completely positive
};

struct ChiMatrix {
  HermitianMatrix matrix;  // 16×16 coefficients in the operator basis {A_m}
  std::string basis_id = "mub-projectors";
};

struct KrausSet {
  std::vector<Mat> operators;   // 4×4
  std::vector<double> weights;  // nonnegative, carried separately
};

// Φ = Σ_ij χ_ij A_i ⊗ conj(A_j), so that Φ vec(ρ) = vec(Σ_ij χ_ij A_i ρ A_j†).
SuperoperatorMatrix chi_to_superoperator(const ChiMatrix& chi,
                                         const std::vector<HermitianMatrix>& basis);

// Vectorize, multiply, un-vectorize, then symmetrize the output. Throws if the
// pre-symmetrization Hermiticity deviation exceeds 1e-8 (the map is not
// Hermiticity-preserving to working accuracy).
DensityEstimate apply_map(const SuperoperatorMatrix& superop, const DensityEstimate& state);

// Index permutation D[4m+n][4μ+ν] = Φ[4m+μ][4n+ν]. An involution, so the same
// routine converts in both directions.
ChoiMatrix reshuffle(const SuperoperatorMatrix& superop);
SuperoperatorMatrix reshuffle(const ChoiMatrix& choi);

// Eigendecomposition of the Choi matrix; eigenvectors with eigenvalue > 1e-10
// become (unvectorized) Kraus operators with the eigenvalue as weight. Throws
// if an eigenvalue is below -1e-6 (input not completely positive).
KrausSet choi_to_kraus(const ChoiMatrix& choi);

// D = Σ_i w_i vec(K_i) vec(K_i)†.
ChoiMatrix kraus_to_choi(const KrausSet& kraus);

// Partial trace of the 16×16 Choi matrix over the first (output-side) or
// second (input-side) tensor factor, yielding a 4×4 matrix. With our index
// convention Σ_m D[4m+n][4m+ν] = Σ K†K and Σ_n D[4m+n][4μ+n] = Σ KK†.
Mat choi_output_trace(const ChoiMatrix& choi);
Mat choi_input_trace(const ChoiMatrix& choi);

// ‖Σ K†K − 𝟙‖_F: zero iff the map is trace preserving.
double tp_deviation(const ChoiMatrix& choi);
// ‖Σ KK† − 𝟙‖_F: zero iff the map is unital.
double unitality_deviation(const ChoiMatrix& choi);

}  // namespace qpt

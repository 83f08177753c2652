#pragma once
// Basic linear-algebra vocabulary shared across the library: complex matrices,
// Pauli operators, row-major (lexicographic) vectorization and Hermiticity helpers.

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <string>
#include <vector>

namespace qpt {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

// A HermitianMatrix is an ordinary complex matrix whose Hermiticity we check,
// not a distinct storage type: everything downstream operates on Mat.
using HermitianMatrix = Mat;

inline constexpr double kHermTol = 1e-12;

bool is_hermitian(const Mat& m, double tol = kHermTol);

// Symmetrize (m + m†)/2. Used to scrub solver round-off from quantities that
// are Hermitian by construction.
Mat hermitize(const Mat& m);

// Single-qubit Paulis, I X Y Z.
const Mat& pauli1(int idx);

// Two-qubit Pauli P_a ⊗ P_b, a,b in {0:I, 1:X, 2:Y, 3:Z}.
Mat pauli2(int a, int b);

// Row-major vectorization: vec(ρ)[d*i+j] = ρ(i,j). With this convention
// vec(A ρ B) = (A ⊗ Bᵀ) vec(ρ).
Vec vectorize(const Mat& m);
Mat unvectorize(const Vec& v, int dim);

Mat kron(const Mat& a, const Mat& b);

// ½ Σ |eig(a − b)|.
double trace_distance(const Mat& a, const Mat& b);

}  // namespace qpt

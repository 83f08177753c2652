#pragma once
// Deterministic splitting solver for the two program shapes used by the
// reconstruction: linear objective over Hermitian PSD variables plus
// nonnegative slacks, with |affine expectation − observed| ≤ slack residual
// constraints, optional PSD constraints on linear images of the variables,
// and optional scalar linear inequalities (trace lower bounds).
//
// Slacks never appear explicitly: at any optimum Δ_r = |residual_r|, so the
// slack terms reduce to a weighted l1 penalty handled in closed form by a
// soft-threshold proximal step. The iteration is consensus ADMM over the real
// orthonormal Hermitian parametrization (see realparam.hpp): one cached
// Cholesky solve per iteration plus cone projections by eigendecomposition.

#include "qpt/realparam.hpp"

namespace qpt {

struct SolverConfig {
  int max_iterations = 50000;
  double tolerance = 1e-7;
  double penalty = 1.0;  // initial ADMM penalty; self-adaptive afterwards
  double over_relaxation = 1.6;
};

enum class SolveStatus { optimal, max_iterations, infeasible };

struct ConicProblem {
  // Hermitian PSD matrix variables, by dimension.
  std::vector<int> variable_dims;

  // Objective contribution Re tr(W_v X_v) per variable (W_v Hermitian; a trace
  // objective is W = I). Slack weights live on the residual constraints.
  std::vector<Mat> objective_weights;

  // |Σ_(v,O) Re tr(O X_v) − observed| ≤ Δ with Δ ≥ 0 weighted in the objective.
  struct ResidualConstraint {
    std::vector<std::pair<int, Mat>> observables;
    double observed = 0.0;
    double slack_weight = 1.0;
  };
  std::vector<ResidualConstraint> residuals;

  // A linear image of the stacked variable coordinates that must be PSD;
  // `map` is (dim²)×(total coords) in HermParam coordinates.
  struct PsdImage {
    int dim = 0;
    RMat map;
  };
  std::vector<PsdImage> psd_images;

  // coeffs · x ≥ lower, with x the stacked HermParam coordinates.
  struct LinearInequality {
    RVec coeffs;
    double lower = 0.0;
  };
  std::vector<LinearInequality> inequalities;

  int total_coords() const;
};

struct Solution {
  std::vector<Mat> variable_values;
  RVec slack_values;
  double objective_value = 0.0;
  SolveStatus status = SolveStatus::max_iterations;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
};

Solution solve(const ConicProblem& problem, const SolverConfig& config = {});

// Frobenius-nearest PSD matrix: eigendecompose, clip negative eigenvalues.
Mat project_psd(const Mat& m);

}  // namespace qpt

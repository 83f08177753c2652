#pragma once
// Post-reconstruction diagnostics: ensemble-averaged magnetization decay
// series, exponential fits with parameter errors, the six-row relaxation-time
// table, and the unitality / trace-preservation deviation series.

#include "qpt/tomography.hpp"

namespace qpt {

struct DecaySeries {
  std::vector<double> times;
  std::vector<double> values;
  std::string channel_label;
};

struct FitResult {
  double m0 = 0.0;
  double t_star = 0.0;
  double c = 0.0;
  std::array<double, 3> std_errors{};  // σ_M0, σ_T, σ_c
  double rmse = 0.0;
  bool converged = false;
};

// Root-mean-square ensemble average over the supplied states:
//   sqrt( Σ_l [tr(ρˡ σ_i⊗σ_j) − tr(eq σ_i⊗σ_j)]² ) / #l.
// i, j index {0:𝟙, 1:x, 2:y, 3:z}; they may not both be 𝟙.
double average_magnetization(const std::vector<DensityEstimate>& states,
                             const DensityEstimate& eq, int i, int j);

// Levenberg-Marquardt fit of M(t) = M₀ e^(−t/T★) + c. Default initialization:
// c₀ = last value, M₀ = first − last, T₀ = first time the series crosses
// c₀ + M₀/e (fallback: half the time span). Standard errors come from the
// linearized covariance rmse²·diag((JᵀJ)⁻¹) at the optimum.
FitResult fit_exponential(const DecaySeries& series,
                          const std::array<double, 3>* init = nullptr);

struct RelaxationTable {
  // Order: H longitudinal, H transverse, C longitudinal, C transverse,
  // J longitudinal (zz), J transverse (8-channel mean).
  std::array<DecaySeries, 6> series;
  std::array<FitResult, 6> fits;
  static const std::array<const char*, 6>& row_labels();
};

// Builds the six decay series from the reconstructed maps applied to the
// recovered initial states (z channels for the longitudinal rows, (x+y)/2
// transverse averages for H and C, the mean of the 8 non-zz coupled channels
// for the J transverse row) and fits each one.
RelaxationTable relaxation_table(const std::vector<ProcessEstimate>& estimates,
                                 const std::vector<DensityEstimate>& preparations,
                                 const DensityEstimate& eq);

// (t_k, tp_deviation) and (t_k, unitality_deviation) of the recovered maps.
std::pair<DecaySeries, DecaySeries> map_property_series(
    const std::vector<ProcessEstimate>& estimates);

}  // namespace qpt

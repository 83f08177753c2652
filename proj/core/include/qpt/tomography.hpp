#pragma once
// The reconstruction pipeline: two-pass initial-state tomography (minimum
// trace under PSD with a population lower bound on the second pass), then an
// independent minimum-trace dynamical-matrix estimate at every time step.

#include "qpt/conic.hpp"
#include "qpt/dataset.hpp"
#include "qpt/maps.hpp"

namespace qpt {

struct StateTomographyResult {
  std::vector<DensityEstimate> states;  // one per preparation
  std::vector<RVec> residuals;          // per-l slack values (15 channels)
  double n0 = 0.0;                      // max recovered trace, the population reference
};

struct ProcessEstimate {
  ChiMatrix chi;
  SuperoperatorMatrix superop;
  ChoiMatrix choi;
  RVec residuals;  // 20×15 slack values, (l major, channel minor)
  int time_index = 0;
  double time_s = 0.0;
  bool ok = true;
  std::string error;  // set when the per-k solve failed
};

// For each preparation independently: minimize tr(ρ) + Σ Δ subject to ρ ⪰ 0
// and |tr(ρ · observable_ch) − record_ch| ≤ Δ_ch over the 15 channels.
// n0 is the largest recovered trace.
StateTomographyResult state_tomography_pass1(const std::vector<SignalRecord>& data_at_t0,
                                             const SolverConfig& config = {});

// Same program with the extra constraint tr(ρ) ≥ n0. A preparation whose
// optimal solution needs slack beyond `slack_tolerance` is reported as
// infeasible (the bound exceeds what its signals admit).
StateTomographyResult state_tomography_pass2(const std::vector<SignalRecord>& data_at_t0,
                                             double n0, const SolverConfig& config = {},
                                             double slack_tolerance = 0.05);

// Minimum-trace PSD estimate of the dynamical matrix at one time step:
// minimize tr(D) + Σ Δ over chi ⪰ 0 with D = reshuffle(Σ χ_ij A_i ⊗ conj(A_j))
// also ⪰ 0, subject to |tr(Σ χ_ij A_i ρ₀ˡ A_j† · observable) − datum| ≤ Δ for
// all 20 preparations × 15 channels.
ProcessEstimate process_tomography(const StateTomographyResult& initial,
                                   const std::vector<SignalRecord>& data_at_tk,
                                   const std::vector<HermitianMatrix>& basis,
                                   const SolverConfig& config = {});

// Full pipeline over a validated dataset: pass 1 and pass 2 at t0, then one
// process estimate per time step (independent solves, dispatched over `jobs`
// worker threads when jobs > 1). Per-step failures are recorded in the
// returned estimates without aborting the remaining steps.
std::vector<ProcessEstimate> run_full_reconstruction(const Dataset& dataset,
                                                     const SolverConfig& config = {},
                                                     int jobs = 1);

// Convenience: the pass-1/pass-2 result used by run_full_reconstruction.
StateTomographyResult initial_states(const Dataset& dataset, const SolverConfig& config = {});

}  // namespace qpt

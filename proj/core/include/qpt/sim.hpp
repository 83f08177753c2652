#pragma once
// Synthetic two-spin NMR relaxation oracle: equilibrium state, pseudo-pure
// preparations, a parametric completely positive relaxation channel, and
// emission of equilibrium-normalized signal datasets with optional noise.

#include "qpt/dataset.hpp"
#include "qpt/maps.hpp"
#include "qpt/states.hpp"

#include <cstdint>

namespace qpt {

inline constexpr double kHbar = 1.054571817e-34;  // J s
inline constexpr double kBoltzmann = 1.380649e-23;  // J/K

struct SpinSystemParams {
  double omega_h = 2.0 * 3.14159265358979323846 * 500e6;  // rad/s, proton
  double omega_c = 2.0 * 3.14159265358979323846 * 125e6;  // rad/s, carbon
  double j_coupling = 215.0;  // Hz; configured default, chloroform-like
  double temperature = 300.0;  // K
  // Scale of the preparation deviation from the maximally mixed state
  // (pseudo-pure polarization). The default puts the preparation signals at
  // ~0.8 of the equilibrium normalization (see responsive_fraction).
  double epsilon_scale = 4e-5;

  void validate() const;  // throws std::invalid_argument
};

struct RelaxationParams {
  double t1_h = 6.2, t2_h = 0.24;   // s
  double t1_c = 7.4, t2_c = 0.192;  // s
  double t1_j = 5.65, t2_j = 0.177; // s, coupled longitudinal / transverse

  void validate() const;  // positive, and t2 <= 2 t1 per pair
};

struct NoiseSpec {
  enum class Kind { none, gaussian };
  Kind kind = Kind::none;
  double sigma = 1e-3;  // absolute, on normalized signals
  std::uint64_t seed = 0;
};

// H = −ħω_H S_z⊗𝟙 − ħω_C 𝟙⊗S_z + 2πħJ S_z⊗S_z, S_z = σ_z/2. Diagonal.
HermitianMatrix hamiltonian(const SpinSystemParams& params);

// High-temperature expansion of the thermal state:
// ρ_eq = ¼𝟙 + ¼(ħω_H/k_BT) S_z⊗𝟙 + ¼(ħω_C/k_BT) 𝟙⊗S_z + ½(ħπJ/k_BT) S_z⊗S_z.
DensityEstimate equilibrium_state(const SpinSystemParams& params);

// M = ħ(ω_H + ω_C + 2πJ) / (4 k_B T).
double normalization_constant(const SpinSystemParams& params);

// The unit-trace reference state of the normalized-signal picture: its Pauli
// expectations are the equilibrium signals after normalization, i.e.
// tr(ρ̃_eq σ_P) = tr(ρ_eq σ_P)/(2M). Used as the fixed reference by the
// analysis layer.
DensityEstimate rescaled_equilibrium(const SpinSystemParams& params);

// Fraction of the ensemble that responds as the pure preparation state after
// normalization: preparations emit n_p-scaled pure-state expectations.
double responsive_fraction(const SpinSystemParams& params);

// ρ_pp = [(1−α)𝟙 + 2α|ψ⟩⟨ψ|] / [(1−α)·4 + 2α]. Unit trace.
DensityEstimate pseudo_pure(const Vec& psi, double alpha);

// Decay rates of the 8 coupled transverse Pauli channels. A single uniform
// rate on all of them is not completely positive alongside distinct proton
// and carbon T2s, so the channels split into the three coherence groups
//   gA: {xx,xy,yx,yy}   gB: {xz,yz}   gC: {zx,zy},
// with gB, gC built additively from the single-spin rates (shrunk into the
// CP-feasible interior) and gA calibrated so that the aggregate 8-channel
// decay series, fit by M₀e^(−t/T)+c on the canonical grid, returns T = t2_j.
struct CoupledRates {
  double g_a = 0.0, g_b = 0.0, g_c = 0.0;
};
CoupledRates calibrate_coupled_rates(const RelaxationParams& relax);

// Decay rate of the Pauli channel σ_a⊗σ_b (a,b in 0..3) under the model.
double pauli_decay_rate(const RelaxationParams& relax, const CoupledRates& coupled,
                        int a, int b);

// The relaxation channel at elapsed time t: every Pauli expectation relaxes
// exponentially toward its value in the supplied equilibrium state, with the
// rates above. Throws if the resulting dynamical matrix is not PSD (the
// parameter combination is unphysical), reporting the offending eigenvalue.
ChoiMatrix relaxation_channel(const RelaxationParams& relax, const DensityEstimate& eq,
                              double t);

// t = 0, then 15 log-spaced points on [0.01, 0.13] s and 35 on [0.2, 60] s:
// dense below the fastest transverse time, sparser beyond. 51 points total.
std::vector<double> default_time_grid();

// Builds the 20 pseudo-pure MUB preparations, evolves them under the
// relaxation channel at each time, and emits equilibrium-normalized signal
// records, optionally with i.i.d. Gaussian noise (deterministic stream in
// (l, k, channel) order for a fixed seed).
Dataset generate_dataset(const SpinSystemParams& params, const RelaxationParams& relax,
                         const NoiseSpec& noise, const std::vector<double>& times);

}  // namespace qpt

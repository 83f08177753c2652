#pragma once
// Observation containers: the normalized magnetization channels for one
// preparation at one time, and the full (preparation × time) dataset.

#include "qpt/algebra.hpp"

#include <optional>

namespace qpt {

// Fixed channel order used everywhere (files, noise stream, solver rows):
// Hx Hy Hz Cx Cy Cz Jxx Jxy Jxz Jyx Jyy Jyz Jzx Jzy Jzz.
inline constexpr int kNumChannels = 15;
const std::vector<std::string>& channel_names();

// Measurement operator for a channel index: σ_i⊗𝟙, 𝟙⊗σ_j, or σ_i⊗σ_j.
const Mat& channel_observable(int channel);

// Normalized, dimensionless magnetization observations for one (l, t_k).
struct SignalRecord {
  std::array<double, 3> h{};  // x y z, proton
  std::array<double, 3> c{};  // x y z, carbon
  std::array<double, 9> j{};  // xx xy xz yx yy yz zx zy zz, coupled

  double channel(int idx) const;
  double& channel(int idx);
};

struct Dataset {
  std::vector<std::string> preparations;       // 20 labels
  std::vector<double> times;                   // strictly increasing, t0 = 0
  std::vector<std::vector<SignalRecord>> records;  // [prep][time]

  int n_preps() const { return static_cast<int>(preparations.size()); }
  int n_times() const { return static_cast<int>(times.size()); }

  // Returns a human-readable description of the first invariant violation
  // (missing record, non-monotone times, t0 != 0, non-finite or out-of-range
  // value), or nullopt if the dataset is well formed.
  std::optional<std::string> validate() const;
};

}  // namespace qpt

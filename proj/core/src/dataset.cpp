#include "qpt/dataset.hpp"

#include <cmath>
#include <stdexcept>

namespace qpt {

const std::vector<std::string>& channel_names() {
  static const std::vector<std::string> names = {
      "Hx", "Hy", "Hz", "Cx", "Cy", "Cz", "Jxx", "Jxy", "Jxz",
      "Jyx", "Jyy", "Jyz", "Jzx", "Jzy", "Jzz"};
  return names;
}

const Mat& channel_observable(int channel) {
  static const std::vector<Mat> obs = [] {
    std::vector<Mat> o;
    for (int i = 1; i <= 3; ++i) o.push_back(pauli2(i, 0));  // Hx Hy Hz
    for (int j = 1; j <= 3; ++j) o.push_back(pauli2(0, j));  // Cx Cy Cz
    for (int i = 1; i <= 3; ++i)
      for (int j = 1; j <= 3; ++j) o.push_back(pauli2(i, j));  // Jxx..Jzz
    return o;
  }();
  return obs.at(static_cast<std::size_t>(channel));
}

double SignalRecord::channel(int idx) const {
  return const_cast<SignalRecord*>(this)->channel(idx);
}

double& SignalRecord::channel(int idx) {
  if (idx < 3) return h[static_cast<std::size_t>(idx)];
  if (idx < 6) return c[static_cast<std::size_t>(idx - 3)];
  if (idx < kNumChannels) return j[static_cast<std::size_t>(idx - 6)];
  throw std::out_of_range("SignalRecord::channel");
}

std::optional<std::string> Dataset::validate() const {
  if (preparations.size() != 20)
    return "expected 20 preparations, got " + std::to_string(preparations.size());
  if (times.empty()) return std::string("no time points");
  if (times.front() != 0.0) return std::string("first time point must be 0");
  for (std::size_t k = 1; k < times.size(); ++k)
    if (times[k] <= times[k - 1])
      return "times not strictly increasing at index " + std::to_string(k);
  if (records.size() != preparations.size())
    return "record rows (" + std::to_string(records.size()) + ") != preparations";
  for (std::size_t l = 0; l < records.size(); ++l) {
    if (records[l].size() != times.size())
      return "preparation " + std::to_string(l + 1) + " has " +
             std::to_string(records[l].size()) + " records, expected " +
             std::to_string(times.size());
    for (std::size_t k = 0; k < records[l].size(); ++k)
      for (int ch = 0; ch < kNumChannels; ++ch) {
        const double v = records[l][k].channel(ch);
        if (!std::isfinite(v) || std::abs(v) > 10.0)
          return "record (prep " + std::to_string(l + 1) + ", k " + std::to_string(k) +
                 ", " + channel_names()[static_cast<std::size_t>(ch)] + ") out of range";
      }
  }
  return std::nullopt;
}

}  // namespace qpt

#include "qpt/analysis.hpp"

#include <cmath>
#include <stdexcept>

namespace qpt {

double average_magnetization(const std::vector<DensityEstimate>& states,
                             const DensityEstimate& eq, int i, int j) {
  if (i == 0 && j == 0)
    throw std::invalid_argument("average_magnetization: i and j cannot both be identity");
  if (states.empty()) throw std::invalid_argument("average_magnetization: no states");
  const Mat obs = pauli2(i, j);
  const double ref = (eq.matrix * obs).trace().real();
  double sum_sq = 0.0;
  for (const auto& st : states) {
    const double d = (st.matrix * obs).trace().real() - ref;
    sum_sq += d * d;
  }
  return std::sqrt(sum_sq) / static_cast<double>(states.size());
}

namespace {

// Residuals and Jacobian of M(t) = m0 exp(-t/T) + c.
void model_eval(const DecaySeries& s, const Eigen::Vector3d& p, RVec& r, RMat* J) {
  const auto n = static_cast<Eigen::Index>(s.times.size());
  r.resize(n);
  if (J) J->resize(n, 3);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double t = s.times[static_cast<std::size_t>(k)];
    const double e = std::exp(-t / p[1]);
    r[k] = p[0] * e + p[2] - s.values[static_cast<std::size_t>(k)];
    if (J) {
      (*J)(k, 0) = e;
      (*J)(k, 1) = p[0] * e * t / (p[1] * p[1]);
      (*J)(k, 2) = 1.0;
    }
  }
}

Eigen::Vector3d default_init(const DecaySeries& s) {
  const double c0 = s.values.back();
  const double m0 = s.values.front() - c0;
  const double target = c0 + m0 / std::exp(1.0);
  double t0 = 0.0;
  const bool decreasing = m0 >= 0;
  for (std::size_t k = 0; k < s.values.size(); ++k) {
    if (decreasing ? s.values[k] <= target : s.values[k] >= target) {
      t0 = s.times[k];
      break;
    }
  }
  if (t0 <= 0.0) t0 = 0.5 * (s.times.back() - s.times.front());
  if (t0 <= 0.0) t0 = 1.0;
  return {m0, t0, c0};
}

}  // namespace

FitResult fit_exponential(const DecaySeries& series, const std::array<double, 3>* init) {
  if (series.times.size() != series.values.size() || series.times.size() < 4)
    throw std::invalid_argument("fit_exponential: need >= 4 aligned points");

  Eigen::Vector3d p =
      init ? Eigen::Vector3d((*init)[0], (*init)[1], (*init)[2]) : default_init(series);
  if (p[1] <= 0.0) p[1] = 1.0;

  RVec r;
  RMat J;
  model_eval(series, p, r, &J);
  double cost = r.squaredNorm();
  double lambda = 1e-3;
  bool converged = false;
  constexpr int kMaxIter = 1000;

  for (int it = 0; it < kMaxIter; ++it) {
    Eigen::Matrix3d jtj = J.transpose() * J;
    const Eigen::Vector3d g = J.transpose() * r;
    Eigen::Matrix3d damped = jtj;
    damped.diagonal() += lambda * jtj.diagonal().cwiseMax(1e-12);
    const Eigen::Vector3d step = damped.ldlt().solve(-g);
    Eigen::Vector3d trial = p + step;
    if (trial[1] <= 0.0) trial[1] = p[1] / 2.0;  // keep the time constant positive

    RVec r_t;
    model_eval(series, trial, r_t, nullptr);
    const double cost_t = r_t.squaredNorm();
    const double rel = (step.cwiseQuotient(p.cwiseAbs().cwiseMax(1e-30))).cwiseAbs().maxCoeff();
    if (cost_t < cost) {
      p = trial;
      model_eval(series, p, r, &J);
      cost = cost_t;
      lambda = std::max(lambda / 3.0, 1e-12);
      if (rel < 1e-8) {
        converged = true;
        break;
      }
    } else {
      // A step this small cannot improve the fit: the parameters are settled.
      if (rel < 1e-8) {
        converged = true;
        break;
      }
      lambda *= 4.0;
      if (lambda > 1e12) break;  // stuck; report non-convergence
    }
  }

  FitResult out;
  out.m0 = p[0];
  out.t_star = p[1];
  out.c = p[2];
  const auto n = static_cast<double>(series.times.size());
  out.rmse = std::sqrt(cost / std::max(n - 3.0, 1.0));
  Eigen::Matrix3d jtj = J.transpose() * J;
  Eigen::FullPivLU<Eigen::Matrix3d> lu(jtj);
  if (lu.isInvertible()) {
    const Eigen::Matrix3d cov = out.rmse * out.rmse * lu.inverse();
    for (int i = 0; i < 3; ++i)
      out.std_errors[static_cast<std::size_t>(i)] = std::sqrt(std::max(cov(i, i), 0.0));
    out.converged = converged && p[1] > 0.0;
  } else {
    out.converged = false;  // singular JᵀJ: parameters unidentifiable
  }
  return out;
}

const std::array<const char*, 6>& RelaxationTable::row_labels() {
  static const std::array<const char*, 6> labels = {
      "H-longitudinal", "H-transverse", "C-longitudinal",
      "C-transverse",   "J-zz",         "J-transverse"};
  return labels;
}

RelaxationTable relaxation_table(const std::vector<ProcessEstimate>& estimates,
                                 const std::vector<DensityEstimate>& preparations,
                                 const DensityEstimate& eq) {
  RelaxationTable out;
  for (auto& s : out.series) s.times.clear();
  for (std::size_t row = 0; row < 6; ++row)
    out.series[row].channel_label = RelaxationTable::row_labels()[row];

  for (const auto& est : estimates) {
    if (!est.ok) continue;
    std::vector<DensityEstimate> evolved;
    evolved.reserve(preparations.size());
    for (const auto& prep : preparations) evolved.push_back(apply_map(est.superop, prep));

    auto avg = [&](int i, int j) { return average_magnetization(evolved, eq, i, j); };
    const double hz = avg(3, 0);
    const double ht = 0.5 * (avg(1, 0) + avg(2, 0));
    const double cz = avg(0, 3);
    const double ct = 0.5 * (avg(0, 1) + avg(0, 2));
    const double jz = avg(3, 3);
    double jt = 0.0;  // mean of the 8 non-zz coupled channels
    for (int i = 1; i <= 3; ++i)
      for (int j = 1; j <= 3; ++j)
        if (!(i == 3 && j == 3)) jt += avg(i, j);
    jt /= 8.0;

    const std::array<double, 6> vals = {hz, ht, cz, ct, jz, jt};
    for (std::size_t row = 0; row < 6; ++row) {
      out.series[row].times.push_back(est.time_s);
      out.series[row].values.push_back(vals[row]);
    }
  }
  for (std::size_t row = 0; row < 6; ++row) out.fits[row] = fit_exponential(out.series[row]);
  return out;
}

std::pair<DecaySeries, DecaySeries> map_property_series(
    const std::vector<ProcessEstimate>& estimates) {
  DecaySeries tp, uni;
  tp.channel_label = "tp-deviation";
  uni.channel_label = "unitality-deviation";
  for (const auto& est : estimates) {
    if (!est.ok) continue;
    tp.times.push_back(est.time_s);
    tp.values.push_back(tp_deviation(est.choi));
    uni.times.push_back(est.time_s);
    uni.values.push_back(unitality_deviation(est.choi));
  }
  return {tp, uni};
}

}  // namespace qpt

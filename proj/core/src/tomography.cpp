#include "qpt/tomography.hpp"

#include <atomic>
#include <stdexcept>
#include <thread>

namespace qpt {

namespace {

ConicProblem state_problem(const SignalRecord& rec) {
  ConicProblem p;
  p.variable_dims = {4};
  p.objective_weights = {Mat::Identity(4, 4)};
  for (int ch = 0; ch < kNumChannels; ++ch) {
    ConicProblem::ResidualConstraint rc;
    rc.observables = {{0, channel_observable(ch)}};
    rc.observed = rec.channel(ch);
    p.residuals.push_back(std::move(rc));
  }
  return p;
}

StateTomographyResult run_state_pass(const std::vector<SignalRecord>& data_at_t0,
                                     const SolverConfig& config, const double* n0_bound,
                                     double slack_tolerance) {
  if (data_at_t0.size() != 20)
    throw std::invalid_argument("state tomography: expected one record per preparation (20)");
  StateTomographyResult out;
  for (std::size_t l = 0; l < data_at_t0.size(); ++l) {
    ConicProblem p = state_problem(data_at_t0[l]);
    if (n0_bound) {
      ConicProblem::LinearInequality iq;
      iq.coeffs = HermParam(4).to_real(Mat::Identity(4, 4));
      iq.lower = *n0_bound;
      p.inequalities.push_back(std::move(iq));
    }
    Solution s = solve(p, config);
    if (s.status != SolveStatus::optimal)
      throw std::runtime_error("state tomography: solver failed on preparation " +
                               std::to_string(l + 1));
    if (n0_bound && s.slack_values.maxCoeff() > slack_tolerance)
      throw std::runtime_error("state tomography pass 2: population bound " +
                               std::to_string(*n0_bound) + " inconsistent with data for preparation " +
                               std::to_string(l + 1) + " (slack " +
                               std::to_string(s.slack_values.maxCoeff()) + ")");
    out.states.push_back(DensityEstimate::from(s.variable_values[0]));
    out.residuals.push_back(s.slack_values);
    out.n0 = std::max(out.n0, out.states.back().trace);
  }
  return out;
}

}  // namespace

StateTomographyResult state_tomography_pass1(const std::vector<SignalRecord>& data_at_t0,
                                             const SolverConfig& config) {
  return run_state_pass(data_at_t0, config, nullptr, 0.0);
}

StateTomographyResult state_tomography_pass2(const std::vector<SignalRecord>& data_at_t0,
                                             double n0, const SolverConfig& config,
                                             double slack_tolerance) {
  StateTomographyResult out = run_state_pass(data_at_t0, config, &n0, slack_tolerance);
  out.n0 = n0;
  return out;
}

ProcessEstimate process_tomography(const StateTomographyResult& initial,
                                   const std::vector<SignalRecord>& data_at_tk,
                                   const std::vector<HermitianMatrix>& basis,
                                   const SolverConfig& config) {
  if (basis.size() != 16) throw std::invalid_argument("process_tomography: need 16 basis elements");
  if (initial.states.size() != 20 || data_at_tk.size() != 20)
    throw std::invalid_argument("process_tomography: need 20 states and 20 records");

  ConicProblem p;
  p.variable_dims = {16};
  // tr(D) = Σ_ij χ_ij tr(A_i) tr(A_j): a linear functional of chi.
  Mat w(16, 16);
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) w(i, j) = basis[i].trace() * basis[j].trace();
  p.objective_weights = {hermitize(w)};

  // Residual rows: tr(ρ̃ˡ P) = Σ_ij χ_ij tr(A_i ρ₀ˡ A_j P) = Re tr(χ H) with
  // H the hermitized transpose of the coefficient matrix.
  for (int l = 0; l < 20; ++l) {
    const Mat& rho0 = initial.states[static_cast<std::size_t>(l)].matrix;
    for (int ch = 0; ch < kNumChannels; ++ch) {
      const Mat& obs = channel_observable(ch);
      Mat coeff(16, 16);
      for (int i = 0; i < 16; ++i) {
        const Mat left = basis[i] * rho0;
        for (int j = 0; j < 16; ++j) coeff(i, j) = (left * basis[j] * obs).trace();
      }
      ConicProblem::ResidualConstraint rc;
      rc.observables = {{0, hermitize(coeff.transpose())}};
      rc.observed = data_at_tk[static_cast<std::size_t>(l)].channel(ch);
      p.residuals.push_back(std::move(rc));
    }
  }

  // The redundant D ⪰ 0 constraint, as a linear image of the chi coordinates.
  const HermParam hp16(16);
  ConicProblem::PsdImage img;
  img.dim = 16;
  img.map.resize(256, 256);
  for (int k = 0; k < 256; ++k) {
    RVec e = RVec::Zero(256);
    e[k] = 1.0;
    ChiMatrix unit{hp16.from_real(e), ""};
    img.map.col(k) = hp16.to_real(reshuffle(chi_to_superoperator(unit, basis)).matrix);
  }
  p.psd_images.push_back(std::move(img));

  Solution s = solve(p, config);
  ProcessEstimate est;
  est.residuals = s.slack_values;
  est.chi = ChiMatrix{s.variable_values[0]};
  est.superop = chi_to_superoperator(est.chi, basis);
  est.choi = reshuffle(est.superop);
  if (s.status != SolveStatus::optimal) {
    est.ok = false;
    est.error = s.status == SolveStatus::infeasible ? "solver reported infeasible"
                                                    : "solver hit iteration limit";
  }
  return est;
}

StateTomographyResult initial_states(const Dataset& dataset, const SolverConfig& config) {
  if (auto err = dataset.validate()) throw std::invalid_argument("dataset invalid: " + *err);
  std::vector<SignalRecord> at_t0;
  for (const auto& row : dataset.records) at_t0.push_back(row[0]);
  StateTomographyResult pass1 = state_tomography_pass1(at_t0, config);
  return state_tomography_pass2(at_t0, pass1.n0, config);
}

std::vector<ProcessEstimate> run_full_reconstruction(const Dataset& dataset,
                                                     const SolverConfig& config, int jobs) {
  if (auto err = dataset.validate()) throw std::invalid_argument("dataset invalid: " + *err);
  const StateTomographyResult init = initial_states(dataset, config);
  const auto basis = build_operator_basis(build_mub_preparations());

  const int nk = dataset.n_times();
  std::vector<ProcessEstimate> out(static_cast<std::size_t>(nk));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int k; (k = next.fetch_add(1)) < nk;) {
      std::vector<SignalRecord> at_tk;
      for (const auto& row : dataset.records) at_tk.push_back(row[static_cast<std::size_t>(k)]);
      ProcessEstimate est;
      try {
        est = process_tomography(init, at_tk, basis, config);
      } catch (const std::exception& e) {
        est.ok = false;
        est.error = e.what();
      }
      est.time_index = k;
      est.time_s = dataset.times[static_cast<std::size_t>(k)];
      out[static_cast<std::size_t>(k)] = std::move(est);
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return out;
}

}  // namespace qpt

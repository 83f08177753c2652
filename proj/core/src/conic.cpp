#include "qpt/conic.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qpt {

int ConicProblem::total_coords() const {
  int n = 0;
  for (int d : variable_dims) n += d * d;
  return n;
}

Mat project_psd(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(m));
  return es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).asDiagonal() *
         es.eigenvectors().adjoint();
}

namespace {

struct VarLayout {
  std::vector<HermParam> params;
  std::vector<int> offsets;
  int n = 0;
};

VarLayout make_layout(const ConicProblem& p) {
  VarLayout lay;
  for (int d : p.variable_dims) {
    lay.params.emplace_back(d);
    lay.offsets.push_back(lay.n);
    lay.n += d * d;
  }
  return lay;
}

// PSD-project a stacked coordinate segment, one matrix variable at a time.
void project_variables(const VarLayout& lay, const Eigen::Ref<const RVec>& in,
                       Eigen::Ref<RVec> out) {
  for (std::size_t v = 0; v < lay.params.size(); ++v) {
    const auto& hp = lay.params[v];
    const int o = lay.offsets[v];
    out.segment(o, hp.size()) = hp.to_real(project_psd(hp.from_real(in.segment(o, hp.size()))));
  }
}

}  // namespace

Solution solve(const ConicProblem& problem, const SolverConfig& config) {
  const VarLayout lay = make_layout(problem);
  const int n = lay.n;
  if (n == 0) throw std::invalid_argument("solve: problem has no variables");

  // Objective coordinates: Re tr(W X) = ⟨to_real(herm(W)), x⟩.
  RVec c = RVec::Zero(n);
  if (!problem.objective_weights.empty()) {
    if (static_cast<int>(problem.objective_weights.size()) !=
        static_cast<int>(problem.variable_dims.size()))
      throw std::invalid_argument("solve: one objective weight per variable required");
    for (std::size_t v = 0; v < lay.params.size(); ++v)
      c.segment(lay.offsets[v], lay.params[v].size()) =
          lay.params[v].to_real(hermitize(problem.objective_weights[v]));
  }

  // Stack the constraint operator A = [ I ; R ; M_1 ; ... ; G ]. The leading
  // identity block carries the PSD constraint on the variables themselves and
  // guarantees AᵀA is positive definite.
  const int n_res = static_cast<int>(problem.residuals.size());
  int m_rows = n + n_res;
  for (const auto& img : problem.psd_images) m_rows += img.dim * img.dim;
  m_rows += static_cast<int>(problem.inequalities.size());

  RMat A = RMat::Zero(m_rows, n);
  A.topRows(n).setIdentity();
  RVec res_b(n_res), res_w(n_res);
  int row = n;
  for (int r = 0; r < n_res; ++r, ++row) {
    const auto& rc = problem.residuals[r];
    for (const auto& [vi, obs] : rc.observables) {
      const auto& hp = lay.params[static_cast<std::size_t>(vi)];
      A.row(row).segment(lay.offsets[static_cast<std::size_t>(vi)], hp.size()) +=
          hp.to_real(hermitize(obs)).transpose();
    }
    res_b[r] = rc.observed;
    res_w[r] = rc.slack_weight;
  }
  const int img_row0 = row;
  std::vector<HermParam> img_params;
  for (const auto& img : problem.psd_images) {
    if (img.map.cols() != n || img.map.rows() != img.dim * img.dim)
      throw std::invalid_argument("solve: psd image map has wrong shape");
    A.middleRows(row, img.map.rows()) = img.map;
    img_params.emplace_back(img.dim);
    row += img.map.rows();
  }
  const int ineq_row0 = row;
  RVec ineq_lo(problem.inequalities.size());
  for (std::size_t q = 0; q < problem.inequalities.size(); ++q, ++row) {
    if (problem.inequalities[q].coeffs.size() != n)
      throw std::invalid_argument("solve: inequality coefficient size mismatch");
    A.row(row) = problem.inequalities[q].coeffs.transpose();
    ineq_lo[static_cast<Eigen::Index>(q)] = problem.inequalities[q].lower;
  }

  const Eigen::LLT<RMat> llt(A.transpose() * A);
  if (llt.info() != Eigen::Success) throw std::runtime_error("solve: normal-matrix factorization failed");

  double rho = config.penalty;
  const double alpha = config.over_relaxation;
  RVec x = RVec::Zero(n), z = RVec::Zero(m_rows), u = RVec::Zero(m_rows);
  RVec Ax = RVec::Zero(m_rows), z_old(m_rows), v(m_rows);

  Solution sol;
  double prev_pri = std::numeric_limits<double>::infinity();
  int stall = 0;

  // The proximal step per block: PSD projection on the variable block and on
  // each linear image, soft-threshold (the eliminated slacks) on residual
  // rows, and clipping at the lower bound on inequality rows.
  auto prox = [&](const RVec& w, RVec& out) {
    project_variables(lay, w.head(n), out.head(n));
    for (int r = 0; r < n_res; ++r) {
      const double d = w[n + r] - res_b[r];
      const double thr = res_w[r] / rho;
      out[n + r] = res_b[r] + (d > thr ? d - thr : (d < -thr ? d + thr : 0.0));
    }
    int pos = img_row0;
    for (const auto& hp : img_params) {
      out.segment(pos, hp.size()) =
          hp.to_real(project_psd(hp.from_real(w.segment(pos, hp.size()))));
      pos += hp.size();
    }
    for (Eigen::Index q = 0; q < ineq_lo.size(); ++q)
      out[ineq_row0 + q] = std::max(w[ineq_row0 + q], ineq_lo[q]);
  };

  double eig_guard_tol = config.tolerance;
  int it = 0;
  for (it = 1; it <= config.max_iterations; ++it) {
    x = llt.solve(A.transpose() * (z - u) - c / rho);
    Ax.noalias() = A * x;
    v = alpha * Ax + (1.0 - alpha) * z;
    z_old = z;
    prox(v + u, z);
    u += v - z;

    const double r_norm = (Ax - z).norm();
    const double s_norm = rho * (A.transpose() * (z - z_old)).norm();
    // Mixed absolute/relative thresholds (Boyd et al., §3.3.1) with
    // eps_abs = eps_rel = tolerance. A pure relative threshold is
    // unattainable on noisy instances whose optimal slacks sit within
    // tolerance of a soft-threshold kink: the scaled dual then has to land
    // exactly on the kink boundary, which the iteration only approaches
    // asymptotically, stalling the raw primal residual near a small floor.
    const double pri_scale = std::max(Ax.norm(), z.norm());
    const double dual_scale = rho * (A.transpose() * u).norm();
    const double eps_pri = eig_guard_tol * (std::sqrt(double(m_rows)) + pri_scale);
    const double eps_dual = eig_guard_tol * (std::sqrt(double(n)) + dual_scale);
    // Normalized residuals: status == optimal certifies both < tolerance.
    sol.primal_residual = r_norm / (std::sqrt(double(m_rows)) + pri_scale);
    sol.dual_residual = s_norm / (std::sqrt(double(n)) + dual_scale);
    if (r_norm < eps_pri && s_norm < eps_dual) {
      sol.status = SolveStatus::optimal;
      break;
    }

    if (it % 100 == 0) {
      // Residual balancing keeps the two convergence measures comparable.
      if (r_norm > 10.0 * s_norm) {
        rho *= 2.0;
        u /= 2.0;
      } else if (s_norm > 10.0 * r_norm) {
        rho /= 2.0;
        u *= 2.0;
      }
      // Divergence heuristic: primal residual stalled while the scaled dual
      // variable keeps growing without bound.
      if (r_norm > 0.99 * prev_pri && r_norm > eps_pri * 1e3 && u.norm() > 1e8) {
        if (++stall >= 10) {
          sol.status = SolveStatus::infeasible;
          break;
        }
      } else {
        stall = 0;
      }
      prev_pri = r_norm;
    }
  }
  sol.iterations = std::min(it, config.max_iterations);

  // Report values off the projected block so the PSD certificate is exact for
  // the variables themselves; slacks are recomputed from those values so that
  // objective and constraints are mutually consistent on the returned data.
  for (std::size_t vv = 0; vv < lay.params.size(); ++vv)
    sol.variable_values.push_back(
        lay.params[vv].from_real(z.head(n).segment(lay.offsets[vv], lay.params[vv].size())));
  RVec xz = z.head(n);
  sol.slack_values.resize(n_res);
  sol.objective_value = c.dot(xz);
  for (int r = 0; r < n_res; ++r) {
    sol.slack_values[r] = std::abs(A.row(n + r).dot(xz) - res_b[r]);
    sol.objective_value += res_w[r] * sol.slack_values[r];
  }

  if (sol.status == SolveStatus::optimal) {
    // The images of the returned coordinates can sit slightly below the PSD
    // certificate even though the iterate converged; in that case resume with
    // a tighter tolerance instead of reporting a sub-certificate solution.
    double min_img_eig = 0.0;
    int pos = 0;
    for (const auto& img : problem.psd_images) {
      HermParam hp(img.dim);
      Eigen::SelfAdjointEigenSolver<Mat> es(hp.from_real(img.map * xz));
      min_img_eig = std::min(min_img_eig, es.eigenvalues().minCoeff());
      (void)pos;
    }
    if (min_img_eig < -1e-8 && eig_guard_tol > 1e-10 && it < config.max_iterations) {
      SolverConfig tighter = config;
      tighter.tolerance = eig_guard_tol / 10.0;
      tighter.max_iterations = config.max_iterations - it;
      return solve(problem, tighter);
    }
  }
  return sol;
}

}  // namespace qpt

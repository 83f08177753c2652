#include "qpt/sim.hpp"

#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "qpt/analysis.hpp"

using namespace qpt;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_SUITE("sim") {

TEST_CASE("hamiltonian") {
  SpinSystemParams p;

  SUBCASE("no coupling: pure Zeeman spectrum") {
    p.j_coupling = 0.0;
    const Mat h = hamiltonian(p);
    CHECK((h - Mat(h.diagonal().asDiagonal())).norm() == 0.0);
    const double eh = kHbar * p.omega_h / 2.0, ec = kHbar * p.omega_c / 2.0;
    CHECK(h(0, 0).real() == doctest::Approx(-(eh + ec)).epsilon(1e-14));
    CHECK(h(1, 1).real() == doctest::Approx(-(eh - ec)).epsilon(1e-14));
    CHECK(h(2, 2).real() == doctest::Approx(eh - ec).epsilon(1e-14));
    CHECK(h(3, 3).real() == doctest::Approx(eh + ec).epsilon(1e-14));
  }

  SUBCASE("coupling term in isolation") {
    // Zeeman terms cancel in the difference of two couplings, leaving
    // 2*pi*hbar*dJ Sz(x)Sz = (pi*hbar*dJ/2) diag(1,-1,-1,1).
    SpinSystemParams p2 = p;
    p2.j_coupling = 2.0 * p.j_coupling;
    const Mat diff = hamiltonian(p2) - hamiltonian(p);
    Mat expect = Mat::Zero(4, 4);
    const double e = kPi * kHbar * p.j_coupling / 2.0;
    expect.diagonal() << e, -e, -e, e;
    // The Zeeman terms (~1e-25 J) cancel in the difference, leaving the much
    // smaller coupling term; bound the cancellation noise at the Zeeman scale.
    CHECK((diff - expect).norm() < 1e-15 * hamiltonian(p).norm());
  }

  SUBCASE("coupling is tiny against the Zeeman terms") {
    const Mat full = hamiltonian(p);
    SpinSystemParams pj = p;
    pj.j_coupling = 0.0;
    const Mat zeeman = hamiltonian(pj);
    CHECK((full - zeeman).norm() / zeeman.norm() < 1e-5);
  }
}

TEST_CASE("equilibrium state") {
  SpinSystemParams p;
  const DensityEstimate eq = equilibrium_state(p);
  CHECK(eq.trace == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(is_hermitian(eq.matrix));

  SpinSystemParams hot = p;
  hot.temperature = 1e12;
  CHECK((equilibrium_state(hot).matrix - Mat::Identity(4, 4) / 4.0).norm() < 1e-12);
}

TEST_CASE("high-temperature expansion matches the exact thermal state") {
  SpinSystemParams p;
  const Mat h = hamiltonian(p);
  // H is diagonal, so the canonical state is the elementwise exponential.
  Mat exact = Mat::Zero(4, 4);
  double z = 0.0;
  for (int i = 0; i < 4; ++i) z += std::exp(-h(i, i).real() / (kBoltzmann * p.temperature));
  for (int i = 0; i < 4; ++i)
    exact(i, i) = std::exp(-h(i, i).real() / (kBoltzmann * p.temperature)) / z;
  const Mat approx = equilibrium_state(p).matrix;
  CHECK((exact - approx).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("normalization constant") {
  SpinSystemParams p;
  CHECK(normalization_constant(p) ==
        doctest::Approx(2.4996066257110674e-05).epsilon(1e-12));

  SpinSystemParams doubled = p;
  doubled.omega_h = 2.0 * p.omega_h;
  CHECK(normalization_constant(doubled) - normalization_constant(p) ==
        doctest::Approx(kHbar * p.omega_h / (4.0 * kBoltzmann * p.temperature))
            .epsilon(1e-12));

  SpinSystemParams nj = p;
  nj.j_coupling = 0.0;
  CHECK(normalization_constant(nj) ==
        doctest::Approx(kHbar * (p.omega_h + p.omega_c) /
                        (4.0 * kBoltzmann * p.temperature))
            .epsilon(1e-14));
}

TEST_CASE("rescaled equilibrium and responsive fraction") {
  SpinSystemParams p;
  const DensityEstimate eq = rescaled_equilibrium(p);
  CHECK(eq.trace == doctest::Approx(1.0).epsilon(1e-12));
  const double s = p.omega_h + p.omega_c + 2.0 * kPi * p.j_coupling;
  CHECK((eq.matrix * pauli2(3, 0)).trace().real() ==
        doctest::Approx(p.omega_h / s).epsilon(1e-12));
  CHECK((eq.matrix * pauli2(0, 3)).trace().real() ==
        doctest::Approx(p.omega_c / s).epsilon(1e-12));
  CHECK((eq.matrix * pauli2(3, 3)).trace().real() ==
        doctest::Approx(kPi * p.j_coupling / s).epsilon(1e-10));
  CHECK((eq.matrix * pauli2(1, 0)).trace().real() == doctest::Approx(0.0));

  CHECK(responsive_fraction(p) == doctest::Approx(0.80012589958272207).epsilon(1e-12));
}

TEST_CASE("pseudo-pure states") {
  Vec up = Vec::Zero(4);
  up(0) = 1.0;

  CHECK((pseudo_pure(up, 0.0).matrix - Mat::Identity(4, 4) / 4.0).norm() < 1e-15);

  Mat proj = Mat::Zero(4, 4);
  proj(0, 0) = 1.0;
  CHECK((pseudo_pure(up, 1.0).matrix - proj).norm() < 1e-15);

  const DensityEstimate pp = pseudo_pure(up, 1e-5);
  CHECK(pp.trace == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(pp.matrix(0, 0).real() == doctest::Approx(0.25000375001875014).epsilon(1e-14));
  CHECK(pp.matrix(1, 1).real() == doctest::Approx(0.24999874999374999).epsilon(1e-14));
}

TEST_CASE("coupled transverse rate calibration") {
  RelaxationParams r;
  const CoupledRates cr = calibrate_coupled_rates(r);
  // The additive two-group rates and the calibrated in-plane rate, frozen as
  // regression constants for the default relaxation times.
  CHECK(cr.g_b == doctest::Approx(4.151238738738739).epsilon(1e-12));
  CHECK(cr.g_c == doctest::Approx(5.181686827956988).epsilon(1e-12));
  CHECK(cr.g_a == doctest::Approx(6.9714883651432693).epsilon(1e-9));

  // Per-channel rates: single-spin channels use the plain T1/T2 inverses.
  CHECK(pauli_decay_rate(r, cr, 3, 0) == doctest::Approx(1.0 / r.t1_h));
  CHECK(pauli_decay_rate(r, cr, 1, 0) == doctest::Approx(1.0 / r.t2_h));
  CHECK(pauli_decay_rate(r, cr, 2, 0) == doctest::Approx(1.0 / r.t2_h));
  CHECK(pauli_decay_rate(r, cr, 0, 3) == doctest::Approx(1.0 / r.t1_c));
  CHECK(pauli_decay_rate(r, cr, 0, 1) == doctest::Approx(1.0 / r.t2_c));
  CHECK(pauli_decay_rate(r, cr, 3, 3) == doctest::Approx(1.0 / r.t1_j));
  for (int a = 1; a <= 2; ++a)
    for (int b = 1; b <= 2; ++b)
      CHECK(pauli_decay_rate(r, cr, a, b) == doctest::Approx(cr.g_a));
  CHECK(pauli_decay_rate(r, cr, 1, 3) == doctest::Approx(cr.g_b));
  CHECK(pauli_decay_rate(r, cr, 2, 3) == doctest::Approx(cr.g_b));
  CHECK(pauli_decay_rate(r, cr, 3, 1) == doctest::Approx(cr.g_c));
  CHECK(pauli_decay_rate(r, cr, 3, 2) == doctest::Approx(cr.g_c));
  CHECK(pauli_decay_rate(r, cr, 0, 0) == doctest::Approx(0.0));
}

TEST_CASE("relaxation channel") {
  SpinSystemParams p;
  RelaxationParams r;
  const DensityEstimate eq = equilibrium_state(p);
  const CoupledRates cr = calibrate_coupled_rates(r);
  std::mt19937_64 rng(41);

  SUBCASE("t = 0 is the identity channel") {
    const ChoiMatrix d0 = relaxation_channel(r, eq, 0.0);
    const ChoiMatrix ident = reshuffle(SuperoperatorMatrix{Mat::Identity(16, 16)});
    CHECK((d0.matrix - ident.matrix).norm() < 1e-12);
  }

  SUBCASE("t -> infinity maps everything to equilibrium") {
    const SuperoperatorMatrix phi = reshuffle(relaxation_channel(r, eq, 1e6));
    for (int trial = 0; trial < 5; ++trial) {
      const Mat rho = qpt_test::random_density(4, rng);
      CHECK((apply_map(phi, DensityEstimate::from(rho)).matrix - eq.matrix).norm() < 1e-10);
    }
  }

  SUBCASE("equilibrium is a fixed point at every grid time") {
    for (double t : default_time_grid()) {
      const SuperoperatorMatrix phi = reshuffle(relaxation_channel(r, eq, t));
      CHECK((apply_map(phi, eq).matrix - eq.matrix).norm() < 1e-12);
    }
  }

  SUBCASE("channel-wise exponential approach with the model rates") {
    const double t = r.t2_j;
    const SuperoperatorMatrix phi = reshuffle(relaxation_channel(r, eq, t));
    const Mat rho = qpt_test::random_density(4, rng);
    const Mat evolved = apply_map(phi, DensityEstimate::from(rho)).matrix;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        if (a == 0 && b == 0) continue;
        const Mat obs = pauli2(a, b);
        const double e0 = (rho * obs).trace().real() - (eq.matrix * obs).trace().real();
        const double et = (evolved * obs).trace().real() - (eq.matrix * obs).trace().real();
        const double factor = std::exp(-pauli_decay_rate(r, cr, a, b) * t);
        CHECK(et == doctest::Approx(factor * e0).epsilon(1e-9));
      }
  }

  SUBCASE("semigroup composition") {
    const SuperoperatorMatrix p1 = reshuffle(relaxation_channel(r, eq, 0.3));
    const SuperoperatorMatrix p2 = reshuffle(relaxation_channel(r, eq, 1.1));
    const SuperoperatorMatrix p12 = reshuffle(relaxation_channel(r, eq, 1.4));
    CHECK((p1.matrix * p2.matrix - p12.matrix).norm() < 1e-10);
  }

  SUBCASE("complete positivity holds on the whole grid") {
    // The constructor throws on a negative Choi eigenvalue, so instantiating
    // across the grid is the check.
    for (double t : default_time_grid()) CHECK_NOTHROW(relaxation_channel(r, eq, t));
  }

  SUBCASE("incompatible times are rejected") {
    RelaxationParams bad = r;
    bad.t2_h = 3.0 * bad.t1_h;  // violates t2 <= 2 t1
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  }
}

TEST_CASE("default time grid") {
  const auto grid = default_time_grid();
  REQUIRE(grid.size() == 51);
  CHECK(grid.front() == 0.0);
  CHECK(grid.back() == doctest::Approx(60.0).epsilon(1e-12));
  for (std::size_t k = 1; k < grid.size(); ++k) CHECK(grid[k] > grid[k - 1]);
}

TEST_CASE("dataset emission at t = 0 reproduces the preparation signals") {
  SpinSystemParams p;
  RelaxationParams r;
  const Dataset ds = generate_dataset(p, r, NoiseSpec{}, {0.0});
  REQUIRE(ds.n_preps() == 20);
  REQUIRE(ds.n_times() == 1);

  const double m = normalization_constant(p);
  const double alpha = 2.0 * p.epsilon_scale / (1.0 + p.epsilon_scale);
  const PreparationSet mub = build_mub_preparations();
  for (int l = 0; l < 20; ++l) {
    // Rebuild the pseudo-pure preparation independently.
    Eigen::SelfAdjointEigenSolver<Mat> es(mub.states[static_cast<std::size_t>(l)].matrix);
    Vec psi = es.eigenvectors().col(3);
    const DensityEstimate pp = pseudo_pure(psi, alpha);
    for (int ch = 0; ch < kNumChannels; ++ch) {
      const double expect =
          (pp.matrix * channel_observable(ch)).trace().real() / (2.0 * m);
      CHECK(ds.records[static_cast<std::size_t>(l)][0].channel(ch) ==
            doctest::Approx(expect).epsilon(1e-12));
    }
  }
}

TEST_CASE("noisy emission is deterministic for a fixed seed") {
  SpinSystemParams p;
  RelaxationParams r;
  NoiseSpec noise;
  noise.kind = NoiseSpec::Kind::gaussian;
  noise.sigma = 1e-3;
  noise.seed = 1234;
  const std::vector<double> times = {0.0, 0.1, 1.0};
  const Dataset a = generate_dataset(p, r, noise, times);
  const Dataset b = generate_dataset(p, r, noise, times);
  for (int l = 0; l < 20; ++l)
    for (int k = 0; k < 3; ++k)
      for (int ch = 0; ch < kNumChannels; ++ch)
        CHECK(a.records[static_cast<std::size_t>(l)][static_cast<std::size_t>(k)]
                  .channel(ch) ==
              b.records[static_cast<std::size_t>(l)][static_cast<std::size_t>(k)]
                  .channel(ch));

  NoiseSpec other = noise;
  other.seed = 1235;
  const Dataset c = generate_dataset(p, r, other, times);
  CHECK(c.records[0][0].channel(0) != a.records[0][0].channel(0));
}

TEST_CASE("aggregate coupled magnetizations fit the configured decay times") {
  SpinSystemParams p;
  RelaxationParams r;
  const Dataset ds = generate_dataset(p, r, NoiseSpec{}, default_time_grid());
  const DensityEstimate eq = rescaled_equilibrium(p);

  auto series_for = [&](const std::vector<int>& channels, const char* label) {
    DecaySeries s;
    s.channel_label = label;
    for (int k = 0; k < ds.n_times(); ++k) {
      double val = 0.0;
      for (int ch : channels) {
        const double ref = (eq.matrix * channel_observable(ch)).trace().real();
        double sum_sq = 0.0;
        for (int l = 0; l < 20; ++l) {
          const double d =
              ds.records[static_cast<std::size_t>(l)][static_cast<std::size_t>(k)]
                  .channel(ch) -
              ref;
          sum_sq += d * d;
        }
        val += std::sqrt(sum_sq) / 20.0;
      }
      s.times.push_back(ds.times[static_cast<std::size_t>(k)]);
      s.values.push_back(val / static_cast<double>(channels.size()));
    }
    return s;
  };

  // Channel indices: 6..14 are the coupled block xx..zz; 14 is zz.
  const FitResult zz = fit_exponential(series_for({14}, "J-zz"));
  CHECK(zz.converged);
  CHECK(zz.t_star == doctest::Approx(r.t1_j).epsilon(1e-6));

  std::vector<int> off_zz = {6, 7, 8, 9, 10, 11, 12, 13};
  const FitResult jt = fit_exponential(series_for(off_zz, "J-transverse"));
  CHECK(jt.converged);
  CHECK(jt.t_star == doctest::Approx(r.t2_j).epsilon(1e-5));
}

}  // TEST_SUITE

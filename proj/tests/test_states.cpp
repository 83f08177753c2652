#include "qpt/states.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

using namespace qpt;

TEST_SUITE("states") {

TEST_CASE("preparation set basics") {
  const PreparationSet preps = build_mub_preparations();
  REQUIRE(preps.states.size() == 20);
  REQUIRE(preps.labels.size() == 20);
  CHECK(preps.labels.front() == "1");
  CHECK(preps.labels.back() == "20");

  Mat p1 = Mat::Zero(4, 4);
  p1(0, 0) = 1.0;  // the spin-up/spin-up projector leads the canonical basis
  CHECK((preps.states[0].matrix - p1).norm() < 1e-12);

  for (const auto& st : preps.states) {
    CHECK(st.trace == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((st.matrix * st.matrix - st.matrix).norm() < 1e-12);  // projectors
    CHECK(is_valid_density(st));
  }
}

TEST_CASE("cross-basis overlaps are all 1/4") {
  const PreparationSet preps = build_mub_preparations();
  // States i and j live in bases i/4 and j/4; mutual unbiasedness forces
  // tr(P_i P_j) = |<psi_i|psi_j>|^2 = 1/4 across distinct bases.
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j) {
      if (i / 4 == j / 4) continue;
      const double overlap =
          (preps.states[static_cast<std::size_t>(i)].matrix *
           preps.states[static_cast<std::size_t>(j)].matrix)
              .trace()
              .real();
      CHECK(overlap == doctest::Approx(0.25).epsilon(1e-10));
    }
}

TEST_CASE("gram rank of the 20 projectors is 16") {
  const PreparationSet preps = build_mub_preparations();
  Mat gram(20, 20);
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j)
      gram(i, j) = (preps.states[static_cast<std::size_t>(i)].matrix *
                    preps.states[static_cast<std::size_t>(j)].matrix)
                       .trace();
  Eigen::FullPivLU<Mat> lu(gram);
  lu.setThreshold(1e-10);
  CHECK(lu.rank() == 16);
}

TEST_CASE("operator basis") {
  const PreparationSet preps = build_mub_preparations();
  const auto basis = build_operator_basis(preps);
  REQUIRE(basis.size() == 16);

  Mat gram(16, 16);
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j)
      gram(i, j) = (basis[static_cast<std::size_t>(i)].adjoint() *
                    basis[static_cast<std::size_t>(j)])
                       .trace();
  Eigen::FullPivLU<Mat> lu(gram);
  lu.setThreshold(1e-10);
  CHECK(lu.rank() == 16);

  Mat sum = Mat::Zero(4, 4);
  for (int m = 0; m < 4; ++m) {
    sum += basis[static_cast<std::size_t>(m)];
    CHECK((basis[static_cast<std::size_t>(m)] * basis[static_cast<std::size_t>(m)] -
           basis[static_cast<std::size_t>(m)])
              .norm() < 1e-12);
  }
  CHECK((sum - Mat::Identity(4, 4)).norm() < 1e-12);  // computational completeness
  for (const auto& a : basis)
    CHECK((a * a - a).norm() < 1e-12);  // every element is a projector
}

}  // TEST_SUITE

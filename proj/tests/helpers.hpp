#pragma once
// Shared deterministic random generators for the test suites.

#include "qpt/algebra.hpp"
#include "qpt/maps.hpp"

#include <random>

namespace qpt_test {

inline qpt::Mat random_complex(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  qpt::Mat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = qpt::Complex(n(rng), n(rng));
  return m;
}

inline qpt::Mat random_hermitian(int dim, std::mt19937_64& rng) {
  return qpt::hermitize(random_complex(dim, dim, rng));
}

inline qpt::Mat random_psd(int dim, std::mt19937_64& rng) {
  const qpt::Mat g = random_complex(dim, dim, rng);
  return g * g.adjoint();
}

inline qpt::Mat random_density(int dim, std::mt19937_64& rng) {
  const qpt::Mat p = random_psd(dim, rng);
  return p / p.trace().real();
}

// A random completely positive map on 4x4 states with `n_kraus` operators,
// returned in Choi form.
inline qpt::ChoiMatrix random_cp_choi(int n_kraus, std::mt19937_64& rng) {
  qpt::KrausSet ks;
  for (int i = 0; i < n_kraus; ++i) {
    ks.operators.push_back(random_complex(4, 4, rng) / 4.0);
    ks.weights.push_back(1.0);
  }
  return qpt::kraus_to_choi(ks);
}

}  // namespace qpt_test

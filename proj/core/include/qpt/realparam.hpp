#pragma once
// Real orthonormal parametrization of Hermitian matrices. A d×d Hermitian
// matrix maps to d² real coordinates against the basis
//   { E_ii } ∪ { (E_ij + E_ji)/√2, (iE_ij − iE_ji)... for i<j },
// which is orthonormal under ⟨A,B⟩ = tr(A†B). Inner products, norms and linear
// functionals therefore carry over verbatim between the two pictures; the
// conic solver and the tomography assembly both rely on that.

#include "qpt/algebra.hpp"

namespace qpt {

struct HermParam {
  int dim = 0;

  explicit HermParam(int d) : dim(d) {}

  int size() const { return dim * dim; }

  RVec to_real(const Mat& m) const;
  Mat from_real(const RVec& x) const;
};

}  // namespace qpt

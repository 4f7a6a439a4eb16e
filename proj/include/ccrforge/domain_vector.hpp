#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccrforge/complex_matrix.hpp"

namespace ccrforge::ccrlab {

using numkernel::cplx;

// Coefficient vector over the truncated momentum basis, storage order
// k = -K..K. The tag records which canonical domain the vector was sampled
// from; "none" marks vectors with no domain claim attached.
struct DomainVector {
  enum class Tag { none, dense_zero_sum, closed_bump };

  std::vector<cplx> coefficients;
  int K = 0;
  Tag tag = Tag::none;

  int size() const { return static_cast<int>(coefficients.size()); }

  double norm() const { return numkernel::norm2(coefficients); }

  cplx coefficient_sum() const {
    cplx s(0.0, 0.0);
    for (const cplx& c : coefficients) s += c;
    return s;
  }
};

inline std::string tag_name(DomainVector::Tag tag) {
  switch (tag) {
    case DomainVector::Tag::dense_zero_sum: return "dense_zero_sum";
    case DomainVector::Tag::closed_bump: return "closed_bump";
    default: return "none";
  }
}

}  // namespace ccrforge::ccrlab

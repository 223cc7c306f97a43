#include "pixhom/material.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pixhom/errors.hpp"

namespace pixhom {

IsotropicModuli::IsotropicModuli(double bulk, double shear) : bulk_(bulk), shear_(shear) {
  if (!(bulk > 0.0) || !(shear > 0.0) || !std::isfinite(bulk) || !std::isfinite(shear)) {
    throw std::invalid_argument("moduli must be positive and finite");
  }
}

VoigtMatrix3 hooke_matrix(const IsotropicModuli& m) {
  const double k = m.bulk();
  const double g = m.shear();
  VoigtMatrix3 d;
  d << k + g, k - g, 0.0,
       k - g, k + g, 0.0,
       0.0, 0.0, g;
  return d;
}

VoigtMatrix3 compliance_matrix(const IsotropicModuli& m) {
  return compliance_matrix(EffectiveModuli{m.bulk(), m.shear(), m.shear()});
}

VoigtMatrix3 compliance_matrix(const EffectiveModuli& m) {
  const double ik = 1.0 / m.bulk;
  const double ig = 1.0 / m.shear;
  VoigtMatrix3 c;
  c << 0.25 * (ik + ig), 0.25 * (ik - ig), 0.0,
       0.25 * (ik - ig), 0.25 * (ik + ig), 0.0,
       0.0, 0.0, 1.0 / m.shear45;
  return c;
}

EffectiveModuli moduli_from_compliance(const VoigtMatrix3& c, double pattern_tolerance) {
  const double scale = c.cwiseAbs().maxCoeff();
  const double deviation = std::max({std::abs(c(0, 0) - c(1, 1)), std::abs(c(0, 1) - c(1, 0)), std::abs(c(0, 2)),
                                     std::abs(c(1, 2)), std::abs(c(2, 0)), std::abs(c(2, 1))});
  if (!(scale > 0.0) || deviation > pattern_tolerance * scale) {
    throw std::invalid_argument("compliance matrix does not have the square-symmetric pattern");
  }
  const double c11 = 0.5 * (c(0, 0) + c(1, 1));
  const double c12 = 0.5 * (c(0, 1) + c(1, 0));
  const double inv_k = 2.0 * (c11 + c12);
  const double inv_g = 2.0 * (c11 - c12);
  const double inv_g45 = c(2, 2);
  if (!(inv_k > 0.0) || !(inv_g > 0.0) || !(inv_g45 > 0.0)) throw NotPositiveDefiniteError();
  return {1.0 / inv_k, 1.0 / inv_g, 1.0 / inv_g45};
}

}  // namespace pixhom

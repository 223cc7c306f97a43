#pragma once

#include <Eigen/Dense>

namespace pixhom {

/// 3x3 Voigt matrix. Strains are (e11, e22, 2 e12), stresses (s11, s22, s12).
using VoigtMatrix3 = Eigen::Matrix3d;
using Voigt3 = Eigen::Vector3d;

/// Planar bulk modulus K and shear modulus G of the isotropic matrix phase.
class IsotropicModuli {
 public:
  /// Throws std::invalid_argument unless both moduli are positive and finite.
  IsotropicModuli(double bulk, double shear);

  double bulk() const noexcept { return bulk_; }
  double shear() const noexcept { return shear_; }
  /// 1/K + 1/G, the factor multiplying every geometric constant.
  double compliance_sum() const noexcept { return 1.0 / bulk_ + 1.0 / shear_; }

  friend bool operator==(const IsotropicModuli&, const IsotropicModuli&) = default;

 private:
  double bulk_;
  double shear_;
};

/// Square-symmetric effective moduli (K*, G*, G*_45).
struct EffectiveModuli {
  double bulk;
  double shear;
  double shear45;
};

VoigtMatrix3 hooke_matrix(const IsotropicModuli& m);
VoigtMatrix3 compliance_matrix(const IsotropicModuli& m);
/// Compliance of a square-symmetric law with the given three moduli.
VoigtMatrix3 compliance_matrix(const EffectiveModuli& m);

/**
 * Reads (K, G, G45) off a square-symmetric compliance matrix:
 * 1/K = 2 (c11 + c12), 1/G = 2 (c11 - c12), 1/G45 = c33.
 *
 * `pattern_tolerance` bounds |c11 - c22|, |c12 - c21| and the shear coupling
 * entries relative to the largest entry. Violations throw std::invalid_argument;
 * nonpositive moduli throw NotPositiveDefiniteError.
 */
EffectiveModuli moduli_from_compliance(const VoigtMatrix3& c, double pattern_tolerance = 1e-6);

}  // namespace pixhom

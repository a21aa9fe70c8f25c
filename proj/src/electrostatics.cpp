#include "iongrad/electrostatics.hpp"

#include <cmath>
#include <stdexcept>

#include "iongrad/constants.hpp"

namespace iongrad {

namespace {
constexpr double kOrientationTol = 1e-12;
}

double Vec3::norm() const { return std::sqrt(dot(*this)); }

DipoleMoment DipoleMoment::make(double magnitude_si, const Vec3& direction) {
  if (magnitude_si < 0.0)
    throw std::domain_error("dipole magnitude must be >= 0");
  const double n = direction.norm();
  if (!(n > 0.0)) throw std::domain_error("dipole direction must be nonzero");
  return DipoleMoment{magnitude_si, direction * (1.0 / n)};
}

DipoleMoment DipoleMoment::from_debye(double magnitude_debye,
                                      const Vec3& direction) {
  return make(magnitude_debye * constants::debye, direction);
}

bool DipoleMoment::is_normal() const {
  return std::abs(orientation.x) <= kOrientationTol &&
         std::abs(orientation.y) <= kOrientationTol &&
         std::abs(orientation.z - 1.0) <= kOrientationTol;
}

GradiometerGeometry GradiometerGeometry::make(double height_m,
                                              double baseline_m) {
  if (!(height_m > 0.0)) throw std::domain_error("ion height must be > 0");
  if (!(baseline_m > 0.0)) throw std::domain_error("ion baseline must be > 0");
  return GradiometerGeometry{height_m, baseline_m};
}

InterfaceModel InterfaceModel::vacuum() {
  return {InterfaceKind::vacuum, 1.0};
}

InterfaceModel InterfaceModel::planar_dielectric(double epsilon_r) {
  if (!(epsilon_r >= 1.0))
    throw std::domain_error("relative permittivity must be >= 1");
  return {InterfaceKind::planar_dielectric, epsilon_r};
}

InterfaceModel InterfaceModel::metal_underlayer() {
  return {InterfaceKind::metal_underlayer, 1.0};
}

double InterfaceModel::transmission() const {
  switch (kind) {
    case InterfaceKind::vacuum:
      return 1.0;
    case InterfaceKind::planar_dielectric:
      return 2.0 / (epsilon_r + 1.0);
    case InterfaceKind::metal_underlayer:
      return 2.0;
  }
  throw std::logic_error("unreachable interface kind");
}

double debye_from_charge_displacement(double charge_fraction,
                                      double displacement_angstrom) {
  if (displacement_angstrom < 0.0)
    throw std::domain_error("displacement must be >= 0");
  return constants::debye_per_e_angstrom * charge_fraction *
         displacement_angstrom;
}

double c_eff(double u) {
  if (u < 0.0) throw std::domain_error("d/h ratio must be >= 0");
  const double half = 0.5 * u;
  return 3.0 / std::pow(1.0 + half * half, 2.5);
}

double delta_ex(const GradiometerGeometry& geometry, const DipoleMoment& dipole,
                const InterfaceModel& interface) {
  if (!dipole.is_normal())
    throw std::domain_error(
        "delta_ex covers normal (+z) dipoles only; difference "
        "dipole_field_at_point at the two ion positions instead");
  const double h = geometry.height;
  const double d = geometry.baseline;
  const double r2 = h * h + 0.25 * d * d;
  return interface.transmission() * constants::coulomb_k * dipole.magnitude *
         3.0 * h * d / (r2 * r2 * std::sqrt(r2));
}

Vec3 dipole_field_at_point(const DipoleMoment& dipole,
                           const Vec3& source_position,
                           const Vec3& field_point) {
  const Vec3 r = field_point - source_position;
  const double rn = r.norm();
  if (!(rn > 0.0))
    throw std::domain_error("field point coincides with the dipole position");
  const Vec3 rhat = r * (1.0 / rn);
  const Vec3 p = dipole.orientation * dipole.magnitude;
  const double proj = p.dot(rhat);
  const Vec3 numer = rhat * (3.0 * proj) - p;
  return numer * (constants::coulomb_k / (rn * rn * rn));
}

double differential_field_x(const GradiometerGeometry& geometry,
                            const DipoleMoment& dipole) {
  const Vec3 origin{};
  const Vec3 e_sensor =
      dipole_field_at_point(dipole, origin, geometry.sensor_position());
  const Vec3 e_reference =
      dipole_field_at_point(dipole, origin, geometry.reference_position());
  return e_sensor.x - e_reference.x;
}

double rms_signal(double delta_ex_max, OrientationPolicy policy) {
  if (delta_ex_max < 0.0)
    throw std::domain_error("field magnitude must be >= 0");
  switch (policy) {
    case OrientationPolicy::fixed_normal:
      return delta_ex_max;
    case OrientationPolicy::isotropic_rms:
      return delta_ex_max / std::sqrt(3.0);
  }
  throw std::logic_error("unreachable orientation policy");
}

std::string to_string(InterfaceKind kind) {
  switch (kind) {
    case InterfaceKind::vacuum:
      return "vacuum";
    case InterfaceKind::planar_dielectric:
      return "planar-dielectric";
    case InterfaceKind::metal_underlayer:
      return "metal-underlayer";
  }
  return "?";
}

std::string to_string(OrientationPolicy policy) {
  return policy == OrientationPolicy::fixed_normal ? "fixed-normal"
                                                   : "isotropic-rms";
}

}  // namespace iongrad

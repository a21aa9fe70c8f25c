#pragma once

#include <string>

namespace iongrad {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  double norm() const;
};

// Binding-induced dipole change. Magnitude in C m, orientation a unit vector.
struct DipoleMoment {
  double magnitude = 0.0;  // C m, >= 0
  Vec3 orientation{0.0, 0.0, 1.0};

  // Normalizes `direction`; rejects negative magnitude and zero direction.
  static DipoleMoment make(double magnitude_si, const Vec3& direction);
  static DipoleMoment from_debye(double magnitude_debye, const Vec3& direction);

  bool is_normal() const;  // oriented along +z within 1e-12
};

// Ions at (+-d/2, 0, h) above a sample surface at z = 0.
struct GradiometerGeometry {
  double height = 0.0;    // h, m
  double baseline = 0.0;  // d, m

  static GradiometerGeometry make(double height_m, double baseline_m);
  Vec3 sensor_position() const { return {+0.5 * baseline, 0.0, height}; }
  Vec3 reference_position() const { return {-0.5 * baseline, 0.0, height}; }
};

enum class InterfaceKind { vacuum, planar_dielectric, metal_underlayer };

// Transmission of a buried normal dipole's field across the sample interface.
struct InterfaceModel {
  InterfaceKind kind = InterfaceKind::vacuum;
  double epsilon_r = 1.0;  // used only for planar_dielectric

  static InterfaceModel vacuum();
  static InterfaceModel planar_dielectric(double epsilon_r);
  static InterfaceModel metal_underlayer();

  // eta: 1 (vacuum), 2/(eps_r+1) (planar dielectric), 2 (metal underlayer)
  double transmission() const;
};

enum class OrientationPolicy { fixed_normal, isotropic_rms };

// p[D] = (q/e) * l[A] * (e*1A in Debye); throws std::domain_error for l < 0.
double debye_from_charge_displacement(double charge_fraction,
                                      double displacement_angstrom);

// Geometry factor 3 / (1 + (u/2)^2)^(5/2), u = d/h. Monotonically decreasing.
double c_eff(double u);

// Lateral differential field of a normal (+z) dipole at the origin:
//   eta * (dp/4 pi eps0) * 3 h d / (h^2 + (d/2)^2)^(5/2)
// Throws std::domain_error for non-normal orientation (use
// differential_field_x differencing for the general case).
double delta_ex(const GradiometerGeometry& geometry, const DipoleMoment& dipole,
                const InterfaceModel& interface);

// Free-space point-dipole field E = k [3 (p.r^) r^ - p] / r^3.
// Throws std::domain_error for coincident points.
Vec3 dipole_field_at_point(const DipoleMoment& dipole, const Vec3& source_position,
                           const Vec3& field_point);

// General-orientation differential field by two-point differencing of the
// free-space dipole field (no interface factor). Brute-force route for delta_ex.
double differential_field_x(const GradiometerGeometry& geometry,
                            const DipoleMoment& dipole);

// fixed_normal: unchanged; isotropic_rms: divided by sqrt(3).
double rms_signal(double delta_ex_max, OrientationPolicy policy);

std::string to_string(InterfaceKind kind);
std::string to_string(OrientationPolicy policy);

}  // namespace iongrad

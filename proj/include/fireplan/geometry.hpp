#pragma once

#include <cmath>
#include <optional>

#include "fireplan/errors.hpp"

namespace fireplan {

// Physical constants. Units throughout: km, s, rad, kg-free.
inline constexpr double kEarthRadiusKm = 6378.137;
inline constexpr double kMuEarthKm3S2 = 398600.4418;
inline constexpr double kEarthRotationRadS = 7.2921159e-5;

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
    Vec3 normalized() const;
    bool finite() const {
        return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
    }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

// Angle between two vectors, robust near 0 and pi.
double angle_between(const Vec3& a, const Vec3& b);

// Circular orbit, parameterized by argument of latitude at epoch.
// Eccentricity is fixed at zero.
struct OrbitElements {
    double semi_major_axis_km = 6878.137;
    double inclination_rad = 0.0;
    double raan_rad = 0.0;
    double arg_latitude_epoch_rad = 0.0;
    double epoch_s = 0.0; // horizon-relative
};

struct GroundSite {
    double latitude_rad = 0.0;
    double longitude_rad = 0.0;
    double min_elevation_rad = 0.0;
};

struct StateVector {
    Vec3 position_km;
    Vec3 velocity_km_s;
};

// Mirror reflection of a transmitter signal off the spherical Earth surface
// as seen by a receiver. point lies on the surface, in the plane spanned by
// tx, rx and the Earth center.
struct SpecularSolution {
    Vec3 point_km;
    double path_length_km = 0.0;
    double incidence_angle_rad = 0.0;
    double reflection_angle_rad = 0.0;
};

void validate_elements(const OrbitElements& el);

double orbital_period_s(const OrbitElements& el);

// Two-body circular propagation. |position| == a, speed == sqrt(mu/a).
StateVector propagate_circular(const OrbitElements& el, double t_s);

// Inertial position of a ground site under uniform Earth rotation.
Vec3 site_position_eci(const GroundSite& site, double t_s,
                       double rotation_offset_rad = 0.0);

// Elevation of the satellite above the site's local horizontal, in
// [-pi/2, pi/2]. Returns pi/2 when the satellite is at zenith.
double elevation_angle(const GroundSite& site, const Vec3& sat_pos_km,
                       double t_s, double rotation_offset_rad = 0.0);

// Cylindrical-shadow eclipse test. sun_dir must be a unit vector.
bool is_eclipsed(const Vec3& sat_pos_km, const Vec3& sun_dir);

// Specular point for a transmitter/receiver pair over the spherical Earth.
// Throws NoSpecularError when Earth blocks every reflected path.
SpecularSolution specular_point(const Vec3& tx_pos_km, const Vec3& rx_pos_km);

// Non-throwing variant for hot scan loops: nullopt when no visible
// reflection exists. Still throws ValidationError on malformed input.
std::optional<SpecularSolution> try_specular_point(const Vec3& tx_pos_km,
                                                   const Vec3& rx_pos_km);

} // namespace fireplan

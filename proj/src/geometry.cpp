#include "fireplan/geometry.hpp"

#include <algorithm>

#include "fireplan/util.hpp"

namespace fireplan {

Vec3 Vec3::normalized() const {
    double n = norm();
    if (n <= 0.0 || !std::isfinite(n))
        throw ValidationError("cannot normalize zero or non-finite vector");
    return *this / n;
}

double angle_between(const Vec3& a, const Vec3& b) {
    return std::atan2(a.cross(b).norm(), a.dot(b));
}

void validate_elements(const OrbitElements& el) {
    if (!std::isfinite(el.semi_major_axis_km) ||
        el.semi_major_axis_km <= kEarthRadiusKm)
        throw ValidationError("orbit.semi_major_axis_km must exceed the Earth "
                              "equatorial radius (6378.137 km)");
    if (!std::isfinite(el.inclination_rad) || !std::isfinite(el.raan_rad) ||
        !std::isfinite(el.arg_latitude_epoch_rad) || !std::isfinite(el.epoch_s))
        throw ValidationError("orbit angles and epoch must be finite");
}

double orbital_period_s(const OrbitElements& el) {
    double a = el.semi_major_axis_km;
    return 2.0 * kPi * std::sqrt(a * a * a / kMuEarthKm3S2);
}

StateVector propagate_circular(const OrbitElements& el, double t_s) {
    validate_elements(el);
    const double a = el.semi_major_axis_km;
    const double n = std::sqrt(kMuEarthKm3S2 / (a * a * a)); // mean motion
    const double u = el.arg_latitude_epoch_rad + n * (t_s - el.epoch_s);

    const double cu = std::cos(u), su = std::sin(u);
    const double ci = std::cos(el.inclination_rad);
    const double si = std::sin(el.inclination_rad);
    const double co = std::cos(el.raan_rad), so = std::sin(el.raan_rad);

    // In-plane (cos u, sin u, 0) rotated by Rz(raan) * Rx(inclination).
    Vec3 pos{a * (co * cu - so * ci * su), a * (so * cu + co * ci * su),
             a * (si * su)};
    const double v = std::sqrt(kMuEarthKm3S2 / a);
    Vec3 vel{v * (-co * su - so * ci * cu), v * (-so * su + co * ci * cu),
             v * (si * cu)};
    return {pos, vel};
}

Vec3 site_position_eci(const GroundSite& site, double t_s,
                       double rotation_offset_rad) {
    const double lon =
        site.longitude_rad + rotation_offset_rad + kEarthRotationRadS * t_s;
    const double cl = std::cos(site.latitude_rad);
    return {kEarthRadiusKm * cl * std::cos(lon),
            kEarthRadiusKm * cl * std::sin(lon),
            kEarthRadiusKm * std::sin(site.latitude_rad)};
}

double elevation_angle(const GroundSite& site, const Vec3& sat_pos_km,
                       double t_s, double rotation_offset_rad) {
    if (!sat_pos_km.finite() || sat_pos_km.norm() <= kEarthRadiusKm)
        throw ValidationError("satellite position must be above the surface");
    Vec3 sp = site_position_eci(site, t_s, rotation_offset_rad);
    Vec3 up = sp / kEarthRadiusKm;
    Vec3 los = sat_pos_km - sp;
    double n = los.norm();
    if (n < 1e-12)
        return kPi / 2.0;
    double s = std::clamp(los.dot(up) / n, -1.0, 1.0);
    return std::asin(s);
}

bool is_eclipsed(const Vec3& sat_pos_km, const Vec3& sun_dir) {
    if (std::fabs(sun_dir.norm() - 1.0) > 1e-9)
        throw ValidationError("sun_direction must be a unit vector");
    double along = sat_pos_km.dot(sun_dir);
    if (along >= 0.0)
        return false; // sunlit side
    Vec3 perp = sat_pos_km - sun_dir * along;
    return perp.norm() < kEarthRadiusKm;
}

namespace {

// Point on the unit great-circle arc from a_hat toward b_hat, at angle
// alpha from a_hat. gamma is the full arc angle.
Vec3 arc_point(const Vec3& a_hat, const Vec3& b_hat, double gamma,
               double alpha) {
    double s = std::sin(gamma);
    return (a_hat * std::sin(gamma - alpha) + b_hat * std::sin(alpha)) / s;
}

SpecularSolution solution_at(const Vec3& tx, const Vec3& rx,
                             const Vec3& surface_unit) {
    Vec3 p = surface_unit * kEarthRadiusKm;
    Vec3 to_tx = tx - p;
    Vec3 to_rx = rx - p;
    SpecularSolution sol;
    sol.point_km = p;
    sol.path_length_km = to_tx.norm() + to_rx.norm();
    sol.incidence_angle_rad = angle_between(surface_unit, to_tx);
    sol.reflection_angle_rad = angle_between(surface_unit, to_rx);
    return sol;
}

} // namespace

std::optional<SpecularSolution> try_specular_point(const Vec3& tx_pos_km,
                                                   const Vec3& rx_pos_km) {
    const double rt = tx_pos_km.norm();
    const double rr = rx_pos_km.norm();
    if (!tx_pos_km.finite() || !rx_pos_km.finite() || rt <= kEarthRadiusKm ||
        rr <= kEarthRadiusKm)
        throw ValidationError("tx/rx positions must be finite and above the "
                              "surface");

    const Vec3 t_hat = tx_pos_km / rt;
    const Vec3 r_hat = rx_pos_km / rr;
    const double gamma = angle_between(t_hat, r_hat);

    if (gamma < 1e-12) {
        // Collinear, same side: reflection at the shared sub-satellite point.
        SpecularSolution sol = solution_at(tx_pos_km, rx_pos_km, r_hat);
        sol.incidence_angle_rad = 0.0;
        sol.reflection_angle_rad = 0.0;
        return sol;
    }
    if (kPi - gamma < 1e-9)
        return std::nullopt; // antipodal: Earth in between

    // Both endpoints must see the reflection point above their horizon; the
    // widest workable separation is the sum of the horizon half-angles.
    const double beta_t = std::acos(kEarthRadiusKm / rt);
    const double beta_r = std::acos(kEarthRadiusKm / rr);
    if (gamma > beta_t + beta_r + 1e-12)
        return std::nullopt;

    // Fermat: along the in-plane arc the incidence/reflection difference is
    // monotone and crosses zero at the minimum-path point. Bisect it.
    auto angle_gap = [&](double alpha) {
        Vec3 u = arc_point(t_hat, r_hat, gamma, alpha);
        Vec3 p = u * kEarthRadiusKm;
        return angle_between(u, tx_pos_km - p) - angle_between(u, rx_pos_km - p);
    };

    double lo = 0.0, hi = gamma;
    double glo = angle_gap(lo);
    if (glo > 0.0)
        return std::nullopt; // degenerate; no interior crossing
    for (int iter = 0; iter < 64 && (hi - lo) > 1e-12; ++iter) {
        double mid = 0.5 * (lo + hi);
        if (angle_gap(mid) <= 0.0)
            lo = mid;
        else
            hi = mid;
    }

    SpecularSolution sol =
        solution_at(tx_pos_km, rx_pos_km,
                    arc_point(t_hat, r_hat, gamma, 0.5 * (lo + hi)));
    // Grazing or blocked: either ray at/below the local horizon.
    const double max_angle = kPi / 2.0 - 1e-9;
    if (sol.incidence_angle_rad >= max_angle ||
        sol.reflection_angle_rad >= max_angle)
        return std::nullopt;
    return sol;
}

SpecularSolution specular_point(const Vec3& tx_pos_km, const Vec3& rx_pos_km) {
    auto sol = try_specular_point(tx_pos_km, rx_pos_km);
    if (!sol)
        throw NoSpecularError("no visible specular reflection for this "
                              "transmitter/receiver geometry");
    return *sol;
}

} // namespace fireplan

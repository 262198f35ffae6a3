#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fireplan/geometry.hpp"

namespace fireplan {

struct Satellite {
    std::string id;
    OrbitElements orbit;
    int buffer_capacity = 60; // images
    int initial_stored = 0;   // images already onboard at t=0
    double battery_capacity_j = 8.0e6;
    double battery_min_j = 4.0e5;
    double battery_initial_j = 2.0e6;
    double power_generation_w = 60.0; // sunlit only
    double power_base_w = 10.0;
    double power_observe_w = 15.0;  // additional while collecting
    double power_downlink_w = 20.0; // additional while downlinking

    bool operator==(const Satellite&) const = default;
};

struct GroundStation {
    std::string id;
    GroundSite site;

    bool operator==(const GroundStation&) const = default;
};

enum class TargetKind { active_fire, pre_fire };

struct Target {
    std::string id;
    TargetKind kind = TargetKind::pre_fire;
    double reward = 0.0;  // priority in [0, 1]
    GroundSite location;  // min_elevation unused
    double capture_radius_km = 25.0;

    bool operator==(const Target&) const = default;
};

// GNSS-style signal source; reflections off these are what the receivers
// observe.
struct Transmitter {
    std::string id;
    OrbitElements orbit;

    bool operator==(const Transmitter&) const = default;
};

struct Scenario {
    std::vector<Satellite> satellites;
    std::vector<GroundStation> ground_stations;
    std::vector<Target> targets;
    std::vector<Transmitter> transmitters;
    int horizon_s = 86400;
    double active_weight = 10.0; // objective weight on active-fire targets
    Vec3 sun_direction{1.0, 0.0, 0.0};
    uint64_t seed = 0;
    double earth_rotation_offset_rad = 0.0;
    int downlink_slot_s = 20; // seconds to downlink one image

    bool operator==(const Scenario&) const = default;

    int num_active() const;
    int num_prefire() const;
};

inline bool operator==(const OrbitElements& a, const OrbitElements& b) {
    return a.semi_major_axis_km == b.semi_major_axis_km &&
           a.inclination_rad == b.inclination_rad && a.raan_rad == b.raan_rad &&
           a.arg_latitude_epoch_rad == b.arg_latitude_epoch_rad &&
           a.epoch_s == b.epoch_s;
}
inline bool operator==(const GroundSite& a, const GroundSite& b) {
    return a.latitude_rad == b.latitude_rad &&
           a.longitude_rad == b.longitude_rad &&
           a.min_elevation_rad == b.min_elevation_rad;
}
inline bool operator==(const Vec3& a, const Vec3& b) {
    return a.x == b.x && a.y == b.y && a.z == b.z;
}

// Throws ValidationError naming the offending field.
void validate_scenario(const Scenario& s);

// Parse and validate a scenario document (schema_version 1). Angles are
// degrees in the file, radians in memory.
Scenario load_scenario(const std::string& json_text);

// Canonical full-form document; load_scenario(serialize_scenario(s)) == s
// for generated scenarios.
std::string serialize_scenario(const Scenario& s);

// The default signal-source constellation: 24 transmitters, 6 planes,
// 26560 km semi-major axis, 55 deg inclination.
std::vector<Transmitter> default_transmitters();

struct GeneratorSpec {
    int num_satellites = 7;
    int num_ground_stations = 2;
    int num_active = 10;
    int num_prefire = 100;
    int horizon_s = 86400;
    double altitude_km = 500.0;
    double min_inclination_deg = 20.0;
    double max_inclination_deg = 35.0; // receivers fly low-inclination orbits
    double target_max_latitude_deg = 35.0;
    int buffer_capacity = 60;
    int initial_stored = 0;
    double battery_capacity_j = 8.0e6;
    double battery_min_j = 4.0e5;
    double battery_initial_j = 2.0e6;
    double power_generation_w = 60.0;
    double power_base_w = 10.0;
    double power_observe_w = 15.0;
    double power_downlink_w = 20.0;
    double capture_radius_km = 25.0;
    double active_weight = 10.0;
};

// Deterministic synthetic scenario: equal (spec, seed) give byte-identical
// serialized output.
Scenario generate_synthetic(const GeneratorSpec& spec, uint64_t seed);

} // namespace fireplan

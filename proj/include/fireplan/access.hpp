#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fireplan/scenario.hpp"

namespace fireplan {

// One second of one satellite's access state.
struct AccessRecord {
    std::vector<int32_t> targets; // observable target indices, sorted
    int16_t gs = -1;              // ground-station index in contact, -1 none
    bool eclipsed = false;
};

struct SatelliteAccess {
    std::string satellite_id;
    int sat_index = -1; // index into Scenario::satellites
    std::vector<AccessRecord> seconds;
};

// Per-second access flags for every satellite, ordered by satellite id.
struct AccessTimeline {
    int step_s = 1;
    int horizon_s = 0;
    std::vector<SatelliteAccess> satellites;
    std::string scenario_digest; // provenance; empty for synthetic timelines
};

inline constexpr int kMaxScanHorizonS = 7 * 86400;

// Full geometric scan: observation opportunities (specular point within a
// target's capture radius), ground-station contacts (highest station above
// its minimum elevation), eclipse flags. Deterministic for fixed inputs.
AccessTimeline access_scan(const Scenario& s, int step_s = 1);

std::string access_to_csv(const AccessTimeline& tl, const Scenario& s);
AccessTimeline access_from_csv(const std::string& csv, const Scenario& s);

// Compact JSON form (non-empty seconds only).
std::string access_to_json(const AccessTimeline& tl, const Scenario& s);
AccessTimeline access_from_json(const std::string& text, const Scenario& s);

// Shape of a synthetic timeline: observation windows on a sub-multiple of
// orbits, one ground-station pass cadence, fractional eclipse per orbit.
struct SyntheticAccessShape {
    double orbit_period_s = 5700.0;
    double obs_every_n_orbits = 2.3; // observation window cadence
    int obs_offset_s = 600;
    int obs_length_s = 120;
    double obs_density = 0.5; // per-second opportunity probability
    int min_targets_per_image = 1;
    int max_targets_per_image = 3;
    double contact_every_n_orbits = 1.0; // ground-station pass cadence
    int contact_offset_s = 3000;
    int contact_length_s = 600;
    double eclipse_fraction = 1.0 / 3.0;
    int eclipse_offset_s = 4000;
    bool stagger_satellites = true; // phase-shift sats apart
    bool cover_all_actives = true;  // inject uncovered actives into images
};

// Deterministic synthetic access flags, bypassing geometry. Target/station
// indices refer to the given scenario.
AccessTimeline generate_synthetic_access(const Scenario& s,
                                         const SyntheticAccessShape& shape,
                                         uint64_t seed);

} // namespace fireplan

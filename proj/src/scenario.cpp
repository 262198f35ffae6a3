#include "fireplan/scenario.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "json.hpp"

#include "fireplan/util.hpp"

namespace fireplan {

using nlohmann::json;

int Scenario::num_active() const {
    int n = 0;
    for (const auto& t : targets)
        if (t.kind == TargetKind::active_fire)
            ++n;
    return n;
}

int Scenario::num_prefire() const {
    return int(targets.size()) - num_active();
}

namespace {

// Angle values pass through deg<->rad conversion on every save/load. Snap to
// a conversion fixpoint so serialized scenarios round-trip exactly.
double snap_angle_rad(double r) {
    for (int i = 0; i < 16; ++i) {
        double r2 = deg2rad(rad2deg(r));
        if (r2 == r)
            return r;
        r = r2;
    }
    return r;
}

void check(bool ok, const std::string& field, const std::string& why) {
    if (!ok)
        throw ValidationError(field + ": " + why);
}

void check_unique_ids(const std::set<std::string>& seen, const std::string& id,
                      const std::string& field) {
    if (seen.count(id))
        throw ValidationError(field + ": duplicate id \"" + id + "\"");
}

void validate_site(const GroundSite& g, const std::string& path,
                   bool elevation_matters) {
    check(std::isfinite(g.latitude_rad) &&
              std::fabs(g.latitude_rad) <= kPi / 2.0 + 1e-12,
          path + ".latitude_deg", "must lie in [-90, 90]");
    check(std::isfinite(g.longitude_rad), path + ".longitude_deg",
          "must be finite");
    if (elevation_matters)
        check(g.min_elevation_rad >= 0.0 && g.min_elevation_rad < kPi / 2.0,
              path + ".min_elevation_deg", "must lie in [0, 90)");
}

} // namespace

void validate_scenario(const Scenario& s) {
    check(s.horizon_s > 0, "horizon_s", "must be positive");
    check(std::isfinite(s.active_weight) && s.active_weight > 0.0,
          "active_weight", "must be positive");
    check(s.downlink_slot_s > 0, "downlink_slot_s", "must be positive");
    check(s.sun_direction.finite() && s.sun_direction.norm() > 0.0,
          "sun_direction", "must be a nonzero vector");
    check(std::isfinite(s.earth_rotation_offset_rad),
          "earth_rotation_offset_deg", "must be finite");

    std::set<std::string> ids;
    for (size_t i = 0; i < s.satellites.size(); ++i) {
        const auto& sat = s.satellites[i];
        std::string path = "satellites[" + std::to_string(i) + "]";
        check_unique_ids(ids, sat.id, path + ".id");
        ids.insert(sat.id);
        check(!sat.id.empty(), path + ".id", "must be nonempty");
        try {
            validate_elements(sat.orbit);
        } catch (const ValidationError& e) {
            throw ValidationError(path + "." + e.what());
        }
        check(sat.buffer_capacity >= 1, path + ".buffer_capacity",
              "must be >= 1");
        check(sat.initial_stored >= 0 &&
                  sat.initial_stored <= sat.buffer_capacity,
              path + ".initial_stored", "must lie in [0, buffer_capacity]");
        check(sat.battery_min_j > 0.0, path + ".battery_min_j",
              "must be positive");
        check(sat.battery_min_j <= sat.battery_initial_j &&
                  sat.battery_initial_j <= sat.battery_capacity_j,
              path + ".battery_initial_j",
              "requires battery_min <= battery_initial <= battery_capacity");
        for (auto [v, name] : {std::pair{sat.power_generation_w, ".power_generation_w"},
                               {sat.power_base_w, ".power_base_w"},
                               {sat.power_observe_w, ".power_observe_w"},
                               {sat.power_downlink_w, ".power_downlink_w"}})
            check(std::isfinite(v) && v >= 0.0, path + name, "must be >= 0");
    }

    ids.clear();
    for (size_t i = 0; i < s.ground_stations.size(); ++i) {
        const auto& gs = s.ground_stations[i];
        std::string path = "ground_stations[" + std::to_string(i) + "]";
        check_unique_ids(ids, gs.id, path + ".id");
        ids.insert(gs.id);
        check(!gs.id.empty(), path + ".id", "must be nonempty");
        validate_site(gs.site, path, true);
    }

    ids.clear();
    for (size_t i = 0; i < s.targets.size(); ++i) {
        const auto& t = s.targets[i];
        std::string path = "targets[" + std::to_string(i) + "]";
        check_unique_ids(ids, t.id, path + ".id");
        ids.insert(t.id);
        check(!t.id.empty(), path + ".id", "must be nonempty");
        check(std::isfinite(t.reward) && t.reward >= 0.0 && t.reward <= 1.0,
              path + ".reward", "must lie in [0, 1]");
        check(std::isfinite(t.capture_radius_km) && t.capture_radius_km > 0.0,
              path + ".capture_radius_km", "must be positive");
        validate_site(t.location, path, false);
    }

    ids.clear();
    for (size_t i = 0; i < s.transmitters.size(); ++i) {
        const auto& tx = s.transmitters[i];
        std::string path = "transmitters[" + std::to_string(i) + "]";
        check_unique_ids(ids, tx.id, path + ".id");
        ids.insert(tx.id);
        try {
            validate_elements(tx.orbit);
        } catch (const ValidationError& e) {
            throw ValidationError(path + "." + e.what());
        }
    }
}

namespace {

OrbitElements orbit_from_json(const json& j, const std::string& path) {
    OrbitElements el;
    try {
        el.semi_major_axis_km = j.at("semi_major_axis_km").get<double>();
        el.inclination_rad = snap_angle_rad(deg2rad(j.at("inclination_deg").get<double>()));
        el.raan_rad = snap_angle_rad(deg2rad(j.at("raan_deg").get<double>()));
        el.arg_latitude_epoch_rad =
            snap_angle_rad(deg2rad(j.at("arg_latitude_deg").get<double>()));
        el.epoch_s = j.value("epoch_s", 0.0);
    } catch (const json::exception& e) {
        throw ValidationError(path + ": " + e.what());
    }
    return el;
}

json orbit_to_json(const OrbitElements& el) {
    return json{{"semi_major_axis_km", el.semi_major_axis_km},
                {"inclination_deg", rad2deg(el.inclination_rad)},
                {"raan_deg", rad2deg(el.raan_rad)},
                {"arg_latitude_deg", rad2deg(el.arg_latitude_epoch_rad)},
                {"epoch_s", el.epoch_s}};
}

} // namespace

Scenario load_scenario(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("scenario parse error: ") + e.what());
    }

    Scenario s;
    try {
        int version = j.value("schema_version", 1);
        if (version != 1)
            throw ValidationError("schema_version: unsupported version " +
                                  std::to_string(version));
        s.horizon_s = j.value("horizon_s", 86400);
        s.active_weight = j.value("active_weight", 10.0);
        s.seed = j.value("seed", uint64_t(0));
        s.downlink_slot_s = j.value("downlink_slot_s", 20);
        s.earth_rotation_offset_rad =
            snap_angle_rad(deg2rad(j.value("earth_rotation_offset_deg", 0.0)));
        if (j.contains("sun_direction")) {
            auto v = j.at("sun_direction");
            if (!v.is_array() || v.size() != 3)
                throw ValidationError("sun_direction: expected [x, y, z]");
            s.sun_direction = {v[0].get<double>(), v[1].get<double>(),
                               v[2].get<double>()};
        }

        for (size_t i = 0; i < j.value("satellites", json::array()).size(); ++i) {
            const auto& sj = j["satellites"][i];
            std::string path = "satellites[" + std::to_string(i) + "]";
            Satellite sat;
            sat.id = sj.at("id").get<std::string>();
            sat.orbit = orbit_from_json(sj.at("orbit"), path + ".orbit");
            sat.buffer_capacity = sj.value("buffer_capacity", 60);
            sat.initial_stored = sj.value("initial_stored", 0);
            sat.battery_capacity_j = sj.at("battery_capacity_j").get<double>();
            sat.battery_min_j = sj.at("battery_min_j").get<double>();
            sat.battery_initial_j = sj.at("battery_initial_j").get<double>();
            sat.power_generation_w = sj.at("power_generation_w").get<double>();
            sat.power_base_w = sj.at("power_base_w").get<double>();
            sat.power_observe_w = sj.at("power_observe_w").get<double>();
            sat.power_downlink_w = sj.at("power_downlink_w").get<double>();
            s.satellites.push_back(std::move(sat));
        }

        for (size_t i = 0; i < j.value("ground_stations", json::array()).size();
             ++i) {
            const auto& gj = j["ground_stations"][i];
            GroundStation gs;
            gs.id = gj.at("id").get<std::string>();
            gs.site.latitude_rad =
                snap_angle_rad(deg2rad(gj.at("latitude_deg").get<double>()));
            gs.site.longitude_rad =
                snap_angle_rad(deg2rad(gj.at("longitude_deg").get<double>()));
            gs.site.min_elevation_rad =
                snap_angle_rad(deg2rad(gj.value("min_elevation_deg", 5.0)));
            s.ground_stations.push_back(std::move(gs));
        }

        for (size_t i = 0; i < j.value("targets", json::array()).size(); ++i) {
            const auto& tj = j["targets"][i];
            std::string path = "targets[" + std::to_string(i) + "]";
            Target t;
            t.id = tj.at("id").get<std::string>();
            std::string kind = tj.at("kind").get<std::string>();
            if (kind == "active_fire")
                t.kind = TargetKind::active_fire;
            else if (kind == "pre_fire")
                t.kind = TargetKind::pre_fire;
            else
                throw ValidationError(path + ".kind: expected \"active_fire\" "
                                             "or \"pre_fire\"");
            t.reward = tj.at("reward").get<double>();
            t.location.latitude_rad =
                snap_angle_rad(deg2rad(tj.at("latitude_deg").get<double>()));
            t.location.longitude_rad =
                snap_angle_rad(deg2rad(tj.at("longitude_deg").get<double>()));
            t.capture_radius_km = tj.value("capture_radius_km", 25.0);
            s.targets.push_back(std::move(t));
        }

        if (j.contains("transmitters")) {
            for (size_t i = 0; i < j["transmitters"].size(); ++i) {
                const auto& xj = j["transmitters"][i];
                std::string path = "transmitters[" + std::to_string(i) + "]";
                Transmitter tx;
                tx.id = xj.at("id").get<std::string>();
                tx.orbit = orbit_from_json(xj.at("orbit"), path + ".orbit");
                s.transmitters.push_back(std::move(tx));
            }
        } else {
            s.transmitters = default_transmitters();
        }
    } catch (const json::exception& e) {
        throw ValidationError(std::string("scenario: ") + e.what());
    }

    validate_scenario(s);
    return s;
}

std::string serialize_scenario(const Scenario& s) {
    json j;
    j["schema_version"] = 1;
    j["horizon_s"] = s.horizon_s;
    j["active_weight"] = s.active_weight;
    j["seed"] = s.seed;
    j["downlink_slot_s"] = s.downlink_slot_s;
    j["earth_rotation_offset_deg"] = rad2deg(s.earth_rotation_offset_rad);
    j["sun_direction"] = {s.sun_direction.x, s.sun_direction.y,
                          s.sun_direction.z};

    j["satellites"] = json::array();
    for (const auto& sat : s.satellites) {
        j["satellites"].push_back(
            {{"id", sat.id},
             {"orbit", orbit_to_json(sat.orbit)},
             {"buffer_capacity", sat.buffer_capacity},
             {"initial_stored", sat.initial_stored},
             {"battery_capacity_j", sat.battery_capacity_j},
             {"battery_min_j", sat.battery_min_j},
             {"battery_initial_j", sat.battery_initial_j},
             {"power_generation_w", sat.power_generation_w},
             {"power_base_w", sat.power_base_w},
             {"power_observe_w", sat.power_observe_w},
             {"power_downlink_w", sat.power_downlink_w}});
    }

    j["ground_stations"] = json::array();
    for (const auto& gs : s.ground_stations) {
        j["ground_stations"].push_back(
            {{"id", gs.id},
             {"latitude_deg", rad2deg(gs.site.latitude_rad)},
             {"longitude_deg", rad2deg(gs.site.longitude_rad)},
             {"min_elevation_deg", rad2deg(gs.site.min_elevation_rad)}});
    }

    j["targets"] = json::array();
    for (const auto& t : s.targets) {
        j["targets"].push_back(
            {{"id", t.id},
             {"kind", t.kind == TargetKind::active_fire ? "active_fire"
                                                        : "pre_fire"},
             {"reward", t.reward},
             {"latitude_deg", rad2deg(t.location.latitude_rad)},
             {"longitude_deg", rad2deg(t.location.longitude_rad)},
             {"capture_radius_km", t.capture_radius_km}});
    }

    j["transmitters"] = json::array();
    for (const auto& tx : s.transmitters)
        j["transmitters"].push_back(
            {{"id", tx.id}, {"orbit", orbit_to_json(tx.orbit)}});

    return j.dump(2) + "\n";
}

std::vector<Transmitter> default_transmitters() {
    std::vector<Transmitter> out;
    const int planes = 6, per_plane = 4;
    for (int p = 0; p < planes; ++p) {
        for (int k = 0; k < per_plane; ++k) {
            Transmitter tx;
            int n = p * per_plane + k + 1;
            char buf[16];
            std::snprintf(buf, sizeof buf, "gnss-%02d", n);
            tx.id = buf;
            tx.orbit.semi_major_axis_km = 26560.0;
            tx.orbit.inclination_rad = snap_angle_rad(deg2rad(55.0));
            tx.orbit.raan_rad = snap_angle_rad(deg2rad(60.0 * p));
            tx.orbit.arg_latitude_epoch_rad =
                snap_angle_rad(deg2rad(90.0 * k + 15.0 * p));
            out.push_back(std::move(tx));
        }
    }
    return out;
}

Scenario generate_synthetic(const GeneratorSpec& spec, uint64_t seed) {
    if (spec.num_satellites < 0 || spec.num_ground_stations < 0 ||
        spec.num_active < 0 || spec.num_prefire < 0)
        throw ValidationError("generator counts must be >= 0");
    if (spec.horizon_s <= 0)
        throw ValidationError("generator horizon_s must be positive");

    DetRng rng(seed ^ 0xf1e2d3c4b5a69788ull);
    Scenario s;
    s.horizon_s = spec.horizon_s;
    s.active_weight = spec.active_weight;
    s.seed = seed;
    s.sun_direction = {1.0, 0.0, 0.0};

    for (int i = 0; i < spec.num_satellites; ++i) {
        Satellite sat;
        char buf[16];
        std::snprintf(buf, sizeof buf, "sat-%02d", i + 1);
        sat.id = buf;
        sat.orbit.semi_major_axis_km = kEarthRadiusKm + spec.altitude_km;
        sat.orbit.inclination_rad = snap_angle_rad(deg2rad(
            rng.uniform(spec.min_inclination_deg, spec.max_inclination_deg)));
        sat.orbit.raan_rad = snap_angle_rad(
            deg2rad(360.0 * i / std::max(1, spec.num_satellites)));
        sat.orbit.arg_latitude_epoch_rad = snap_angle_rad(
            deg2rad(rng.uniform(0.0, 360.0)));
        sat.buffer_capacity = spec.buffer_capacity;
        sat.initial_stored = spec.initial_stored;
        sat.battery_capacity_j = spec.battery_capacity_j;
        sat.battery_min_j = spec.battery_min_j;
        sat.battery_initial_j = spec.battery_initial_j;
        sat.power_generation_w = spec.power_generation_w;
        sat.power_base_w = spec.power_base_w;
        sat.power_observe_w = spec.power_observe_w;
        sat.power_downlink_w = spec.power_downlink_w;
        s.satellites.push_back(std::move(sat));
    }

    for (int i = 0; i < spec.num_ground_stations; ++i) {
        GroundStation gs;
        char buf[16];
        std::snprintf(buf, sizeof buf, "gs-%02d", i + 1);
        gs.id = buf;
        gs.site.latitude_rad =
            snap_angle_rad(deg2rad(rng.uniform(-40.0, 40.0)));
        gs.site.longitude_rad = snap_angle_rad(deg2rad(
            360.0 * i / std::max(1, spec.num_ground_stations) - 180.0 +
            rng.uniform(-10.0, 10.0)));
        gs.site.min_elevation_rad = snap_angle_rad(deg2rad(5.0));
        s.ground_stations.push_back(std::move(gs));
    }

    int total = spec.num_active + spec.num_prefire;
    for (int i = 0; i < total; ++i) {
        Target t;
        bool active = i < spec.num_active;
        char buf[24];
        std::snprintf(buf, sizeof buf, active ? "af-%05d" : "pf-%05d",
                      active ? i + 1 : i - spec.num_active + 1);
        t.id = buf;
        t.kind = active ? TargetKind::active_fire : TargetKind::pre_fire;
        t.reward = rng.uniform();
        t.location.latitude_rad = snap_angle_rad(deg2rad(rng.uniform(
            -spec.target_max_latitude_deg, spec.target_max_latitude_deg)));
        t.location.longitude_rad =
            snap_angle_rad(deg2rad(rng.uniform(-180.0, 180.0)));
        t.capture_radius_km = spec.capture_radius_km;
        s.targets.push_back(std::move(t));
    }

    s.transmitters = default_transmitters();
    validate_scenario(s);
    return s;
}

} // namespace fireplan

#include "fireplan/access.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

#include "fireplan/util.hpp"

namespace fireplan {

using nlohmann::json;

namespace {

// Lat/lon bucket grid over the fixed (Earth-rotating) target set. Query
// returns candidates near a surface point; exact capture checks follow.
class TargetGrid {
public:
    TargetGrid(const Scenario& s) {
        max_radius_rad_ = 0.0;
        for (const auto& t : s.targets)
            max_radius_rad_ =
                std::max(max_radius_rad_, t.capture_radius_km / kEarthRadiusKm);
        cell_rad_ = std::max(max_radius_rad_, 1e-3);
        lat_bins_ = std::max(1, int(kPi / cell_rad_));
        lon_bins_ = std::max(1, int(2.0 * kPi / cell_rad_));
        for (size_t i = 0; i < s.targets.size(); ++i) {
            const auto& loc = s.targets[i].location;
            cells_[key(lat_bin(loc.latitude_rad), lon_bin(loc.longitude_rad))]
                .push_back(int32_t(i));
            units_.push_back(unit_of(loc.latitude_rad, loc.longitude_rad));
        }
    }

    bool empty() const { return cells_.empty(); }

    // Candidate target indices within max capture radius of (lat, lon).
    void query(double lat, double lon, std::vector<int32_t>& out) const {
        out.clear();
        if (cells_.empty())
            return;
        int lat_lo = lat_bin(lat - max_radius_rad_);
        int lat_hi = lat_bin(lat + max_radius_rad_);
        double cos_lat = std::max(0.05, std::cos(lat));
        double lon_span = max_radius_rad_ / cos_lat;
        int steps = std::min(lon_bins_ / 2,
                             int(lon_span / (2.0 * kPi / lon_bins_)) + 1);
        int lon_center = lon_bin(lon);
        for (int lb = lat_lo; lb <= lat_hi; ++lb) {
            for (int d = -steps; d <= steps; ++d) {
                int cb = ((lon_center + d) % lon_bins_ + lon_bins_) % lon_bins_;
                auto it = cells_.find(key(lb, cb));
                if (it == cells_.end())
                    continue;
                out.insert(out.end(), it->second.begin(), it->second.end());
            }
        }
    }

    const Vec3& unit(int32_t target) const { return units_[target]; }

private:
    static Vec3 unit_of(double lat, double lon) {
        double cl = std::cos(lat);
        return {cl * std::cos(lon), cl * std::sin(lon), std::sin(lat)};
    }
    int lat_bin(double lat) const {
        int b = int((lat + kPi / 2.0) / kPi * lat_bins_);
        return std::clamp(b, 0, lat_bins_ - 1);
    }
    int lon_bin(double lon) const {
        double w = std::fmod(lon + kPi, 2.0 * kPi);
        if (w < 0)
            w += 2.0 * kPi;
        int b = int(w / (2.0 * kPi) * lon_bins_);
        return std::clamp(b, 0, lon_bins_ - 1);
    }
    static int64_t key(int lat_b, int lon_b) {
        return int64_t(lat_b) * 1000000 + lon_b;
    }

    double max_radius_rad_ = 0.0;
    double cell_rad_ = 0.0;
    int lat_bins_ = 1, lon_bins_ = 1;
    std::unordered_map<int64_t, std::vector<int32_t>> cells_;
    std::vector<Vec3> units_;
};

void sort_by_id(AccessTimeline& tl) {
    std::sort(tl.satellites.begin(), tl.satellites.end(),
              [](const SatelliteAccess& a, const SatelliteAccess& b) {
                  return a.satellite_id < b.satellite_id;
              });
}

} // namespace

AccessTimeline access_scan(const Scenario& s, int step_s) {
    validate_scenario(s);
    if (step_s < 1)
        throw ValidationError("step_s must be >= 1");
    if (s.horizon_s > kMaxScanHorizonS)
        throw ResourceGuardError(
            "horizon_s exceeds the scan cap of " +
            std::to_string(kMaxScanHorizonS) + " s");

    AccessTimeline tl;
    tl.step_s = step_s;
    tl.horizon_s = s.horizon_s;

    const int n_seconds = (s.horizon_s + step_s - 1) / step_s;
    const Vec3 sun = s.sun_direction.normalized();
    TargetGrid grid(s);

    // Transmitter states are shared across satellites; precompute per step.
    std::vector<std::vector<Vec3>> tx_pos(n_seconds);
    for (int k = 0; k < n_seconds; ++k) {
        double t = double(k) * step_s;
        tx_pos[k].reserve(s.transmitters.size());
        for (const auto& tx : s.transmitters)
            tx_pos[k].push_back(propagate_circular(tx.orbit, t).position_km);
    }

    std::vector<int32_t> candidates;
    for (size_t si = 0; si < s.satellites.size(); ++si) {
        const auto& sat = s.satellites[si];
        SatelliteAccess sa;
        sa.satellite_id = sat.id;
        sa.sat_index = int(si);
        sa.seconds.resize(n_seconds);

        for (int k = 0; k < n_seconds; ++k) {
            double t = double(k) * step_s;
            Vec3 pos = propagate_circular(sat.orbit, t).position_km;
            AccessRecord& rec = sa.seconds[k];
            rec.eclipsed = is_eclipsed(pos, sun);

            double best_elev = -1.0;
            for (size_t g = 0; g < s.ground_stations.size(); ++g) {
                const auto& site = s.ground_stations[g].site;
                double elev = elevation_angle(site, pos, t,
                                              s.earth_rotation_offset_rad);
                if (elev >= site.min_elevation_rad && elev > best_elev) {
                    best_elev = elev;
                    rec.gs = int16_t(g);
                }
            }

            if (grid.empty())
                continue;
            double theta = s.earth_rotation_offset_rad + kEarthRotationRadS * t;
            double ct = std::cos(theta), st = std::sin(theta);
            for (const Vec3& tx : tx_pos[k]) {
                auto spec = try_specular_point(tx, pos);
                if (!spec)
                    continue;
                // Rotate the inertial surface point into the Earth-fixed frame.
                Vec3 p = spec->point_km / kEarthRadiusKm;
                Vec3 fixed{p.x * ct + p.y * st, -p.x * st + p.y * ct, p.z};
                double lat = std::asin(std::clamp(fixed.z, -1.0, 1.0));
                double lon = std::atan2(fixed.y, fixed.x);
                grid.query(lat, lon, candidates);
                for (int32_t ti : candidates) {
                    double ang = angle_between(fixed, grid.unit(ti));
                    if (ang * kEarthRadiusKm <=
                        s.targets[ti].capture_radius_km)
                        rec.targets.push_back(ti);
                }
            }
            std::sort(rec.targets.begin(), rec.targets.end());
            rec.targets.erase(
                std::unique(rec.targets.begin(), rec.targets.end()),
                rec.targets.end());
        }
        tl.satellites.push_back(std::move(sa));
    }

    sort_by_id(tl);
    return tl;
}

AccessTimeline generate_synthetic_access(const Scenario& s,
                                         const SyntheticAccessShape& shape,
                                         uint64_t seed) {
    validate_scenario(s);
    if (shape.orbit_period_s <= 0 || shape.obs_every_n_orbits < 1.0 ||
        shape.contact_every_n_orbits < 1.0 || shape.obs_density < 0.0 ||
        shape.obs_density > 1.0)
        throw ValidationError("synthetic access shape parameters out of range");
    if (shape.min_targets_per_image < 1 ||
        shape.max_targets_per_image < shape.min_targets_per_image)
        throw ValidationError("targets_per_image range invalid");

    AccessTimeline tl;
    tl.step_s = 1;
    tl.horizon_s = s.horizon_s;

    const int n_targets = int(s.targets.size());
    const int n_gs = int(s.ground_stations.size());
    const double period = shape.orbit_period_s;

    auto cadence_hit = [](long orbit, double every_n) {
        return long(double(orbit + 1) / every_n) > long(double(orbit) / every_n);
    };

    for (size_t si = 0; si < s.satellites.size(); ++si) {
        DetRng rng(seed * 0x9e3779b97f4a7c15ull + si + 1);
        SatelliteAccess sa;
        sa.satellite_id = s.satellites[si].id;
        sa.sat_index = int(si);
        sa.seconds.resize(s.horizon_s);

        double phase = shape.stagger_satellites
                           ? period * double(si) /
                                 double(std::max<size_t>(1, s.satellites.size()))
                           : 0.0;
        long contact_count = 0;
        long last_contact_orbit = -1;

        for (int t = 0; t < s.horizon_s; ++t) {
            double shifted = t + phase;
            long orbit = long(shifted / period);
            double tau = shifted - double(orbit) * period;
            AccessRecord& rec = sa.seconds[t];

            double ecl_end = shape.eclipse_offset_s +
                             shape.eclipse_fraction * period;
            if (tau >= shape.eclipse_offset_s && tau < ecl_end)
                rec.eclipsed = true;
            else if (ecl_end > period && tau < ecl_end - period)
                rec.eclipsed = true; // eclipse window wraps the orbit boundary

            if (n_targets > 0 && cadence_hit(orbit, shape.obs_every_n_orbits) &&
                tau >= shape.obs_offset_s &&
                tau < shape.obs_offset_s + shape.obs_length_s &&
                rng.uniform() < shape.obs_density) {
                int k = rng.uniform_int(shape.min_targets_per_image,
                                        shape.max_targets_per_image);
                for (int i = 0; i < k; ++i)
                    rec.targets.push_back(rng.uniform_int(0, n_targets - 1));
                std::sort(rec.targets.begin(), rec.targets.end());
                rec.targets.erase(
                    std::unique(rec.targets.begin(), rec.targets.end()),
                    rec.targets.end());
            }

            if (n_gs > 0 && cadence_hit(orbit, shape.contact_every_n_orbits) &&
                tau >= shape.contact_offset_s &&
                tau < shape.contact_offset_s + shape.contact_length_s) {
                if (orbit != last_contact_orbit) {
                    last_contact_orbit = orbit;
                    ++contact_count;
                }
                rec.gs = int16_t((contact_count - 1) % n_gs);
            }
        }
        tl.satellites.push_back(std::move(sa));
    }

    if (shape.cover_all_actives && n_targets > 0) {
        std::vector<bool> covered(n_targets, false);
        std::vector<std::pair<int, int>> opp; // (timeline sat slot, t)
        for (size_t k = 0; k < tl.satellites.size(); ++k)
            for (int t = 0; t < s.horizon_s; ++t)
                if (!tl.satellites[k].seconds[t].targets.empty()) {
                    opp.emplace_back(int(k), t);
                    for (int32_t ti : tl.satellites[k].seconds[t].targets)
                        covered[ti] = true;
                }
        if (!opp.empty()) {
            size_t cursor = 0;
            for (int ti = 0; ti < n_targets; ++ti) {
                if (s.targets[ti].kind != TargetKind::active_fire ||
                    covered[ti])
                    continue;
                auto [k, t] = opp[cursor++ % opp.size()];
                auto& list = tl.satellites[k].seconds[t].targets;
                list.push_back(ti);
                std::sort(list.begin(), list.end());
            }
        }
    }

    sort_by_id(tl);
    return tl;
}

// ---------------------------------------------------------------------------
// Serialization

std::string access_to_csv(const AccessTimeline& tl, const Scenario& s) {
    std::ostringstream out;
    out << "# fireplan-access v1 scenario=" << tl.scenario_digest << " step="
        << tl.step_s << " horizon=" << tl.horizon_s << "\n";
    out << "satellite_id,t,obs_target_ids,gs_id,eclipsed\n";
    for (const auto& sa : tl.satellites) {
        for (size_t k = 0; k < sa.seconds.size(); ++k) {
            const auto& rec = sa.seconds[k];
            out << sa.satellite_id << ',' << k * tl.step_s << ',';
            for (size_t i = 0; i < rec.targets.size(); ++i) {
                if (i)
                    out << ';';
                out << s.targets[rec.targets[i]].id;
            }
            out << ',';
            if (rec.gs >= 0)
                out << s.ground_stations[rec.gs].id;
            out << ',' << (rec.eclipsed ? '1' : '0') << '\n';
        }
    }
    return out.str();
}

AccessTimeline access_from_csv(const std::string& csv, const Scenario& s) {
    std::unordered_map<std::string, int> target_index, gs_index, sat_index;
    for (size_t i = 0; i < s.targets.size(); ++i)
        target_index[s.targets[i].id] = int(i);
    for (size_t i = 0; i < s.ground_stations.size(); ++i)
        gs_index[s.ground_stations[i].id] = int(i);
    for (size_t i = 0; i < s.satellites.size(); ++i)
        sat_index[s.satellites[i].id] = int(i);

    AccessTimeline tl;
    tl.step_s = 1;
    tl.horizon_s = s.horizon_s;
    std::map<std::string, SatelliteAccess> sats;

    std::istringstream in(csv);
    std::string line;
    bool header_seen = false;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        if (line[0] == '#') {
            auto pos = line.find("scenario=");
            if (pos != std::string::npos) {
                auto end = line.find(' ', pos);
                tl.scenario_digest =
                    line.substr(pos + 9, end == std::string::npos
                                             ? std::string::npos
                                             : end - pos - 9);
            }
            pos = line.find("step=");
            if (pos != std::string::npos)
                tl.step_s = std::atoi(line.c_str() + pos + 5);
            pos = line.find("horizon=");
            if (pos != std::string::npos)
                tl.horizon_s = std::atoi(line.c_str() + pos + 8);
            continue;
        }
        if (!header_seen) {
            if (line.rfind("satellite_id,", 0) != 0)
                throw ValidationError("access csv: missing header row");
            header_seen = true;
            continue;
        }

        std::array<std::string, 5> cols;
        size_t start = 0;
        for (int c = 0; c < 5; ++c) {
            size_t comma = line.find(',', start);
            if (comma == std::string::npos && c < 4)
                throw ValidationError("access csv line " +
                                      std::to_string(line_no) +
                                      ": expected 5 columns");
            cols[c] = line.substr(start, comma == std::string::npos
                                             ? std::string::npos
                                             : comma - start);
            start = comma + 1;
        }

        auto sit = sat_index.find(cols[0]);
        if (sit == sat_index.end())
            throw ValidationError("access csv line " + std::to_string(line_no) +
                                  ": unknown satellite id \"" + cols[0] + "\"");
        int t = std::atoi(cols[1].c_str());
        auto& sa = sats[cols[0]];
        if (sa.seconds.empty()) {
            sa.satellite_id = cols[0];
            sa.sat_index = sit->second;
            sa.seconds.resize((tl.horizon_s + tl.step_s - 1) / tl.step_s);
        }
        int slot = t / tl.step_s;
        if (slot < 0 || slot >= int(sa.seconds.size()))
            throw ValidationError("access csv line " + std::to_string(line_no) +
                                  ": t outside horizon");
        AccessRecord& rec = sa.seconds[slot];

        if (!cols[2].empty()) {
            size_t p = 0;
            while (p <= cols[2].size()) {
                size_t semi = cols[2].find(';', p);
                std::string id = cols[2].substr(
                    p, semi == std::string::npos ? std::string::npos : semi - p);
                auto it = target_index.find(id);
                if (it == target_index.end())
                    throw ValidationError("access csv line " +
                                          std::to_string(line_no) +
                                          ": unknown target id \"" + id + "\"");
                rec.targets.push_back(it->second);
                if (semi == std::string::npos)
                    break;
                p = semi + 1;
            }
            std::sort(rec.targets.begin(), rec.targets.end());
        }
        if (!cols[3].empty()) {
            auto it = gs_index.find(cols[3]);
            if (it == gs_index.end())
                throw ValidationError("access csv line " +
                                      std::to_string(line_no) +
                                      ": unknown ground station id \"" +
                                      cols[3] + "\"");
            rec.gs = int16_t(it->second);
        }
        rec.eclipsed = cols[4] == "1";
    }

    for (auto& [id, sa] : sats)
        tl.satellites.push_back(std::move(sa));
    sort_by_id(tl);
    return tl;
}

std::string access_to_json(const AccessTimeline& tl, const Scenario& s) {
    json j;
    j["schema_version"] = 1;
    j["scenario_digest"] = tl.scenario_digest;
    j["step_s"] = tl.step_s;
    j["horizon_s"] = tl.horizon_s;
    j["satellites"] = json::array();
    for (const auto& sa : tl.satellites) {
        json sj;
        sj["id"] = sa.satellite_id;
        json secs = json::array();
        for (size_t k = 0; k < sa.seconds.size(); ++k) {
            const auto& rec = sa.seconds[k];
            if (rec.targets.empty() && rec.gs < 0 && !rec.eclipsed)
                continue;
            json e;
            e["t"] = k * tl.step_s;
            if (!rec.targets.empty()) {
                json ids = json::array();
                for (int32_t ti : rec.targets)
                    ids.push_back(s.targets[ti].id);
                e["targets"] = ids;
            }
            if (rec.gs >= 0)
                e["gs"] = s.ground_stations[rec.gs].id;
            if (rec.eclipsed)
                e["eclipsed"] = true;
            secs.push_back(std::move(e));
        }
        sj["seconds"] = std::move(secs);
        j["satellites"].push_back(std::move(sj));
    }
    return j.dump() + "\n";
}

AccessTimeline access_from_json(const std::string& text, const Scenario& s) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("access json parse error: ") +
                              e.what());
    }
    std::unordered_map<std::string, int> target_index, gs_index, sat_index;
    for (size_t i = 0; i < s.targets.size(); ++i)
        target_index[s.targets[i].id] = int(i);
    for (size_t i = 0; i < s.ground_stations.size(); ++i)
        gs_index[s.ground_stations[i].id] = int(i);
    for (size_t i = 0; i < s.satellites.size(); ++i)
        sat_index[s.satellites[i].id] = int(i);

    AccessTimeline tl;
    try {
        tl.scenario_digest = j.value("scenario_digest", "");
        tl.step_s = j.value("step_s", 1);
        tl.horizon_s = j.value("horizon_s", s.horizon_s);
        for (const auto& sj : j.at("satellites")) {
            SatelliteAccess sa;
            sa.satellite_id = sj.at("id").get<std::string>();
            auto it = sat_index.find(sa.satellite_id);
            if (it == sat_index.end())
                throw ValidationError("access json: unknown satellite id \"" +
                                      sa.satellite_id + "\"");
            sa.sat_index = it->second;
            sa.seconds.resize((tl.horizon_s + tl.step_s - 1) / tl.step_s);
            for (const auto& e : sj.at("seconds")) {
                int slot = e.at("t").get<int>() / tl.step_s;
                if (slot < 0 || slot >= int(sa.seconds.size()))
                    throw ValidationError("access json: t outside horizon");
                AccessRecord& rec = sa.seconds[slot];
                if (e.contains("targets"))
                    for (const auto& id : e["targets"]) {
                        auto ti = target_index.find(id.get<std::string>());
                        if (ti == target_index.end())
                            throw ValidationError(
                                "access json: unknown target id");
                        rec.targets.push_back(ti->second);
                    }
                std::sort(rec.targets.begin(), rec.targets.end());
                if (e.contains("gs")) {
                    auto gi = gs_index.find(e["gs"].get<std::string>());
                    if (gi == gs_index.end())
                        throw ValidationError(
                            "access json: unknown ground station id");
                    rec.gs = int16_t(gi->second);
                }
                rec.eclipsed = e.value("eclipsed", false);
            }
            tl.satellites.push_back(std::move(sa));
        }
    } catch (const json::exception& e) {
        throw ValidationError(std::string("access json: ") + e.what());
    }
    sort_by_id(tl);
    return tl;
}

} // namespace fireplan

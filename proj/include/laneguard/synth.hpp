#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "laneguard/config.hpp"
#include "laneguard/core.hpp"
#include "laneguard/io.hpp"
#include "laneguard/rng.hpp"

namespace laneguard {

enum class InjectionKind { LaneBlockage, ForeignObject, SustainedCongestion, CameraShift };

inline const char* to_string(InjectionKind k) {
    switch (k) {
        case InjectionKind::LaneBlockage: return "blockage";
        case InjectionKind::ForeignObject: return "foreign_object";
        case InjectionKind::SustainedCongestion: return "congestion";
        case InjectionKind::CameraShift: return "camera_shift";
    }
    return "?";
}

inline InjectionKind injection_kind_from(const std::string& s) {
    if (s == "blockage") return InjectionKind::LaneBlockage;
    if (s == "foreign_object") return InjectionKind::ForeignObject;
    if (s == "congestion") return InjectionKind::SustainedCongestion;
    if (s == "camera_shift") return InjectionKind::CameraShift;
    throw Error("unknown injection kind '" + s + "'");
}

// One planted anomaly. `lanes` lists every lane the ground truth covers; for
// a blockage the first entry is the blocked lane and the rest receive the
// diverted traffic.
struct Injection {
    InjectionKind kind = InjectionKind::LaneBlockage;
    int start_interval = 0;  // index from scenario start
    int duration = 1;        // intervals
    std::vector<int> lanes;  // signed lane ids
    double severity = 1.0;   // (0, 1]
};

struct GroundTruthInterval {
    int lane = 0;
    std::int64_t interval_start = 0;
    InjectionKind kind = InjectionKind::LaneBlockage;
};

// Synthetic highway scenario: Poisson counts on a diurnal rate curve,
// occupancy saturating in count, binomial truck counts, plus a list of
// planted anomalies. All keys live under "scenario." / "injection." in the
// run config file.
struct ScenarioConfig {
    std::string camera = "synthcam";
    int lanes_per_direction = 4;
    double span_hours = 72.0;
    std::int64_t start_epoch = 0;  // midnight-aligned
    double base_rate = 4.0;        // vehicles per 30 s per lane, off-peak
    double morning_peak = 8.0;
    double morning_center = 8.0;
    double morning_width = 2.0;
    double evening_peak = 8.0;
    double evening_center = 17.0;
    double evening_width = 2.5;
    double lane_rate_falloff = 0.12;  // outer lanes carry less traffic
    double truck_fraction = 0.12;
    double truck_lane_skew = 0.5;  // outer lanes haul more trucks
    double occ_a = 0.9;
    double occ_b = 20.0;
    double occ_noise = 0.02;
    std::uint64_t seed = 42;
    int auto_injections = 0;  // generate this many seeded injections
    std::vector<Injection> injections;

    int n_intervals() const {
        return static_cast<int>(span_hours * 3600.0 / kIntervalSeconds);
    }

    std::vector<int> all_lanes() const {
        std::vector<int> lanes;
        for (int l = 1; l <= lanes_per_direction; ++l) lanes.push_back(-l);
        for (int l = 1; l <= lanes_per_direction; ++l) lanes.push_back(l);
        std::sort(lanes.begin(), lanes.end());
        return lanes;
    }

    std::vector<int> direction_lanes(int dir) const {
        std::vector<int> lanes;
        for (int l = 1; l <= lanes_per_direction; ++l) lanes.push_back(dir < 0 ? -l : l);
        std::sort(lanes.begin(), lanes.end());
        return lanes;
    }

    double rate(double hour, int lane) const {
        const double am = morning_peak * std::exp(-0.5 * (hour - morning_center) *
                                                  (hour - morning_center) /
                                                  (morning_width * morning_width));
        const double pm = evening_peak * std::exp(-0.5 * (hour - evening_center) *
                                                  (hour - evening_center) /
                                                  (evening_width * evening_width));
        const double lane_mult =
            std::max(0.1, 1.0 - lane_rate_falloff * static_cast<double>(std::abs(lane) - 1));
        return std::max(0.0, (base_rate + am + pm) * lane_mult);
    }

    double lane_truck_fraction(int lane) const {
        return std::min(0.9, truck_fraction *
                                 (1.0 + truck_lane_skew * static_cast<double>(std::abs(lane) - 1)));
    }

    double occupancy_model(int count) const {
        return occ_a * static_cast<double>(count) / (static_cast<double>(count) + occ_b);
    }

    static ScenarioConfig from_kv(const KeyValueFile& kv, std::uint64_t default_seed) {
        ScenarioConfig c;
        c.seed = default_seed;
        c.camera = kv.get_string("scenario.camera", c.camera);
        c.lanes_per_direction =
            static_cast<int>(kv.get_int("scenario.lanes_per_direction", c.lanes_per_direction));
        c.span_hours = kv.get_double("scenario.span_hours", c.span_hours);
        c.start_epoch = kv.get_int("scenario.start_epoch", c.start_epoch);
        c.base_rate = kv.get_double("scenario.base_rate", c.base_rate);
        c.morning_peak = kv.get_double("scenario.morning_peak", c.morning_peak);
        c.morning_center = kv.get_double("scenario.morning_center", c.morning_center);
        c.morning_width = kv.get_double("scenario.morning_width", c.morning_width);
        c.evening_peak = kv.get_double("scenario.evening_peak", c.evening_peak);
        c.evening_center = kv.get_double("scenario.evening_center", c.evening_center);
        c.evening_width = kv.get_double("scenario.evening_width", c.evening_width);
        c.lane_rate_falloff = kv.get_double("scenario.lane_rate_falloff", c.lane_rate_falloff);
        c.truck_fraction = kv.get_double("scenario.truck_fraction", c.truck_fraction);
        c.truck_lane_skew = kv.get_double("scenario.truck_lane_skew", c.truck_lane_skew);
        c.occ_a = kv.get_double("scenario.occ_a", c.occ_a);
        c.occ_b = kv.get_double("scenario.occ_b", c.occ_b);
        c.occ_noise = kv.get_double("scenario.occ_noise", c.occ_noise);
        c.auto_injections =
            static_cast<int>(kv.get_int("scenario.auto_injections", c.auto_injections));
        for (int i = 0;; ++i) {
            const std::string key = "injection." + std::to_string(i);
            if (!kv.has(key)) break;
            c.injections.push_back(parse_injection(kv.get_string(key, ""), key));
        }
        c.validate();
        return c;
    }

    void validate() const {
        if (lanes_per_direction < 1) throw Error("scenario: need at least one lane");
        if (span_hours <= 0.0) throw Error("scenario: span must be positive");
        if (start_epoch % kIntervalSeconds != 0)
            throw Error("scenario: start_epoch must be 30 s aligned");
        if (base_rate < 0.0 || morning_peak < 0.0 || evening_peak < 0.0)
            throw Error("scenario: rates must be nonnegative");
    }

    // "kind,start_interval,duration,severity,lane|lane|..."
    static Injection parse_injection(const std::string& text, const std::string& key) {
        std::vector<std::string> parts;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            const auto comma = text.find(',', pos);
            parts.push_back(text.substr(pos, comma == std::string::npos ? std::string::npos
                                                                        : comma - pos));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (parts.size() != 5) throw Error(key + ": expected kind,start,duration,severity,lanes");
        Injection inj;
        inj.kind = injection_kind_from(parts[0]);
        inj.start_interval = std::stoi(parts[1]);
        inj.duration = std::stoi(parts[2]);
        inj.severity = std::stod(parts[3]);
        std::size_t lp = 0;
        while (lp <= parts[4].size()) {
            const auto bar = parts[4].find('|', lp);
            const auto tok =
                parts[4].substr(lp, bar == std::string::npos ? std::string::npos : bar - lp);
            if (!tok.empty()) inj.lanes.push_back(std::stoi(tok));
            if (bar == std::string::npos) break;
            lp = bar + 1;
        }
        if (inj.lanes.empty()) throw Error(key + ": injection needs at least one lane");
        if (inj.duration < 1) throw Error(key + ": duration must be at least 1");
        if (inj.severity <= 0.0 || inj.severity > 1.0) throw Error(key + ": severity in (0,1]");
        return inj;
    }
};

namespace detail {

struct Cell {
    int count = 0;
    int truck = 0;
    double occ = 0.0;
};

inline double clamp_occ(double v) { return std::min(std::max(v, 0.0), 2.0); }

inline int binomial(std::mt19937_64& rng, int n, double p) {
    if (n <= 0 || p <= 0.0) return 0;
    if (p >= 1.0) return n;
    return std::binomial_distribution<int>(n, p)(rng);
}

}  // namespace detail

struct SynthResult {
    std::vector<LaneSample> samples;
    std::vector<GroundTruthInterval> truth;
};

// Seeded generation: a per-lane baseline stream, then injection transforms
// applied from per-injection streams. Because the baseline never consumes
// injection randomness, the same seed without an injection reproduces the
// untouched baseline exactly.
inline SynthResult generate(const ScenarioConfig& cfg) {
    const int n = cfg.n_intervals();
    const auto lanes = cfg.all_lanes();

    // Reject overlapping injections lane by lane before any work.
    std::map<int, std::vector<std::pair<int, int>>> spans;
    for (const auto& inj : cfg.injections) {
        if (inj.start_interval < 0 || inj.start_interval + inj.duration > n)
            throw Error("injection outside the simulated span");
        for (int lane : inj.lanes) {
            if (std::find(lanes.begin(), lanes.end(), lane) == lanes.end())
                throw Error("injection on unknown lane " + std::to_string(lane));
            for (const auto& [b, e] : spans[lane]) {
                if (inj.start_interval < e && b < inj.start_interval + inj.duration)
                    throw Error("overlapping injections on lane " + std::to_string(lane));
            }
            spans[lane].push_back({inj.start_interval, inj.start_interval + inj.duration});
        }
    }

    // Baseline.
    std::map<int, std::vector<detail::Cell>> grid;
    for (int lane : lanes) {
        auto rng = make_rng(cfg.seed, 0xBA5E0000ULL + static_cast<std::uint64_t>(lane + 512));
        auto& cells = grid[lane];
        cells.resize(static_cast<std::size_t>(n));
        const double frac = cfg.lane_truck_fraction(lane);
        for (int t = 0; t < n; ++t) {
            const std::int64_t epoch = cfg.start_epoch + static_cast<std::int64_t>(t) * kIntervalSeconds;
            const double hour = static_cast<double>(epoch % 86400) / 3600.0;
            const double lambda = cfg.rate(hour, lane);
            auto& cell = cells[static_cast<std::size_t>(t)];
            cell.count = lambda > 0.0 ? std::poisson_distribution<int>(lambda)(rng) : 0;
            cell.truck = detail::binomial(rng, cell.count, frac);
            cell.occ = detail::clamp_occ(cfg.occupancy_model(cell.count) +
                                         std::normal_distribution<double>(0.0, cfg.occ_noise)(rng));
        }
    }

    // Injections, in file order, each on its own stream.
    for (std::size_t idx = 0; idx < cfg.injections.size(); ++idx) {
        const auto& inj = cfg.injections[idx];
        auto rng = make_rng(cfg.seed, 0x123E0000ULL + idx);
        const int t0 = inj.start_interval, t1 = inj.start_interval + inj.duration;
        switch (inj.kind) {
            case InjectionKind::LaneBlockage: {
                const int blocked = inj.lanes.front();
                std::vector<int> recipients(inj.lanes.begin() + 1, inj.lanes.end());
                for (int t = t0; t < t1; ++t) {
                    auto& bc = grid[blocked][static_cast<std::size_t>(t)];
                    const int keep = detail::binomial(rng, bc.count, 1.0 - inj.severity);
                    int diverted = bc.count - keep;
                    bc.count = keep;
                    bc.truck = detail::binomial(rng, keep, cfg.lane_truck_fraction(blocked));
                    bc.occ = detail::clamp_occ(
                        cfg.occupancy_model(keep) + 0.25 * inj.severity +
                        std::normal_distribution<double>(0.0, cfg.occ_noise)(rng));
                    if (!recipients.empty()) {
                        std::uniform_int_distribution<std::size_t> pick(0, recipients.size() - 1);
                        for (int v = 0; v < diverted; ++v)
                            grid[recipients[pick(rng)]][static_cast<std::size_t>(t)].count += 1;
                        for (int lane : recipients) {
                            auto& rc = grid[lane][static_cast<std::size_t>(t)];
                            rc.truck = detail::binomial(rng, rc.count,
                                                        cfg.lane_truck_fraction(lane));
                            rc.occ = detail::clamp_occ(
                                cfg.occupancy_model(rc.count) +
                                std::normal_distribution<double>(0.0, cfg.occ_noise)(rng));
                        }
                    }
                }
                break;
            }
            case InjectionKind::ForeignObject: {
                const int lane = inj.lanes.front();
                for (int t = t0; t < t1; ++t) {
                    auto& cell = grid[lane][static_cast<std::size_t>(t)];
                    const double jitter = std::uniform_real_distribution<double>(0.7, 1.3)(rng);
                    const double keep_p =
                        std::min(1.0, std::max(0.0, 1.0 - 0.5 * inj.severity * jitter));
                    cell.count = detail::binomial(rng, cell.count, keep_p);
                    cell.truck = detail::binomial(rng, cell.count, cfg.lane_truck_fraction(lane));
                    cell.occ = detail::clamp_occ(
                        cfg.occupancy_model(cell.count) + 0.05 * inj.severity +
                        std::normal_distribution<double>(0.0, cfg.occ_noise)(rng));
                }
                break;
            }
            case InjectionKind::SustainedCongestion: {
                for (int t = t0; t < t1; ++t) {
                    for (int lane : inj.lanes) {
                        auto& cell = grid[lane][static_cast<std::size_t>(t)];
                        const double lambda = 0.5 + 2.5 * (1.0 - 0.5 * inj.severity);
                        cell.count = std::min(std::poisson_distribution<int>(lambda)(rng), 4);
                        const double frac = std::min(
                            0.85, cfg.lane_truck_fraction(lane) + 0.3 * inj.severity);
                        cell.truck = detail::binomial(rng, cell.count, frac);
                        cell.occ = detail::clamp_occ(
                            0.62 + 0.25 * inj.severity *
                                       std::uniform_real_distribution<double>(0.0, 1.0)(rng) +
                            std::abs(std::normal_distribution<double>(0.0, 0.02)(rng)));
                    }
                }
                break;
            }
            case InjectionKind::CameraShift: {
                // Permute lane assignments within each direction group and
                // rescale occupancy from the shift instant onward.
                std::map<int, std::vector<int>> groups;
                for (int lane : inj.lanes) groups[lane < 0 ? -1 : 1].push_back(lane);
                const double rho = std::uniform_real_distribution<double>(0.5, 0.75)(rng);
                for (auto& [dir, group] : groups) {
                    std::sort(group.begin(), group.end());
                    std::vector<std::size_t> perm(group.size());
                    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
                    if (group.size() > 1) {
                        do {
                            std::shuffle(perm.begin(), perm.end(), rng);
                        } while (std::is_sorted(perm.begin(), perm.end()));
                    }
                    for (int t = t0; t < t1; ++t) {
                        std::vector<detail::Cell> tmp(group.size());
                        for (std::size_t i = 0; i < group.size(); ++i)
                            tmp[i] = grid[group[i]][static_cast<std::size_t>(t)];
                        for (std::size_t i = 0; i < group.size(); ++i) {
                            detail::Cell moved = tmp[perm[i]];
                            moved.occ = detail::clamp_occ(moved.occ * rho);
                            grid[group[i]][static_cast<std::size_t>(t)] = moved;
                        }
                    }
                }
                break;
            }
        }
    }

    SynthResult out;
    out.samples.reserve(static_cast<std::size_t>(n) * lanes.size());
    for (int lane : lanes) {
        const auto& cells = grid[lane];
        for (int t = 0; t < n; ++t) {
            LaneSample s;
            s.key.camera = cfg.camera;
            s.key.direction = lane < 0 ? -1 : 1;
            s.key.lane = lane;
            s.interval_start = cfg.start_epoch + static_cast<std::int64_t>(t) * kIntervalSeconds;
            s.count = cells[static_cast<std::size_t>(t)].count;
            s.truck_count = cells[static_cast<std::size_t>(t)].truck;
            s.occupancy = cells[static_cast<std::size_t>(t)].occ;
            out.samples.push_back(std::move(s));
        }
    }
    std::sort(out.samples.begin(), out.samples.end(),
              [](const LaneSample& a, const LaneSample& b) {
                  if (a.key != b.key) return a.key < b.key;
                  return a.interval_start < b.interval_start;
              });

    for (const auto& inj : cfg.injections) {
        for (int lane : inj.lanes) {
            for (int t = inj.start_interval; t < inj.start_interval + inj.duration; ++t) {
                out.truth.push_back(
                    {lane, cfg.start_epoch + static_cast<std::int64_t>(t) * kIntervalSeconds,
                     inj.kind});
            }
        }
    }
    std::sort(out.truth.begin(), out.truth.end(), [](const auto& a, const auto& b) {
        if (a.lane != b.lane) return a.lane < b.lane;
        return a.interval_start < b.interval_start;
    });
    return out;
}

// Deterministic placement of `count` injections across all four kinds:
// roughly 35% blockage, 25% foreign object, 30% congestion, 10% camera
// shift, placed in daytime hours without same-lane overlap.
inline std::vector<Injection> auto_injections(const ScenarioConfig& cfg, int count) {
    std::vector<InjectionKind> kinds;
    const int n_block = std::max(1, count * 35 / 100);
    const int n_foreign = std::max(1, count * 25 / 100);
    const int n_shift = std::max(1, count * 10 / 100);
    const int n_cong = std::max(1, count - n_block - n_foreign - n_shift);
    for (int i = 0; i < n_block; ++i) kinds.push_back(InjectionKind::LaneBlockage);
    for (int i = 0; i < n_foreign; ++i) kinds.push_back(InjectionKind::ForeignObject);
    for (int i = 0; i < n_cong; ++i) kinds.push_back(InjectionKind::SustainedCongestion);
    for (int i = 0; i < n_shift; ++i) kinds.push_back(InjectionKind::CameraShift);
    kinds.resize(static_cast<std::size_t>(count), InjectionKind::LaneBlockage);

    auto rng = make_rng(cfg.seed, /*tag=*/0xA070111ULL);
    const int n = cfg.n_intervals();
    const double days = cfg.span_hours / 24.0;
    std::map<int, std::vector<std::pair<int, int>>> spans;
    const auto overlaps = [&](const std::vector<int>& lanes, int b, int e) {
        for (int lane : lanes) {
            for (const auto& [sb, se] : spans[lane]) {
                if (b < se && sb < e) return true;
            }
        }
        return false;
    };

    std::vector<Injection> out;
    for (auto kind : kinds) {
        Injection inj;
        inj.kind = kind;
        bool placed = false;
        for (int attempt = 0; attempt < 400 && !placed; ++attempt) {
            const int dir = std::uniform_int_distribution<int>(0, 1)(rng) == 0 ? -1 : 1;
            switch (kind) {
                case InjectionKind::LaneBlockage: {
                    inj.duration = std::uniform_int_distribution<int>(20, 50)(rng);
                    inj.severity = std::uniform_real_distribution<double>(0.8, 1.0)(rng);
                    const int blocked =
                        dir * std::uniform_int_distribution<int>(1, cfg.lanes_per_direction)(rng);
                    inj.lanes.assign(1, blocked);
                    for (int lane : cfg.direction_lanes(dir)) {
                        if (lane != blocked) inj.lanes.push_back(lane);
                    }
                    break;
                }
                case InjectionKind::ForeignObject: {
                    inj.duration = std::uniform_int_distribution<int>(14, 30)(rng);
                    inj.severity = std::uniform_real_distribution<double>(0.7, 1.0)(rng);
                    inj.lanes.assign(
                        1, dir * std::uniform_int_distribution<int>(1, cfg.lanes_per_direction)(rng));
                    break;
                }
                case InjectionKind::SustainedCongestion: {
                    inj.duration = std::uniform_int_distribution<int>(60, 110)(rng);
                    inj.severity = std::uniform_real_distribution<double>(0.6, 1.0)(rng);
                    inj.lanes = cfg.direction_lanes(dir);
                    break;
                }
                case InjectionKind::CameraShift: {
                    inj.duration = std::uniform_int_distribution<int>(24, 56)(rng);
                    inj.severity = std::uniform_real_distribution<double>(0.7, 1.0)(rng);
                    inj.lanes = cfg.direction_lanes(dir);
                    break;
                }
            }
            const int day = std::uniform_int_distribution<int>(
                0, std::max(0, static_cast<int>(days) - 1))(rng);
            const double latest_hour = 22.0 - static_cast<double>(inj.duration) / 120.0;
            const double hour = std::uniform_real_distribution<double>(6.0, latest_hour)(rng);
            inj.start_interval = static_cast<int>((static_cast<double>(day) * 24.0 + hour) * 120.0);
            if (inj.start_interval + inj.duration > n) continue;
            if (overlaps(inj.lanes, inj.start_interval, inj.start_interval + inj.duration))
                continue;
            for (int lane : inj.lanes)
                spans[lane].push_back({inj.start_interval, inj.start_interval + inj.duration});
            placed = true;
        }
        if (!placed) throw Error("auto_injections: could not place injection without overlap");
        out.push_back(inj);
    }
    return out;
}

struct WindowLabels {
    std::map<std::pair<LaneKey, std::int64_t>, bool> labels;
    std::map<std::pair<LaneKey, std::int64_t>, std::set<InjectionKind>> kinds;
};

// A window is anomalous when it overlaps at least `k` ground-truth intervals
// for its lane; kinds are attributed under the same rule.
inline WindowLabels emit_labels(const std::vector<GroundTruthInterval>& truth,
                                const std::vector<LaneWindow>& windows, int k = 3) {
    if (k < 1) throw Error("emit_labels: k must be positive");
    std::map<int, std::set<std::int64_t>> by_lane;
    std::map<std::pair<int, std::int64_t>, InjectionKind> kind_at;
    for (const auto& g : truth) {
        by_lane[g.lane].insert(g.interval_start);
        kind_at[{g.lane, g.interval_start}] = g.kind;
    }
    WindowLabels out;
    for (const auto& w : windows) {
        const auto key = std::make_pair(w.key, w.start);
        int total = 0;
        std::map<InjectionKind, int> per_kind;
        auto it = by_lane.find(w.key.lane);
        if (it != by_lane.end()) {
            for (int t = 0; t < kWindowLength; ++t) {
                const std::int64_t epoch = w.start + static_cast<std::int64_t>(t) * kIntervalSeconds;
                if (it->second.count(epoch)) {
                    ++total;
                    ++per_kind[kind_at[{w.key.lane, epoch}]];
                }
            }
        }
        out.labels[key] = total >= k;
        for (const auto& [kind, cnt] : per_kind) {
            if (cnt >= k) out.kinds[key].insert(kind);
        }
    }
    return out;
}

constexpr std::string_view kTruthCsvHeader = "lane,interval_start_epoch_s,kind";

inline void save_truth(const std::filesystem::path& path,
                       const std::vector<GroundTruthInterval>& truth,
                       const std::vector<std::string>& provenance = {}) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    for (const auto& p : provenance) out << "# " << p << "\n";
    out << kTruthCsvHeader << "\n";
    for (const auto& g : truth) {
        out << g.lane << ',' << g.interval_start << ',' << to_string(g.kind) << "\n";
    }
}

inline std::vector<GroundTruthInterval> load_truth(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    std::vector<GroundTruthInterval> truth;
    std::string line;
    std::size_t line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!saw_header) {
            if (line != kTruthCsvHeader)
                throw Error(path.string() + ": unexpected truth header");
            saw_header = true;
            continue;
        }
        const auto f = detail::split_fields(line);
        if (f.size() != 3)
            throw Error(path.string() + " line " + std::to_string(line_no) + ": expected 3 fields");
        GroundTruthInterval g;
        g.lane = detail::parse_number<int>(f[0], "lane", line_no);
        g.interval_start = detail::parse_number<std::int64_t>(f[1], "interval_start", line_no);
        g.kind = injection_kind_from(std::string(f[2]));
        truth.push_back(g);
    }
    if (!saw_header) throw Error(path.string() + ": missing truth header");
    return truth;
}

}  // namespace laneguard

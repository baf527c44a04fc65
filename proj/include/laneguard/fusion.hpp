#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "laneguard/core.hpp"
#include "laneguard/mlbranch.hpp"

namespace laneguard {

// Monotone boolean combination of the three branch flags, stored as a truth
// table indexed by (deep<<2 | rule<<1 | ml). Named presets cover the useful
// policies; an explicit 8-character 0/1 string selects any other monotone
// function. Raising a branch flag can never clear a fused verdict.
class FusionPolicy {
  public:
    static FusionPolicy parse(const std::string& spec) {
        FusionPolicy p;
        p.name_ = spec;
        if (spec == "or") {
            for (int i = 1; i < 8; ++i) p.table_[static_cast<std::size_t>(i)] = true;
        } else if (spec == "and") {
            p.table_[7] = true;
        } else if (spec == "majority") {
            for (int i = 0; i < 8; ++i) {
                const int bits = ((i >> 2) & 1) + ((i >> 1) & 1) + (i & 1);
                p.table_[static_cast<std::size_t>(i)] = bits >= 2;
            }
        } else if (spec == "deep-only" || spec == "rule-only" || spec == "ml-only") {
            const int bit = spec == "deep-only" ? 2 : (spec == "rule-only" ? 1 : 0);
            for (int i = 0; i < 8; ++i)
                p.table_[static_cast<std::size_t>(i)] = ((i >> bit) & 1) != 0;
        } else if (spec.size() == 8 &&
                   spec.find_first_not_of("01") == std::string::npos) {
            for (int i = 0; i < 8; ++i)
                p.table_[static_cast<std::size_t>(i)] = spec[static_cast<std::size_t>(i)] == '1';
        } else {
            throw Error("unknown fusion policy '" + spec + "'");
        }
        p.check_monotone();
        return p;
    }

    bool fuse(bool deep, bool rule, bool ml) const {
        const int idx = (deep ? 4 : 0) | (rule ? 2 : 0) | (ml ? 1 : 0);
        return table_[static_cast<std::size_t>(idx)];
    }

    const std::string& name() const { return name_; }

  private:
    void check_monotone() const {
        for (int a = 0; a < 8; ++a) {
            for (int b = 0; b < 8; ++b) {
                if ((a & b) == a && table_[static_cast<std::size_t>(a)] &&
                    !table_[static_cast<std::size_t>(b)]) {
                    throw Error("fusion policy is not monotone");
                }
            }
        }
    }

    std::array<bool, 8> table_{};
    std::string name_;
};

struct FusedVerdict {
    LaneKey key;
    std::int64_t window_start = 0;
    TimeOfDayGroup group = TimeOfDayGroup::Night;
    double error = 0.0;  // deep-branch reconstruction error
    bool deep = false;
    bool rule = false;
    bool ml = false;
    bool fused = false;
};

// Combines the branch results per window. The ml flags arrive at direction
// level, keyed by interval start; a lane window inherits ml = 1 when any of
// its 30 intervals is flagged for its direction.
inline std::vector<FusedVerdict> fuse_verdicts(
    const std::vector<LaneWindow>& windows, const std::vector<double>& deep_errors,
    const std::vector<bool>& deep_flags, const std::vector<bool>& rule_flags,
    const std::map<std::pair<DirectionKey, std::int64_t>, bool>& ml_interval_flags,
    const FusionPolicy& policy) {
    if (windows.size() != deep_errors.size() || windows.size() != deep_flags.size() ||
        windows.size() != rule_flags.size())
        throw Error("fuse: branch result sizes disagree");
    std::vector<FusedVerdict> out;
    out.reserve(windows.size());
    for (std::size_t i = 0; i < windows.size(); ++i) {
        const auto& w = windows[i];
        FusedVerdict v;
        v.key = w.key;
        v.window_start = w.start;
        v.group = hour_group(w.hour_of_day);
        v.error = deep_errors[i];
        v.deep = deep_flags[i];
        v.rule = rule_flags[i];
        const DirectionKey dir{w.key.camera, w.key.direction};
        for (int t = 0; t < kWindowLength && !v.ml; ++t) {
            auto it = ml_interval_flags.find(
                {dir, w.start + static_cast<std::int64_t>(t) * kIntervalSeconds});
            if (it != ml_interval_flags.end() && it->second) v.ml = true;
        }
        v.fused = policy.fuse(v.deep, v.rule, v.ml);
        out.push_back(v);
    }
    return out;
}

}  // namespace laneguard

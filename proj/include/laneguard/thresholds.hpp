#pragma once

#include <cmath>
#include <map>
#include <vector>

#include "laneguard/core.hpp"
#include "laneguard/stats.hpp"

namespace laneguard {

// Reconstruction-error thresholds per time-of-day group. Time-independent
// mode pools every group into a single threshold.
struct ThresholdSet {
    double percentile = 95.0;
    bool time_dependent = true;
    std::map<TimeOfDayGroup, double> per_group;
    double pooled = 0.0;

    double threshold_for(TimeOfDayGroup g) const {
        if (!time_dependent) return pooled;
        auto it = per_group.find(g);
        if (it == per_group.end())
            throw Error(std::string("no threshold for group ") + to_string(g));
        return it->second;
    }
};

inline ThresholdSet calibrate(const std::map<TimeOfDayGroup, std::vector<double>>& errors,
                              double p, bool time_dependent = true) {
    ThresholdSet set;
    set.percentile = p;
    set.time_dependent = time_dependent;
    if (time_dependent) {
        for (int g = 0; g < kGroupCount; ++g) {
            const auto group = static_cast<TimeOfDayGroup>(g);
            auto it = errors.find(group);
            if (it == errors.end() || it->second.empty())
                throw Error(std::string("calibrate: no training errors for group ") +
                            to_string(group));
            const double t = percentile(it->second, p);
            if (!std::isfinite(t)) throw Error("calibrate: non-finite threshold");
            set.per_group[group] = t;
        }
    } else {
        std::vector<double> all;
        for (const auto& [g, v] : errors) all.insert(all.end(), v.begin(), v.end());
        if (all.empty()) throw Error("calibrate: no training errors");
        set.pooled = percentile(all, p);
        if (!std::isfinite(set.pooled)) throw Error("calibrate: non-finite threshold");
    }
    return set;
}

// Anomalous when the error strictly exceeds the group threshold.
inline bool deep_flag(double error, TimeOfDayGroup g, const ThresholdSet& set) {
    return error > set.threshold_for(g);
}

}  // namespace laneguard

#pragma once

#include "laneguard/core.hpp"

namespace laneguard {

enum class TrafficStatus { Jam, Slow, Normal };

inline const char* to_string(TrafficStatus s) {
    switch (s) {
        case TrafficStatus::Jam: return "jam";
        case TrafficStatus::Slow: return "slow";
        case TrafficStatus::Normal: return "normal";
    }
    return "?";
}

// Per-interval status from flow rate (veh/h) and occupancy. All inequalities
// are strict; every boundary value falls through to Normal.
inline TrafficStatus classify(double flow, double occupancy) {
    if (flow < 600.0 && occupancy > 0.6) return TrafficStatus::Jam;
    if (flow > 600.0 && flow < 900.0 && occupancy > 0.4 && occupancy < 0.6)
        return TrafficStatus::Slow;
    return TrafficStatus::Normal;
}

// Window-level flag: any Jam interval, or sustained congestion as three or
// more consecutive Slow intervals.
inline bool window_rule_flag(const LaneWindow& window) {
    int slow_run = 0;
    for (const auto& s : window.samples) {
        switch (classify(flow_rate(s.count), s.occupancy)) {
            case TrafficStatus::Jam:
                return true;
            case TrafficStatus::Slow:
                if (++slow_run >= 3) return true;
                break;
            case TrafficStatus::Normal:
                slow_run = 0;
                break;
        }
    }
    return false;
}

}  // namespace laneguard

#pragma once

#include <charconv>
#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace laneguard {

// Errors carry a human-readable message and, for file problems, the
// offending location; callers catch laneguard::Error at the CLI boundary.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Shortest decimal form that round-trips exactly; the canonical way any
// floating-point value is printed into CSV, config and bundle text.
inline std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc()) throw Error("format_double failed");
    return std::string(buf, ptr);
}

constexpr int kIntervalSeconds = 30;
constexpr int kWindowLength = 30;  // intervals per 15-minute window

// Identity of one monitored lane. direction is a signed group tag (negative
// lanes run toward the camera, positive away); lane index carries the same
// sign.
struct LaneKey {
    std::string camera;
    int direction = 0;
    int lane = 0;

    auto operator<=>(const LaneKey&) const = default;
};

// One lane's measurements over a single 30-second interval.
struct LaneSample {
    LaneKey key;
    std::int64_t interval_start = 0;  // epoch seconds, multiple of 30
    int count = 0;
    int truck_count = 0;
    double occupancy = 0.0;

    // Throws on invariant violations; returns true when the row is valid but
    // deserves a data-quality warning (occupancy above 1).
    bool validate() const {
        if (key.direction == 0) throw Error("direction must be nonzero");
        if (key.lane == 0) throw Error("lane index must be nonzero");
        if ((key.direction < 0) != (key.lane < 0))
            throw Error("lane index sign must match direction");
        if (interval_start % kIntervalSeconds != 0)
            throw Error("interval_start not aligned to 30 s");
        if (count < 0) throw Error("negative count");
        if (truck_count < 0) throw Error("negative truck_count");
        if (truck_count > count) throw Error("truck_count exceeds count");
        if (occupancy < 0.0) throw Error("negative occupancy");
        if (occupancy > 2.0) throw Error("occupancy above 2 (corrupt row)");
        return occupancy > 1.0;
    }
};

// 30 consecutive samples for one lane; one detector unit of work.
struct LaneWindow {
    LaneKey key;
    std::int64_t start = 0;      // interval_start of the first sample
    int hour_of_day = 0;         // local hour of the first sample
    std::vector<LaneSample> samples;

    std::vector<double> counts() const {
        std::vector<double> x;
        x.reserve(samples.size());
        for (const auto& s : samples) x.push_back(static_cast<double>(s.count));
        return x;
    }
};

enum class TimeOfDayGroup { Night, Morning, Afternoon, Evening };
constexpr int kGroupCount = 4;

inline const char* to_string(TimeOfDayGroup g) {
    switch (g) {
        case TimeOfDayGroup::Night: return "night";
        case TimeOfDayGroup::Morning: return "morning";
        case TimeOfDayGroup::Afternoon: return "afternoon";
        case TimeOfDayGroup::Evening: return "evening";
    }
    return "?";
}

// Hour buckets: Night 0-5, Morning 6-11, Afternoon 12-17, Evening 18-23.
inline TimeOfDayGroup hour_group(int hour) {
    if (hour < 0 || hour > 23) throw Error("hour outside 0-23");
    return static_cast<TimeOfDayGroup>(hour / 6);
}

inline int local_hour(std::int64_t epoch_s, int utc_offset_hours) {
    std::int64_t h = epoch_s / 3600 + utc_offset_hours;
    h %= 24;
    if (h < 0) h += 24;
    return static_cast<int>(h);
}

// Vehicles per hour extrapolated from one interval count.
inline double flow_rate(int count, int period_s = kIntervalSeconds) {
    if (period_s <= 0) throw Error("period must be positive");
    if (count < 0) throw Error("negative count");
    return static_cast<double>(count) * 3600.0 / static_cast<double>(period_s);
}

// Trucks as a percent of all vehicles; an empty interval counts as 0 %.
inline double truck_percentage(int truck_count, int count) {
    if (truck_count < 0 || count < 0) throw Error("negative vehicle count");
    if (truck_count > count) throw Error("truck_count exceeds count");
    if (count == 0) return 0.0;
    return 100.0 * static_cast<double>(truck_count) / static_cast<double>(count);
}

// Mean per-frame fraction of the detection region's height covered by
// vehicles: (sum of height ratios) / frames.
inline double average_occupancy(std::span<const double> vehicle_heights,
                                double roi_height, int frame_count) {
    if (roi_height <= 0.0) throw Error("roi_height must be positive");
    if (frame_count < 1) throw Error("frame_count must be positive");
    double sum = 0.0;
    for (double h : vehicle_heights) {
        if (h <= 0.0) throw Error("vehicle height must be positive");
        if (h > 2.0 * roi_height) throw Error("vehicle height exceeds sanity bound");
        sum += h / roi_height;
    }
    return sum / static_cast<double>(frame_count);
}

}  // namespace laneguard

#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "laneguard/core.hpp"
#include "laneguard/rng.hpp"

namespace laneguard {

constexpr std::string_view kSampleCsvHeader =
    "camera_id,direction,lane,interval_start_epoch_s,count,truck_count,occupancy";

struct DatasetManifest {
    std::vector<std::string> source_files;
    std::map<LaneKey, std::size_t> samples_per_lane;
    std::int64_t first_interval = 0;
    std::int64_t last_interval = 0;
    std::size_t occupancy_warnings = 0;  // rows with occupancy in (1, 2]
    std::size_t dropped_remainder_samples = 0;
    std::uint64_t split_seed = 0;
    double split_ratio = 0.8;
};

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            out.push_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

template <typename T>
T parse_number(std::string_view s, std::string_view what, std::size_t line_no) {
    T value{};
    const auto* begin = s.data();
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) {
        throw Error("line " + std::to_string(line_no) + ": bad " + std::string(what) +
                    " '" + std::string(s) + "'");
    }
    return value;
}

}  // namespace detail

// Reads one sample CSV. Leading '#' lines are provenance comments; the first
// real line must be the canonical header. Rows are validated and returned
// sorted by (lane key, interval start). Parse and invariant failures name
// the 1-based line number.
inline std::vector<LaneSample> load_samples(const std::filesystem::path& path,
                                            DatasetManifest* manifest = nullptr) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());

    std::vector<LaneSample> samples;
    std::string line;
    std::size_t line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!saw_header) {
            if (line != kSampleCsvHeader)
                throw Error(path.string() + " line " + std::to_string(line_no) +
                            ": unexpected header");
            saw_header = true;
            continue;
        }
        const auto f = detail::split_fields(line);
        if (f.size() != 7)
            throw Error(path.string() + " line " + std::to_string(line_no) +
                        ": expected 7 fields, got " + std::to_string(f.size()));
        LaneSample s;
        s.key.camera = std::string(f[0]);
        s.key.direction = detail::parse_number<int>(f[1], "direction", line_no);
        s.key.lane = detail::parse_number<int>(f[2], "lane", line_no);
        s.interval_start = detail::parse_number<std::int64_t>(f[3], "interval_start", line_no);
        s.count = detail::parse_number<int>(f[4], "count", line_no);
        s.truck_count = detail::parse_number<int>(f[5], "truck_count", line_no);
        s.occupancy = detail::parse_number<double>(f[6], "occupancy", line_no);
        try {
            if (s.validate() && manifest) ++manifest->occupancy_warnings;
        } catch (const Error& e) {
            throw Error(path.string() + " line " + std::to_string(line_no) + ": " + e.what());
        }
        samples.push_back(std::move(s));
    }
    if (!saw_header) throw Error(path.string() + ": missing header");

    std::sort(samples.begin(), samples.end(), [](const LaneSample& a, const LaneSample& b) {
        if (a.key != b.key) return a.key < b.key;
        return a.interval_start < b.interval_start;
    });
    for (std::size_t i = 1; i < samples.size(); ++i) {
        if (samples[i].key == samples[i - 1].key &&
            samples[i].interval_start == samples[i - 1].interval_start)
            throw Error(path.string() + ": duplicate sample for lane " +
                        std::to_string(samples[i].key.lane) + " at t=" +
                        std::to_string(samples[i].interval_start));
    }
    if (manifest) {
        manifest->source_files.push_back(path.string());
        for (const auto& s : samples) ++manifest->samples_per_lane[s.key];
        if (!samples.empty()) {
            auto [lo, hi] = std::minmax_element(
                samples.begin(), samples.end(), [](const LaneSample& a, const LaneSample& b) {
                    return a.interval_start < b.interval_start;
                });
            manifest->first_interval = lo->interval_start;
            manifest->last_interval = hi->interval_start;
        }
    }
    return samples;
}

// Writes samples in canonical order. `provenance` lines (if any) are emitted
// first as '#' comments so every artifact records how it was produced.
inline void save_samples(const std::filesystem::path& path, std::vector<LaneSample> samples,
                         const std::vector<std::string>& provenance = {}) {
    std::sort(samples.begin(), samples.end(), [](const LaneSample& a, const LaneSample& b) {
        if (a.key != b.key) return a.key < b.key;
        return a.interval_start < b.interval_start;
    });
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    for (const auto& p : provenance) out << "# " << p << "\n";
    out << kSampleCsvHeader << "\n";
    for (const auto& s : samples) {
        out << s.key.camera << ',' << s.key.direction << ',' << s.key.lane << ','
            << s.interval_start << ',' << s.count << ',' << s.truck_count << ','
            << format_double(s.occupancy) << "\n";
    }
    if (!out) throw Error("write failed for " + path.string());
}

// Partitions each lane's contiguous runs (gap == 30 s) into non-overlapping
// 30-sample windows aligned to the run start. Remainders shorter than a
// window are dropped and tallied in the manifest. Input must be sorted as
// load_samples returns it.
inline std::vector<LaneWindow> build_windows(const std::vector<LaneSample>& samples,
                                             int utc_offset_hours = 0,
                                             DatasetManifest* manifest = nullptr) {
    std::vector<LaneWindow> windows;
    std::size_t run_begin = 0;
    auto flush_run = [&](std::size_t begin, std::size_t end) {
        const std::size_t run_len = end - begin;
        const std::size_t n_windows = run_len / kWindowLength;
        for (std::size_t w = 0; w < n_windows; ++w) {
            LaneWindow win;
            const std::size_t base = begin + w * kWindowLength;
            win.key = samples[base].key;
            win.start = samples[base].interval_start;
            win.hour_of_day = local_hour(win.start, utc_offset_hours);
            win.samples.assign(samples.begin() + static_cast<std::ptrdiff_t>(base),
                               samples.begin() + static_cast<std::ptrdiff_t>(base + kWindowLength));
            windows.push_back(std::move(win));
        }
        if (manifest) manifest->dropped_remainder_samples += run_len % kWindowLength;
    };
    for (std::size_t i = 1; i <= samples.size(); ++i) {
        const bool run_ends =
            i == samples.size() || samples[i].key != samples[i - 1].key ||
            samples[i].interval_start != samples[i - 1].interval_start + kIntervalSeconds;
        if (run_ends) {
            flush_run(run_begin, i);
            run_begin = i;
        }
    }
    return windows;
}

// Deterministic shuffle by seed, first floor(ratio*n) windows to train.
inline std::pair<std::vector<LaneWindow>, std::vector<LaneWindow>> split_windows(
    std::vector<LaneWindow> windows, double ratio, std::uint64_t seed) {
    if (ratio <= 0.0 || ratio >= 1.0) throw Error("split ratio must lie in (0,1)");
    auto rng = make_rng(seed, /*tag=*/0x53504C49);  // window split stream
    std::shuffle(windows.begin(), windows.end(), rng);
    const auto n_train = static_cast<std::size_t>(ratio * static_cast<double>(windows.size()));
    std::vector<LaneWindow> train(windows.begin(), windows.begin() + static_cast<std::ptrdiff_t>(n_train));
    std::vector<LaneWindow> val(windows.begin() + static_cast<std::ptrdiff_t>(n_train), windows.end());
    return {std::move(train), std::move(val)};
}

}  // namespace laneguard

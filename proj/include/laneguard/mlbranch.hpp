#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "laneguard/core.hpp"
#include "laneguard/iforest.hpp"

namespace laneguard {

struct DirectionKey {
    std::string camera;
    int direction = 0;

    auto operator<=>(const DirectionKey&) const = default;
};

// One direction's feature block over a 30-interval window: occupancy matrix
// stacked above the truck-percentage matrix, rows = intervals, columns =
// lanes. Row i of the stack is interval i's occupancy profile; row N+i is
// its truck profile.
struct DirectionBlock {
    DirectionKey key;
    std::vector<int> lanes;                     // sorted lane indices
    std::vector<std::int64_t> interval_starts;  // N consecutive intervals
    std::vector<double> occupancy;              // N x L, row-major
    std::vector<double> truck_pct;              // N x L, row-major

    int n_intervals() const { return static_cast<int>(interval_starts.size()); }
    int n_lanes() const { return static_cast<int>(lanes.size()); }

    // r in [0, 2N): occupancy rows first, then truck rows.
    std::span<const double> stacked_row(int r) const {
        const int n = n_intervals();
        const auto l = static_cast<std::size_t>(n_lanes());
        if (r < n) return {occupancy.data() + static_cast<std::size_t>(r) * l, l};
        return {truck_pct.data() + static_cast<std::size_t>(r - n) * l, l};
    }
};

// Strict single-block construction: every (lane, interval) cell must be
// present. Missing cells are reported together so gaps in source data are
// diagnosable in one pass.
inline DirectionBlock build_block(const std::vector<LaneSample>& samples,
                                  const DirectionKey& key, std::int64_t window_start,
                                  int n_intervals = kWindowLength) {
    DirectionBlock block;
    block.key = key;
    std::set<int> lane_set;
    for (const auto& s : samples) {
        if (s.key.camera == key.camera && s.key.direction == key.direction)
            lane_set.insert(s.key.lane);
    }
    if (lane_set.empty()) throw Error("build_block: no samples for direction");
    block.lanes.assign(lane_set.begin(), lane_set.end());

    std::map<std::pair<std::int64_t, int>, const LaneSample*> cells;
    for (const auto& s : samples) {
        if (s.key.camera == key.camera && s.key.direction == key.direction)
            cells[{s.interval_start, s.key.lane}] = &s;
    }
    block.interval_starts.resize(static_cast<std::size_t>(n_intervals));
    const auto l = static_cast<std::size_t>(block.lanes.size());
    block.occupancy.assign(static_cast<std::size_t>(n_intervals) * l, 0.0);
    block.truck_pct.assign(static_cast<std::size_t>(n_intervals) * l, 0.0);
    std::ostringstream gaps;
    int n_gaps = 0;
    for (int i = 0; i < n_intervals; ++i) {
        const std::int64_t t = window_start + static_cast<std::int64_t>(i) * kIntervalSeconds;
        block.interval_starts[static_cast<std::size_t>(i)] = t;
        for (std::size_t j = 0; j < l; ++j) {
            auto it = cells.find({t, block.lanes[j]});
            if (it == cells.end()) {
                if (n_gaps++ < 8) gaps << " (lane " << block.lanes[j] << ", t=" << t << ")";
                continue;
            }
            const auto* s = it->second;
            block.occupancy[static_cast<std::size_t>(i) * l + j] = s->occupancy;
            block.truck_pct[static_cast<std::size_t>(i) * l + j] =
                truck_percentage(s->truck_count, s->count);
        }
    }
    if (n_gaps > 0)
        throw Error("build_block: " + std::to_string(n_gaps) + " missing lane-interval cells:" +
                    gaps.str());
    return block;
}

// Pipeline builder: groups samples by (camera, direction), keeps maximal
// runs of intervals where every lane of the direction is present, and chops
// each run into tumbling 30-interval blocks aligned to the run start.
inline std::vector<DirectionBlock> build_direction_blocks(
    const std::vector<LaneSample>& samples) {
    struct Cell {
        double occupancy;
        double truck_pct;
    };
    std::map<DirectionKey, std::set<int>> lanes_by_dir;
    std::map<DirectionKey, std::map<std::int64_t, std::map<int, Cell>>> grid;
    for (const auto& s : samples) {
        DirectionKey key{s.key.camera, s.key.direction};
        lanes_by_dir[key].insert(s.key.lane);
        grid[key][s.interval_start][s.key.lane] =
            Cell{s.occupancy, truck_percentage(s.truck_count, s.count)};
    }

    std::vector<DirectionBlock> blocks;
    for (auto& [key, by_time] : grid) {
        const auto& lane_set = lanes_by_dir[key];
        std::vector<int> lanes(lane_set.begin(), lane_set.end());
        const auto l = lanes.size();

        std::vector<std::int64_t> complete;  // intervals where all lanes reported
        for (const auto& [t, cells] : by_time) {
            if (cells.size() == l) complete.push_back(t);
        }
        std::size_t run_begin = 0;
        for (std::size_t i = 1; i <= complete.size(); ++i) {
            const bool run_ends = i == complete.size() ||
                                  complete[i] != complete[i - 1] + kIntervalSeconds;
            if (!run_ends) continue;
            const std::size_t run_len = i - run_begin;
            for (std::size_t w = 0; w + kWindowLength <= run_len; w += kWindowLength) {
                DirectionBlock block;
                block.key = key;
                block.lanes = lanes;
                block.occupancy.assign(static_cast<std::size_t>(kWindowLength) * l, 0.0);
                block.truck_pct.assign(static_cast<std::size_t>(kWindowLength) * l, 0.0);
                for (int r = 0; r < kWindowLength; ++r) {
                    const std::int64_t t = complete[run_begin + w + static_cast<std::size_t>(r)];
                    block.interval_starts.push_back(t);
                    const auto& cells = by_time[t];
                    for (std::size_t j = 0; j < l; ++j) {
                        const auto& cell = cells.at(lanes[j]);
                        block.occupancy[static_cast<std::size_t>(r) * l + j] = cell.occupancy;
                        block.truck_pct[static_cast<std::size_t>(r) * l + j] = cell.truck_pct;
                    }
                }
                blocks.push_back(std::move(block));
            }
            run_begin = i;
        }
    }
    return blocks;
}

// One isolation forest per (camera, direction, lane-count) signature, fit on
// the stacked rows of every training block with that signature.
struct MlBranchModel {
    struct DirectionForest {
        std::vector<int> lanes;
        IsolationForestModel forest;
    };
    std::map<DirectionKey, DirectionForest> forests;
};

inline MlBranchModel fit_ml_branch(const std::vector<DirectionBlock>& blocks,
                                   double contamination, int n_trees, int subsample,
                                   std::uint64_t seed) {
    std::map<DirectionKey, std::vector<std::vector<double>>> rows_by_dir;
    std::map<DirectionKey, std::vector<int>> lanes_by_dir;
    for (const auto& b : blocks) {
        auto& lanes = lanes_by_dir[b.key];
        if (lanes.empty()) {
            lanes = b.lanes;
        } else if (lanes != b.lanes) {
            throw Error("ml branch: inconsistent lane set within one direction");
        }
        auto& rows = rows_by_dir[b.key];
        for (int r = 0; r < 2 * b.n_intervals(); ++r) {
            const auto row = b.stacked_row(r);
            rows.emplace_back(row.begin(), row.end());
        }
    }
    MlBranchModel model;
    std::uint64_t dir_index = 0;
    for (auto& [key, rows] : rows_by_dir) {
        auto& entry = model.forests[key];
        entry.lanes = lanes_by_dir[key];
        entry.forest = fit_isolation_forest(rows, contamination, n_trees, subsample,
                                            derive_seed(seed, 0x4D4C0000ULL + dir_index));
        ++dir_index;
    }
    return model;
}

// Per-interval flags for one block: interval i is anomalous when its
// occupancy row or its truck row scores past the forest offset.
inline std::vector<bool> detect_direction(const MlBranchModel& model,
                                          const DirectionBlock& block) {
    auto it = model.forests.find(block.key);
    if (it == model.forests.end())
        throw Error("ml branch: no model for camera '" + block.key.camera + "' direction " +
                    std::to_string(block.key.direction));
    if (it->second.lanes != block.lanes)
        throw Error("ml branch: lane signature mismatch (model has " +
                    std::to_string(it->second.lanes.size()) + " lanes, block has " +
                    std::to_string(block.lanes.size()) + ")");
    const auto& forest = it->second.forest;
    const int n = block.n_intervals();
    std::vector<bool> flags(static_cast<std::size_t>(n), false);
    for (int i = 0; i < n; ++i) {
        flags[static_cast<std::size_t>(i)] = forest.is_anomaly(block.stacked_row(i)) ||
                                             forest.is_anomaly(block.stacked_row(n + i));
    }
    return flags;
}

}  // namespace laneguard

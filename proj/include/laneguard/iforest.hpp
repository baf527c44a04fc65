#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "laneguard/core.hpp"
#include "laneguard/parallel.hpp"
#include "laneguard/rng.hpp"
#include "laneguard/stats.hpp"

namespace laneguard {

// Average unsuccessful-search path length of a binary search tree holding n
// points: c(n) = 2*H(n-1) - 2*(n-1)/n with H(i) = ln(i) + Euler-Mascheroni.
// Normalizes isolation path lengths into the anomaly score exponent.
inline double average_path_length(std::size_t n) {
    if (n <= 1) return 0.0;
    constexpr double kEulerGamma = 0.5772156649;
    const double nd = static_cast<double>(n);
    return 2.0 * (std::log(nd - 1.0) + kEulerGamma) - 2.0 * (nd - 1.0) / nd;
}

// One random isolation tree, stored as a flat preorder node list so it
// serializes directly into the artifact bundle.
struct IsolationTree {
    struct Node {
        std::int32_t feature = -1;  // -1 marks an external node
        double split = 0.0;
        std::int32_t size = 0;      // points that reached this node (external only)
        std::int32_t left = -1;     // node indices; right = left subtree end
        std::int32_t right = -1;
    };
    std::vector<Node> nodes;

    bool is_external(std::int32_t idx) const { return nodes[static_cast<std::size_t>(idx)].feature < 0; }
};

// Edges traversed to the external node plus the average-path adjustment for
// the points pooled there.
inline double path_length(const IsolationTree& tree, std::span<const double> row) {
    std::int32_t idx = 0;
    double edges = 0.0;
    while (!tree.is_external(idx)) {
        const auto& node = tree.nodes[static_cast<std::size_t>(idx)];
        idx = row[static_cast<std::size_t>(node.feature)] < node.split ? node.left : node.right;
        edges += 1.0;
    }
    return edges + average_path_length(
                       static_cast<std::size_t>(tree.nodes[static_cast<std::size_t>(idx)].size));
}

struct IsolationForestModel {
    std::vector<IsolationTree> trees;
    std::size_t subsample = 0;      // psi actually used (capped at n)
    std::size_t dim = 0;
    double contamination = 0.0;
    double offset = 0.0;            // (1 - contamination) quantile of training scores

    // Anomaly score in (0,1): 2^(-E[h(x)] / c(psi)). Higher = more anomalous.
    double score(std::span<const double> row) const {
        if (row.size() != dim) throw Error("isolation forest: dimension mismatch");
        double total = 0.0;
        for (const auto& t : trees) total += path_length(t, row);
        const double mean_path = total / static_cast<double>(trees.size());
        return std::pow(2.0, -mean_path / average_path_length(subsample));
    }

    // Signed decision: offset - score. Negative means anomaly; a row scoring
    // exactly at the offset is normal (strict inequality).
    double decision(std::span<const double> row) const { return offset - score(row); }

    bool is_anomaly(std::span<const double> row) const { return decision(row) < 0.0; }
};

namespace detail {

inline std::int32_t grow_tree(IsolationTree& tree, const std::vector<std::vector<double>>& data,
                              std::vector<std::uint32_t>& idx, std::size_t begin, std::size_t end,
                              int depth, int height_limit, std::mt19937_64& rng) {
    const auto node_index = static_cast<std::int32_t>(tree.nodes.size());
    tree.nodes.emplace_back();
    const std::size_t size = end - begin;
    if (size <= 1 || depth >= height_limit) {
        tree.nodes.back().size = static_cast<std::int32_t>(size);
        return node_index;
    }

    // Pick among features that still vary here; if none do the subsample is
    // fully duplicated and the node goes external.
    const std::size_t dim = data[idx[begin]].size();
    std::vector<std::uint32_t> varying;
    for (std::uint32_t f = 0; f < dim; ++f) {
        const double first = data[idx[begin]][f];
        for (std::size_t i = begin + 1; i < end; ++i) {
            if (data[idx[i]][f] != first) {
                varying.push_back(f);
                break;
            }
        }
    }
    if (varying.empty()) {
        tree.nodes[static_cast<std::size_t>(node_index)].size = static_cast<std::int32_t>(size);
        return node_index;
    }

    const std::uint32_t feature =
        varying[std::uniform_int_distribution<std::size_t>(0, varying.size() - 1)(rng)];
    double lo = data[idx[begin]][feature], hi = lo;
    for (std::size_t i = begin + 1; i < end; ++i) {
        lo = std::min(lo, data[idx[i]][feature]);
        hi = std::max(hi, data[idx[i]][feature]);
    }
    double split = 0.0;
    do {
        split = std::uniform_real_distribution<double>(lo, hi)(rng);
    } while (!(split > lo && split < hi));  // cut strictly between min and max

    const auto mid_it = std::partition(
        idx.begin() + static_cast<std::ptrdiff_t>(begin), idx.begin() + static_cast<std::ptrdiff_t>(end),
        [&](std::uint32_t r) { return data[r][feature] < split; });
    const auto mid = static_cast<std::size_t>(mid_it - idx.begin());

    auto& node = tree.nodes[static_cast<std::size_t>(node_index)];
    node.feature = static_cast<std::int32_t>(feature);
    node.split = split;
    node.size = static_cast<std::int32_t>(size);
    const std::int32_t left = grow_tree(tree, data, idx, begin, mid, depth + 1, height_limit, rng);
    const std::int32_t right = grow_tree(tree, data, idx, mid, end, depth + 1, height_limit, rng);
    auto& node_again = tree.nodes[static_cast<std::size_t>(node_index)];
    node_again.left = left;
    node_again.right = right;
    return node_index;
}

}  // namespace detail

// Builds `trees` isolation trees on independent seeded subsamples (without
// replacement, capped at n) and calibrates the decision offset so that the
// flagged fraction of the training set matches the contamination rate.
// Per-tree RNG streams are derived from (seed, tree index), so the result is
// identical however the tree builds get scheduled.
inline IsolationForestModel fit_isolation_forest(const std::vector<std::vector<double>>& rows,
                                                 double contamination, int n_trees,
                                                 int subsample, std::uint64_t seed) {
    if (rows.size() < 2) throw Error("isolation forest: need at least two rows");
    if (contamination <= 0.0 || contamination > 0.5)
        throw Error("isolation forest: contamination outside (0, 0.5]");
    if (n_trees < 1) throw Error("isolation forest: need at least one tree");
    const std::size_t dim = rows.front().size();
    if (dim == 0) throw Error("isolation forest: rows have no features");
    for (const auto& r : rows) {
        if (r.size() != dim) throw Error("isolation forest: ragged rows");
    }
    bool any_varying = false;
    for (std::size_t f = 0; f < dim && !any_varying; ++f) {
        for (std::size_t i = 1; i < rows.size(); ++i) {
            if (rows[i][f] != rows[0][f]) {
                any_varying = true;
                break;
            }
        }
    }
    if (!any_varying) throw Error("isolation forest: all rows identical");

    IsolationForestModel model;
    model.dim = dim;
    model.contamination = contamination;
    model.subsample = std::min(static_cast<std::size_t>(subsample), rows.size());
    const int height_limit = static_cast<int>(
        std::ceil(std::log2(static_cast<double>(model.subsample))));

    model.trees.resize(static_cast<std::size_t>(n_trees));
    ThreadPool::global().parallel_for(static_cast<std::size_t>(n_trees), [&](std::size_t t) {
        auto rng = make_rng(seed, /*tag=*/0x49464F52 + t);
        // Partial Fisher-Yates: the first `subsample` entries are a uniform
        // draw without replacement.
        std::vector<std::uint32_t> idx(rows.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<std::uint32_t>(i);
        for (std::size_t i = 0; i < model.subsample; ++i) {
            const std::size_t j =
                i + std::uniform_int_distribution<std::size_t>(0, idx.size() - 1 - i)(rng);
            std::swap(idx[i], idx[j]);
        }
        idx.resize(model.subsample);
        model.trees[t].nodes.reserve(2 * model.subsample);
        detail::grow_tree(model.trees[t], rows, idx, 0, idx.size(), 0, height_limit, rng);
    });

    std::vector<double> scores(rows.size());
    ThreadPool::global().parallel_for(
        rows.size(), [&](std::size_t i) { scores[i] = model.score(rows[i]); }, /*grain=*/64);
    model.offset = percentile(scores, 100.0 * (1.0 - contamination));
    return model;
}

}  // namespace laneguard

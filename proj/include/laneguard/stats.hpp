#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "laneguard/core.hpp"

namespace laneguard {

// Percentile with linear interpolation between closest order statistics:
// rank = (n-1) * p/100, value = x[floor] + frac * (x[floor+1] - x[floor]).
// Shared by the threshold calibration and the forest score offset so both
// quantile readings agree.
inline double percentile_sorted(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) throw Error("percentile of empty set");
    if (p < 0.0 || p > 100.0) throw Error("percentile outside [0,100]");
    if (sorted.size() == 1) return sorted.front();
    const double rank = (static_cast<double>(sorted.size()) - 1.0) * p / 100.0;
    const auto lo = static_cast<std::size_t>(rank);
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = rank - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

inline double percentile(std::vector<double> values, double p) {
    std::sort(values.begin(), values.end());
    return percentile_sorted(values, p);
}

// Area under the ROC curve via the rank statistic, ties get average rank.
// scores: higher = more anomalous; labels: true = anomalous.
inline double auc_score(const std::vector<double>& scores, const std::vector<bool>& labels) {
    if (scores.size() != labels.size()) throw Error("auc: size mismatch");
    std::vector<std::size_t> order(scores.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    double pos_rank_sum = 0.0;
    std::size_t n_pos = 0, n_neg = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
        const double avg_rank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
        for (std::size_t k = i; k < j; ++k) {
            if (labels[order[k]]) pos_rank_sum += avg_rank;
        }
        i = j;
    }
    for (bool l : labels) (l ? n_pos : n_neg)++;
    if (n_pos == 0 || n_neg == 0) throw Error("auc needs both classes");
    const double n_pos_d = static_cast<double>(n_pos);
    return (pos_rank_sum - n_pos_d * (n_pos_d + 1.0) / 2.0) /
           (n_pos_d * static_cast<double>(n_neg));
}

}  // namespace laneguard

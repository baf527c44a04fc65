#pragma once

// Independent oracles shared by the unit and acceptance suites. These stay
// deliberately naive: fresh Morlet evaluation in a double loop with
// compensated summation, and a plain recursive tree walk, so they cannot
// inherit a bug from the production code paths they check.

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "laneguard/iforest.hpp"
#include "laneguard/wavelet.hpp"

namespace oracles {

inline std::vector<double> cwt(const std::vector<double>& signal, int n_scales,
                               double period_min, double period_max, double omega0) {
    using laneguard::kTimeBins;
    double mean = 0.0;
    for (double v : signal) mean += v;
    mean /= static_cast<double>(signal.size());
    std::vector<double> padded(kTimeBins, 0.0);
    for (std::size_t i = 0; i < signal.size(); ++i) padded[i] = signal[i] - mean;

    std::vector<double> out(static_cast<std::size_t>(n_scales) * kTimeBins, 0.0);
    for (int s = 0; s < n_scales; ++s) {
        const double frac = static_cast<double>(s) / static_cast<double>(n_scales - 1);
        const double period = period_min * std::pow(period_max / period_min, frac);
        const double scale = omega0 * period / (2.0 * std::numbers::pi);
        for (int b = 0; b < kTimeBins; ++b) {
            double acc = 0.0, comp = 0.0;  // Kahan
            for (int t = 0; t < kTimeBins; ++t) {
                const double u = (static_cast<double>(t) - static_cast<double>(b)) / scale;
                const double psi = std::exp(-0.5 * u * u) * std::cos(omega0 * u);
                const double term = padded[static_cast<std::size_t>(t)] * psi - comp;
                const double next = acc + term;
                comp = (next - acc) - term;
                acc = next;
            }
            out[static_cast<std::size_t>(s) * kTimeBins + b] = std::abs(acc / std::sqrt(scale));
        }
    }
    return out;
}

// Max |impl - oracle| normalized by the oracle's largest magnitude.
inline double spectrogram_rel_gap(const laneguard::Spectrogram& impl,
                                  const std::vector<double>& oracle) {
    double scale = 0.0;
    for (double v : oracle) scale = std::max(scale, std::abs(v));
    if (!(scale > 0.0)) return 1.0;
    double worst = 0.0;
    for (std::size_t i = 0; i < oracle.size(); ++i) {
        worst = std::max(worst, std::abs(impl.values[i] - oracle[i]) / scale);
    }
    return worst;
}

inline double path_length(const laneguard::IsolationTree& tree, std::int32_t node,
                          std::span<const double> row, double depth) {
    const auto& nd = tree.nodes[static_cast<std::size_t>(node)];
    if (nd.feature < 0) {
        if (nd.size <= 1) return depth;
        const double n = nd.size;
        return depth + 2.0 * (std::log(n - 1.0) + 0.5772156649) - 2.0 * (n - 1.0) / n;
    }
    return path_length(tree, row[static_cast<std::size_t>(nd.feature)] < nd.split ? nd.left
                                                                                  : nd.right,
                       row, depth + 1.0);
}

inline std::vector<std::vector<double>> gaussian_cloud(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < n; ++i) rows.push_back({g(rng), g(rng)});
    return rows;
}

}  // namespace oracles

#pragma once

// Central finite-difference gradient checking at 64-bit precision. Layers
// are exercised through a scalar probe loss L = sum(c .* y) with fixed
// random c, so dL/dy = c and the analytic parameter/input gradients come
// straight from one backward pass.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "laneguard/nn.hpp"

namespace gradcheck {

using laneguard::nn::Tensor4;

inline double rel_err(double analytic, double numeric) {
    const double denom = std::max({std::fabs(analytic), std::fabs(numeric), 1e-8});
    return std::fabs(analytic - numeric) / denom;
}

// Pass criterion |a - n| <= atol + rtol * max(|a|, |n|), reported as the
// excess ratio (< 1 passes). The absolute floor absorbs finite-difference
// cancellation noise on gradients that are mathematically zero, e.g. a conv
// bias feeding straight into train-mode batch normalization.
inline double excess(double analytic, double numeric, double atol, double rtol) {
    const double tol = atol + rtol * std::max(std::fabs(analytic), std::fabs(numeric));
    return std::fabs(analytic - numeric) / tol;
}

inline void fill_random(std::vector<double>& v, std::mt19937_64& rng, double scale = 1.0) {
    std::uniform_real_distribution<double> dist(-scale, scale);
    for (auto& x : v) x = dist(rng);
}

inline Tensor4<double> random_tensor(int n, int c, int h, int w, std::mt19937_64& rng,
                                     double scale = 1.0) {
    Tensor4<double> t(n, c, h, w);
    fill_random(t.v, rng, scale);
    return t;
}

// Worst excess ratio between analytic gradients and central differences of
// `loss` over the coordinates listed in `coords` of `storage`; < 1 means
// every coordinate is within rtol relative (atol absolute) agreement.
inline double check_coords(std::vector<double>& storage, const std::vector<double>& analytic,
                           const std::vector<std::size_t>& coords,
                           const std::function<double()>& loss, double h = 1e-5,
                           double atol = 1e-7, double rtol = 1e-4) {
    double worst = 0.0;
    for (std::size_t i : coords) {
        const double saved = storage[i];
        storage[i] = saved + h;
        const double up = loss();
        storage[i] = saved - h;
        const double down = loss();
        storage[i] = saved;
        const double numeric = (up - down) / (2.0 * h);
        worst = std::max(worst, excess(analytic[i], numeric, atol, rtol));
    }
    return worst;
}

inline std::vector<std::size_t> all_coords(std::size_t n) {
    std::vector<std::size_t> c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = i;
    return c;
}

inline std::vector<std::size_t> sample_coords(std::size_t n, std::size_t want,
                                              std::mt19937_64& rng) {
    if (want >= n) return all_coords(n);
    std::vector<std::size_t> c;
    std::uniform_int_distribution<std::size_t> dist(0, n - 1);
    while (c.size() < want) {
        const auto idx = dist(rng);
        bool dup = false;
        for (auto existing : c) dup = dup || existing == idx;
        if (!dup) c.push_back(idx);
    }
    return c;
}

}  // namespace gradcheck

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <ostream>
#include <span>
#include <vector>

#include "laneguard/core.hpp"

namespace laneguard {

constexpr int kTimeBins = 32;  // 30 samples zero-padded so stride-2 halvings divide evenly

// Scale x time magnitude matrix. Produced raw by the transform, then
// divided by the training-corpus global maximum (and clipped at 1) to give
// the normalized spectrogram the autoencoder consumes.
struct Spectrogram {
    LaneKey key;
    std::int64_t window_start = 0;
    int hour_of_day = 0;
    int n_scales = 0;
    std::vector<double> periods;  // per-row wavelet period, in samples
    std::vector<double> values;   // row-major, n_scales x kTimeBins

    double at(int scale, int time) const { return values[static_cast<std::size_t>(scale) * kTimeBins + time]; }
    double& at(int scale, int time) { return values[static_cast<std::size_t>(scale) * kTimeBins + time]; }

    double max_value() const {
        double m = 0.0;
        for (double v : values) m = std::max(m, v);
        return m;
    }

    void write_text(std::ostream& out) const {
        for (int s = 0; s < n_scales; ++s) {
            for (int b = 0; b < kTimeBins; ++b) out << (b ? " " : "") << at(s, b);
            out << "\n";
        }
    }
};

struct NormalizationConstant {
    double global_max = 0.0;
};

// Continuous wavelet transform of a 30-sample count vector against a real
// Morlet mother wavelet (cosine-modulated Gaussian, centre frequency omega0
// rad/sample). Scales are log-spaced so that wavelet periods cover
// [period_min, period_max] samples; the scale for period P is
// a = omega0 * P / (2*pi), the peak-response relation of the Morlet.
//
// The signal is mean-subtracted (a constant input therefore maps to an
// exactly zero matrix), zero-padded to 32 samples, and correlated with the
// scaled wavelet by unit-step discretization of the transform integral:
//   C(a, b) = a^{-1/2} * sum_t x[t] * psi((t - b) / a).
// Magnitudes are returned; boundary columns are kept for shape stability.
class CwtAnalyzer {
  public:
    CwtAnalyzer(int n_scales = 32, double period_min = 2.0, double period_max = 30.0,
                double omega0 = 5.0)
        : n_scales_(n_scales), omega0_(omega0) {
        if (n_scales < 2) throw Error("cwt: need at least two scales");
        if (period_min <= 0.0 || period_max <= period_min) throw Error("cwt: bad period range");
        periods_.resize(static_cast<std::size_t>(n_scales));
        scales_.resize(static_cast<std::size_t>(n_scales));
        const double ratio = period_max / period_min;
        for (int i = 0; i < n_scales; ++i) {
            const double frac = static_cast<double>(i) / static_cast<double>(n_scales - 1);
            periods_[static_cast<std::size_t>(i)] = period_min * std::pow(ratio, frac);
            scales_[static_cast<std::size_t>(i)] =
                omega0 * periods_[static_cast<std::size_t>(i)] / (2.0 * std::numbers::pi);
        }
        // One kernel row per scale: psi(u / a) for every lag u the padded
        // window can realize.
        kernels_.assign(static_cast<std::size_t>(n_scales) * (2 * kTimeBins - 1), 0.0);
        for (int s = 0; s < n_scales; ++s) {
            const double a = scales_[static_cast<std::size_t>(s)];
            for (int u = -(kTimeBins - 1); u <= kTimeBins - 1; ++u) {
                kernel_at(s, u) = mother(static_cast<double>(u) / a);
            }
        }
    }

    double mother(double t) const { return std::exp(-0.5 * t * t) * std::cos(omega0_ * t); }

    int n_scales() const { return n_scales_; }
    const std::vector<double>& periods() const { return periods_; }
    const std::vector<double>& scales() const { return scales_; }

    Spectrogram transform(std::span<const double> signal) const {
        if (signal.size() != kWindowLength)
            throw Error("cwt: signal must have exactly 30 samples");
        double mean = 0.0;
        for (double v : signal) mean += v;
        mean /= static_cast<double>(signal.size());
        std::array<double, kTimeBins> x{};
        for (std::size_t i = 0; i < signal.size(); ++i) x[i] = signal[i] - mean;

        Spectrogram out;
        out.n_scales = n_scales_;
        out.periods = periods_;
        out.values.assign(static_cast<std::size_t>(n_scales_) * kTimeBins, 0.0);
        for (int s = 0; s < n_scales_; ++s) {
            const double norm = 1.0 / std::sqrt(scales_[static_cast<std::size_t>(s)]);
            for (int b = 0; b < kTimeBins; ++b) {
                double acc = 0.0;
                for (int t = 0; t < kTimeBins; ++t) {
                    acc += x[static_cast<std::size_t>(t)] * kernel_at(s, t - b);
                }
                out.at(s, b) = std::abs(norm * acc);
            }
        }
        return out;
    }

    Spectrogram transform(const LaneWindow& window) const {
        const auto counts = window.counts();
        Spectrogram spec = transform(std::span<const double>(counts));
        spec.key = window.key;
        spec.window_start = window.start;
        spec.hour_of_day = window.hour_of_day;
        return spec;
    }

  private:
    double& kernel_at(int scale, int lag) {
        return kernels_[static_cast<std::size_t>(scale) * (2 * kTimeBins - 1) +
                        static_cast<std::size_t>(lag + kTimeBins - 1)];
    }
    double kernel_at(int scale, int lag) const {
        return kernels_[static_cast<std::size_t>(scale) * (2 * kTimeBins - 1) +
                        static_cast<std::size_t>(lag + kTimeBins - 1)];
    }

    int n_scales_;
    double omega0_;
    std::vector<double> periods_;
    std::vector<double> scales_;
    std::vector<double> kernels_;
};

// Global maximum magnitude over a training corpus; the denominator that maps
// spectrograms into [0,1].
inline NormalizationConstant fit_normalizer(const std::vector<Spectrogram>& corpus) {
    double m = 0.0;
    for (const auto& s : corpus) m = std::max(m, s.max_value());
    if (!(m > 0.0)) throw Error("normalizer: corpus has no nonzero coefficient");
    return NormalizationConstant{m};
}

// Entrywise division; values above 1 (possible on held-out data) clip to 1.
inline Spectrogram normalize(Spectrogram raw, const NormalizationConstant& c) {
    if (!(c.global_max > 0.0)) throw Error("normalizer constant must be positive");
    for (auto& v : raw.values) v = std::min(v / c.global_max, 1.0);
    return raw;
}

}  // namespace laneguard

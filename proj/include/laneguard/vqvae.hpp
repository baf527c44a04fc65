#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <vector>

#include "laneguard/core.hpp"
#include "laneguard/nn.hpp"
#include "laneguard/rng.hpp"
#include "laneguard/wavelet.hpp"

namespace laneguard {

// Vector-quantized autoencoder over 1x32x32 spectrograms.
//
//   encoder   conv 1->64 k4 s2 p1, BN, ReLU; conv 64->32 k4 s2 p1, BN, ReLU
//   latent    1x1 conv 32->32, nearest-codebook quantization (K=64, dim 32),
//             1x1 conv 32->8
//   decoder   deconv 8->64 k4 s2 p1, BN, ReLU; deconv 64->1 k4 s2 p1, tanh
//
// Spectrograms in [0,1] are mapped to [-1,1] (x' = 2x - 1) before the
// encoder so the tanh output can represent them; reconstruction error is
// measured in the mapped space.
//
// Loss = mse(x', recon) + mse(sg[z_e], e_k) + beta * mse(z_e, sg[e_k]),
// each term mean-reduced over its elements. Gradients follow the
// straight-through convention: the decoder-input gradient is copied past the
// quantizer onto z_e; the codebook moves only through its own term.

constexpr int kCodebookSize = 64;
constexpr int kEmbedDim = 32;
constexpr int kLatentGrid = 8;  // spatial positions per axis after the encoder

// How the latent is produced in a forward pass. Nearest is the real model;
// Identity bypasses the codebook; FrozenOffset adds a constant offset tensor
// to z_e, which makes the straight-through path an ordinary differentiable
// function for the finite-difference harness.
enum class QuantMode { Nearest, Identity, FrozenOffset };

// Nearest codebook entry by Euclidean distance, ties to the lowest index.
template <typename T>
int quantize_index(std::span<const T> z, std::span<const T> codebook) {
    const std::size_t dim = z.size();
    const std::size_t k = codebook.size() / dim;
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < k; ++j) {
        double d = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            const double diff = static_cast<double>(z[i]) - static_cast<double>(codebook[j * dim + i]);
            d += diff * diff;
        }
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(j);
        }
    }
    return best;
}

template <typename T>
struct LossTerms {
    T total{};
    T reconstruction{};
    T codebook{};
    T commitment{};  // already weighted by beta
};

// The three-term loss over raw tensors: mean-squared reconstruction error
// plus codebook and (beta-weighted) commitment terms, both the mean squared
// gap between z_e and its quantized value. Total = recon + codebook + commit.
template <typename T>
LossTerms<T> vqvae_loss(const nn::Tensor4<T>& x, const nn::Tensor4<T>& recon,
                        const nn::Tensor4<T>& z_e, const nn::Tensor4<T>& z_q, T beta) {
    if (!x.same_shape(recon)) throw Error("vqvae loss: input/reconstruction shape mismatch");
    if (!z_e.same_shape(z_q)) throw Error("vqvae loss: latent shape mismatch");
    LossTerms<T> loss;
    double r = 0.0;
    for (std::size_t i = 0; i < x.v.size(); ++i) {
        const double d = static_cast<double>(recon.v[i]) - static_cast<double>(x.v[i]);
        r += d * d;
    }
    loss.reconstruction = static_cast<T>(r / static_cast<double>(x.v.size()));
    double q = 0.0;
    for (std::size_t i = 0; i < z_e.v.size(); ++i) {
        const double d = static_cast<double>(z_e.v[i]) - static_cast<double>(z_q.v[i]);
        q += d * d;
    }
    q /= static_cast<double>(z_e.size());
    loss.codebook = static_cast<T>(q);
    loss.commitment = beta * static_cast<T>(q);
    loss.total = loss.reconstruction + loss.codebook + loss.commitment;
    return loss;
}

template <typename T>
struct ForwardResult {
    nn::Tensor4<T> reconstruction;       // (n,1,32,32), tanh range
    nn::Tensor4<T> z_e;                  // (n,32,8,8)
    nn::Tensor4<T> z_q;                  // (n,32,8,8)
    std::vector<int> assignments;        // n*8*8 codebook indices (Nearest mode)
    LossTerms<T> loss;
};

template <typename T>
class VqVae {
  public:
    explicit VqVae(std::uint64_t seed, T beta = T(0.25))
        : beta_(beta),
          rng_(derive_seed(seed, /*tag=*/0x56515641)),
          enc_conv1_(1, 64, 4, 2, 1, rng_),
          enc_bn1_(64),
          enc_conv2_(64, 32, 4, 2, 1, rng_),
          enc_bn2_(32),
          pre_quant_(32, kEmbedDim, 1, 1, 0, rng_),
          post_quant_(kEmbedDim, 8, 1, 1, 0, rng_),
          dec_deconv1_(8, 64, 4, 2, 1, rng_),
          dec_bn1_(64),
          dec_deconv2_(64, 1, 4, 2, 1, rng_) {
        codebook_.resize(static_cast<std::size_t>(kCodebookSize) * kEmbedDim);
        std::uniform_real_distribution<double> dist(-1.0 / kCodebookSize, 1.0 / kCodebookSize);
        for (auto& v : codebook_.v) v = static_cast<T>(dist(rng_));
    }

    T beta() const { return beta_; }

    std::vector<nn::ParamRef<T>> params() {
        std::vector<nn::ParamRef<T>> out;
        enc_conv1_.collect_params(out, "enc.conv1");
        enc_bn1_.collect_params(out, "enc.bn1");
        enc_conv2_.collect_params(out, "enc.conv2");
        enc_bn2_.collect_params(out, "enc.bn2");
        pre_quant_.collect_params(out, "pre_quant");
        out.push_back({&codebook_, false, "codebook"});
        post_quant_.collect_params(out, "post_quant");
        dec_deconv1_.collect_params(out, "dec.deconv1");
        dec_bn1_.collect_params(out, "dec.bn1");
        dec_deconv2_.collect_params(out, "dec.deconv2");
        return out;
    }

    nn::Param<T>& codebook() { return codebook_; }

    // Seeds the codebook with latent vectors drawn from an encoder pass, so
    // quantization starts near the data manifold instead of in a tiny ball
    // around the origin. Plain SGD cannot close a large initial codebook gap
    // within the epoch budget, so the training loop calls this once up
    // front.
    void init_codebook_from(const nn::Tensor4<T>& z_e, std::mt19937_64& rng) {
        const int grid = kLatentGrid * kLatentGrid;
        const std::size_t positions = static_cast<std::size_t>(z_e.n) * grid;
        std::uniform_int_distribution<std::size_t> pick(0, positions - 1);
        for (int k = 0; k < kCodebookSize; ++k) {
            const std::size_t pos = pick(rng);
            const auto ni = static_cast<int>(pos / static_cast<std::size_t>(grid));
            const auto p = static_cast<int>(pos % static_cast<std::size_t>(grid));
            for (int c = 0; c < kEmbedDim; ++c) {
                codebook_.v[static_cast<std::size_t>(k) * kEmbedDim + c] =
                    z_e.v[(static_cast<std::size_t>(ni) * kEmbedDim + c) * grid + p];
            }
        }
    }
    std::vector<double>& bn_running(int which_mean_0_to_5) {
        switch (which_mean_0_to_5) {
            case 0: return enc_bn1_.running_mean();
            case 1: return enc_bn1_.running_var();
            case 2: return enc_bn2_.running_mean();
            case 3: return enc_bn2_.running_var();
            case 4: return dec_bn1_.running_mean();
            case 5: return dec_bn1_.running_var();
        }
        throw Error("bad running-stat index");
    }

    void zero_grad() {
        for (auto& p : params()) p.param->zero_grad();
    }

    // Fix the quantizer (and the ReLU active sets) at a reference forward.
    // FrozenOffset mode then runs
    //   z_q(theta) = z_e(theta) + (z_q_ref - z_e_ref)
    // with the commitment target and codebook term held at their reference
    // values, which is exactly the function whose true gradient the
    // straight-through estimator computes. The finite-difference harness
    // checks against this smooth surrogate. Call right after the reference
    // forward so the ReLU masks captured are the reference ones.
    void freeze_quantization(const ForwardResult<T>& ref) {
        frozen_offset_ = ref.z_q;
        for (std::size_t i = 0; i < frozen_offset_.v.size(); ++i)
            frozen_offset_.v[i] -= ref.z_e.v[i];
        frozen_target_ = ref.z_q;
        frozen_assignments_ = ref.assignments;
        frozen_codebook_term_ = ref.loss.codebook;
    }

    ForwardResult<T> forward(const nn::Tensor4<T>& x, bool train,
                             QuantMode mode = QuantMode::Nearest) {
        if (x.c != 1 || x.h != kTimeBins || x.w != kTimeBins)
            throw Error("vqvae: input must be n x 1 x 32 x 32");
        const bool pin = mode == QuantMode::FrozenOffset;
        enc_relu1_.set_frozen(pin);
        enc_relu2_.set_frozen(pin);
        dec_relu1_.set_frozen(pin);
        ForwardResult<T> r;
        auto h = enc_conv1_.forward(x, train);
        h = enc_bn1_.forward(std::move(h), train);
        h = enc_relu1_.forward(std::move(h), train);
        h = enc_conv2_.forward(std::move(h), train);
        h = enc_bn2_.forward(std::move(h), train);
        h = enc_relu2_.forward(std::move(h), train);
        r.z_e = pre_quant_.forward(std::move(h), train);

        r.z_q = nn::Tensor4<T>(r.z_e.n, kEmbedDim, kLatentGrid, kLatentGrid);
        switch (mode) {
            case QuantMode::Nearest: {
                r.assignments.resize(static_cast<std::size_t>(r.z_e.n) * kLatentGrid * kLatentGrid);
                quantize_tensor(r.z_e, r.z_q, r.assignments);
                break;
            }
            case QuantMode::Identity:
                r.z_q = r.z_e;
                break;
            case QuantMode::FrozenOffset: {
                if (!frozen_offset_.same_shape(r.z_e))
                    throw Error("vqvae: no frozen offset of matching shape");
                r.z_q = r.z_e;
                for (std::size_t i = 0; i < r.z_q.v.size(); ++i)
                    r.z_q.v[i] += frozen_offset_.v[i];
                r.assignments = frozen_assignments_;
                break;
            }
        }

        auto d = post_quant_.forward(r.z_q, train);
        d = dec_deconv1_.forward(std::move(d), train);
        d = dec_bn1_.forward(std::move(d), train);
        d = dec_relu1_.forward(std::move(d), train);
        d = dec_deconv2_.forward(std::move(d), train);
        r.reconstruction = dec_tanh_.forward(std::move(d), train);

        r.loss = compute_loss(x, r, mode);
        return r;
    }

    // Accumulates parameter gradients for the batch in `fwd`; x is the same
    // tensor the forward saw.
    void backward(const nn::Tensor4<T>& x, const ForwardResult<T>& fwd, QuantMode mode) {
        const T n_px = static_cast<T>(fwd.reconstruction.size());
        nn::Tensor4<T> g(fwd.reconstruction.n, 1, kTimeBins, kTimeBins);
        for (std::size_t i = 0; i < g.v.size(); ++i) {
            g.v[i] = T(2) * (fwd.reconstruction.v[i] - x.v[i]) / n_px;
        }
        auto gd = dec_tanh_.backward(g);
        gd = dec_deconv2_.backward(gd);
        gd = dec_relu1_.backward(gd);
        gd = dec_bn1_.backward(gd);
        gd = dec_deconv1_.backward(gd);
        auto gz_q = post_quant_.backward(gd);

        // Straight-through: decoder-input gradient lands on z_e unchanged.
        nn::Tensor4<T> gz_e = gz_q;
        const T n_lat = static_cast<T>(fwd.z_e.size());
        if (mode != QuantMode::Identity) {
            // Commitment pulls z_e toward its codebook entry (the frozen
            // target when the quantizer is pinned).
            const auto& target = mode == QuantMode::FrozenOffset ? frozen_target_ : fwd.z_q;
            for (std::size_t i = 0; i < gz_e.v.size(); ++i) {
                gz_e.v[i] += beta_ * T(2) * (fwd.z_e.v[i] - target.v[i]) / n_lat;
            }
        }
        if (mode == QuantMode::Nearest) {
            accumulate_codebook_grad(fwd, n_lat);
        }

        auto ge = pre_quant_.backward(gz_e);
        ge = enc_relu2_.backward(ge);
        ge = enc_bn2_.backward(ge);
        ge = enc_conv2_.backward(ge);
        ge = enc_relu1_.backward(ge);
        ge = enc_bn1_.backward(ge);
        enc_conv1_.backward(ge);
    }

    // Mean squared error between input and reconstruction, in tanh space.
    double reconstruction_error(const Spectrogram& spec) {
        const Spectrogram* ptr = &spec;
        nn::Tensor4<T> x = to_input_tensor<T>(std::span<const Spectrogram* const>(&ptr, 1));
        auto r = forward(x, /*train=*/false);
        double acc = 0.0;
        for (std::size_t i = 0; i < x.v.size(); ++i) {
            const double d = static_cast<double>(r.reconstruction.v[i]) -
                             static_cast<double>(x.v[i]);
            acc += d * d;
        }
        return acc / static_cast<double>(x.v.size());
    }

    std::vector<double> reconstruction_errors(const std::vector<Spectrogram>& specs,
                                              int batch = 128) {
        std::vector<double> out;
        out.reserve(specs.size());
        for (std::size_t base = 0; base < specs.size(); base += static_cast<std::size_t>(batch)) {
            const std::size_t n = std::min(static_cast<std::size_t>(batch), specs.size() - base);
            std::vector<const Spectrogram*> ptrs(n);
            for (std::size_t i = 0; i < n; ++i) ptrs[i] = &specs[base + i];
            nn::Tensor4<T> x = to_input_tensor<T>(ptrs);
            auto r = forward(x, /*train=*/false);
            const std::size_t px = static_cast<std::size_t>(kTimeBins) * kTimeBins;
            for (std::size_t i = 0; i < n; ++i) {
                double acc = 0.0;
                for (std::size_t p = 0; p < px; ++p) {
                    const double d = static_cast<double>(r.reconstruction.v[i * px + p]) -
                                     static_cast<double>(x.v[i * px + p]);
                    acc += d * d;
                }
                out.push_back(acc / static_cast<double>(px));
            }
        }
        return out;
    }

    template <typename U>
    static nn::Tensor4<U> to_input_tensor(std::span<const Spectrogram* const> specs) {
        nn::Tensor4<U> x(static_cast<int>(specs.size()), 1, kTimeBins, kTimeBins);
        const std::size_t px = static_cast<std::size_t>(kTimeBins) * kTimeBins;
        for (std::size_t i = 0; i < specs.size(); ++i) {
            if (specs[i]->n_scales != kTimeBins)
                throw Error("vqvae: spectrogram must have 32 scales");
            for (std::size_t p = 0; p < px; ++p) {
                x.v[i * px + p] = static_cast<U>(2.0 * specs[i]->values[p] - 1.0);
            }
        }
        return x;
    }

  private:
    LossTerms<T> compute_loss(const nn::Tensor4<T>& x, const ForwardResult<T>& r,
                              QuantMode mode) const {
        if (mode != QuantMode::FrozenOffset) {
            // Identity mode has z_q == z_e, so both latent terms vanish.
            return vqvae_loss(x, r.reconstruction, r.z_e, r.z_q, beta_);
        }
        // Pinned quantizer: commitment measures distance to the frozen
        // target, the codebook term is a constant.
        LossTerms<T> loss = vqvae_loss(x, r.reconstruction, r.z_e, frozen_target_, beta_);
        loss.codebook = frozen_codebook_term_;
        loss.total = loss.reconstruction + loss.codebook + loss.commitment;
        return loss;
    }

    void quantize_tensor(const nn::Tensor4<T>& z_e, nn::Tensor4<T>& z_q,
                         std::vector<int>& assignments) const {
        const int grid = kLatentGrid * kLatentGrid;
        std::array<T, kEmbedDim> vec;
        for (int ni = 0; ni < z_e.n; ++ni) {
            for (int p = 0; p < grid; ++p) {
                for (int c = 0; c < kEmbedDim; ++c) {
                    vec[static_cast<std::size_t>(c)] = z_e.v[(static_cast<std::size_t>(ni) * kEmbedDim + c) * grid + p];
                }
                const int k = quantize_index<T>(vec, codebook_.v);
                assignments[static_cast<std::size_t>(ni) * grid + p] = k;
                for (int c = 0; c < kEmbedDim; ++c) {
                    z_q.v[(static_cast<std::size_t>(ni) * kEmbedDim + c) * grid + p] =
                        codebook_.v[static_cast<std::size_t>(k) * kEmbedDim + c];
                }
            }
        }
    }

    void accumulate_codebook_grad(const ForwardResult<T>& fwd, T n_lat) {
        const int grid = kLatentGrid * kLatentGrid;
        for (int ni = 0; ni < fwd.z_e.n; ++ni) {
            for (int p = 0; p < grid; ++p) {
                const int k = fwd.assignments[static_cast<std::size_t>(ni) * grid + p];
                for (int c = 0; c < kEmbedDim; ++c) {
                    const std::size_t zi = (static_cast<std::size_t>(ni) * kEmbedDim + c) * grid + p;
                    codebook_.g[static_cast<std::size_t>(k) * kEmbedDim + c] +=
                        T(2) * (fwd.z_q.v[zi] - fwd.z_e.v[zi]) / n_lat;
                }
            }
        }
    }

    T beta_;
    std::mt19937_64 rng_;
    nn::Conv2d<T> enc_conv1_;
    nn::BatchNorm2d<T> enc_bn1_;
    nn::ReLU<T> enc_relu1_;
    nn::Conv2d<T> enc_conv2_;
    nn::BatchNorm2d<T> enc_bn2_;
    nn::ReLU<T> enc_relu2_;
    nn::Conv2d<T> pre_quant_;
    nn::Param<T> codebook_;
    nn::Conv2d<T> post_quant_;
    nn::ConvTranspose2d<T> dec_deconv1_;
    nn::BatchNorm2d<T> dec_bn1_;
    nn::ReLU<T> dec_relu1_;
    nn::ConvTranspose2d<T> dec_deconv2_;
    nn::Tanh<T> dec_tanh_;
    nn::Tensor4<T> frozen_offset_;
    nn::Tensor4<T> frozen_target_;
    std::vector<int> frozen_assignments_;
    T frozen_codebook_term_{};
};

struct TrainConfig {
    double learning_rate = 1e-3;
    double weight_decay = 1e-5;
    int batch_size = 128;
    int max_epochs = 150;
    int patience = 10;
    double min_delta = 1e-5;
    double beta = 0.25;
    std::uint64_t seed = 42;
};

struct TrainReport {
    std::vector<double> train_loss;  // one entry per completed epoch
    std::vector<double> val_loss;
    int stopping_epoch = 0;          // 1-based count of epochs run
    int best_epoch = 0;              // epoch whose weights were kept
    std::map<TimeOfDayGroup, std::vector<double>> training_errors;
};

// Validation-loss early stopping: stop after `patience` epochs without an
// improvement of more than min_delta over the best seen value.
class EarlyStopper {
  public:
    EarlyStopper(int patience, double min_delta) : patience_(patience), min_delta_(min_delta) {}

    // Returns true when training should stop after this epoch. improved()
    // reports whether this epoch became the new best.
    bool observe(double val_loss) {
        ++epoch_;
        improved_ = val_loss < best_ - min_delta_;
        if (improved_) {
            best_ = val_loss;
            best_epoch_ = epoch_;
            return false;
        }
        return epoch_ - best_epoch_ >= patience_;
    }

    bool improved() const { return improved_; }
    int best_epoch() const { return best_epoch_; }
    int epoch() const { return epoch_; }

  private:
    int patience_;
    double min_delta_;
    int epoch_ = 0;
    int best_epoch_ = 0;
    bool improved_ = false;
    double best_ = std::numeric_limits<double>::infinity();
};

// SGD training with early stopping on validation loss: stop once `patience`
// epochs pass without the best value improving by more than min_delta, then
// restore the best-epoch weights. Throws if the loss turns non-finite.
inline std::pair<VqVae<float>, TrainReport> train_vqvae(
    const std::vector<Spectrogram>& train_specs, const std::vector<Spectrogram>& val_specs,
    const TrainConfig& cfg) {
    if (train_specs.empty()) throw Error("vqvae train: empty training set");
    VqVae<float> model(cfg.seed, static_cast<float>(cfg.beta));
    auto params = model.params();
    TrainReport report;

    const auto eval_loss = [&](const std::vector<Spectrogram>& specs) {
        if (specs.empty()) return 0.0;
        double total = 0.0;
        std::size_t count = 0;
        for (std::size_t base = 0; base < specs.size();
             base += static_cast<std::size_t>(cfg.batch_size)) {
            const std::size_t n =
                std::min(static_cast<std::size_t>(cfg.batch_size), specs.size() - base);
            std::vector<const Spectrogram*> ptrs(n);
            for (std::size_t i = 0; i < n; ++i) ptrs[i] = &specs[base + i];
            auto x = VqVae<float>::to_input_tensor<float>(ptrs);
            auto r = model.forward(x, /*train=*/false);
            total += static_cast<double>(r.loss.total) * static_cast<double>(n);
            count += n;
        }
        return total / static_cast<double>(count);
    };

    // Data-driven codebook start: sample latent vectors from an untrained
    // encoder pass over the leading windows.
    {
        const std::size_t n0 =
            std::min(train_specs.size(), static_cast<std::size_t>(cfg.batch_size));
        std::vector<const Spectrogram*> ptrs(n0);
        for (std::size_t i = 0; i < n0; ++i) ptrs[i] = &train_specs[i];
        auto x0 = VqVae<float>::to_input_tensor<float>(ptrs);
        auto probe = model.forward(x0, /*train=*/n0 >= 2);
        auto init_rng = make_rng(cfg.seed, /*tag=*/0x434F4445);
        model.init_codebook_from(probe.z_e, init_rng);
    }

    std::vector<std::size_t> order(train_specs.size());
    std::iota(order.begin(), order.end(), 0);

    EarlyStopper stopper(cfg.patience, cfg.min_delta);
    std::vector<std::vector<float>> best_weights;
    const auto snapshot = [&] {
        best_weights.clear();
        for (auto& p : params) best_weights.push_back(p.param->v);
    };

    for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        auto rng = make_rng(cfg.seed, /*tag=*/0x45504F00ULL + static_cast<std::uint64_t>(epoch));
        std::shuffle(order.begin(), order.end(), rng);

        double epoch_loss = 0.0;
        std::size_t seen = 0;
        for (std::size_t base = 0; base < order.size();
             base += static_cast<std::size_t>(cfg.batch_size)) {
            const std::size_t n =
                std::min(static_cast<std::size_t>(cfg.batch_size), order.size() - base);
            if (n < 2) break;  // batch norm needs at least two samples
            std::vector<const Spectrogram*> ptrs(n);
            for (std::size_t i = 0; i < n; ++i) ptrs[i] = &train_specs[order[base + i]];
            auto x = VqVae<float>::to_input_tensor<float>(ptrs);
            model.zero_grad();
            auto r = model.forward(x, /*train=*/true);
            if (!std::isfinite(static_cast<double>(r.loss.total))) {
                std::ostringstream msg;
                msg << "vqvae train diverged at epoch " << epoch << " (recon="
                    << r.loss.reconstruction << ", codebook=" << r.loss.codebook
                    << ", commit=" << r.loss.commitment << ")";
                throw Error(msg.str());
            }
            model.backward(x, r, QuantMode::Nearest);
            nn::sgd_step(params, static_cast<float>(cfg.learning_rate),
                         static_cast<float>(cfg.weight_decay));
            epoch_loss += static_cast<double>(r.loss.total) * static_cast<double>(n);
            seen += n;
        }
        report.train_loss.push_back(epoch_loss / static_cast<double>(seen));
        const double val = val_specs.empty() ? report.train_loss.back() : eval_loss(val_specs);
        report.val_loss.push_back(val);
        report.stopping_epoch = epoch;

        const bool stop = stopper.observe(val);
        if (stopper.improved()) {
            report.best_epoch = epoch;
            snapshot();
        }
        if (stop) break;
    }

    if (!best_weights.empty()) {
        for (std::size_t i = 0; i < params.size(); ++i) params[i].param->v = best_weights[i];
    }

    // Threshold-source errors: recomputed with the final weights in eval
    // mode, grouped by each window's time of day.
    auto errors = model.reconstruction_errors(train_specs, cfg.batch_size);
    for (std::size_t i = 0; i < train_specs.size(); ++i) {
        report.training_errors[hour_group(train_specs[i].hour_of_day)].push_back(errors[i]);
    }
    return {std::move(model), std::move(report)};
}

}  // namespace laneguard

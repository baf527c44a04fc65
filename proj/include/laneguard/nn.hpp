#pragma once

#include <cmath>
#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "laneguard/core.hpp"
#include "laneguard/parallel.hpp"

// Dense NCHW tensor kernel with explicit paired forward/backward passes for
// the handful of layer types the autoencoder needs. No autodiff tape: the
// architecture is fixed, so each layer caches what its own backward needs.
//
// Scalar type is a template parameter: float for training, double for the
// finite-difference gradient checks.
//
// Determinism contract: batch work is split into fixed 16-sample chunks and
// per-chunk weight-gradient buffers are reduced serially in chunk order, so
// results do not depend on thread count or scheduling.

namespace laneguard::nn {

constexpr std::size_t kBatchChunk = 16;

template <typename T>
struct Tensor4 {
    int n = 0, c = 0, h = 0, w = 0;
    std::vector<T> v;

    Tensor4() = default;
    Tensor4(int n_, int c_, int h_, int w_)
        : n(n_), c(c_), h(h_), w(w_), v(static_cast<std::size_t>(n_) * c_ * h_ * w_, T(0)) {}

    std::size_t size() const { return v.size(); }
    bool same_shape(const Tensor4& o) const {
        return n == o.n && c == o.c && h == o.h && w == o.w;
    }
    T* plane(int ni, int ci) {
        return v.data() + (static_cast<std::size_t>(ni) * c + ci) * h * w;
    }
    const T* plane(int ni, int ci) const {
        return v.data() + (static_cast<std::size_t>(ni) * c + ci) * h * w;
    }
    T& at(int ni, int ci, int y, int x) { return plane(ni, ci)[y * w + x]; }
    T at(int ni, int ci, int y, int x) const { return plane(ni, ci)[y * w + x]; }
};

template <typename T>
struct Param {
    std::vector<T> v;
    std::vector<T> g;

    void resize(std::size_t size) {
        v.assign(size, T(0));
        g.assign(size, T(0));
    }
    void zero_grad() { std::fill(g.begin(), g.end(), T(0)); }
};

template <typename T>
struct ParamRef {
    Param<T>* param = nullptr;
    bool weight_decay = false;
    std::string name;
};

// w <- w - lr * (g + wd * w); decay applies only to flagged parameters
// (conv/deconv weights), never biases, batch-norm affine or the codebook.
template <typename T>
void sgd_step(std::vector<ParamRef<T>>& params, T lr, T weight_decay) {
    for (auto& p : params) {
        const T wd = p.weight_decay ? weight_decay : T(0);
        auto& v = p.param->v;
        auto& g = p.param->g;
        for (std::size_t i = 0; i < v.size(); ++i) {
            v[i] -= lr * (g[i] + wd * v[i]);
        }
    }
}

template <typename T>
void kaiming_uniform(Param<T>& p, std::size_t fan_in, std::mt19937_64& rng) {
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (auto& x : p.v) x = static_cast<T>(dist(rng));
}

namespace detail {

// Deterministic batch split shared by all layers.
template <typename Fn>
void for_batch_chunks(int batch, const Fn& fn) {
    ThreadPool::global().parallel_chunks(
        static_cast<std::size_t>(batch), kBatchChunk,
        [&](std::size_t chunk, std::size_t b, std::size_t e) {
            fn(chunk, static_cast<int>(b), static_cast<int>(e));
        });
}

inline std::size_t chunk_count(int batch) {
    return (static_cast<std::size_t>(batch) + kBatchChunk - 1) / kBatchChunk;
}

}  // namespace detail

// Standard cross-correlation with square kernel. Weight layout
// (out_ch, in_ch, k, k), bias per output channel.
template <typename T>
class Conv2d {
  public:
    Conv2d(int in_ch, int out_ch, int kernel, int stride, int pad, std::mt19937_64& rng)
        : in_ch_(in_ch), out_ch_(out_ch), k_(kernel), stride_(stride), pad_(pad) {
        weight_.resize(static_cast<std::size_t>(out_ch) * in_ch * kernel * kernel);
        bias_.resize(static_cast<std::size_t>(out_ch));
        kaiming_uniform(weight_, static_cast<std::size_t>(in_ch) * kernel * kernel, rng);
    }

    int out_dim(int in_dim) const { return (in_dim + 2 * pad_ - k_) / stride_ + 1; }

    Tensor4<T> forward(Tensor4<T> x, bool /*train*/ = true) {
        if (x.c != in_ch_) throw Error("conv2d: channel mismatch");
        const int oh = out_dim(x.h), ow = out_dim(x.w);
        if (oh < 1 || ow < 1) throw Error("conv2d: input too small");
        Tensor4<T> y(x.n, out_ch_, oh, ow);
        detail::for_batch_chunks(x.n, [&](std::size_t, int b, int e) {
            for (int ni = b; ni < e; ++ni) forward_sample(x, y, ni);
        });
        x_cache_ = std::move(x);
        return y;
    }

    Tensor4<T> backward(const Tensor4<T>& gy) {
        const Tensor4<T>& x = x_cache_;
        Tensor4<T> gx(x.n, x.c, x.h, x.w);
        const std::size_t n_chunks = detail::chunk_count(x.n);
        std::vector<std::vector<T>> gw_chunks(n_chunks,
                                              std::vector<T>(weight_.v.size(), T(0)));
        std::vector<std::vector<T>> gb_chunks(n_chunks, std::vector<T>(bias_.v.size(), T(0)));
        detail::for_batch_chunks(x.n, [&](std::size_t chunk, int b, int e) {
            for (int ni = b; ni < e; ++ni)
                backward_sample(x, gy, gx, gw_chunks[chunk], gb_chunks[chunk], ni);
        });
        for (std::size_t c = 0; c < n_chunks; ++c) {
            for (std::size_t i = 0; i < weight_.g.size(); ++i) weight_.g[i] += gw_chunks[c][i];
            for (std::size_t i = 0; i < bias_.g.size(); ++i) bias_.g[i] += gb_chunks[c][i];
        }
        return gx;
    }

    void collect_params(std::vector<ParamRef<T>>& out, const std::string& prefix) {
        out.push_back({&weight_, true, prefix + ".weight"});
        out.push_back({&bias_, false, prefix + ".bias"});
    }

    Param<T>& weight() { return weight_; }
    Param<T>& bias() { return bias_; }
    int kernel() const { return k_; }

  private:
    void forward_sample(const Tensor4<T>& x, Tensor4<T>& y, int ni) const {
        const int oh = y.h, ow = y.w;
        for (int oc = 0; oc < out_ch_; ++oc) {
            T* yp = y.plane(ni, oc);
            const T bv = bias_.v[static_cast<std::size_t>(oc)];
            for (int i = 0; i < oh * ow; ++i) yp[i] = bv;
            for (int ic = 0; ic < in_ch_; ++ic) {
                const T* xp = x.plane(ni, ic);
                const T* wp = weight_.v.data() +
                              ((static_cast<std::size_t>(oc) * in_ch_ + ic) * k_ * k_);
                for (int kh = 0; kh < k_; ++kh) {
                    for (int kw = 0; kw < k_; ++kw) {
                        const T wv = wp[kh * k_ + kw];
                        for (int oy = 0; oy < oh; ++oy) {
                            const int iy = oy * stride_ - pad_ + kh;
                            if (iy < 0 || iy >= x.h) continue;
                            const T* xrow = xp + iy * x.w;
                            T* yrow = yp + oy * ow;
                            for (int ox = 0; ox < ow; ++ox) {
                                const int ix = ox * stride_ - pad_ + kw;
                                if (ix < 0 || ix >= x.w) continue;
                                yrow[ox] += wv * xrow[ix];
                            }
                        }
                    }
                }
            }
        }
    }

    void backward_sample(const Tensor4<T>& x, const Tensor4<T>& gy, Tensor4<T>& gx,
                         std::vector<T>& gw, std::vector<T>& gb, int ni) const {
        const int oh = gy.h, ow = gy.w;
        for (int oc = 0; oc < out_ch_; ++oc) {
            const T* gyp = gy.plane(ni, oc);
            T acc = T(0);
            for (int i = 0; i < oh * ow; ++i) acc += gyp[i];
            gb[static_cast<std::size_t>(oc)] += acc;
            for (int ic = 0; ic < in_ch_; ++ic) {
                const T* xp = x.plane(ni, ic);
                T* gxp = gx.plane(ni, ic);
                const std::size_t wbase = (static_cast<std::size_t>(oc) * in_ch_ + ic) * k_ * k_;
                for (int kh = 0; kh < k_; ++kh) {
                    for (int kw = 0; kw < k_; ++kw) {
                        const T wv = weight_.v[wbase + kh * k_ + kw];
                        T wacc = T(0);
                        for (int oy = 0; oy < oh; ++oy) {
                            const int iy = oy * stride_ - pad_ + kh;
                            if (iy < 0 || iy >= x.h) continue;
                            const T* xrow = xp + iy * x.w;
                            T* gxrow = gxp + iy * x.w;
                            const T* gyrow = gyp + oy * ow;
                            for (int ox = 0; ox < ow; ++ox) {
                                const int ix = ox * stride_ - pad_ + kw;
                                if (ix < 0 || ix >= x.w) continue;
                                wacc += gyrow[ox] * xrow[ix];
                                gxrow[ix] += wv * gyrow[ox];
                            }
                        }
                        gw[wbase + kh * k_ + kw] += wacc;
                    }
                }
            }
        }
    }

    int in_ch_, out_ch_, k_, stride_, pad_;
    Param<T> weight_;
    Param<T> bias_;
    Tensor4<T> x_cache_;
};

// Transposed convolution, the gradient of Conv2d with the same
// hyperparameters. Weight layout (in_ch, out_ch, k, k).
// Output spatial size: (in-1)*stride - 2*pad + k.
template <typename T>
class ConvTranspose2d {
  public:
    ConvTranspose2d(int in_ch, int out_ch, int kernel, int stride, int pad, std::mt19937_64& rng)
        : in_ch_(in_ch), out_ch_(out_ch), k_(kernel), stride_(stride), pad_(pad) {
        weight_.resize(static_cast<std::size_t>(in_ch) * out_ch * kernel * kernel);
        bias_.resize(static_cast<std::size_t>(out_ch));
        kaiming_uniform(weight_, static_cast<std::size_t>(in_ch) * kernel * kernel, rng);
    }

    int out_dim(int in_dim) const { return (in_dim - 1) * stride_ - 2 * pad_ + k_; }

    Tensor4<T> forward(Tensor4<T> x, bool /*train*/ = true) {
        if (x.c != in_ch_) throw Error("convtranspose2d: channel mismatch");
        const int oh = out_dim(x.h), ow = out_dim(x.w);
        if (oh < 1 || ow < 1) throw Error("convtranspose2d: input too small");
        Tensor4<T> y(x.n, out_ch_, oh, ow);
        detail::for_batch_chunks(x.n, [&](std::size_t, int b, int e) {
            for (int ni = b; ni < e; ++ni) forward_sample(x, y, ni);
        });
        x_cache_ = std::move(x);
        return y;
    }

    Tensor4<T> backward(const Tensor4<T>& gy) {
        const Tensor4<T>& x = x_cache_;
        Tensor4<T> gx(x.n, x.c, x.h, x.w);
        const std::size_t n_chunks = detail::chunk_count(x.n);
        std::vector<std::vector<T>> gw_chunks(n_chunks,
                                              std::vector<T>(weight_.v.size(), T(0)));
        std::vector<std::vector<T>> gb_chunks(n_chunks, std::vector<T>(bias_.v.size(), T(0)));
        detail::for_batch_chunks(x.n, [&](std::size_t chunk, int b, int e) {
            for (int ni = b; ni < e; ++ni)
                backward_sample(x, gy, gx, gw_chunks[chunk], gb_chunks[chunk], ni);
        });
        for (std::size_t c = 0; c < n_chunks; ++c) {
            for (std::size_t i = 0; i < weight_.g.size(); ++i) weight_.g[i] += gw_chunks[c][i];
            for (std::size_t i = 0; i < bias_.g.size(); ++i) bias_.g[i] += gb_chunks[c][i];
        }
        return gx;
    }

    void collect_params(std::vector<ParamRef<T>>& out, const std::string& prefix) {
        out.push_back({&weight_, true, prefix + ".weight"});
        out.push_back({&bias_, false, prefix + ".bias"});
    }

    Param<T>& weight() { return weight_; }
    Param<T>& bias() { return bias_; }

  private:
    void forward_sample(const Tensor4<T>& x, Tensor4<T>& y, int ni) const {
        for (int oc = 0; oc < out_ch_; ++oc) {
            T* yp = y.plane(ni, oc);
            const T bv = bias_.v[static_cast<std::size_t>(oc)];
            for (int i = 0; i < y.h * y.w; ++i) yp[i] = bv;
        }
        for (int ic = 0; ic < in_ch_; ++ic) {
            const T* xp = x.plane(ni, ic);
            for (int oc = 0; oc < out_ch_; ++oc) {
                T* yp = y.plane(ni, oc);
                const T* wp = weight_.v.data() +
                              ((static_cast<std::size_t>(ic) * out_ch_ + oc) * k_ * k_);
                for (int iy = 0; iy < x.h; ++iy) {
                    for (int ix = 0; ix < x.w; ++ix) {
                        const T xv = xp[iy * x.w + ix];
                        if (xv == T(0)) continue;
                        for (int kh = 0; kh < k_; ++kh) {
                            const int oy = iy * stride_ - pad_ + kh;
                            if (oy < 0 || oy >= y.h) continue;
                            T* yrow = yp + oy * y.w;
                            const T* wrow = wp + kh * k_;
                            for (int kw = 0; kw < k_; ++kw) {
                                const int ox = ix * stride_ - pad_ + kw;
                                if (ox < 0 || ox >= y.w) continue;
                                yrow[ox] += xv * wrow[kw];
                            }
                        }
                    }
                }
            }
        }
    }

    void backward_sample(const Tensor4<T>& x, const Tensor4<T>& gy, Tensor4<T>& gx,
                         std::vector<T>& gw, std::vector<T>& gb, int ni) const {
        for (int oc = 0; oc < out_ch_; ++oc) {
            const T* gyp = gy.plane(ni, oc);
            T acc = T(0);
            for (int i = 0; i < gy.h * gy.w; ++i) acc += gyp[i];
            gb[static_cast<std::size_t>(oc)] += acc;
        }
        for (int ic = 0; ic < in_ch_; ++ic) {
            const T* xp = x.plane(ni, ic);
            T* gxp = gx.plane(ni, ic);
            for (int oc = 0; oc < out_ch_; ++oc) {
                const T* gyp = gy.plane(ni, oc);
                const std::size_t wbase = (static_cast<std::size_t>(ic) * out_ch_ + oc) * k_ * k_;
                for (int iy = 0; iy < x.h; ++iy) {
                    for (int ix = 0; ix < x.w; ++ix) {
                        const T xv = xp[iy * x.w + ix];
                        T gacc = T(0);
                        for (int kh = 0; kh < k_; ++kh) {
                            const int oy = iy * stride_ - pad_ + kh;
                            if (oy < 0 || oy >= gy.h) continue;
                            const T* gyrow = gyp + oy * gy.w;
                            for (int kw = 0; kw < k_; ++kw) {
                                const int ox = ix * stride_ - pad_ + kw;
                                if (ox < 0 || ox >= gy.w) continue;
                                const T g = gyrow[ox];
                                gacc += weight_.v[wbase + kh * k_ + kw] * g;
                                gw[wbase + kh * k_ + kw] += xv * g;
                            }
                        }
                        gxp[iy * x.w + ix] += gacc;
                    }
                }
            }
        }
    }

    int in_ch_, out_ch_, k_, stride_, pad_;
    Param<T> weight_;
    Param<T> bias_;
    Tensor4<T> x_cache_;
};

// Per-channel batch normalization. Train mode normalizes by batch statistics
// (biased variance) and updates running statistics with momentum; eval mode
// uses the running statistics, so scoring a sample alone or in a batch gives
// the same output.
template <typename T>
class BatchNorm2d {
  public:
    explicit BatchNorm2d(int channels, double momentum = 0.1, double eps = 1e-5)
        : ch_(channels), momentum_(momentum), eps_(eps) {
        gamma_.resize(static_cast<std::size_t>(channels));
        beta_.resize(static_cast<std::size_t>(channels));
        std::fill(gamma_.v.begin(), gamma_.v.end(), T(1));
        running_mean_.assign(static_cast<std::size_t>(channels), 0.0);
        running_var_.assign(static_cast<std::size_t>(channels), 1.0);
    }

    Tensor4<T> forward(Tensor4<T> x, bool train) {
        if (x.c != ch_) throw Error("batchnorm: channel mismatch");
        if (train && x.n < 2) throw Error("batchnorm train mode needs batch >= 2");
        train_ = train;
        const std::size_t plane = static_cast<std::size_t>(x.h) * x.w;
        const double count = static_cast<double>(x.n) * static_cast<double>(plane);
        Tensor4<T> y(x.n, x.c, x.h, x.w);
        xhat_ = Tensor4<T>(x.n, x.c, x.h, x.w);
        inv_std_.assign(static_cast<std::size_t>(ch_), T(0));

        ThreadPool::global().parallel_for(static_cast<std::size_t>(ch_), [&](std::size_t c) {
            const int ci = static_cast<int>(c);
            double mean, var;
            if (train) {
                double sum = 0.0, sum_sq = 0.0;
                for (int ni = 0; ni < x.n; ++ni) {
                    const T* xp = x.plane(ni, ci);
                    for (std::size_t i = 0; i < plane; ++i) {
                        sum += static_cast<double>(xp[i]);
                        sum_sq += static_cast<double>(xp[i]) * static_cast<double>(xp[i]);
                    }
                }
                mean = sum / count;
                var = sum_sq / count - mean * mean;
                if (var < 0.0) var = 0.0;
                // Running update uses the unbiased estimate.
                const double unbiased = count > 1.0 ? var * count / (count - 1.0) : var;
                running_mean_[c] = (1.0 - momentum_) * running_mean_[c] + momentum_ * mean;
                running_var_[c] = (1.0 - momentum_) * running_var_[c] + momentum_ * unbiased;
            } else {
                mean = running_mean_[c];
                var = running_var_[c];
            }
            const T istd = static_cast<T>(1.0 / std::sqrt(var + eps_));
            inv_std_[c] = istd;
            const T m = static_cast<T>(mean);
            const T gm = gamma_.v[c], bt = beta_.v[c];
            for (int ni = 0; ni < x.n; ++ni) {
                const T* xp = x.plane(ni, ci);
                T* hp = xhat_.plane(ni, ci);
                T* yp = y.plane(ni, ci);
                for (std::size_t i = 0; i < plane; ++i) {
                    hp[i] = (xp[i] - m) * istd;
                    yp[i] = gm * hp[i] + bt;
                }
            }
        });
        return y;
    }

    Tensor4<T> backward(const Tensor4<T>& gy) {
        const std::size_t plane = static_cast<std::size_t>(gy.h) * gy.w;
        const double count = static_cast<double>(gy.n) * static_cast<double>(plane);
        Tensor4<T> gx(gy.n, gy.c, gy.h, gy.w);
        ThreadPool::global().parallel_for(static_cast<std::size_t>(ch_), [&](std::size_t c) {
            const int ci = static_cast<int>(c);
            double sum_gy = 0.0, sum_gy_xhat = 0.0;
            for (int ni = 0; ni < gy.n; ++ni) {
                const T* gp = gy.plane(ni, ci);
                const T* hp = xhat_.plane(ni, ci);
                for (std::size_t i = 0; i < plane; ++i) {
                    sum_gy += static_cast<double>(gp[i]);
                    sum_gy_xhat += static_cast<double>(gp[i]) * static_cast<double>(hp[i]);
                }
            }
            gamma_.g[c] += static_cast<T>(sum_gy_xhat);
            beta_.g[c] += static_cast<T>(sum_gy);
            const T gm = gamma_.v[c], istd = inv_std_[c];
            if (train_) {
                const T mean_gy = static_cast<T>(sum_gy / count);
                const T mean_gy_xhat = static_cast<T>(sum_gy_xhat / count);
                for (int ni = 0; ni < gy.n; ++ni) {
                    const T* gp = gy.plane(ni, ci);
                    const T* hp = xhat_.plane(ni, ci);
                    T* gxp = gx.plane(ni, ci);
                    for (std::size_t i = 0; i < plane; ++i) {
                        gxp[i] = gm * istd * (gp[i] - mean_gy - hp[i] * mean_gy_xhat);
                    }
                }
            } else {
                for (int ni = 0; ni < gy.n; ++ni) {
                    const T* gp = gy.plane(ni, ci);
                    T* gxp = gx.plane(ni, ci);
                    for (std::size_t i = 0; i < plane; ++i) gxp[i] = gm * istd * gp[i];
                }
            }
        });
        return gx;
    }

    void collect_params(std::vector<ParamRef<T>>& out, const std::string& prefix) {
        out.push_back({&gamma_, false, prefix + ".gamma"});
        out.push_back({&beta_, false, prefix + ".beta"});
    }

    std::vector<double>& running_mean() { return running_mean_; }
    std::vector<double>& running_var() { return running_var_; }
    Param<T>& gamma() { return gamma_; }
    Param<T>& beta() { return beta_; }

  private:
    int ch_;
    double momentum_, eps_;
    bool train_ = true;
    Param<T> gamma_, beta_;
    std::vector<double> running_mean_, running_var_;
    Tensor4<T> xhat_;
    std::vector<T> inv_std_;
};

// The active-set mask can be pinned at a reference point, which turns the
// piecewise-linear unit into the smooth function whose true gradient the
// backward pass computes there. The finite-difference harness relies on
// this; normal operation recomputes the mask every forward.
template <typename T>
class ReLU {
  public:
    Tensor4<T> forward(Tensor4<T> x, bool /*train*/ = true) {
        if (!frozen_) {
            mask_.resize(x.v.size());
            for (std::size_t i = 0; i < x.v.size(); ++i) mask_[i] = x.v[i] > T(0) ? 1 : 0;
        }
        for (std::size_t i = 0; i < x.v.size(); ++i) {
            if (!mask_[i]) x.v[i] = T(0);
        }
        return x;
    }
    Tensor4<T> backward(const Tensor4<T>& gy) {
        Tensor4<T> gx = gy;
        for (std::size_t i = 0; i < gx.v.size(); ++i) {
            if (!mask_[i]) gx.v[i] = T(0);
        }
        return gx;
    }

    void set_frozen(bool frozen) { frozen_ = frozen; }

  private:
    std::vector<unsigned char> mask_;
    bool frozen_ = false;
};

template <typename T>
class Tanh {
  public:
    Tensor4<T> forward(Tensor4<T> x, bool /*train*/ = true) {
        for (auto& v : x.v) v = std::tanh(v);
        y_cache_ = x;
        return x;
    }
    Tensor4<T> backward(const Tensor4<T>& gy) {
        Tensor4<T> gx = gy;
        for (std::size_t i = 0; i < gx.v.size(); ++i) {
            const T y = y_cache_.v[i];
            gx.v[i] *= (T(1) - y * y);
        }
        return gx;
    }

  private:
    Tensor4<T> y_cache_;
};

}  // namespace laneguard::nn

// Acceptance suite: runs every release criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exit code 0 only if all pass.
//
// The end-to-end benchmark criteria (6-8) drive the real command-line tool
// as subprocesses in a scratch directory, so they exercise the shipped
// external interfaces: config file, sample/truth CSVs, bundle, verdict CSV
// and report format.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gradcheck.hpp"
#include "laneguard/laneguard.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace laneguard;

namespace {

struct CriterionResult {
    int number = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

std::vector<CriterionResult> g_results;

void record(int number, const std::string& name, bool pass, const std::string& detail) {
    g_results.push_back({number, name, pass, detail});
    std::cerr << "[criterion " << number << "] " << (pass ? "pass" : "FAIL") << " - " << detail
              << "\n";
}

void run_criterion(int number, const std::string& name,
                   const std::function<std::pair<bool, std::string>()>& fn) {
    try {
        auto [pass, detail] = fn();
        record(number, name, pass, detail);
    } catch (const std::exception& e) {
        record(number, name, false, std::string("exception: ") + e.what());
    }
}

// ---------------------------------------------------------------- criterion 1

std::pair<bool, std::string> criterion_metric_identity() {
    std::ostringstream detail;
    bool pass = true;

    const auto m = metrics({42, 10, 1, 190});
    const double pre = *m.precision, re = *m.recall, f1 = *m.f1;
    const bool pre_ok = std::abs(pre - 0.8077) <= 1e-4;
    const bool re_ok = std::abs(re - 0.9767) <= 1e-4;
    const bool f1_ok = std::abs(f1 - 0.8841) <= 1e-4;
    pass = pre_ok && re_ok && f1_ok;
    detail << "counts(42,10,1,190): pre=" << format_double(pre) << (pre_ok ? " ok" : " OUT")
           << " re=" << format_double(re) << (re_ok ? " ok" : " OUT")
           << " f1=" << format_double(f1)
           << (f1_ok ? " ok" : " OUT of 0.8841+-0.0001 (exact value is 84/95)");

    // F1 consistency of every (Pre, Re, F1) row of the two reference tables,
    // at +-0.001.
    struct Row {
        const char* label;
        double pre, re, f1;
    };
    const Row rows[] = {
        {"comparison/isolation-forest", 0.177, 0.6047, 0.2738},
        {"comparison/density", 0.268, 0.2558, 0.2558},
        {"comparison/generative", 0.45, 0.37, 0.4061},
        {"comparison/recon-prediction", 0.32, 0.49, 0.3872},
        {"comparison/ours", 0.8077, 0.9767, 0.8841},
        {"modules/deep", 0.7368, 0.9767, 0.84},
        {"modules/deep+rule", 0.7414, 1.0, 0.851},
        {"modules/deep+rule+ml", 0.8431, 1.0, 0.9149},
    };
    for (const auto& r : rows) {
        const double harmonic = 2.0 * r.pre * r.re / (r.pre + r.re);
        if (std::abs(harmonic - r.f1) > 1e-3) {
            pass = false;
            detail << "; row " << r.label << " inconsistent (harmonic "
                   << format_double(harmonic) << " vs printed " << format_double(r.f1) << ")";
        }
    }
    return {pass, detail.str()};
}

// ---------------------------------------------------------------- criterion 2

std::pair<bool, std::string> criterion_rule_table() {
    std::size_t checked = 0;
    for (int f = 0; f <= 1200; f += 30) {
        for (int o = 0; o <= 100; ++o) {
            const double flow = f;
            const double occ = o / 100.0;
            const bool jam = flow < 600.0 && occ > 0.6;
            const bool slow = flow > 600.0 && flow < 900.0 && occ > 0.4 && occ < 0.6;
            const TrafficStatus expected =
                jam ? TrafficStatus::Jam : (slow ? TrafficStatus::Slow : TrafficStatus::Normal);
            if (classify(flow, occ) != expected) {
                std::ostringstream msg;
                msg << "mismatch at flow=" << flow << " occ=" << occ;
                return {false, msg.str()};
            }
            ++checked;
        }
    }
    for (const auto [f, o] : std::vector<std::pair<double, double>>{
             {600, 0.7}, {900, 0.5}, {720, 0.4}, {720, 0.6}, {600, 0.5}}) {
        if (classify(f, o) != TrafficStatus::Normal) {
            return {false, "boundary value did not classify Normal"};
        }
    }
    return {true, std::to_string(checked) + " grid cells + boundaries match the status rule"};
}

// ---------------------------------------------------------------- criterion 3

std::pair<bool, std::string> criterion_wavelet_oracle() {
    const CwtAnalyzer cwt;

    for (double level : {0.0, 7.5, 19.0}) {
        const std::vector<double> sig(30, level);
        const auto spec = cwt.transform(std::span<const double>(sig));
        if (spec.max_value() >= 1e-9) return {false, "constant signal not annihilated"};
    }

    std::vector<double> sinusoid(30);
    for (int t = 0; t < 30; ++t) {
        sinusoid[static_cast<std::size_t>(t)] =
            10.0 + 5.0 * std::sin(2.0 * std::numbers::pi * t / 18.0);
    }
    const auto spec = cwt.transform(std::span<const double>(sinusoid));
    int best_row = 0;
    double best_energy = -1.0;
    for (int s = 0; s < spec.n_scales; ++s) {
        double energy = 0.0;
        for (int b = 0; b < kTimeBins; ++b) energy += spec.at(s, b) * spec.at(s, b);
        if (energy > best_energy) {
            best_energy = energy;
            best_row = s;
        }
    }
    const double peak_period = spec.periods[static_cast<std::size_t>(best_row)];
    if (std::abs(peak_period - 18.0) > 1.0) {
        return {false, "sinusoid peak period " + format_double(peak_period) + " not 18 +- 1"};
    }

    std::mt19937_64 rng(20240809);
    std::uniform_real_distribution<double> dist(0.0, 20.0);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> sig(30);
        for (auto& v : sig) v = dist(rng);
        const auto impl = cwt.transform(std::span<const double>(sig));
        worst = std::max(
            worst, oracles::spectrogram_rel_gap(impl, oracles::cwt(sig, 32, 2.0, 30.0, 5.0)));
    }
    if (worst >= 1e-6) {
        return {false, "integration oracle gap " + format_double(worst)};
    }
    std::ostringstream detail;
    detail << "peak period " << format_double(peak_period) << ", oracle gap "
           << format_double(worst) << " over 50 signals";
    return {true, detail.str()};
}

// ---------------------------------------------------------------- criterion 4

std::pair<bool, std::string> criterion_gradients() {
    using namespace laneguard::nn;
    std::mt19937_64 rng(4242);
    double worst = 0.0;
    int configs = 0;

    const auto probe_loss = [](const Tensor4<double>& y, const std::vector<double>& c) {
        double acc = 0.0;
        for (std::size_t i = 0; i < y.v.size(); ++i) acc += y.v[i] * c[i];
        return acc;
    };

    // Conv2d, six shapes.
    for (int trial = 0; trial < 6; ++trial) {
        Conv2d<double> layer(1 + trial % 3, 1 + (trial + 1) % 3, 3 + trial % 2, 1 + trial % 2,
                             trial % 2, rng);
        auto x = gradcheck::random_tensor(2, 1 + trial % 3, 6 + trial % 3, 6 + trial % 3, rng);
        std::vector<double> probe(layer.forward(x, true).v.size());
        gradcheck::fill_random(probe, rng);
        const auto loss = [&] {
            auto xc = x;
            return probe_loss(layer.forward(std::move(xc), true), probe);
        };
        layer.weight().zero_grad();
        layer.bias().zero_grad();
        auto y = layer.forward(x, true);
        Tensor4<double> gy = y;
        gy.v = probe;
        const auto gx = layer.backward(gy);
        worst = std::max(worst,
                         gradcheck::check_coords(
                             layer.weight().v, layer.weight().g,
                             gradcheck::sample_coords(layer.weight().v.size(), 24, rng), loss));
        worst = std::max(
            worst, gradcheck::check_coords(layer.bias().v, layer.bias().g,
                                           gradcheck::all_coords(layer.bias().v.size()), loss));
        worst = std::max(
            worst, gradcheck::check_coords(
                       x.v, gx.v, gradcheck::sample_coords(x.v.size(), 24, rng), loss));
        ++configs;
    }

    // ConvTranspose2d, five shapes.
    for (int trial = 0; trial < 5; ++trial) {
        ConvTranspose2d<double> layer(1 + trial % 3, 1 + (trial + 2) % 3, 4, 2, 1, rng);
        auto x = gradcheck::random_tensor(2, 1 + trial % 3, 4 + trial % 3, 4 + trial % 3, rng);
        std::vector<double> probe(layer.forward(x, true).v.size());
        gradcheck::fill_random(probe, rng);
        const auto loss = [&] {
            auto xc = x;
            return probe_loss(layer.forward(std::move(xc), true), probe);
        };
        layer.weight().zero_grad();
        layer.bias().zero_grad();
        auto y = layer.forward(x, true);
        Tensor4<double> gy = y;
        gy.v = probe;
        const auto gx = layer.backward(gy);
        worst = std::max(worst,
                         gradcheck::check_coords(
                             layer.weight().v, layer.weight().g,
                             gradcheck::sample_coords(layer.weight().v.size(), 24, rng), loss));
        worst = std::max(
            worst, gradcheck::check_coords(layer.bias().v, layer.bias().g,
                                           gradcheck::all_coords(layer.bias().v.size()), loss));
        worst = std::max(
            worst, gradcheck::check_coords(
                       x.v, gx.v, gradcheck::sample_coords(x.v.size(), 24, rng), loss));
        ++configs;
    }

    // BatchNorm2d in train mode, four widths.
    for (int trial = 0; trial < 4; ++trial) {
        BatchNorm2d<double> layer(1 + trial);
        auto x = gradcheck::random_tensor(3 + trial, 1 + trial, 4, 4, rng);
        std::vector<double> probe(x.v.size());
        gradcheck::fill_random(probe, rng);
        const auto loss = [&] {
            auto xc = x;
            return probe_loss(layer.forward(std::move(xc), true), probe);
        };
        layer.gamma().zero_grad();
        layer.beta().zero_grad();
        auto y = layer.forward(x, true);
        Tensor4<double> gy = y;
        gy.v = probe;
        const auto gx = layer.backward(gy);
        worst = std::max(worst, gradcheck::check_coords(
                                    layer.gamma().v, layer.gamma().g,
                                    gradcheck::all_coords(layer.gamma().v.size()), loss));
        worst = std::max(
            worst, gradcheck::check_coords(layer.beta().v, layer.beta().g,
                                           gradcheck::all_coords(layer.beta().v.size()), loss));
        worst = std::max(
            worst, gradcheck::check_coords(
                       x.v, gx.v, gradcheck::sample_coords(x.v.size(), 32, rng), loss));
        ++configs;
    }

    // Tanh everywhere, ReLU away from its kink.
    for (int trial = 0; trial < 3; ++trial) {
        Tanh<double> layer;
        auto x = gradcheck::random_tensor(2, 2, 4 + trial, 4, rng, 2.0);
        std::vector<double> probe(x.v.size());
        gradcheck::fill_random(probe, rng);
        const auto loss = [&] {
            auto xc = x;
            return probe_loss(layer.forward(std::move(xc), true), probe);
        };
        auto y = layer.forward(x, true);
        Tensor4<double> gy = y;
        gy.v = probe;
        const auto gx = layer.backward(gy);
        worst = std::max(
            worst, gradcheck::check_coords(x.v, gx.v, gradcheck::all_coords(x.v.size()), loss));
        ++configs;
    }
    for (int trial = 0; trial < 2; ++trial) {
        ReLU<double> layer;
        auto x = gradcheck::random_tensor(2, 3, 5, 5, rng, 2.0);
        for (auto& v : x.v) {
            if (std::fabs(v) < 1e-3) v = 0.25;
        }
        std::vector<double> probe(x.v.size());
        gradcheck::fill_random(probe, rng);
        const auto loss = [&] {
            auto xc = x;
            return probe_loss(layer.forward(std::move(xc), true), probe);
        };
        auto y = layer.forward(x, true);
        Tensor4<double> gy = y;
        gy.v = probe;
        const auto gx = layer.backward(gy);
        worst = std::max(
            worst, gradcheck::check_coords(x.v, gx.v, gradcheck::all_coords(x.v.size()), loss));
        ++configs;
    }

    // Full model including the straight-through path, eval and train modes,
    // against the frozen-quantizer surrogate (the differentiable function
    // whose true gradient the straight-through estimator computes).
    for (const bool train_mode : {false, true}) {
        VqVae<double> model(99 + (train_mode ? 1 : 0), 0.25);
        auto x = gradcheck::random_tensor(2, 1, 32, 32, rng, 0.9);
        auto base = model.forward(x, train_mode, QuantMode::Nearest);
        model.freeze_quantization(base);
        auto frozen = model.forward(x, train_mode, QuantMode::FrozenOffset);
        model.zero_grad();
        model.backward(x, frozen, QuantMode::FrozenOffset);
        const auto loss_fn = [&] {
            return static_cast<double>(
                model.forward(x, train_mode, QuantMode::FrozenOffset).loss.total);
        };
        for (auto& p : model.params()) {
            if (p.name == "codebook") continue;
            worst = std::max(
                worst, gradcheck::check_coords(p.param->v, p.param->g,
                                               gradcheck::sample_coords(p.param->v.size(), 4, rng),
                                               loss_fn));
        }
        ++configs;
    }

    std::ostringstream detail;
    detail << configs << " configurations, worst excess " << format_double(worst)
           << " of the 1e-4 relative (1e-7 absolute) budget";
    return {worst < 1.0, detail.str()};
}

// ---------------------------------------------------------------- criterion 5

std::pair<bool, std::string> criterion_iforest_oracle() {
    for (std::size_t n = 2; n <= 10000; ++n) {
        const double expected =
            2.0 * (std::log(static_cast<double>(n) - 1.0) + 0.5772156649) -
            2.0 * (static_cast<double>(n) - 1.0) / static_cast<double>(n);
        if (std::abs(average_path_length(n) - expected) >= 1e-9) {
            return {false, "c(n) mismatch at n=" + std::to_string(n)};
        }
    }

    auto rows = oracles::gaussian_cloud(300, 91);
    const auto model = fit_isolation_forest(rows, 0.1, 50, 128, 2024);
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g(0.0, 2.0);
    for (int i = 0; i < 200; ++i) {
        const std::vector<double> probe{g(rng), g(rng)};
        for (const auto& tree : model.trees) {
            const double a = path_length(tree, probe);
            const double b = oracles::path_length(tree, 0, probe, 0.0);
            if (std::abs(a - b) > 1e-9) return {false, "path length oracle mismatch"};
        }
    }

    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto cloud = oracles::gaussian_cloud(500, seed * 977);
        std::mt19937_64 prng(seed);
        std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
        for (int i = 0; i < 25; ++i) {
            const double a = angle(prng);
            cloud.push_back({10.0 * std::cos(a), 10.0 * std::sin(a)});
        }
        const auto forest = fit_isolation_forest(cloud, 0.05, 100, 256, seed);
        std::vector<double> scores;
        for (const auto& r : cloud) scores.push_back(forest.score(r));
        std::vector<double> sorted = scores;
        std::sort(sorted.begin(), sorted.end(), std::greater<>());
        const double cutoff = sorted[static_cast<std::size_t>(0.07 * 525.0)];
        for (std::size_t i = 500; i < 525; ++i) {
            if (!(scores[i] > cutoff)) {
                return {false,
                        "planted outlier below the top 7% at seed " + std::to_string(seed)};
            }
        }
    }

    auto train_rows = oracles::gaussian_cloud(600, 55);
    for (double contamination : {0.05, 0.1, 0.3}) {
        const auto forest = fit_isolation_forest(train_rows, contamination, 100, 256, 3);
        std::size_t flagged = 0;
        for (const auto& r : train_rows) {
            if (forest.is_anomaly(r)) ++flagged;
        }
        const double fraction = static_cast<double>(flagged) / 600.0;
        if (std::abs(fraction - contamination) > 1.0 / 600.0 + 1e-12) {
            return {false, "flagged fraction " + format_double(fraction) +
                               " off contamination " + format_double(contamination)};
        }
    }
    return {true,
            "c(n) to 1e-9 up to n=10000, 200-row path oracle, 10-seed planted outliers, "
            "contamination calibration"};
}

// ------------------------------------------------------- benchmark (6, 7, 8)

struct BenchmarkRun {
    fs::path dir;
    double f1 = 0.0;
    double auc = 0.0;
    int epochs = 0;
};

int run_command(const std::string& cmd, const fs::path& log) {
    const std::string full = cmd + " > '" + log.string() + "' 2>&1";
    return std::system(full.c_str());
}

std::map<std::string, std::string> parse_report(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("missing report " + path.string());
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return kv;
}

// The pinned benchmark: 4 lanes x 2 directions x 72 hours, 40 injections
// across all four anomaly kinds, fixed seed, reference defaults elsewhere.
const char* kBenchmarkConfig =
    "seed = 20250809\n"
    "scenario.lanes_per_direction = 4\n"
    "scenario.span_hours = 72\n"
    "scenario.auto_injections = 40\n";

BenchmarkRun run_benchmark(const std::string& cli, const fs::path& dir) {
    fs::create_directories(dir);
    BenchmarkRun run;
    run.dir = dir;
    {
        std::ofstream cfg(dir / "bench.cfg");
        cfg << kBenchmarkConfig;
    }
    const auto q = [](const fs::path& p) { return "'" + p.string() + "'"; };
    if (run_command(cli + " synth --config " + q(dir / "bench.cfg") + " --out " +
                        q(dir / "data.csv"),
                    dir / "synth.log") != 0)
        throw Error("synth failed, see " + (dir / "synth.log").string());
    if (run_command(cli + " train --data " + q(dir / "data.csv") + " --config " +
                        q(dir / "bench.cfg") + " --out " + q(dir / "bundle.lgb"),
                    dir / "train.log") != 0)
        throw Error("train failed, see " + (dir / "train.log").string());
    if (run_command(cli + " detect --bundle " + q(dir / "bundle.lgb") + " --data " +
                        q(dir / "data.csv") + " --out " + q(dir / "verdicts.csv"),
                    dir / "detect.log") != 0)
        throw Error("detect failed, see " + (dir / "detect.log").string());
    if (run_command(cli + " evaluate --verdicts " + q(dir / "verdicts.csv") + " --labels " +
                        q(dir / "data.csv.truth.csv") + " --out " + q(dir / "report.txt") +
                        " --config " + q(dir / "bench.cfg"),
                    dir / "evaluate.log") != 0)
        throw Error("evaluate failed, see " + (dir / "evaluate.log").string());

    const auto report = parse_report(dir / "report.txt");
    run.f1 = KeyValueFile::to_double(report.at("f1"), "f1");
    run.auc = KeyValueFile::to_double(report.at("deep_auc"), "deep_auc");
    {
        std::ifstream log(dir / "bundle.lgb.loss.log");
        std::string line;
        while (std::getline(log, line)) {
            if (!line.empty() && line[0] != '#') ++run.epochs;
        }
    }
    return run;
}

std::string read_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Reference values recorded from the first validated seeded run of the
// pinned benchmark; regression guards thereafter. Zero means "not yet
// pinned" (skips the comparison).
constexpr double kPinnedF1 = 0.0;
constexpr double kPinnedAuc = 0.0;

std::pair<bool, std::string> criterion_thresholds(const BenchmarkRun& run) {
    const auto bundle = ArtifactBundle::load(run.dir / "bundle.lgb");
    const auto samples = load_samples(run.dir / "data.csv");
    const auto& cfg = bundle.config;
    auto windows = build_windows(samples, cfg.utc_offset_hours);
    auto [train_w, val_w] = split_windows(std::move(windows), cfg.split_ratio, cfg.seed);

    const CwtAnalyzer analyzer(cfg.cwt_scales, cfg.cwt_period_min, cfg.cwt_period_max,
                               cfg.morlet_omega0);
    auto specs = window_spectrograms(analyzer, train_w);
    const NormalizationConstant norm{bundle.cwt_global_max};
    for (auto& s : specs) s = normalize(std::move(s), norm);
    auto model = bundle.restore_model();
    const auto errors = model.reconstruction_errors(specs, cfg.batch_size);

    std::map<TimeOfDayGroup, std::vector<double>> grouped;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        grouped[hour_group(specs[i].hour_of_day)].push_back(errors[i]);
    }
    std::ostringstream detail;
    bool pass = true;
    for (const auto& [group, errs] : grouped) {
        std::size_t above = 0;
        for (double e : errs) {
            if (deep_flag(e, group, bundle.thresholds)) ++above;
        }
        const double frac = static_cast<double>(above) / static_cast<double>(errs.size());
        const double budget = 0.05 + 1.0 / static_cast<double>(errs.size());
        if (frac > budget + 1e-12) {
            pass = false;
            detail << to_string(group) << " flags " << format_double(frac) << " > budget; ";
        }
    }

    const auto p90 = calibrate(grouped, 90.0);
    const auto p95 = calibrate(grouped, 95.0);
    const auto p99 = calibrate(grouped, 99.0);
    for (int g = 0; g < kGroupCount; ++g) {
        const auto group = static_cast<TimeOfDayGroup>(g);
        if (!(p90.threshold_for(group) <= p95.threshold_for(group) &&
              p95.threshold_for(group) <= p99.threshold_for(group))) {
            pass = false;
            detail << to_string(group) << " thresholds not monotone in p; ";
        }
    }
    if (pass) {
        detail << "per-group flagged fraction within 5% + 1/n_g; thresholds monotone over "
                  "{90,95,99}";
    }
    return {pass, detail.str()};
}

std::pair<bool, std::string> criterion_benchmark(const BenchmarkRun& run) {
    std::ostringstream detail;
    bool pass = true;
    detail << "f1=" << format_double(run.f1) << " (>=0.85), deep_auc=" << format_double(run.auc)
           << " (>=0.90), epochs=" << run.epochs << " (<=150)";
    if (!(run.f1 >= 0.85)) pass = false;
    if (!(run.auc >= 0.90)) pass = false;
    if (!(run.epochs >= 1 && run.epochs <= 150)) pass = false;
    if (kPinnedF1 > 0.0) {
        if (std::abs(run.f1 - kPinnedF1) > 1e-9 || std::abs(run.auc - kPinnedAuc) > 1e-9) {
            pass = false;
            detail << "; REGRESSION against pinned reference (f1 " << format_double(kPinnedF1)
                   << ", auc " << format_double(kPinnedAuc) << ")";
        } else {
            detail << "; matches pinned reference";
        }
    }
    return {pass, detail.str()};
}

std::pair<bool, std::string> criterion_determinism(const std::string& cli,
                                                   const BenchmarkRun& first,
                                                   const fs::path& dir) {
    const auto second = run_benchmark(cli, dir);
    const auto a = read_bytes(first.dir / "verdicts.csv");
    const auto b = read_bytes(second.dir / "verdicts.csv");
    if (a.empty() || a != b) {
        return {false, "verdict CSVs differ between identically-seeded runs"};
    }
    return {true, "verdict CSVs byte-identical across a full repeat (" +
                      std::to_string(a.size()) + " bytes)"};
}

}  // namespace

int main(int argc, char** argv) {
    std::string cli;
    fs::path workdir = fs::temp_directory_path() / "laneguard_acceptance";
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--cli" && i + 1 < argc) cli = argv[++i];
        else if (arg == "--workdir" && i + 1 < argc) workdir = argv[++i];
        else {
            std::cerr << "usage: laneguard_acceptance --cli <laneguard binary> [--workdir dir]\n";
            return 2;
        }
    }
    if (cli.empty()) {
        std::cerr << "error: --cli <laneguard binary> is required\n";
        return 2;
    }
    cli = "'" + cli + "'";
    std::error_code ec;
    fs::remove_all(workdir, ec);
    fs::create_directories(workdir);

    run_criterion(1, "metric identity", criterion_metric_identity);
    run_criterion(2, "rule-table conformance", criterion_rule_table);
    run_criterion(3, "wavelet oracle", criterion_wavelet_oracle);
    run_criterion(4, "gradient checks", criterion_gradients);
    run_criterion(5, "isolation forest oracle", criterion_iforest_oracle);

    try {
        std::cerr << "[benchmark] first seeded run...\n";
        const auto run = run_benchmark(cli, workdir / "run_a");
        run_criterion(6, "threshold calibration", [&] { return criterion_thresholds(run); });
        run_criterion(7, "end-to-end synthetic benchmark",
                      [&] { return criterion_benchmark(run); });
        std::cerr << "[benchmark] repeat run for determinism...\n";
        run_criterion(8, "determinism",
                      [&] { return criterion_determinism(cli, run, workdir / "run_b"); });
    } catch (const std::exception& e) {
        const std::string msg = std::string("benchmark failed: ") + e.what();
        record(6, "threshold calibration", false, msg);
        record(7, "end-to-end synthetic benchmark", false, msg);
        record(8, "determinism", false, msg);
    }

    bool all_pass = true;
    std::cout << "\n";
    for (const auto& r : g_results) {
        std::cout << "CRITERION " << r.number << " [" << r.name << "] "
                  << (r.pass ? "PASS" : "FAIL") << " - " << r.detail << "\n";
        all_pass = all_pass && r.pass;
    }
    std::cout << (all_pass ? "ACCEPTANCE: all criteria passed\n"
                           : "ACCEPTANCE: some criteria failed\n");
    return all_pass ? 0 : 1;
}

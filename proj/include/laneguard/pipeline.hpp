#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "laneguard/bundle.hpp"
#include "laneguard/config.hpp"
#include "laneguard/core.hpp"
#include "laneguard/fusion.hpp"
#include "laneguard/io.hpp"
#include "laneguard/iforest.hpp"
#include "laneguard/metrics.hpp"
#include "laneguard/mlbranch.hpp"
#include "laneguard/parallel.hpp"
#include "laneguard/rules.hpp"
#include "laneguard/synth.hpp"
#include "laneguard/thresholds.hpp"
#include "laneguard/vqvae.hpp"
#include "laneguard/wavelet.hpp"

// End-to-end flows shared by the command-line tool and the integration
// tests: train, detect, evaluate, and the labeling workflow.

namespace laneguard {

struct TrainOutputs {
    ArtifactBundle bundle;
    TrainReport report;
};

inline std::vector<Spectrogram> window_spectrograms(const CwtAnalyzer& analyzer,
                                                    const std::vector<LaneWindow>& windows) {
    std::vector<Spectrogram> specs(windows.size());
    ThreadPool::global().parallel_for(
        windows.size(), [&](std::size_t i) { specs[i] = analyzer.transform(windows[i]); },
        /*grain=*/8);
    return specs;
}

inline TrainOutputs run_train(const std::vector<LaneSample>& samples, const RunConfig& cfg) {
    const auto windows = build_windows(samples, cfg.utc_offset_hours);
    if (windows.empty()) throw Error("train: no complete windows in input data");
    auto [train_w, val_w] = split_windows(windows, cfg.split_ratio, cfg.seed);
    if (train_w.empty()) throw Error("train: empty training split");

    const CwtAnalyzer analyzer(cfg.cwt_scales, cfg.cwt_period_min, cfg.cwt_period_max,
                               cfg.morlet_omega0);
    auto train_specs = window_spectrograms(analyzer, train_w);
    const auto norm = fit_normalizer(train_specs);
    for (auto& s : train_specs) s = normalize(std::move(s), norm);
    auto val_specs = window_spectrograms(analyzer, val_w);
    for (auto& s : val_specs) s = normalize(std::move(s), norm);

    TrainConfig tc;
    tc.learning_rate = cfg.learning_rate;
    tc.weight_decay = cfg.weight_decay;
    tc.batch_size = cfg.batch_size;
    tc.max_epochs = cfg.max_epochs;
    tc.patience = cfg.patience;
    tc.min_delta = cfg.min_delta;
    tc.beta = cfg.beta;
    tc.seed = cfg.seed;
    auto [model, report] = train_vqvae(train_specs, val_specs, tc);

    TrainOutputs out;
    out.report = std::move(report);
    out.bundle.config = cfg;
    out.bundle.config_hash = cfg.hash();
    out.bundle.cwt_global_max = norm.global_max;
    out.bundle.store_model(model);

    // Thresholds come from the persisted weights so that train and detect
    // agree bit for bit on every reconstruction error.
    auto persisted = out.bundle.restore_model();
    const auto errors = persisted.reconstruction_errors(train_specs, cfg.batch_size);
    std::map<TimeOfDayGroup, std::vector<double>> grouped;
    for (std::size_t i = 0; i < train_specs.size(); ++i) {
        grouped[hour_group(train_specs[i].hour_of_day)].push_back(errors[i]);
    }
    out.bundle.thresholds = calibrate(grouped, cfg.percentile, cfg.time_dependent_thresholds);

    const auto blocks = build_direction_blocks(samples);
    if (blocks.empty()) throw Error("train: no complete direction blocks in input data");
    out.bundle.ml = fit_ml_branch(blocks, cfg.contamination_ml, cfg.forest_trees,
                                  cfg.forest_subsample, cfg.seed);
    return out;
}

inline std::vector<FusedVerdict> run_detect(const ArtifactBundle& bundle,
                                            const std::vector<LaneSample>& samples) {
    const auto& cfg = bundle.config;
    const auto windows = build_windows(samples, cfg.utc_offset_hours);
    if (windows.empty()) throw Error("detect: no complete windows in input data");

    const CwtAnalyzer analyzer(cfg.cwt_scales, cfg.cwt_period_min, cfg.cwt_period_max,
                               cfg.morlet_omega0);
    auto specs = window_spectrograms(analyzer, windows);
    const NormalizationConstant norm{bundle.cwt_global_max};
    for (auto& s : specs) s = normalize(std::move(s), norm);

    auto model = bundle.restore_model();
    const auto errors = model.reconstruction_errors(specs, cfg.batch_size);
    std::vector<bool> deep(windows.size()), rule(windows.size());
    for (std::size_t i = 0; i < windows.size(); ++i) {
        deep[i] = deep_flag(errors[i], hour_group(windows[i].hour_of_day), bundle.thresholds);
        rule[i] = window_rule_flag(windows[i]);
    }

    std::map<std::pair<DirectionKey, std::int64_t>, bool> ml_flags;
    for (const auto& block : build_direction_blocks(samples)) {
        const auto flags = detect_direction(bundle.ml, block);
        for (int i = 0; i < block.n_intervals(); ++i) {
            ml_flags[{block.key, block.interval_starts[static_cast<std::size_t>(i)]}] =
                flags[static_cast<std::size_t>(i)];
        }
    }

    return fuse_verdicts(windows, errors, deep, rule, ml_flags,
                         FusionPolicy::parse(cfg.fusion_policy));
}

constexpr std::string_view kVerdictCsvHeader =
    "camera,direction,lane,window_start,group,error,deep,rule,ml,fused";

inline void save_verdicts(const std::filesystem::path& path,
                          const std::vector<FusedVerdict>& verdicts,
                          const std::vector<std::string>& provenance = {}) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    for (const auto& p : provenance) out << "# " << p << "\n";
    out << kVerdictCsvHeader << "\n";
    for (const auto& v : verdicts) {
        out << v.key.camera << ',' << v.key.direction << ',' << v.key.lane << ','
            << v.window_start << ',' << to_string(v.group) << ',' << format_double(v.error) << ','
            << (v.deep ? 1 : 0) << ',' << (v.rule ? 1 : 0) << ',' << (v.ml ? 1 : 0) << ','
            << (v.fused ? 1 : 0) << "\n";
    }
    if (!out) throw Error("write failed for " + path.string());
}

inline std::vector<FusedVerdict> load_verdicts(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    std::vector<FusedVerdict> verdicts;
    std::string line;
    std::size_t line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!saw_header) {
            if (line != kVerdictCsvHeader)
                throw Error(path.string() + ": unexpected verdict header");
            saw_header = true;
            continue;
        }
        const auto f = detail::split_fields(line);
        if (f.size() != 10)
            throw Error(path.string() + " line " + std::to_string(line_no) +
                        ": expected 10 fields");
        FusedVerdict v;
        v.key.camera = std::string(f[0]);
        v.key.direction = detail::parse_number<int>(f[1], "direction", line_no);
        v.key.lane = detail::parse_number<int>(f[2], "lane", line_no);
        v.window_start = detail::parse_number<std::int64_t>(f[3], "window_start", line_no);
        bool found = false;
        for (int g = 0; g < kGroupCount; ++g) {
            if (f[4] == to_string(static_cast<TimeOfDayGroup>(g))) {
                v.group = static_cast<TimeOfDayGroup>(g);
                found = true;
            }
        }
        if (!found) throw Error(path.string() + " line " + std::to_string(line_no) + ": bad group");
        v.error = detail::parse_number<double>(f[5], "error", line_no);
        v.deep = f[6] == "1";
        v.rule = f[7] == "1";
        v.ml = f[8] == "1";
        v.fused = f[9] == "1";
        verdicts.push_back(std::move(v));
    }
    if (!saw_header) throw Error(path.string() + ": missing verdict header");
    return verdicts;
}

struct EvalReport {
    ConfusionCounts counts;
    MetricSet overall;
    std::optional<double> deep_auc;
    std::map<InjectionKind, std::pair<std::int64_t, std::int64_t>> kind_recall;  // detected/total

    std::string to_text() const {
        std::ostringstream out;
        const auto put = [&](const char* name, const std::optional<double>& v) {
            out << name << "=" << (v ? format_double(*v) : "absent") << "\n";
        };
        out << "tp=" << counts.tp << "\nfp=" << counts.fp << "\nfn=" << counts.fn
            << "\ntn=" << counts.tn << "\n";
        put("accuracy", overall.accuracy);
        put("precision", overall.precision);
        put("recall", overall.recall);
        put("f1", overall.f1);
        put("fpr", overall.fpr);
        put("fnr", overall.fnr);
        put("deep_auc", deep_auc);
        for (const auto& [kind, frac] : kind_recall) {
            out << "recall." << to_string(kind) << "=" << frac.first << "/" << frac.second << "\n";
        }
        return out.str();
    }
};

// Scores fused verdicts against the ground-truth sidecar: a verdict window
// is truly anomalous when it overlaps at least k truth intervals for its
// lane. Also reports the deep branch's error AUC and per-kind recall.
inline EvalReport evaluate_verdicts(const std::vector<FusedVerdict>& verdicts,
                                    const std::vector<GroundTruthInterval>& truth, int k) {
    if (verdicts.empty()) throw Error("evaluate: no verdicts");
    std::map<int, std::set<std::int64_t>> by_lane;
    std::map<std::pair<int, std::int64_t>, InjectionKind> kind_at;
    for (const auto& g : truth) {
        by_lane[g.lane].insert(g.interval_start);
        kind_at[{g.lane, g.interval_start}] = g.kind;
    }

    EvalReport report;
    std::vector<double> errors;
    std::vector<bool> labels;
    for (const auto& v : verdicts) {
        int total = 0;
        std::map<InjectionKind, int> per_kind;
        auto it = by_lane.find(v.key.lane);
        if (it != by_lane.end()) {
            for (int t = 0; t < kWindowLength; ++t) {
                const std::int64_t epoch =
                    v.window_start + static_cast<std::int64_t>(t) * kIntervalSeconds;
                if (it->second.count(epoch)) {
                    ++total;
                    ++per_kind[kind_at[{v.key.lane, epoch}]];
                }
            }
        }
        const bool label = total >= k;
        report.counts.add(v.fused, label);
        errors.push_back(v.error);
        labels.push_back(label);
        for (const auto& [kind, cnt] : per_kind) {
            if (cnt >= k) {
                auto& [detected, all] = report.kind_recall[kind];
                ++all;
                if (v.fused) ++detected;
            }
        }
    }
    report.overall = metrics(report.counts);
    const bool both_classes = report.counts.tp + report.counts.fn > 0 &&
                              report.counts.fp + report.counts.tn > 0;
    if (both_classes) report.deep_auc = auc_score(errors, labels);
    return report;
}

// Labeling workflow: seed a candidate list with the forest, have a human
// edit a decisions file offline, then merge.
struct LabelCandidate {
    LaneKey key;
    std::int64_t window_start = 0;
    double score = 0.0;     // forest anomaly score, higher = more anomalous
    double decision = 0.0;  // offset - score, negative = anomaly
};

inline std::vector<LabelCandidate> propose_candidates(const std::vector<LaneSample>& samples,
                                                      const RunConfig& cfg) {
    const auto windows = build_windows(samples, cfg.utc_offset_hours);
    if (windows.size() < 2) throw Error("label propose: need at least two windows");
    std::vector<std::vector<double>> rows;
    rows.reserve(windows.size());
    for (const auto& w : windows) rows.push_back(w.counts());
    const auto forest = fit_isolation_forest(rows, cfg.contamination_label, cfg.forest_trees,
                                             cfg.forest_subsample, cfg.seed);
    std::vector<LabelCandidate> out(windows.size());
    for (std::size_t i = 0; i < windows.size(); ++i) {
        out[i].key = windows[i].key;
        out[i].window_start = windows[i].start;
        out[i].score = forest.score(rows[i]);
        out[i].decision = forest.offset - out[i].score;
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const LabelCandidate& a, const LabelCandidate& b) {
                         return a.score > b.score;
                     });
    return out;
}

constexpr std::string_view kCandidateCsvHeader =
    "rank,camera,direction,lane,window_start,score,decision";

inline void save_candidates(const std::filesystem::path& path,
                            const std::vector<LabelCandidate>& candidates,
                            const std::vector<std::string>& provenance = {}) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    for (const auto& p : provenance) out << "# " << p << "\n";
    out << kCandidateCsvHeader << "\n";
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const auto& c = candidates[i];
        out << (i + 1) << ',' << c.key.camera << ',' << c.key.direction << ',' << c.key.lane
            << ',' << c.window_start << ',' << format_double(c.score) << ','
            << format_double(c.decision) << "\n";
    }
    if (!out) throw Error("write failed for " + path.string());
}

inline std::vector<LabelCandidate> load_candidates(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    std::vector<LabelCandidate> out;
    std::string line;
    std::size_t line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!saw_header) {
            if (line != kCandidateCsvHeader)
                throw Error(path.string() + ": unexpected candidates header");
            saw_header = true;
            continue;
        }
        const auto f = detail::split_fields(line);
        if (f.size() != 7)
            throw Error(path.string() + " line " + std::to_string(line_no) + ": expected 7 fields");
        LabelCandidate c;
        c.key.camera = std::string(f[1]);
        c.key.direction = detail::parse_number<int>(f[2], "direction", line_no);
        c.key.lane = detail::parse_number<int>(f[3], "lane", line_no);
        c.window_start = detail::parse_number<std::int64_t>(f[4], "window_start", line_no);
        c.score = detail::parse_number<double>(f[5], "score", line_no);
        c.decision = detail::parse_number<double>(f[6], "decision", line_no);
        out.push_back(std::move(c));
    }
    if (!saw_header) throw Error(path.string() + ": missing candidates header");
    return out;
}

enum class ReviewVerdict { Accept, Reject, Defer };

// decisions.csv: camera,direction,lane,window_start,verdict with verdict in
// {accept, reject, defer}. Candidates without a decision stay deferred.
inline std::vector<LabelCandidate> merge_review(
    const std::vector<LabelCandidate>& candidates, const std::filesystem::path& decisions_path) {
    std::ifstream in(decisions_path);
    if (!in) throw Error("cannot open " + decisions_path.string());
    std::map<std::pair<LaneKey, std::int64_t>, ReviewVerdict> decisions;
    std::string line;
    std::size_t line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!saw_header) {
            if (line != "camera,direction,lane,window_start,verdict")
                throw Error(decisions_path.string() + ": unexpected decisions header");
            saw_header = true;
            continue;
        }
        const auto f = detail::split_fields(line);
        if (f.size() != 5)
            throw Error(decisions_path.string() + " line " + std::to_string(line_no) +
                        ": expected 5 fields");
        LaneKey key;
        key.camera = std::string(f[0]);
        key.direction = detail::parse_number<int>(f[1], "direction", line_no);
        key.lane = detail::parse_number<int>(f[2], "lane", line_no);
        const auto start = detail::parse_number<std::int64_t>(f[3], "window_start", line_no);
        ReviewVerdict v;
        if (f[4] == "accept") v = ReviewVerdict::Accept;
        else if (f[4] == "reject") v = ReviewVerdict::Reject;
        else if (f[4] == "defer") v = ReviewVerdict::Defer;
        else
            throw Error(decisions_path.string() + " line " + std::to_string(line_no) +
                        ": verdict must be accept, reject or defer");
        decisions[{key, start}] = v;
    }
    if (!saw_header) throw Error(decisions_path.string() + ": missing decisions header");

    std::vector<LabelCandidate> verified;
    for (const auto& c : candidates) {
        auto it = decisions.find({c.key, c.window_start});
        if (it != decisions.end() && it->second == ReviewVerdict::Accept) verified.push_back(c);
    }
    return verified;
}

}  // namespace laneguard

// laneguard: lane-wise highway traffic anomaly detection.
//
//   synth     generate a synthetic scenario with planted anomalies
//   train     fit normalizer, autoencoder, thresholds and forests
//   detect    score data against a trained bundle, emit fused verdicts
//   evaluate  compare verdicts against ground truth
//   label     propose anomaly candidates / merge reviewed decisions

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "laneguard/laneguard.hpp"

namespace {

using namespace laneguard;

RunConfig load_config(const std::string& path) {
    if (path.empty()) return RunConfig{};
    return RunConfig::from_file(path);
}

int cmd_synth(const std::string& config_path, const std::string& out,
              const std::string& truth_out) {
    const auto cfg = load_config(config_path);
    const auto kv = config_path.empty() ? KeyValueFile{} : KeyValueFile::parse(config_path);
    auto scenario = ScenarioConfig::from_kv(kv, cfg.seed);
    if (scenario.auto_injections > 0) {
        auto placed = auto_injections(scenario, scenario.auto_injections);
        scenario.injections.insert(scenario.injections.end(), placed.begin(), placed.end());
    }
    const auto result = generate(scenario);
    save_samples(out, result.samples, {cfg.provenance()});
    const std::string truth_path = truth_out.empty() ? out + ".truth.csv" : truth_out;
    save_truth(truth_path, result.truth, {cfg.provenance()});
    std::cout << "wrote " << result.samples.size() << " samples to " << out << "\n"
              << "wrote " << result.truth.size() << " truth intervals to " << truth_path << "\n";
    return 0;
}

int cmd_train(const std::string& data_path, const std::string& config_path,
              const std::string& out, const std::string& loss_log, double percentile_override,
              bool time_independent) {
    auto cfg = load_config(config_path);
    if (percentile_override > 0.0) cfg.percentile = percentile_override;
    if (time_independent) cfg.time_dependent_thresholds = false;
    cfg.validate();

    DatasetManifest manifest;
    manifest.split_seed = cfg.seed;
    manifest.split_ratio = cfg.split_ratio;
    const auto samples = load_samples(data_path, &manifest);
    if (manifest.occupancy_warnings > 0) {
        std::cerr << "note: " << manifest.occupancy_warnings
                  << " rows carry occupancy above 1 (data-quality warning)\n";
    }
    auto trained = run_train(samples, cfg);
    trained.bundle.save(out);

    const std::string log_path = loss_log.empty() ? out + ".loss.log" : loss_log;
    std::ofstream log(log_path);
    log << "# " << cfg.provenance() << "\n";
    log << "# epoch train_loss val_loss\n";
    for (std::size_t e = 0; e < trained.report.train_loss.size(); ++e) {
        log << (e + 1) << ' ' << format_double(trained.report.train_loss[e]) << ' '
            << format_double(trained.report.val_loss[e]) << "\n";
    }
    if (!log) {
        std::cerr << "error: could not write " << log_path << "\n";
        return 1;
    }
    std::cout << "trained " << trained.report.stopping_epoch << " epochs (best "
              << trained.report.best_epoch << "), bundle written to " << out << "\n";
    return 0;
}

int cmd_detect(const std::string& bundle_path, const std::string& data_path,
               const std::string& out, const std::string& dump_dir, int dump_limit) {
    const auto bundle = ArtifactBundle::load(bundle_path);
    const auto samples = load_samples(data_path);
    const auto verdicts = run_detect(bundle, samples);
    save_verdicts(out, verdicts, {bundle.config.provenance()});

    if (!dump_dir.empty()) {
        std::filesystem::create_directories(dump_dir);
        const auto windows = build_windows(samples, bundle.config.utc_offset_hours);
        const CwtAnalyzer analyzer(bundle.config.cwt_scales, bundle.config.cwt_period_min,
                                   bundle.config.cwt_period_max, bundle.config.morlet_omega0);
        const NormalizationConstant norm{bundle.cwt_global_max};
        int dumped = 0;
        for (const auto& w : windows) {
            if (dumped >= dump_limit) break;
            const auto spec = normalize(analyzer.transform(w), norm);
            std::ostringstream name;
            name << w.key.camera << "_" << w.key.direction << "_" << w.key.lane << "_"
                 << w.start << ".txt";
            std::ofstream dump(std::filesystem::path(dump_dir) / name.str());
            spec.write_text(dump);
            ++dumped;
        }
        std::cout << "dumped " << dumped << " spectrograms to " << dump_dir << "\n";
    }
    std::size_t flagged = 0;
    for (const auto& v : verdicts) flagged += v.fused ? 1 : 0;
    std::cout << "wrote " << verdicts.size() << " verdicts (" << flagged << " anomalous) to "
              << out << "\n";
    return 0;
}

int cmd_evaluate(const std::string& verdicts_path, const std::string& labels_path,
                 const std::string& out, const std::string& config_path) {
    const auto cfg = load_config(config_path);
    const auto verdicts = load_verdicts(verdicts_path);
    const auto truth = load_truth(labels_path);
    const auto report = evaluate_verdicts(verdicts, truth, cfg.label_overlap_k);
    std::ofstream file(out);
    file << "# " << cfg.provenance() << "\n" << report.to_text();
    if (!file) {
        std::cerr << "error: could not write " << out << "\n";
        return 1;
    }
    std::cout << report.to_text();
    return 0;
}

int cmd_label_propose(const std::string& data_path, const std::string& config_path,
                      double contamination, const std::string& out) {
    auto cfg = load_config(config_path);
    if (contamination > 0.0) cfg.contamination_label = contamination;
    cfg.validate();
    const auto samples = load_samples(data_path);
    const auto candidates = propose_candidates(samples, cfg);
    save_candidates(out, candidates, {cfg.provenance()});
    std::cout << "wrote " << candidates.size() << " ranked candidates to " << out << "\n";
    return 0;
}

int cmd_label_review(const std::string& candidates_path, const std::string& decisions_path,
                     const std::string& out) {
    const auto candidates = load_candidates(candidates_path);
    const auto verified = merge_review(candidates, decisions_path);
    save_candidates(out, verified);
    std::cout << "accepted " << verified.size() << " of " << candidates.size()
              << " candidates into " << out << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lane-wise highway traffic anomaly detection"};
    app.require_subcommand(1);

    std::string config_path, data_path, out_path, truth_path, bundle_path;
    std::string verdicts_path, labels_path, candidates_path, decisions_path;
    std::string loss_log, dump_dir;
    double percentile = 0.0, contamination = 0.0;
    bool time_independent = false;
    int dump_limit = 16;

    auto* synth = app.add_subcommand("synth", "generate synthetic lane samples");
    synth->add_option("--config", config_path, "key=value config file")->required();
    synth->add_option("--out", out_path, "output sample CSV")->required();
    synth->add_option("--truth", truth_path, "ground-truth sidecar CSV (default <out>.truth.csv)");

    auto* train = app.add_subcommand("train", "fit the detector bundle");
    train->add_option("--data", data_path, "sample CSV")->required();
    train->add_option("--config", config_path, "key=value config file");
    train->add_option("--out", out_path, "output bundle (.lgb)")->required();
    train->add_option("--loss-log", loss_log, "loss log path (default <out>.loss.log)");
    train->add_option("--percentile", percentile, "threshold percentile preset (90, 95, 99)");
    train->add_flag("--time-independent", time_independent,
                    "one pooled threshold instead of per time-of-day thresholds");

    auto* detect = app.add_subcommand("detect", "score data with a trained bundle");
    detect->add_option("--bundle", bundle_path, "trained bundle (.lgb)")->required();
    detect->add_option("--data", data_path, "sample CSV")->required();
    detect->add_option("--out", out_path, "output verdict CSV")->required();
    detect->add_option("--dump-spectrograms", dump_dir, "debug: write spectrogram text files");
    detect->add_option("--dump-limit", dump_limit, "max spectrograms to dump (default 16)");

    auto* evaluate = app.add_subcommand("evaluate", "score verdicts against ground truth");
    evaluate->add_option("--verdicts", verdicts_path, "verdict CSV")->required();
    evaluate->add_option("--labels", labels_path, "ground-truth sidecar CSV")->required();
    evaluate->add_option("--out", out_path, "report path")->required();
    evaluate->add_option("--config", config_path, "key=value config file");

    auto* label = app.add_subcommand("label", "anomaly labeling workflow");
    label->require_subcommand(1);
    auto* propose = label->add_subcommand("propose", "rank candidate anomaly windows");
    propose->add_option("--data", data_path, "sample CSV")->required();
    propose->add_option("--config", config_path, "key=value config file");
    propose->add_option("--contamination", contamination, "candidate fraction (default 0.3)");
    propose->add_option("--out", out_path, "output candidate CSV")->required();
    auto* review = label->add_subcommand("review", "merge human review decisions");
    review->add_option("--candidates", candidates_path, "candidate CSV from propose")->required();
    review->add_option("--decisions", decisions_path, "reviewed decisions CSV")->required();
    review->add_option("--out", out_path, "verified anomaly set CSV")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) return cmd_synth(config_path, out_path, truth_path);
        if (train->parsed())
            return cmd_train(data_path, config_path, out_path, loss_log, percentile,
                             time_independent);
        if (detect->parsed())
            return cmd_detect(bundle_path, data_path, out_path, dump_dir, dump_limit);
        if (evaluate->parsed())
            return cmd_evaluate(verdicts_path, labels_path, out_path, config_path);
        if (label->parsed()) {
            if (propose->parsed())
                return cmd_label_propose(data_path, config_path, contamination, out_path);
            if (review->parsed())
                return cmd_label_review(candidates_path, decisions_path, out_path);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "laneguard/core.hpp"

namespace laneguard {

// Flat key=value text file: '#' comments, blank lines ignored, whitespace
// around keys and values trimmed. Keys are unique.
class KeyValueFile {
  public:
    KeyValueFile() = default;

    static KeyValueFile parse(const std::filesystem::path& path) {
        std::ifstream in(path);
        if (!in) throw Error("cannot open config " + path.string());
        std::stringstream buf;
        buf << in.rdbuf();
        return parse_text(buf.str(), path.string());
    }

    static KeyValueFile parse_text(const std::string& text, const std::string& origin = "<text>") {
        KeyValueFile kv;
        std::istringstream in(text);
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            const auto s = trim(line);
            if (s.empty() || s[0] == '#') continue;
            const auto eq = s.find('=');
            if (eq == std::string::npos)
                throw Error(origin + " line " + std::to_string(line_no) + ": expected key=value");
            const auto key = trim(s.substr(0, eq));
            const auto value = trim(s.substr(eq + 1));
            if (key.empty())
                throw Error(origin + " line " + std::to_string(line_no) + ": empty key");
            if (!kv.entries_.emplace(key, value).second)
                throw Error(origin + " line " + std::to_string(line_no) + ": duplicate key " + key);
        }
        return kv;
    }

    bool has(const std::string& key) const { return entries_.count(key) > 0; }

    std::string get_string(const std::string& key, const std::string& fallback) const {
        auto it = entries_.find(key);
        return it == entries_.end() ? fallback : it->second;
    }

    double get_double(const std::string& key, double fallback) const {
        auto it = entries_.find(key);
        if (it == entries_.end()) return fallback;
        return to_double(it->second, key);
    }

    std::int64_t get_int(const std::string& key, std::int64_t fallback) const {
        auto it = entries_.find(key);
        if (it == entries_.end()) return fallback;
        std::int64_t v{};
        auto [p, ec] = std::from_chars(it->second.data(), it->second.data() + it->second.size(), v);
        if (ec != std::errc() || p != it->second.data() + it->second.size())
            throw Error("config key " + key + ": bad integer '" + it->second + "'");
        return v;
    }

    bool get_bool(const std::string& key, bool fallback) const {
        auto it = entries_.find(key);
        if (it == entries_.end()) return fallback;
        if (it->second == "true" || it->second == "1") return true;
        if (it->second == "false" || it->second == "0") return false;
        throw Error("config key " + key + ": bad boolean '" + it->second + "'");
    }

    const std::map<std::string, std::string>& entries() const { return entries_; }

    static double to_double(const std::string& s, const std::string& key) {
        double v{};
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || p != s.data() + s.size())
            throw Error("config key " + key + ": bad number '" + s + "'");
        return v;
    }

  private:
    static std::string trim(const std::string& s) {
        const auto b = s.find_first_not_of(" \t");
        if (b == std::string::npos) return "";
        const auto e = s.find_last_not_of(" \t");
        return s.substr(b, e - b + 1);
    }

    std::map<std::string, std::string> entries_;
};

// All pipeline tunables in one place. Defaults follow the reference
// operating point; a config file overrides individual keys.
struct RunConfig {
    std::uint64_t seed = 42;
    double split_ratio = 0.8;
    int utc_offset_hours = 0;

    int cwt_scales = 32;
    double cwt_period_min = 2.0;   // samples (1 minute)
    double cwt_period_max = 30.0;  // samples (15 minutes)
    double morlet_omega0 = 5.0;    // rad/sample

    double beta = 0.25;
    double learning_rate = 1e-3;
    double weight_decay = 1e-5;
    int batch_size = 128;
    int max_epochs = 150;
    int patience = 10;
    double min_delta = 1e-5;

    double percentile = 95.0;
    bool time_dependent_thresholds = true;

    double contamination_label = 0.3;
    double contamination_ml = 0.1;
    int forest_trees = 100;
    int forest_subsample = 256;

    std::string fusion_policy = "or";
    int label_overlap_k = 3;

    // Scenario keys ride along untouched for the generator.
    std::map<std::string, std::string> raw;

    static RunConfig from_kv(const KeyValueFile& kv) {
        RunConfig c;
        c.seed = static_cast<std::uint64_t>(kv.get_int("seed", static_cast<std::int64_t>(c.seed)));
        c.split_ratio = kv.get_double("split_ratio", c.split_ratio);
        c.utc_offset_hours = static_cast<int>(kv.get_int("utc_offset_hours", c.utc_offset_hours));
        c.cwt_scales = static_cast<int>(kv.get_int("cwt_scales", c.cwt_scales));
        c.cwt_period_min = kv.get_double("cwt_period_min", c.cwt_period_min);
        c.cwt_period_max = kv.get_double("cwt_period_max", c.cwt_period_max);
        c.morlet_omega0 = kv.get_double("morlet_omega0", c.morlet_omega0);
        c.beta = kv.get_double("beta", c.beta);
        c.learning_rate = kv.get_double("learning_rate", c.learning_rate);
        c.weight_decay = kv.get_double("weight_decay", c.weight_decay);
        c.batch_size = static_cast<int>(kv.get_int("batch_size", c.batch_size));
        c.max_epochs = static_cast<int>(kv.get_int("max_epochs", c.max_epochs));
        c.patience = static_cast<int>(kv.get_int("patience", c.patience));
        c.min_delta = kv.get_double("min_delta", c.min_delta);
        c.percentile = kv.get_double("percentile", c.percentile);
        c.time_dependent_thresholds =
            kv.get_bool("time_dependent_thresholds", c.time_dependent_thresholds);
        c.contamination_label = kv.get_double("contamination_label", c.contamination_label);
        c.contamination_ml = kv.get_double("contamination_ml", c.contamination_ml);
        c.forest_trees = static_cast<int>(kv.get_int("forest_trees", c.forest_trees));
        c.forest_subsample = static_cast<int>(kv.get_int("forest_subsample", c.forest_subsample));
        c.fusion_policy = kv.get_string("fusion_policy", c.fusion_policy);
        c.label_overlap_k = static_cast<int>(kv.get_int("label_overlap_k", c.label_overlap_k));
        c.raw = kv.entries();
        c.validate();
        return c;
    }

    static RunConfig from_file(const std::filesystem::path& path) {
        return from_kv(KeyValueFile::parse(path));
    }

    void validate() const {
        if (split_ratio <= 0.0 || split_ratio >= 1.0) throw Error("split_ratio outside (0,1)");
        if (cwt_scales < 2) throw Error("cwt_scales must be at least 2");
        if (cwt_period_min <= 0 || cwt_period_max <= cwt_period_min)
            throw Error("bad cwt period range");
        if (batch_size < 2) throw Error("batch_size must be at least 2");
        if (max_epochs < 1) throw Error("max_epochs must be positive");
        if (percentile <= 0.0 || percentile > 100.0) throw Error("percentile outside (0,100]");
        if (contamination_label <= 0.0 || contamination_label > 0.5)
            throw Error("contamination_label outside (0,0.5]");
        if (contamination_ml <= 0.0 || contamination_ml > 0.5)
            throw Error("contamination_ml outside (0,0.5]");
        if (forest_trees < 1 || forest_subsample < 2) throw Error("bad forest parameters");
        if (label_overlap_k < 1) throw Error("label_overlap_k must be positive");
    }

    // Canonical serialization: fixed key order for the typed fields, then any
    // extra raw keys. Hash inputs and config echoes both use this.
    std::string canonical() const {
        std::ostringstream out;
        out << "seed=" << seed << "\nsplit_ratio=" << format_double(split_ratio)
            << "\nutc_offset_hours=" << utc_offset_hours << "\ncwt_scales=" << cwt_scales
            << "\ncwt_period_min=" << format_double(cwt_period_min)
            << "\ncwt_period_max=" << format_double(cwt_period_max)
            << "\nmorlet_omega0=" << format_double(morlet_omega0)
            << "\nbeta=" << format_double(beta)
            << "\nlearning_rate=" << format_double(learning_rate)
            << "\nweight_decay=" << format_double(weight_decay)
            << "\nbatch_size=" << batch_size << "\nmax_epochs=" << max_epochs
            << "\npatience=" << patience << "\nmin_delta=" << format_double(min_delta)
            << "\npercentile=" << format_double(percentile)
            << "\ntime_dependent_thresholds=" << (time_dependent_thresholds ? 1 : 0)
            << "\ncontamination_label=" << format_double(contamination_label)
            << "\ncontamination_ml=" << format_double(contamination_ml)
            << "\nforest_trees=" << forest_trees
            << "\nforest_subsample=" << forest_subsample << "\nfusion_policy=" << fusion_policy
            << "\nlabel_overlap_k=" << label_overlap_k << "\n";
        for (const auto& [k, v] : raw) {
            if (k.rfind("scenario.", 0) == 0 || k.rfind("injection.", 0) == 0)
                out << k << "=" << v << "\n";
        }
        return out.str();
    }

    std::uint64_t hash() const {
        // FNV-1a, 64-bit.
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (unsigned char ch : canonical()) {
            h ^= ch;
            h *= 0x100000001b3ULL;
        }
        return h;
    }

    // One-line provenance stamp embedded in every output file.
    std::string provenance() const {
        std::ostringstream out;
        out << "laneguard config_hash=" << std::hex << hash() << std::dec << " seed=" << seed;
        return out.str();
    }
};

}  // namespace laneguard

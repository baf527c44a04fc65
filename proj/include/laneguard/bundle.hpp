#pragma once

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "laneguard/config.hpp"
#include "laneguard/core.hpp"
#include "laneguard/iforest.hpp"
#include "laneguard/mlbranch.hpp"
#include "laneguard/thresholds.hpp"
#include "laneguard/vqvae.hpp"
#include "laneguard/wavelet.hpp"

namespace laneguard {

// Everything `detect` needs, persisted as one .lgb archive:
//
//   LGB 1
//   meta <n>          n key=value text lines (config echo, thresholds meta,
//   ...               forest directory)
//   arrays <m>        m "name dtype length" lines; payload follows in order
//   ...
//   end
//   <raw little-endian payload>
//
// Serialization is canonical: assembly order is fixed, floats are written in
// binary, text numbers use shortest round-trip form. Loading a bundle and
// re-saving it reproduces the file byte for byte.
struct ArtifactBundle {
    static constexpr int kFormatVersion = 1;

    RunConfig config;
    std::uint64_t config_hash = 0;
    double cwt_global_max = 0.0;
    ThresholdSet thresholds;
    std::vector<std::pair<std::string, std::vector<float>>> model_weights;
    std::vector<std::pair<std::string, std::vector<double>>> model_stats;
    MlBranchModel ml;

    // Copies weights and running statistics out of a trained model.
    void store_model(VqVae<float>& model) {
        model_weights.clear();
        for (auto& p : model.params()) model_weights.emplace_back(p.name, p.param->v);
        model_stats.clear();
        static const char* kStatNames[6] = {"enc.bn1.running_mean", "enc.bn1.running_var",
                                            "enc.bn2.running_mean", "enc.bn2.running_var",
                                            "dec.bn1.running_mean", "dec.bn1.running_var"};
        for (int i = 0; i < 6; ++i) model_stats.emplace_back(kStatNames[i], model.bn_running(i));
    }

    // Rebuilds the model from stored arrays; shapes are validated.
    VqVae<float> restore_model() const {
        VqVae<float> model(config.seed, static_cast<float>(config.beta));
        auto params = model.params();
        if (params.size() != model_weights.size())
            throw Error("bundle: model parameter count mismatch");
        for (std::size_t i = 0; i < params.size(); ++i) {
            if (params[i].name != model_weights[i].first ||
                params[i].param->v.size() != model_weights[i].second.size())
                throw Error("bundle: parameter layout mismatch at " + model_weights[i].first);
            params[i].param->v = model_weights[i].second;
        }
        if (model_stats.size() != 6) throw Error("bundle: running statistics missing");
        for (int i = 0; i < 6; ++i) {
            auto& dst = model.bn_running(i);
            if (dst.size() != model_stats[static_cast<std::size_t>(i)].second.size())
                throw Error("bundle: running statistics shape mismatch");
            dst = model_stats[static_cast<std::size_t>(i)].second;
        }
        return model;
    }

    void save(const std::filesystem::path& path) const;
    static ArtifactBundle load(const std::filesystem::path& path);
};

namespace detail {

struct ArrayEntry {
    std::string name;
    char dtype;  // 'f' f32, 'd' f64, 'i' i32
    std::vector<char> bytes;
    std::size_t length = 0;
};

template <typename T>
void append_array(std::vector<ArrayEntry>& arrays, const std::string& name, char dtype,
                  const std::vector<T>& values) {
    ArrayEntry e;
    e.name = name;
    e.dtype = dtype;
    e.length = values.size();
    e.bytes.resize(values.size() * sizeof(T));
    std::memcpy(e.bytes.data(), values.data(), e.bytes.size());
    arrays.push_back(std::move(e));
}

template <typename T>
std::vector<T> read_array(const ArrayEntry& e) {
    std::vector<T> out(e.length);
    std::memcpy(out.data(), e.bytes.data(), e.bytes.size());
    return out;
}

}  // namespace detail

inline void ArtifactBundle::save(const std::filesystem::path& path) const {
    std::vector<std::string> meta;
    {
        std::ostringstream h;
        h << std::hex << config_hash;
        meta.push_back("config_hash=" + h.str());
    }
    {
        std::istringstream cfg(config.canonical());
        std::string line;
        while (std::getline(cfg, line)) meta.push_back("config." + line);
    }
    meta.push_back("thresholds.percentile=" + format_double(thresholds.percentile));
    meta.push_back(std::string("thresholds.time_dependent=") +
                   (thresholds.time_dependent ? "1" : "0"));
    meta.push_back("ml.count=" + std::to_string(ml.forests.size()));
    {
        std::size_t i = 0;
        for (const auto& [key, entry] : ml.forests) {
            const std::string p = "ml." + std::to_string(i) + ".";
            meta.push_back(p + "camera=" + key.camera);
            meta.push_back(p + "direction=" + std::to_string(key.direction));
            std::string lanes;
            for (int l : entry.lanes) lanes += (lanes.empty() ? "" : "|") + std::to_string(l);
            meta.push_back(p + "lanes=" + lanes);
            meta.push_back(p + "trees=" + std::to_string(entry.forest.trees.size()));
            meta.push_back(p + "subsample=" + std::to_string(entry.forest.subsample));
            meta.push_back(p + "contamination=" + format_double(entry.forest.contamination));
            meta.push_back(p + "offset=" + format_double(entry.forest.offset));
            ++i;
        }
    }

    std::vector<detail::ArrayEntry> arrays;
    detail::append_array(arrays, "cwt.global_max", 'd', std::vector<double>{cwt_global_max});
    {
        std::vector<double> t;
        if (thresholds.time_dependent) {
            for (int g = 0; g < kGroupCount; ++g)
                t.push_back(thresholds.per_group.at(static_cast<TimeOfDayGroup>(g)));
        } else {
            t.push_back(thresholds.pooled);
        }
        detail::append_array(arrays, "thresholds.values", 'd', t);
    }
    for (const auto& [name, values] : model_weights)
        detail::append_array(arrays, "model." + name, 'f', values);
    for (const auto& [name, values] : model_stats)
        detail::append_array(arrays, "model." + name, 'd', values);
    {
        std::size_t i = 0;
        for (const auto& [key, entry] : ml.forests) {
            const std::string p = "ml." + std::to_string(i) + ".";
            std::vector<std::int32_t> tree_sizes, features, sizes, lefts, rights;
            std::vector<double> splits;
            for (const auto& tree : entry.forest.trees) {
                tree_sizes.push_back(static_cast<std::int32_t>(tree.nodes.size()));
                for (const auto& nd : tree.nodes) {
                    features.push_back(nd.feature);
                    splits.push_back(nd.split);
                    sizes.push_back(nd.size);
                    lefts.push_back(nd.left);
                    rights.push_back(nd.right);
                }
            }
            detail::append_array(arrays, p + "tree_sizes", 'i', tree_sizes);
            detail::append_array(arrays, p + "feature", 'i', features);
            detail::append_array(arrays, p + "split", 'd', splits);
            detail::append_array(arrays, p + "size", 'i', sizes);
            detail::append_array(arrays, p + "left", 'i', lefts);
            detail::append_array(arrays, p + "right", 'i', rights);
            ++i;
        }
    }

    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << "LGB " << kFormatVersion << "\n";
    out << "meta " << meta.size() << "\n";
    for (const auto& m : meta) out << m << "\n";
    out << "arrays " << arrays.size() << "\n";
    for (const auto& a : arrays) out << a.name << ' ' << a.dtype << ' ' << a.length << "\n";
    out << "end\n";
    for (const auto& a : arrays) out.write(a.bytes.data(), static_cast<std::streamsize>(a.bytes.size()));
    if (!out) throw Error("write failed for " + path.string());
}

inline ArtifactBundle ArtifactBundle::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw Error("bundle: empty file");
    {
        std::istringstream hdr(line);
        std::string magic;
        int version = -1;
        hdr >> magic >> version;
        if (magic != "LGB") throw Error("bundle: not a laneguard bundle");
        if (version != kFormatVersion)
            throw Error("bundle: format version " + std::to_string(version) +
                        " not supported (expected " + std::to_string(kFormatVersion) + ")");
    }
    std::map<std::string, std::string> meta;
    std::vector<std::string> meta_order;
    if (!std::getline(in, line) || line.rfind("meta ", 0) != 0) throw Error("bundle: missing meta");
    {
        const auto n = std::stoul(line.substr(5));
        for (std::size_t i = 0; i < n; ++i) {
            if (!std::getline(in, line)) throw Error("bundle: truncated meta");
            const auto eq = line.find('=');
            if (eq == std::string::npos) throw Error("bundle: bad meta line");
            meta[line.substr(0, eq)] = line.substr(eq + 1);
            meta_order.push_back(line.substr(0, eq));
        }
    }
    std::vector<detail::ArrayEntry> arrays;
    if (!std::getline(in, line) || line.rfind("arrays ", 0) != 0)
        throw Error("bundle: missing arrays");
    {
        const auto n = std::stoul(line.substr(7));
        for (std::size_t i = 0; i < n; ++i) {
            if (!std::getline(in, line)) throw Error("bundle: truncated array directory");
            std::istringstream row(line);
            detail::ArrayEntry e;
            row >> e.name >> e.dtype >> e.length;
            if (row.fail()) throw Error("bundle: bad array line '" + line + "'");
            arrays.push_back(std::move(e));
        }
    }
    if (!std::getline(in, line) || line != "end") throw Error("bundle: missing end marker");
    for (auto& a : arrays) {
        const std::size_t unit = a.dtype == 'f' ? 4 : (a.dtype == 'd' ? 8 : 4);
        a.bytes.resize(a.length * unit);
        in.read(a.bytes.data(), static_cast<std::streamsize>(a.bytes.size()));
        if (in.gcount() != static_cast<std::streamsize>(a.bytes.size()))
            throw Error("bundle: truncated payload at " + a.name);
    }

    std::map<std::string, const detail::ArrayEntry*> by_name;
    for (const auto& a : arrays) by_name[a.name] = &a;
    const auto need = [&](const std::string& name) -> const detail::ArrayEntry& {
        auto it = by_name.find(name);
        if (it == by_name.end()) throw Error("bundle: missing array " + name);
        return *it->second;
    };

    ArtifactBundle b;
    b.config_hash = std::stoull(meta.at("config_hash"), nullptr, 16);
    {
        std::string cfg_text;
        std::istringstream all;
        for (const auto& key : meta_order) {
            if (key.rfind("config.", 0) == 0) cfg_text += key.substr(7) + "=" + meta.at(key) + "\n";
        }
        b.config = RunConfig::from_kv(KeyValueFile::parse_text(cfg_text, path.string()));
    }
    b.cwt_global_max = detail::read_array<double>(need("cwt.global_max")).at(0);
    b.thresholds.percentile = KeyValueFile::to_double(meta.at("thresholds.percentile"),
                                                      "thresholds.percentile");
    b.thresholds.time_dependent = meta.at("thresholds.time_dependent") == "1";
    {
        const auto t = detail::read_array<double>(need("thresholds.values"));
        if (b.thresholds.time_dependent) {
            if (t.size() != kGroupCount) throw Error("bundle: bad threshold count");
            for (int g = 0; g < kGroupCount; ++g)
                b.thresholds.per_group[static_cast<TimeOfDayGroup>(g)] = t[static_cast<std::size_t>(g)];
        } else {
            b.thresholds.pooled = t.at(0);
        }
    }
    // Model arrays: recover names and order from a freshly built model.
    {
        VqVae<float> proto(b.config.seed, static_cast<float>(b.config.beta));
        for (auto& p : proto.params()) {
            b.model_weights.emplace_back(p.name,
                                         detail::read_array<float>(need("model." + p.name)));
        }
        static const char* kStatNames[6] = {"enc.bn1.running_mean", "enc.bn1.running_var",
                                            "enc.bn2.running_mean", "enc.bn2.running_var",
                                            "dec.bn1.running_mean", "dec.bn1.running_var"};
        for (const auto* name : kStatNames) {
            b.model_stats.emplace_back(name,
                                       detail::read_array<double>(need(std::string("model.") + name)));
        }
    }
    {
        const auto count = std::stoul(meta.at("ml.count"));
        for (std::size_t i = 0; i < count; ++i) {
            const std::string p = "ml." + std::to_string(i) + ".";
            DirectionKey key;
            key.camera = meta.at(p + "camera");
            key.direction = std::stoi(meta.at(p + "direction"));
            MlBranchModel::DirectionForest entry;
            {
                const std::string lanes = meta.at(p + "lanes");
                std::size_t pos = 0;
                while (pos <= lanes.size()) {
                    const auto bar = lanes.find('|', pos);
                    const auto tok = lanes.substr(
                        pos, bar == std::string::npos ? std::string::npos : bar - pos);
                    if (!tok.empty()) entry.lanes.push_back(std::stoi(tok));
                    if (bar == std::string::npos) break;
                    pos = bar + 1;
                }
            }
            entry.forest.subsample = std::stoul(meta.at(p + "subsample"));
            entry.forest.contamination =
                KeyValueFile::to_double(meta.at(p + "contamination"), p + "contamination");
            entry.forest.offset = KeyValueFile::to_double(meta.at(p + "offset"), p + "offset");
            entry.forest.dim = entry.lanes.size();
            const auto tree_sizes = detail::read_array<std::int32_t>(need(p + "tree_sizes"));
            const auto features = detail::read_array<std::int32_t>(need(p + "feature"));
            const auto splits = detail::read_array<double>(need(p + "split"));
            const auto sizes = detail::read_array<std::int32_t>(need(p + "size"));
            const auto lefts = detail::read_array<std::int32_t>(need(p + "left"));
            const auto rights = detail::read_array<std::int32_t>(need(p + "right"));
            std::size_t cursor = 0;
            for (auto ts : tree_sizes) {
                IsolationTree tree;
                tree.nodes.resize(static_cast<std::size_t>(ts));
                for (std::int32_t j = 0; j < ts; ++j) {
                    auto& nd = tree.nodes[static_cast<std::size_t>(j)];
                    nd.feature = features.at(cursor);
                    nd.split = splits.at(cursor);
                    nd.size = sizes.at(cursor);
                    nd.left = lefts.at(cursor);
                    nd.right = rights.at(cursor);
                    ++cursor;
                }
                entry.forest.trees.push_back(std::move(tree));
            }
            b.ml.forests[key] = std::move(entry);
        }
    }
    return b;
}

}  // namespace laneguard

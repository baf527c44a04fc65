#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "laneguard/core.hpp"

namespace laneguard {

struct ConfusionCounts {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;
    std::int64_t tn = 0;

    std::int64_t total() const { return tp + fp + fn + tn; }

    void add(bool predicted, bool actual) {
        if (predicted && actual) ++tp;
        else if (predicted && !actual) ++fp;
        else if (!predicted && actual) ++fn;
        else ++tn;
    }
};

// Confusion-matrix metrics. A metric whose denominator is zero is reported
// as absent rather than coerced to 0, so degenerate sets cannot silently
// score perfect.
struct MetricSet {
    std::optional<double> accuracy;
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> f1;
    std::optional<double> fpr;
    std::optional<double> fnr;
};

inline MetricSet metrics(const ConfusionCounts& c) {
    if (c.tp < 0 || c.fp < 0 || c.fn < 0 || c.tn < 0)
        throw Error("negative confusion count");
    if (c.total() == 0) throw Error("empty confusion matrix");
    MetricSet m;
    const auto tp = static_cast<double>(c.tp), fp = static_cast<double>(c.fp);
    const auto fn = static_cast<double>(c.fn), tn = static_cast<double>(c.tn);
    m.accuracy = (tp + tn) / static_cast<double>(c.total());
    if (c.tp + c.fp > 0) m.precision = tp / (tp + fp);
    if (c.tp + c.fn > 0) m.recall = tp / (tp + fn);
    if (m.precision && m.recall && (*m.precision + *m.recall) > 0.0)
        m.f1 = 2.0 * *m.precision * *m.recall / (*m.precision + *m.recall);
    if (c.fp + c.tn > 0) m.fpr = fp / (fp + tn);
    if (c.fn + c.tp > 0) m.fnr = fn / (fn + tp);
    return m;
}

// Aggregates predictions against ground-truth labels sharing a key space.
// Keys must match exactly; a missing or extra key is a caller bug worth
// surfacing, not skipping.
template <typename Key>
ConfusionCounts confusion(const std::map<Key, bool>& predicted,
                          const std::map<Key, bool>& actual) {
    if (predicted.size() != actual.size())
        throw Error("verdicts and labels disagree on sample count");
    ConfusionCounts c;
    auto it_a = actual.begin();
    for (auto it_p = predicted.begin(); it_p != predicted.end(); ++it_p, ++it_a) {
        if (it_p->first != it_a->first) throw Error("verdicts and labels disagree on keys");
        c.add(it_p->second, it_a->second);
    }
    return c;
}

}  // namespace laneguard

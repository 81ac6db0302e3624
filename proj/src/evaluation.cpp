// Copyright 2025 loganomaly Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "loganomaly/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "loganomaly/errors.hpp"

namespace loganomaly {

void split_train_test(const LabeledCorpus& corpus, double ratio,
                      std::uint64_t seed, SplitMode mode, LabeledCorpus& train,
                      LabeledCorpus& test) {
    const std::size_t n = corpus.entries.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (mode == SplitMode::seeded) {
        // Fisher-Yates with an explicit modulo draw: std::shuffle leaves the
        // permutation implementation-defined, and the partition must be
        // reproducible across standard libraries.
        std::mt19937_64 rng(seed);
        for (std::size_t i = n; i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(rng() % i);
            std::swap(order[i - 1], order[j]);
        }
    }
    const std::size_t n_train = static_cast<std::size_t>(
        std::floor(ratio * static_cast<double>(n)));

    train.entries.clear();
    test.entries.clear();
    train.skipped.clear();
    test.skipped.clear();
    train.labeled = corpus.labeled;
    test.labeled = corpus.labeled;
    train.entries.reserve(n_train);
    test.entries.reserve(n - n_train);
    for (std::size_t k = 0; k < n; ++k) {
        (k < n_train ? train : test).entries.push_back(corpus.entries[order[k]]);
    }
}

Confusion confusion(const std::vector<Label>& labels,
                    const std::vector<Verdict>& predictions) {
    if (labels.size() != predictions.size()) {
        throw LengthMismatch("confusion needs equal list lengths, got " +
                             std::to_string(labels.size()) + " labels and " +
                             std::to_string(predictions.size()) +
                             " predictions");
    }
    Confusion c;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const bool is_anomaly = labels[i] == Label::anomaly;
        const bool flagged = predictions[i] == Verdict::anomaly;
        if (is_anomaly && flagged) ++c.tp;
        else if (!is_anomaly && flagged) ++c.fp;
        else if (is_anomaly && !flagged) ++c.fn;
        else ++c.tn;
    }
    return c;
}

Metrics compute_metrics(const Confusion& c) {
    Metrics m;
    const std::size_t reported = c.tp + c.fp;
    const std::size_t actual = c.tp + c.fn;
    if (reported == 0) {
        m.precision_undefined = true;
    } else {
        m.precision = static_cast<double>(c.tp) / static_cast<double>(reported);
    }
    if (actual == 0) {
        m.recall_undefined = true;
    } else {
        m.recall = static_cast<double>(c.tp) / static_cast<double>(actual);
    }
    const double pr = m.precision + m.recall;
    if (pr == 0.0) {
        m.f_measure_undefined = true;
    } else {
        m.f_measure = 2.0 * m.precision * m.recall / pr;
    }
    return m;
}

EvalReport evaluate(const OcsvmModel& model, const LabeledCorpus& test) {
    if (!test.labeled) {
        throw UnlabeledCorpus("evaluation requires a labels file");
    }
    const std::size_t n = test.entries.size();

    std::vector<NormalizedMessage> msgs(n);
    for (std::size_t i = 0; i < n; ++i) msgs[i] = test.entries[i].normalized;
    std::vector<FeatureVector> features =
        extract_features_batch(msgs, model.dictionary, model.idf);
    std::vector<Point3> points = scale_batch(features, model.scaler);
    std::vector<double> values = decision_values(model, points);

    EvalReport report;
    report.scored.resize(n);
    std::vector<Label> labels(n);
    std::vector<Verdict> verdicts(n);
    for (std::size_t i = 0; i < n; ++i) {
        ScoredRecord& r = report.scored[i];
        r.line_number = test.entries[i].record.line_number;
        r.decision_value = values[i];
        r.verdict = values[i] >= 0.0 ? Verdict::normal : Verdict::anomaly;
        r.label = test.entries[i].label;
        labels[i] = r.label;
        verdicts[i] = r.verdict;
    }
    report.confusion = confusion(labels, verdicts);
    report.metrics = compute_metrics(report.confusion);
    std::sort(report.scored.begin(), report.scored.end(),
              [](const ScoredRecord& a, const ScoredRecord& b) {
                  if (a.decision_value != b.decision_value) {
                      return a.decision_value < b.decision_value;
                  }
                  return a.line_number < b.line_number;
              });
    return report;
}

}  // namespace loganomaly

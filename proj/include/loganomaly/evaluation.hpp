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

#ifndef LOGANOMALY_EVALUATION_HPP
#define LOGANOMALY_EVALUATION_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "loganomaly/ocsvm.hpp"
#include "loganomaly/syslog.hpp"

namespace loganomaly {

// Confusion counts with anomaly as the positive class.
struct Confusion {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    std::size_t tn = 0;
};

struct Metrics {
    double precision = 0.0;
    double recall = 0.0;
    double f_measure = 0.0;
    // Zero-denominator cases yield the metric 0 with its flag set.
    bool precision_undefined = false;
    bool recall_undefined = false;
    bool f_measure_undefined = false;
};

struct ScoredRecord {
    std::size_t line_number = 1;  // 1-based, from the source file
    double decision_value = 0.0;
    Verdict verdict = Verdict::normal;
    Label label = Label::normal;
};

struct EvalReport {
    Confusion confusion;
    Metrics metrics;
    // Sorted by ascending decision value (most anomalous first).
    std::vector<ScoredRecord> scored;
};

enum class SplitMode { seeded, chrono };

// Seeded uniform shuffle, then the first floor(ratio*n) entries are train
// and the rest test; chrono mode cuts by file order instead. Deterministic
// for a given seed across platforms.
void split_train_test(const LabeledCorpus& corpus, double ratio,
                      std::uint64_t seed, SplitMode mode, LabeledCorpus& train,
                      LabeledCorpus& test);

// Throws LengthMismatch when the two lists differ in size.
Confusion confusion(const std::vector<Label>& labels,
                    const std::vector<Verdict>& predictions);

// precision = tp/(tp+fp), recall = tp/(tp+fn), f = 2PR/(P+R).
Metrics compute_metrics(const Confusion& c);

// Scores every record of `test` against the model and assembles the report.
// Throws UnlabeledCorpus when the corpus carries no labels.
EvalReport evaluate(const OcsvmModel& model, const LabeledCorpus& test);

}  // namespace loganomaly

#endif  // LOGANOMALY_EVALUATION_HPP

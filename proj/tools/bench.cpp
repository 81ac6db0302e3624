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
//
// Compares the serial reference implementations against the OpenMP paths
// for the three batch-heavy operations and checks that both produce
// bit-identical results.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "loganomaly/features.hpp"
#include "loganomaly/kernel.hpp"
#include "loganomaly/ocsvm.hpp"
#include "loganomaly/synth.hpp"
#include "loganomaly/syslog.hpp"

namespace {

double now_seconds() {
#ifdef _OPENMP
    return omp_get_wtime();
#else
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
#endif
}

double time_best_of(int repeats, const std::function<void()>& fn) {
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
        const double t0 = now_seconds();
        fn();
        const double t1 = now_seconds();
        if (t1 - t0 < best) best = t1 - t0;
    }
    return best;
}

void print_row(const char* name, double serial, double parallel, bool match) {
    std::printf("%-22s  %10.4fs  %10.4fs  %7.2fx  %s\n", name, serial, parallel,
                parallel > 0.0 ? serial / parallel : 0.0,
                match ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
    using namespace loganomaly;

    std::size_t n = 4000;
    if (argc > 1) n = static_cast<std::size_t>(std::strtoull(argv[1], nullptr, 10));

    SynthConfig cfg;
    cfg.n_messages = n;
    SynthCorpus corpus = generate_corpus(cfg);

    std::vector<NormalizedMessage> msgs;
    msgs.reserve(corpus.lines.size());
    for (const std::string& line : corpus.lines) {
        RawLogLine raw{line, msgs.size() + 1};
        LineParseResult parsed = parse_syslog_line(raw);
        if (!parsed.record) continue;
        msgs.push_back(normalize_message(parsed.record->message));
    }

    Dictionary dict = build_dictionary(msgs, 1);
    IdfTable idf = fit_idf(msgs);

#ifdef _OPENMP
    std::printf("OpenMP enabled, %d thread(s), %zu messages\n",
                omp_get_max_threads(), msgs.size());
#else
    std::printf("OpenMP not available, serial build, %zu messages\n",
                msgs.size());
#endif
    std::printf("%-22s  %11s  %11s  %8s  %s\n", "operation", "serial",
                "parallel", "speedup", "results");

    bool all_match = true;

    std::vector<FeatureVector> feats_serial, feats_parallel;
    const double t_feat_s = time_best_of(
        3, [&] { feats_serial = extract_features_batch_serial(msgs, dict, idf); });
    const double t_feat_p = time_best_of(
        3, [&] { feats_parallel = extract_features_batch(msgs, dict, idf); });
    bool match = feats_serial.size() == feats_parallel.size();
    for (std::size_t i = 0; match && i < feats_serial.size(); ++i) {
        match = feats_serial[i].length == feats_parallel[i].length &&
                feats_serial[i].oov == feats_parallel[i].oov &&
                feats_serial[i].tfidf == feats_parallel[i].tfidf;
    }
    all_match = all_match && match;
    print_row("feature extraction", t_feat_s, t_feat_p, match);

    FeatureScaler scaler = fit_feature_scaler(feats_serial);
    std::vector<Point3> X = scale_batch(feats_serial, scaler);

    const std::size_t gram_n = X.size() < 2000 ? X.size() : 2000;
    std::vector<Point3> Xg(X.begin(), X.begin() + gram_n);
    KernelSpec kernel;
    kernel.gamma = auto_rbf_gamma(X);

    std::vector<double> gram_serial, gram_parallel;
    const double t_gram_s =
        time_best_of(3, [&] { gram_serial = gram_matrix_serial(kernel, Xg); });
    const double t_gram_p =
        time_best_of(3, [&] { gram_parallel = gram_matrix(kernel, Xg); });
    match = gram_serial == gram_parallel;
    all_match = all_match && match;
    print_row("gram matrix", t_gram_s, t_gram_p, match);

    OcsvmModel model;
    model.kernel = kernel;
    model.nu = 0.02;
    model.training_size = gram_n;
    model.rho = 0.5;
    const std::size_t n_sv = gram_n < 500 ? gram_n : 500;
    model.support_vectors.assign(Xg.begin(), Xg.begin() + n_sv);
    model.alphas.assign(n_sv, 1.0 / static_cast<double>(n_sv));

    std::vector<double> scores_serial, scores_parallel;
    const double t_score_s =
        time_best_of(3, [&] { scores_serial = decision_values_serial(model, X); });
    const double t_score_p =
        time_best_of(3, [&] { scores_parallel = decision_values(model, X); });
    match = scores_serial == scores_parallel;
    all_match = all_match && match;
    print_row("batch scoring", t_score_s, t_score_p, match);

    if (!all_match) {
        std::fprintf(stderr, "serial and parallel paths disagree\n");
        return 1;
    }
    return 0;
}

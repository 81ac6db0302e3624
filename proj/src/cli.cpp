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

#include "loganomaly/cli.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "loganomaly/errors.hpp"
#include "loganomaly/evaluation.hpp"
#include "loganomaly/features.hpp"
#include "loganomaly/model_io.hpp"
#include "loganomaly/ocsvm.hpp"
#include "loganomaly/qp_reference.hpp"
#include "loganomaly/synth.hpp"
#include "loganomaly/syslog.hpp"

namespace loganomaly {

namespace {

// Shortest decimal form that parses back to the same double.
std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    (void)ec;
    return std::string(buf, ptr);
}

std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string quoted = "\"";
    for (char c : field) {
        if (c == '"') quoted += "\"\"";
        else quoted.push_back(c);
    }
    quoted.push_back('"');
    return quoted;
}

// Creation timestamp; honors SOURCE_DATE_EPOCH so that repeated runs can
// produce byte-identical model files.
std::string creation_timestamp() {
    std::time_t now = std::time(nullptr);
    if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
        char* end = nullptr;
        long long parsed = std::strtoll(epoch, &end, 10);
        if (end != epoch && *end == '\0') now = static_cast<std::time_t>(parsed);
    }
    return format_syslog_timestamp(
        std::chrono::sys_seconds{std::chrono::seconds{now}});
}

struct TrainOptions {
    std::string kernel_name = "rbf";
    double nu = 0.02;
    std::string gamma = "auto";
    double coef0 = 0.0;
    int degree = 3;
    bool no_scale = false;
    double ratio = 0.6;
    std::string split = "seeded";
    std::uint64_t seed = 42;
};

void add_train_options(CLI::App* cmd, TrainOptions& opt, bool with_kernel) {
    if (with_kernel) {
        cmd->add_option("--kernel", opt.kernel_name,
                        "Kernel: rbf, linear, poly, sigmoid")
            ->default_val("rbf");
    }
    cmd->add_option("--nu", opt.nu,
                    "Upper bound on the training outlier fraction")
        ->default_val(0.02);
    cmd->add_option("--gamma", opt.gamma,
                    "Kernel width: 'auto' or a positive real")
        ->default_val("auto");
    cmd->add_option("--coef0", opt.coef0, "Kernel additive constant")
        ->default_val(0.0);
    cmd->add_option("--degree", opt.degree, "Polynomial kernel degree")
        ->default_val(3);
    cmd->add_flag("--no-scale", opt.no_scale,
                  "Use raw (S, L, G) features without standardization");
    cmd->add_option("--ratio", opt.ratio, "Training fraction of the corpus")
        ->default_val(0.6);
    cmd->add_option("--split", opt.split, "Split mode: seeded or chrono")
        ->default_val("seeded");
    cmd->add_option("--seed", opt.seed, "Seed for the split shuffle")
        ->default_val(42);
}

SplitMode parse_split_mode(const std::string& name) {
    if (name == "seeded") return SplitMode::seeded;
    if (name == "chrono") return SplitMode::chrono;
    throw Error("unknown split mode: '" + name +
                "' (expected seeded or chrono)");
}

KernelSpec resolve_kernel(const TrainOptions& opt, const std::string& name,
                          const std::vector<Point3>& X) {
    KernelSpec spec;
    spec.kind = kernel_kind_from_name(name);
    spec.coef0 = opt.coef0;
    spec.degree = opt.degree;
    if (opt.gamma == "auto") {
        spec.gamma =
            spec.kind == KernelKind::rbf ? auto_rbf_gamma(X) : 1.0 / 3.0;
    } else {
        char* end = nullptr;
        spec.gamma = std::strtod(opt.gamma.c_str(), &end);
        if (end == opt.gamma.c_str() || *end != '\0' || !(spec.gamma > 0.0)) {
            throw Error("--gamma must be 'auto' or a positive real, got '" +
                        opt.gamma + "'");
        }
    }
    return spec;
}

std::string describe_config(const TrainOptions& opt, const KernelSpec& spec) {
    return std::string(kernel_kind_name(spec.kind)) + ";nu=" +
           format_double(opt.nu) + ";gamma=" + format_double(spec.gamma) +
           ";coef0=" + format_double(spec.coef0) +
           ";degree=" + std::to_string(spec.degree) +
           ";scale=" + (opt.no_scale ? "off" : "on") +
           ";ratio=" + format_double(opt.ratio) + ";split=" + opt.split +
           ";seed=" + std::to_string(opt.seed);
}

// Fits dictionary, idf, and scaler on the training partition and returns
// the scaled training matrix through `X`.
OcsvmModel fit_pipeline(const LabeledCorpus& part, const TrainOptions& opt,
                        const std::string& kernel_name,
                        std::vector<Point3>& X) {
    std::vector<NormalizedMessage> normal_msgs;
    std::vector<NormalizedMessage> all_msgs;
    all_msgs.reserve(part.entries.size());
    for (const CorpusEntry& entry : part.entries) {
        all_msgs.push_back(entry.normalized);
        if (entry.label == Label::normal) normal_msgs.push_back(entry.normalized);
    }

    Dictionary dict = build_dictionary(normal_msgs, 1);
    IdfTable idf = fit_idf(all_msgs);
    std::vector<FeatureVector> features =
        extract_features_batch(all_msgs, dict, idf);
    FeatureScaler scaler = fit_feature_scaler(features);
    scaler.enabled = !opt.no_scale;
    X = scale_batch(features, scaler);

    TrainConfig cfg;
    cfg.nu = opt.nu;
    cfg.kernel = resolve_kernel(opt, kernel_name, X);
    OcsvmModel model = train(X, cfg);
    model.scaler = scaler;
    model.dictionary = std::move(dict);
    model.idf = std::move(idf);
    return model;
}

void print_metrics_row(const std::string& kernel, const EvalReport& report) {
    const Metrics& m = report.metrics;
    const Confusion& c = report.confusion;
    std::printf("%-10s  %9.4f%s  %9.4f%s  %9.4f%s  %6zu %6zu %6zu %6zu\n",
                kernel.c_str(), m.precision, m.precision_undefined ? "*" : " ",
                m.recall, m.recall_undefined ? "*" : " ", m.f_measure,
                m.f_measure_undefined ? "*" : " ", c.tp, c.fp, c.fn, c.tn);
}

void print_metrics_header() {
    std::printf("%-10s  %10s  %10s  %10s  %6s %6s %6s %6s\n", "kernel",
                "precision", "recall", "f-measure", "tp", "fp", "fn", "tn");
}

nlohmann::ordered_json report_to_json(const std::string& kernel,
                                      const EvalReport& report) {
    nlohmann::ordered_json j;
    j["kernel"] = kernel;
    j["confusion"] = {{"tp", report.confusion.tp},
                      {"fp", report.confusion.fp},
                      {"fn", report.confusion.fn},
                      {"tn", report.confusion.tn}};
    j["metrics"] = {
        {"precision", report.metrics.precision},
        {"recall", report.metrics.recall},
        {"f_measure", report.metrics.f_measure},
        {"precision_undefined", report.metrics.precision_undefined},
        {"recall_undefined", report.metrics.recall_undefined},
        {"f_measure_undefined", report.metrics.f_measure_undefined},
    };
    nlohmann::ordered_json scored = nlohmann::ordered_json::array();
    for (const ScoredRecord& r : report.scored) {
        scored.push_back({{"line", r.line_number - 1},
                          {"decision_value", r.decision_value},
                          {"verdict", verdict_name(r.verdict)},
                          {"label", r.label == Label::anomaly ? "anomaly"
                                                              : "normal"}});
    }
    j["records"] = std::move(scored);
    return j;
}

int run_synth(const std::string& out_path, const std::string& labels_path,
              std::size_t n, double rate, std::uint64_t seed,
              std::size_t devices) {
    SynthConfig cfg;
    cfg.n_messages = n;
    cfg.anomaly_rate = rate;
    cfg.seed = seed;
    cfg.n_devices = devices;
    SynthCorpus corpus = generate_corpus(cfg);
    write_corpus(corpus, out_path, labels_path);
    std::fprintf(stderr, "wrote %zu lines (%zu anomalous) to %s, labels to %s\n",
                 corpus.lines.size(), corpus.anomaly_lines.size(),
                 out_path.c_str(), labels_path.c_str());
    return 0;
}

int run_train(const std::string& input, const std::string& labels,
              const std::string& model_path, const TrainOptions& opt) {
    LabeledCorpus corpus = load_corpus(input, labels);
    if (!corpus.skipped.empty()) {
        std::fprintf(stderr, "skipped %zu unparseable lines\n",
                     corpus.skipped.size());
    }
    LabeledCorpus train_part, test_part;
    split_train_test(corpus, opt.ratio, opt.seed, parse_split_mode(opt.split),
                     train_part, test_part);

    std::vector<Point3> X;
    OcsvmModel model = fit_pipeline(train_part, opt, opt.kernel_name, X);

    ModelProvenance provenance;
    provenance.seed = opt.seed;
    provenance.split_mode = parse_split_mode(opt.split);
    provenance.split_ratio = opt.ratio;
    provenance.config_hash =
        fnv1a64(describe_config(opt, model.kernel));
    provenance.created = creation_timestamp();
    save_model(model, provenance, model_path);

    std::fprintf(stderr,
                 "trained %s model on %zu logs: %zu support vectors, "
                 "rho=%s, gamma=%s\n",
                 kernel_kind_name(model.kernel.kind), model.training_size,
                 model.support_vectors.size(), format_double(model.rho).c_str(),
                 format_double(model.kernel.gamma).c_str());
    return 0;
}

int run_detect(const std::string& model_path, const std::string& input,
               const std::string& out_path) {
    OcsvmModel model = load_model(model_path);
    LabeledCorpus corpus = load_corpus(input);
    if (!corpus.skipped.empty()) {
        std::fprintf(stderr, "skipped %zu unparseable lines\n",
                     corpus.skipped.size());
    }

    const std::size_t n = corpus.entries.size();
    std::vector<NormalizedMessage> msgs(n);
    for (std::size_t i = 0; i < n; ++i) msgs[i] = corpus.entries[i].normalized;
    std::vector<FeatureVector> features =
        extract_features_batch(msgs, model.dictionary, model.idf);
    std::vector<Point3> points = scale_batch(features, model.scaler);
    std::vector<double> values = decision_values(model, points);

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (values[a] != values[b]) return values[a] < values[b];
        return corpus.entries[a].record.line_number <
               corpus.entries[b].record.line_number;
    });

    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write report: " + out_path);
    }
    out << "line,decision_value,verdict,raw\n";
    std::size_t flagged = 0;
    for (std::size_t i : order) {
        const Verdict verdict =
            values[i] >= 0.0 ? Verdict::normal : Verdict::anomaly;
        if (verdict == Verdict::anomaly) ++flagged;
        out << corpus.entries[i].record.line_number - 1 << ','
            << format_double(values[i]) << ',' << verdict_name(verdict) << ','
            << csv_quote(corpus.entries[i].record.raw) << '\n';
    }
    if (!out.flush()) {
        throw IoError("short write: " + out_path);
    }
    std::fprintf(stderr, "scored %zu lines, flagged %zu as anomalous\n", n,
                 flagged);
    return 0;
}

int run_evaluate(const std::string& model_path, const std::string& input,
                 const std::string& labels, const std::string& on,
                 const std::string& kernel_arg, const TrainOptions& opt,
                 const std::string& report_path) {
    if (model_path.empty() == kernel_arg.empty()) {
        throw Error("pass exactly one of --model or --kernel");
    }
    LabeledCorpus corpus = load_corpus(input, labels);
    if (!corpus.skipped.empty()) {
        std::fprintf(stderr, "skipped %zu unparseable lines\n",
                     corpus.skipped.size());
    }

    double ratio = opt.ratio;
    std::uint64_t seed = opt.seed;
    SplitMode mode = parse_split_mode(opt.split);

    std::vector<std::pair<std::string, OcsvmModel>> models;
    if (!model_path.empty()) {
        ModelProvenance provenance;
        OcsvmModel model = load_model(model_path, &provenance);
        // Rebuild the split the model was trained with.
        ratio = provenance.split_ratio;
        seed = provenance.seed;
        mode = provenance.split_mode;
        models.emplace_back(kernel_kind_name(model.kernel.kind),
                            std::move(model));
    }

    LabeledCorpus train_part, test_part;
    split_train_test(corpus, ratio, seed, mode, train_part, test_part);
    const LabeledCorpus& target =
        on == "train" ? train_part : (on == "all" ? corpus : test_part);
    if (on != "train" && on != "test" && on != "all") {
        throw Error("--on must be test, train, or all, got '" + on + "'");
    }

    if (!kernel_arg.empty()) {
        std::vector<std::string> kernels;
        if (kernel_arg == "all") {
            kernels = {"rbf", "linear", "poly", "sigmoid"};
        } else {
            kernels = {kernel_arg};
        }
        for (const std::string& name : kernels) {
            std::vector<Point3> X;
            models.emplace_back(name, fit_pipeline(train_part, opt, name, X));
        }
    }

    nlohmann::ordered_json report_doc = nlohmann::ordered_json::array();
    print_metrics_header();
    for (auto& [name, model] : models) {
        EvalReport report = evaluate(model, target);
        print_metrics_row(name, report);
        report_doc.push_back(report_to_json(name, report));
    }
    if (!report_path.empty()) {
        std::ofstream out(report_path, std::ios::binary);
        if (!out) {
            throw IoError("cannot write report: " + report_path);
        }
        out << report_doc.dump(2) << '\n';
        if (!out.flush()) {
            throw IoError("short write: " + report_path);
        }
    }
    return 0;
}

int run_features(const std::string& input,
                 const std::optional<std::string>& labels,
                 const std::string& out_path) {
    LabeledCorpus corpus = load_corpus(input, labels);
    if (!corpus.skipped.empty()) {
        std::fprintf(stderr, "skipped %zu unparseable lines\n",
                     corpus.skipped.size());
    }
    if (corpus.entries.empty()) {
        throw EmptyCorpus("no parseable lines in " + input);
    }

    std::vector<NormalizedMessage> all_msgs;
    std::vector<NormalizedMessage> normal_msgs;
    for (const CorpusEntry& entry : corpus.entries) {
        all_msgs.push_back(entry.normalized);
        if (entry.label == Label::normal) normal_msgs.push_back(entry.normalized);
    }
    Dictionary dict = build_dictionary(normal_msgs, 1);
    IdfTable idf = fit_idf(all_msgs);
    std::vector<FeatureVector> features =
        extract_features_batch(all_msgs, dict, idf);

    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write features: " + out_path);
    }
    out << "line,S,L,G,label\n";
    for (std::size_t i = 0; i < corpus.entries.size(); ++i) {
        out << corpus.entries[i].record.line_number - 1 << ','
            << features[i].length << ',' << features[i].oov << ','
            << format_double(features[i].tfidf) << ',';
        if (corpus.labeled) {
            out << (corpus.entries[i].label == Label::anomaly ? "anomaly"
                                                              : "normal");
        }
        out << '\n';
    }
    if (!out.flush()) {
        throw IoError("short write: " + out_path);
    }
    std::fprintf(stderr, "wrote %zu feature rows to %s\n",
                 corpus.entries.size(), out_path.c_str());
    return 0;
}

}  // namespace

int run_command(int argc, const char* const* argv) {
    CLI::App app{"One-class SVM anomaly detection for router syslog"};
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "Generate a labeled corpus");
    std::string synth_out, synth_labels;
    std::size_t synth_n = 2040;
    double synth_rate = 0.02;
    std::uint64_t synth_seed = 42;
    std::size_t synth_devices = 20;
    synth->add_option("--out", synth_out, "Log file to write")->required();
    synth->add_option("--labels", synth_labels, "Labels file to write")
        ->required();
    synth->add_option("--n", synth_n, "Number of log lines")->default_val(2040);
    synth->add_option("--anomaly-rate", synth_rate, "Fraction of anomalies")
        ->default_val(0.02);
    synth->add_option("--seed", synth_seed, "Generator seed")->default_val(42);
    synth->add_option("--devices", synth_devices, "Number of device names")
        ->default_val(20);

    // train
    auto* train_cmd = app.add_subcommand("train", "Train a model");
    std::string train_input, train_labels, train_model;
    TrainOptions train_opt;
    train_cmd->add_option("--input", train_input, "Log file")->required();
    train_cmd->add_option("--labels", train_labels, "Labels file")->required();
    train_cmd->add_option("--model", train_model, "Model file to write")
        ->required();
    add_train_options(train_cmd, train_opt, true);

    // detect
    auto* detect = app.add_subcommand("detect", "Score a log file");
    std::string detect_model, detect_input, detect_out;
    detect->add_option("--model", detect_model, "Model file")->required();
    detect->add_option("--input", detect_input, "Log file")->required();
    detect->add_option("--out", detect_out, "CSV report to write")->required();

    // evaluate
    auto* eval = app.add_subcommand("evaluate", "Measure detection accuracy");
    std::string eval_model, eval_input, eval_labels, eval_on = "test";
    std::string eval_kernel, eval_report;
    TrainOptions eval_opt;
    eval->add_option("--model", eval_model, "Model file to evaluate");
    eval->add_option("--input", eval_input, "Log file")->required();
    eval->add_option("--labels", eval_labels, "Labels file")->required();
    eval->add_option("--on", eval_on, "Partition: test, train, or all")
        ->default_val("test");
    eval->add_option("--kernel", eval_kernel,
                     "Train and compare: rbf, linear, poly, sigmoid, or all");
    eval->add_option("--report", eval_report, "Write the report as JSON");
    add_train_options(eval, eval_opt, false);

    // features
    auto* feats = app.add_subcommand("features", "Export the feature table");
    std::string feat_input, feat_labels, feat_out;
    feats->add_option("--input", feat_input, "Log file")->required();
    feats->add_option("--labels", feat_labels, "Labels file");
    feats->add_option("--out", feat_out, "CSV file to write")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e);
        }
        app.exit(e);
        return 1;
    }

    try {
        if (synth->parsed()) {
            return run_synth(synth_out, synth_labels, synth_n, synth_rate,
                             synth_seed, synth_devices);
        }
        if (train_cmd->parsed()) {
            return run_train(train_input, train_labels, train_model, train_opt);
        }
        if (detect->parsed()) {
            return run_detect(detect_model, detect_input, detect_out);
        }
        if (eval->parsed()) {
            return run_evaluate(eval_model, eval_input, eval_labels, eval_on,
                                eval_kernel, eval_opt, eval_report);
        }
        if (feats->parsed()) {
            std::optional<std::string> labels;
            if (!feat_labels.empty()) labels = feat_labels;
            return run_features(feat_input, labels, feat_out);
        }
    } catch (const DidNotConverge& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 2;
    }
    return 0;
}

}  // namespace loganomaly

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

#include <doctest.h>

#include <fcntl.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "loganomaly/cli.hpp"
#include "loganomaly/evaluation.hpp"
#include "loganomaly/model_io.hpp"

namespace loganomaly {
namespace {

struct TempDir {
    std::filesystem::path path;

    TempDir() {
        static int counter = 0;
        path = std::filesystem::temp_directory_path() /
               ("loganomaly_cli_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }

    std::string file(const std::string& name) const {
        return (path / name).string();
    }
};

// Redirects stdout and stderr to /dev/null for the lifetime of the object
// so command output does not interleave with the test runner's.
struct SilencedOutput {
    int saved_stdout;
    int saved_stderr;

    SilencedOutput() {
        std::fflush(stdout);
        std::fflush(stderr);
        saved_stdout = ::dup(1);
        saved_stderr = ::dup(2);
        const int devnull = ::open("/dev/null", O_WRONLY);
        ::dup2(devnull, 1);
        ::dup2(devnull, 2);
        ::close(devnull);
    }
    ~SilencedOutput() {
        std::fflush(stdout);
        std::fflush(stderr);
        ::dup2(saved_stdout, 1);
        ::dup2(saved_stderr, 2);
        ::close(saved_stdout);
        ::close(saved_stderr);
    }
};

int run(std::initializer_list<std::string> args) {
    std::vector<std::string> storage{"loganomaly"};
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const std::string& s : storage) argv.push_back(s.c_str());
    SilencedOutput quiet;
    return run_command(static_cast<int>(argv.size()), argv.data());
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return nlohmann::json::parse(in);
}

TEST_CASE("the pipeline runs end to end from the command line") {
    TempDir dir;
    const std::string log = dir.file("synthetic.log");
    const std::string labels = dir.file("synthetic.labels");
    const std::string model = dir.file("model.json");

    REQUIRE(run({"synth", "--out", log, "--labels", labels, "--n", "240",
                 "--seed", "7"}) == 0);
    CHECK(read_lines(log).size() == 240);
    CHECK(!read_lines(labels).empty());

    REQUIRE(run({"train", "--input", log, "--labels", labels, "--model",
                 model}) == 0);
    ModelProvenance provenance;
    OcsvmModel trained = load_model(model, &provenance);
    CHECK(trained.kernel.kind == KernelKind::rbf);
    CHECK(trained.training_size == 144);  // floor(0.6 * 240)
    CHECK(provenance.seed == 42);
    CHECK(provenance.split_ratio == 0.6);
    CHECK(provenance.split_mode == SplitMode::seeded);

    // Evaluating against the stored model reuses its recorded split.
    const std::string report_one = dir.file("report_one.json");
    REQUIRE(run({"evaluate", "--model", model, "--input", log, "--labels",
                 labels, "--report", report_one}) == 0);
    nlohmann::json doc = read_json(report_one);
    REQUIRE(doc.is_array());
    REQUIRE(doc.size() == 1);
    CHECK(doc[0]["kernel"] == "rbf");
    CHECK(doc[0]["records"].size() == 96);  // the held-out 40%
    const auto& confusion = doc[0]["confusion"];
    CHECK(confusion["tp"].get<int>() + confusion["fp"].get<int>() +
              confusion["fn"].get<int>() + confusion["tn"].get<int>() ==
          96);
    for (const auto& record : doc[0]["records"]) {
        CHECK(record["line"].get<int>() >= 0);
        CHECK(record["line"].get<int>() < 240);
        const std::string verdict = record["verdict"].get<std::string>();
        CHECK((verdict == "anomaly" || verdict == "normal"));
        const std::string label = record["label"].get<std::string>();
        CHECK((label == "anomaly" || label == "normal"));
    }

    // A kernel sweep retrains one model per kernel on the same split.
    const std::string report_all = dir.file("report_all.json");
    REQUIRE(run({"evaluate", "--kernel", "all", "--input", log, "--labels",
                 labels, "--report", report_all}) == 0);
    doc = read_json(report_all);
    REQUIRE(doc.size() == 4);
    CHECK(doc[0]["kernel"] == "rbf");
    CHECK(doc[1]["kernel"] == "linear");
    CHECK(doc[2]["kernel"] == "poly");
    CHECK(doc[3]["kernel"] == "sigmoid");
    for (const auto& entry : doc) CHECK(entry["records"].size() == 96);

    const std::string detections = dir.file("detections.csv");
    REQUIRE(run({"detect", "--model", model, "--input", log, "--out",
                 detections}) == 0);
    std::vector<std::string> rows = read_lines(detections);
    REQUIRE(rows.size() == 241);
    CHECK(rows[0] == "line,decision_value,verdict,raw");
    double previous = -1e300;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        std::istringstream fields(rows[i]);
        std::string line_field;
        std::string value_field;
        REQUIRE(std::getline(fields, line_field, ','));
        REQUIRE(std::getline(fields, value_field, ','));
        const int line = std::stoi(line_field);
        CHECK(line >= 0);
        CHECK(line < 240);
        const double value = std::stod(value_field);
        CHECK(value >= previous);
        previous = value;
    }

    const std::string features = dir.file("features.csv");
    REQUIRE(run({"features", "--input", log, "--labels", labels, "--out",
                 features}) == 0);
    rows = read_lines(features);
    REQUIRE(rows.size() == 241);
    CHECK(rows[0] == "line,S,L,G,label");
    CHECK(rows[1].rfind("0,", 0) == 0);
    CHECK((rows[1].substr(rows[1].rfind(',') + 1) == "anomaly" ||
           rows[1].substr(rows[1].rfind(',') + 1) == "normal"));
}

TEST_CASE("a chronological split trains cleanly") {
    TempDir dir;
    const std::string log = dir.file("synthetic.log");
    const std::string labels = dir.file("synthetic.labels");
    const std::string model = dir.file("model.json");
    REQUIRE(run({"synth", "--out", log, "--labels", labels, "--n", "200",
                 "--seed", "9"}) == 0);
    CHECK(run({"train", "--input", log, "--labels", labels, "--model", model,
               "--split", "chrono"}) == 0);
    ModelProvenance provenance;
    load_model(model, &provenance);
    CHECK(provenance.split_mode == SplitMode::chrono);
}

TEST_CASE("usage errors exit with status one") {
    TempDir dir;
    CHECK(run({}) == 1);
    CHECK(run({"frobnicate"}) == 1);
    CHECK(run({"synth", "--labels", dir.file("x.labels")}) == 1);
    CHECK(run({"synth", "--out", dir.file("x.log"), "--labels",
               dir.file("x.labels"), "--bogus"}) == 1);
    CHECK(run({"--help"}) == 0);
    CHECK(run({"synth", "--help"}) == 0);
}

TEST_CASE("runtime failures exit with status one") {
    TempDir dir;
    const std::string log = dir.file("tiny.log");
    const std::string labels = dir.file("tiny.labels");
    REQUIRE(run({"synth", "--out", log, "--labels", labels, "--n", "120",
                 "--seed", "3"}) == 0);

    CHECK(run({"detect", "--model", dir.file("absent.json"), "--input", log,
               "--out", dir.file("out.csv")}) == 1);
    CHECK(run({"evaluate", "--input", log, "--labels", labels}) == 1);
    CHECK(run({"evaluate", "--model", dir.file("absent.json"), "--kernel",
               "rbf", "--input", log, "--labels", labels}) == 1);
    CHECK(run({"evaluate", "--kernel", "fourier", "--input", log, "--labels",
               labels}) == 1);
    CHECK(run({"evaluate", "--kernel", "rbf", "--on", "sideways", "--input",
               log, "--labels", labels}) == 1);
    CHECK(run({"train", "--input", log, "--labels", labels, "--model",
               dir.file("m.json"), "--gamma", "wide"}) == 1);
    CHECK(run({"train", "--input", log, "--labels", labels, "--model",
               dir.file("m.json"), "--split", "alphabetical"}) == 1);
    CHECK(run({"train", "--input", dir.file("absent.log"), "--labels", labels,
               "--model", dir.file("m.json")}) == 1);
}

}  // namespace
}  // namespace loganomaly

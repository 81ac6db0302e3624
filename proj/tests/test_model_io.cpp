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

#include <unistd.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "loganomaly/errors.hpp"
#include "loganomaly/model_io.hpp"
#include "loganomaly/ocsvm.hpp"

namespace loganomaly {
namespace {

struct TempDir {
    std::filesystem::path path;

    TempDir() {
        static int counter = 0;
        path = std::filesystem::temp_directory_path() /
               ("loganomaly_model_" + std::to_string(::getpid()) + "_" +
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

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void spit(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    out << contents;
}

// A model exercising every serialized field with awkward reals: negative
// zero-free fractions, values without short decimal forms, and magnitudes
// spanning ten orders.
OcsvmModel sample_model() {
    OcsvmModel model;
    model.kernel = {KernelKind::rbf, 0.75, 0.25, 4};
    model.support_vectors = {{0.1, -2.5, 3.0},
                            {1e-3, 7.25, -0.125},
                            {4.0, 5.5, 6.0},
                            {-1.0 / 3.0, 2.0 / 7.0, 1.0e10},
                            {0.3333333333333333, -0.0001, 42.0}};
    model.alphas = {0.3, 0.25, 0.2, 0.15, 0.1};
    model.rho = 0.987654321;
    model.scaler.mean = {1.5, 2.5, 3.5};
    model.scaler.std = {0.5, 1.25, 2.0};
    model.scaler.enabled = true;
    model.dictionary.push_word("link");
    model.dictionary.push_word("down");
    model.dictionary.push_word("flap");
    model.dictionary.set_min_df(2);
    model.idf.df = {{"link", 7}, {"down", 3}, {"flap", 1}};
    model.idf.total_documents = 7;
    model.idf.df_floor = 1;
    model.nu = 0.3;
    model.training_size = 10;
    return model;
}

ModelProvenance sample_provenance() {
    ModelProvenance provenance;
    provenance.seed = 99;
    provenance.split_mode = SplitMode::chrono;
    provenance.split_ratio = 0.7;
    provenance.config_hash = fnv1a64("abc");
    provenance.created = "01-03-2021 06:00:00 AM";
    return provenance;
}

TEST_CASE("models survive a save and load round trip field for field") {
    TempDir dir;
    const std::string path = dir.file("model.json");
    OcsvmModel model = sample_model();
    ModelProvenance provenance = sample_provenance();
    save_model(model, provenance, path);

    ModelProvenance loaded_provenance;
    OcsvmModel loaded = load_model(path, &loaded_provenance);

    CHECK(loaded.kernel.kind == model.kernel.kind);
    CHECK(loaded.kernel.gamma == model.kernel.gamma);
    CHECK(loaded.kernel.coef0 == model.kernel.coef0);
    CHECK(loaded.kernel.degree == model.kernel.degree);
    CHECK(loaded.support_vectors == model.support_vectors);
    CHECK(loaded.alphas == model.alphas);
    CHECK(loaded.rho == model.rho);
    CHECK(loaded.scaler.mean == model.scaler.mean);
    CHECK(loaded.scaler.std == model.scaler.std);
    CHECK(loaded.scaler.enabled == model.scaler.enabled);
    CHECK(loaded.dictionary.words() == model.dictionary.words());
    CHECK(loaded.dictionary.min_df() == model.dictionary.min_df());
    CHECK(loaded.dictionary.index_of("down") == 1);
    CHECK(loaded.idf.df == model.idf.df);
    CHECK(loaded.idf.total_documents == model.idf.total_documents);
    CHECK(loaded.idf.df_floor == model.idf.df_floor);
    CHECK(loaded.nu == model.nu);
    CHECK(loaded.training_size == model.training_size);

    CHECK(loaded_provenance.seed == provenance.seed);
    CHECK(loaded_provenance.split_mode == provenance.split_mode);
    CHECK(loaded_provenance.split_ratio == provenance.split_ratio);
    CHECK(loaded_provenance.config_hash == provenance.config_hash);
    CHECK(loaded_provenance.created == provenance.created);
}

TEST_CASE("saving the same model twice writes identical bytes") {
    TempDir dir;
    OcsvmModel model = sample_model();
    ModelProvenance provenance = sample_provenance();
    save_model(model, provenance, dir.file("a.json"));
    save_model(model, provenance, dir.file("b.json"));
    CHECK(slurp(dir.file("a.json")) == slurp(dir.file("b.json")));
}

TEST_CASE("a loaded model saves back to identical bytes") {
    TempDir dir;
    save_model(sample_model(), sample_provenance(), dir.file("a.json"));

    ModelProvenance provenance;
    OcsvmModel loaded = load_model(dir.file("a.json"), &provenance);
    save_model(loaded, provenance, dir.file("b.json"));
    CHECK(slurp(dir.file("a.json")) == slurp(dir.file("b.json")));
}

TEST_CASE("loaded models score points bit-identically") {
    TempDir dir;
    const std::string path = dir.file("model.json");
    OcsvmModel model = sample_model();
    save_model(model, sample_provenance(), path);
    OcsvmModel loaded = load_model(path);

    std::mt19937_64 rng(301);
    for (int i = 0; i < 100; ++i) {
        auto coord = [&]() {
            return 20.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 10.0;
        };
        Point3 x{coord(), coord(), coord()};
        CHECK(decision_value(model, x) == decision_value(loaded, x));
    }
}

TEST_CASE("unknown format versions are refused") {
    TempDir dir;
    const std::string path = dir.file("model.json");
    save_model(sample_model(), sample_provenance(), path);

    std::string text = slurp(path);
    const std::string needle = "\"format_version\": 1";
    const std::size_t at = text.find(needle);
    REQUIRE(at != std::string::npos);
    text.replace(at, needle.size(), "\"format_version\": 99");
    spit(path, text);
    CHECK_THROWS_AS(load_model(path), UnsupportedVersion);
}

TEST_CASE("infeasible or inconsistent payloads are rejected on load") {
    TempDir dir;
    const std::string path = dir.file("model.json");
    const ModelProvenance provenance = sample_provenance();

    auto save_and_expect_corrupt = [&](const OcsvmModel& broken) {
        save_model(broken, provenance, path);
        CHECK_THROWS_AS(load_model(path), CorruptModel);
    };

    OcsvmModel broken = sample_model();
    broken.alphas = {0.1, 0.1, 0.1, 0.1, 0.1};  // sums to 0.5
    save_and_expect_corrupt(broken);

    broken = sample_model();
    broken.alphas = {0.5, 0.2, 0.1, 0.1, 0.1};  // 0.5 > 1/(nu l) = 1/3
    save_and_expect_corrupt(broken);

    broken = sample_model();
    broken.nu = 1.5;
    save_and_expect_corrupt(broken);

    broken = sample_model();
    broken.kernel.gamma = 0.0;
    save_and_expect_corrupt(broken);

    broken = sample_model();
    broken.scaler.std = {1.0, 0.0, 1.0};
    save_and_expect_corrupt(broken);

    broken = sample_model();
    broken.support_vectors.clear();
    broken.alphas.clear();
    save_and_expect_corrupt(broken);

    broken = sample_model();
    broken.alphas.pop_back();  // length no longer matches support_vectors
    save_and_expect_corrupt(broken);

    broken = sample_model();
    broken.training_size = 0;
    save_and_expect_corrupt(broken);
}

TEST_CASE("malformed documents are rejected on load") {
    TempDir dir;
    const std::string path = dir.file("model.json");

    spit(path, "this is not json{");
    CHECK_THROWS_AS(load_model(path), CorruptModel);

    spit(path, "{}");
    CHECK_THROWS_AS(load_model(path), CorruptModel);

    spit(path, "[1, 2, 3]");
    CHECK_THROWS_AS(load_model(path), CorruptModel);
}

TEST_CASE("filesystem failures raise io errors") {
    TempDir dir;
    CHECK_THROWS_AS(load_model(dir.file("absent.json")), IoError);
    CHECK_THROWS_AS(save_model(sample_model(), sample_provenance(),
                               dir.file("no/such/dir/model.json")),
                    IoError);
}

TEST_CASE("the configuration hash matches the published test vectors") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

}  // namespace
}  // namespace loganomaly

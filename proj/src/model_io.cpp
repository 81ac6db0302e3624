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

#include "loganomaly/model_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "loganomaly/errors.hpp"

namespace loganomaly {

using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int kFormatVersion = 1;

const char* split_mode_name(SplitMode mode) {
    return mode == SplitMode::seeded ? "seeded" : "chrono";
}

SplitMode split_mode_from_name(const std::string& name) {
    if (name == "seeded") return SplitMode::seeded;
    if (name == "chrono") return SplitMode::chrono;
    throw CorruptModel("unknown split mode: '" + name + "'");
}

void validate_model(const OcsvmModel& model) {
    if (model.training_size == 0) {
        throw CorruptModel("training_size must be positive");
    }
    if (!(model.nu > 0.0) || model.nu > 1.0) {
        throw CorruptModel("nu outside (0, 1]: " + std::to_string(model.nu));
    }
    if (model.support_vectors.empty() ||
        model.support_vectors.size() != model.alphas.size()) {
        throw CorruptModel("support_vectors and alphas must be nonempty "
                           "lists of equal length");
    }
    const double upper =
        1.0 / (model.nu * static_cast<double>(model.training_size));
    double sum = 0.0;
    for (double a : model.alphas) {
        if (!(a > 0.0) || a > upper + 1e-12) {
            throw CorruptModel("alpha outside (0, 1/(nu l)]: " +
                               std::to_string(a));
        }
        sum += a;
    }
    if (std::abs(sum - 1.0) > 1e-6) {
        throw CorruptModel("alphas sum to " + std::to_string(sum) +
                           ", expected 1");
    }
    if (!(model.kernel.gamma > 0.0) || model.kernel.degree < 1) {
        throw CorruptModel("kernel parameters out of range");
    }
    for (double s : model.scaler.std) {
        if (!(s > 0.0)) {
            throw CorruptModel("scaler std must be positive");
        }
    }
}

double require_double(const ordered_json& node, const char* key) {
    if (!node.contains(key) || !node[key].is_number()) {
        throw CorruptModel(std::string("missing or non-numeric field: ") + key);
    }
    return node[key].get<double>();
}

}  // namespace

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 0x100000001b3ull;
    }
    return hash;
}

void save_model(const OcsvmModel& model, const ModelProvenance& provenance,
                const std::string& path) {
    ordered_json doc;
    doc["format_version"] = kFormatVersion;
    doc["created"] = provenance.created;
    doc["provenance"] = {
        {"seed", provenance.seed},
        {"split_mode", split_mode_name(provenance.split_mode)},
        {"split_ratio", provenance.split_ratio},
        {"config_hash", provenance.config_hash},
    };
    doc["nu"] = model.nu;
    doc["training_size"] = model.training_size;
    doc["kernel"] = {
        {"kind", kernel_kind_name(model.kernel.kind)},
        {"gamma", model.kernel.gamma},
        {"coef0", model.kernel.coef0},
        {"degree", model.kernel.degree},
    };
    doc["rho"] = model.rho;
    doc["scaler"] = {
        {"enabled", model.scaler.enabled},
        {"mean", model.scaler.mean},
        {"std", model.scaler.std},
    };
    doc["support_vectors"] = model.support_vectors;
    doc["alphas"] = model.alphas;
    doc["dictionary"] = {
        {"min_df", model.dictionary.min_df()},
        {"words", model.dictionary.words()},
    };
    ordered_json df = ordered_json::object();
    {
        std::vector<std::string> keys;
        keys.reserve(model.idf.df.size());
        for (const auto& [word, count] : model.idf.df) keys.push_back(word);
        std::sort(keys.begin(), keys.end());
        for (const std::string& word : keys) df[word] = model.idf.df.at(word);
    }
    doc["idf"] = {
        {"total_documents", model.idf.total_documents},
        {"df_floor", model.idf.df_floor},
        {"df", std::move(df)},
    };

    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write model file: " + path);
    }
    out << doc.dump(2) << '\n';
    if (!out.flush()) {
        throw IoError("short write: " + path);
    }
}

OcsvmModel load_model(const std::string& path, ModelProvenance* provenance) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open model file: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();

    ordered_json doc;
    try {
        doc = ordered_json::parse(buffer.str());
    } catch (const std::exception& e) {
        throw CorruptModel(std::string("model file is not valid: ") + e.what());
    }

    if (!doc.contains("format_version") ||
        !doc["format_version"].is_number_integer()) {
        throw CorruptModel("missing format_version");
    }
    const int version = doc["format_version"].get<int>();
    if (version != kFormatVersion) {
        throw UnsupportedVersion("model format_version " +
                                 std::to_string(version) + ", expected " +
                                 std::to_string(kFormatVersion));
    }

    try {
        OcsvmModel model;
        model.nu = require_double(doc, "nu");
        model.training_size = doc.at("training_size").get<std::size_t>();

        const ordered_json& kernel = doc.at("kernel");
        model.kernel.kind =
            kernel_kind_from_name(kernel.at("kind").get<std::string>());
        model.kernel.gamma = require_double(kernel, "gamma");
        model.kernel.coef0 = require_double(kernel, "coef0");
        model.kernel.degree = kernel.at("degree").get<int>();

        model.rho = require_double(doc, "rho");

        const ordered_json& scaler = doc.at("scaler");
        model.scaler.enabled = scaler.at("enabled").get<bool>();
        model.scaler.mean = scaler.at("mean").get<Point3>();
        model.scaler.std = scaler.at("std").get<Point3>();

        model.support_vectors =
            doc.at("support_vectors").get<std::vector<Point3>>();
        model.alphas = doc.at("alphas").get<std::vector<double>>();

        const ordered_json& dict = doc.at("dictionary");
        model.dictionary.set_min_df(dict.at("min_df").get<std::size_t>());
        for (const auto& word : dict.at("words")) {
            model.dictionary.push_word(word.get<std::string>());
        }

        const ordered_json& idf = doc.at("idf");
        model.idf.total_documents =
            idf.at("total_documents").get<std::size_t>();
        model.idf.df_floor = idf.at("df_floor").get<std::size_t>();
        for (const auto& [word, count] : idf.at("df").items()) {
            model.idf.df[word] = count.get<std::size_t>();
        }

        if (provenance && doc.contains("provenance")) {
            const ordered_json& prov = doc["provenance"];
            provenance->seed = prov.at("seed").get<std::uint64_t>();
            provenance->split_mode =
                split_mode_from_name(prov.at("split_mode").get<std::string>());
            provenance->split_ratio = require_double(prov, "split_ratio");
            provenance->config_hash =
                prov.at("config_hash").get<std::uint64_t>();
            provenance->created = doc.value("created", std::string{});
        }

        validate_model(model);
        return model;
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw CorruptModel(std::string("model file is malformed: ") + e.what());
    }
}

}  // namespace loganomaly

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

#include "loganomaly/features.hpp"

#include <cmath>
#include <unordered_set>

#include "loganomaly/errors.hpp"

namespace loganomaly {

void Dictionary::push_word(const std::string& word) {
    index_.emplace(word, words_.size());
    words_.push_back(word);
}

double IdfTable::idf(const std::string& word) const {
    auto it = df.find(word);
    std::size_t count = it == df.end() ? df_floor : it->second;
    if (count < df_floor) count = df_floor;
    return std::log(static_cast<double>(total_documents) /
                    static_cast<double>(count));
}

Dictionary build_dictionary(const std::vector<NormalizedMessage>& normals,
                            std::size_t min_df) {
    if (normals.empty()) {
        throw EmptyCorpus("cannot build a dictionary from zero normal logs");
    }
    // Document frequency per token, plus first-appearance order.
    std::unordered_map<std::string, std::size_t> df;
    std::vector<std::string> order;
    for (const NormalizedMessage& msg : normals) {
        std::unordered_set<std::string> seen;
        for (const std::string& token : msg.tokens) {
            if (!seen.insert(token).second) continue;
            auto [it, inserted] = df.emplace(token, 1);
            if (inserted) {
                order.push_back(token);
            } else {
                ++it->second;
            }
        }
    }
    Dictionary dict;
    dict.set_min_df(min_df);
    for (const std::string& token : order) {
        if (df[token] >= min_df) dict.push_word(token);
    }
    return dict;
}

std::vector<std::size_t> bow_count_row(const NormalizedMessage& msg,
                                       const Dictionary& dict) {
    std::vector<std::size_t> row(dict.size(), 0);
    for (const std::string& token : msg.tokens) {
        std::size_t j = dict.index_of(token);
        if (j != Dictionary::npos) ++row[j];
    }
    return row;
}

std::size_t token_length(const NormalizedMessage& msg) {
    return msg.tokens.size();
}

std::size_t oov_count(const NormalizedMessage& msg, const Dictionary& dict) {
    std::size_t in_dict = 0;
    for (const std::string& token : msg.tokens) {
        if (dict.contains(token)) ++in_dict;
    }
    return msg.tokens.size() - in_dict;
}

IdfTable fit_idf(const std::vector<NormalizedMessage>& training) {
    if (training.empty()) {
        throw EmptyCorpus("cannot fit document frequencies on zero logs");
    }
    IdfTable table;
    table.total_documents = training.size();
    for (const NormalizedMessage& msg : training) {
        std::unordered_set<std::string> seen;
        for (const std::string& token : msg.tokens) {
            if (seen.insert(token).second) ++table.df[token];
        }
    }
    return table;
}

double tfidf_sum(const NormalizedMessage& msg, const IdfTable& idf) {
    // Occurrence counts of the distinct words, in first-appearance order so
    // the summation order (and thus the floating-point result) is stable.
    std::unordered_map<std::string, std::size_t> tf;
    std::vector<const std::string*> order;
    for (const std::string& token : msg.tokens) {
        auto [it, inserted] = tf.emplace(token, 1);
        if (inserted) {
            order.push_back(&it->first);
        } else {
            ++it->second;
        }
    }
    double sum = 0.0;
    for (const std::string* word : order) {
        sum += static_cast<double>(tf[*word]) * idf.idf(*word);
    }
    return sum;
}

FeatureVector extract_features(const NormalizedMessage& msg,
                               const Dictionary& dict, const IdfTable& idf) {
    FeatureVector v;
    v.length = token_length(msg);
    v.oov = oov_count(msg, dict);
    v.tfidf = tfidf_sum(msg, idf);
    return v;
}

std::vector<FeatureVector> extract_features_batch_serial(
    const std::vector<NormalizedMessage>& msgs, const Dictionary& dict,
    const IdfTable& idf) {
    std::vector<FeatureVector> out(msgs.size());
    for (std::size_t i = 0; i < msgs.size(); ++i) {
        out[i] = extract_features(msgs[i], dict, idf);
    }
    return out;
}

std::vector<FeatureVector> extract_features_batch(
    const std::vector<NormalizedMessage>& msgs, const Dictionary& dict,
    const IdfTable& idf) {
    std::vector<FeatureVector> out(msgs.size());
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(msgs.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] =
            extract_features(msgs[static_cast<std::size_t>(i)], dict, idf);
    }
    return out;
}

FeatureScaler fit_feature_scaler(const std::vector<FeatureVector>& vectors) {
    if (vectors.size() < 2) {
        throw InsufficientData("feature scaling needs at least 2 vectors, got " +
                               std::to_string(vectors.size()));
    }
    const double l = static_cast<double>(vectors.size());
    FeatureScaler scaler;
    for (int c = 0; c < 3; ++c) {
        double sum = 0.0;
        for (const FeatureVector& v : vectors) {
            double x = c == 0   ? static_cast<double>(v.length)
                       : c == 1 ? static_cast<double>(v.oov)
                                : v.tfidf;
            sum += x;
        }
        const double mean = sum / l;
        double ss = 0.0;
        for (const FeatureVector& v : vectors) {
            double x = c == 0   ? static_cast<double>(v.length)
                       : c == 1 ? static_cast<double>(v.oov)
                                : v.tfidf;
            ss += (x - mean) * (x - mean);
        }
        const double variance = ss / (l - 1.0);
        scaler.mean[c] = mean;
        scaler.std[c] = variance > 0.0 ? std::sqrt(variance) : 1.0;
    }
    return scaler;
}

Point3 scale(const FeatureVector& v, const FeatureScaler& scaler) {
    Point3 raw{static_cast<double>(v.length), static_cast<double>(v.oov),
               v.tfidf};
    if (!scaler.enabled) return raw;
    Point3 out;
    for (int c = 0; c < 3; ++c) {
        out[c] = (raw[c] - scaler.mean[c]) / scaler.std[c];
    }
    return out;
}

std::vector<Point3> scale_batch(const std::vector<FeatureVector>& vectors,
                                const FeatureScaler& scaler) {
    std::vector<Point3> out(vectors.size());
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        out[i] = scale(vectors[i], scaler);
    }
    return out;
}

}  // namespace loganomaly

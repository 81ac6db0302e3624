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

#ifndef LOGANOMALY_FEATURES_HPP
#define LOGANOMALY_FEATURES_HPP

#include <array>
#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

#include "loganomaly/syslog.hpp"

namespace loganomaly {

// A scaled (or raw) feature point: (S, L, G) as reals.
using Point3 = std::array<double, 3>;

// Vocabulary built from normal training logs. Word indices are assigned in
// first-appearance order and are stable for the lifetime of the dictionary.
class Dictionary {
public:
    Dictionary() = default;

    // Number of words m.
    std::size_t size() const { return words_.size(); }

    // Column index of `word`, or npos if the word is out of dictionary.
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t index_of(const std::string& word) const {
        auto it = index_.find(word);
        return it == index_.end() ? npos : it->second;
    }

    bool contains(const std::string& word) const {
        return index_.count(word) != 0;
    }

    // Words in index order.
    const std::vector<std::string>& words() const { return words_; }

    std::size_t min_df() const { return min_df_; }

    // Appends a word; caller guarantees uniqueness. Used by construction and
    // by model deserialization.
    void push_word(const std::string& word);
    void set_min_df(std::size_t min_df) { min_df_ = min_df; }

private:
    std::vector<std::string> words_;
    std::unordered_map<std::string, std::size_t> index_;
    std::size_t min_df_ = 1;
};

// Document frequencies over the training logs, for inverse document
// frequency weighting. Unseen words fall back to df_floor.
struct IdfTable {
    std::unordered_map<std::string, std::size_t> df;
    std::size_t total_documents = 0;  // N
    std::size_t df_floor = 1;

    // ln(N / max(df[word], df_floor)).
    double idf(const std::string& word) const;
};

// One log line reduced to the three features of the model input.
struct FeatureVector {
    std::size_t length = 0;  // S: token count
    std::size_t oov = 0;     // L: out-of-dictionary token count
    double tfidf = 0.0;      // G: TF-IDF sum
};

// Per-component standardization fitted on the training features.
struct FeatureScaler {
    Point3 mean{0.0, 0.0, 0.0};
    Point3 std{1.0, 1.0, 1.0};
    bool enabled = true;
};

// Builds the dictionary from normal logs: all tokens whose document
// frequency is >= min_df, indexed in first-appearance order.
// Throws EmptyCorpus when `normals` is empty.
Dictionary build_dictionary(const std::vector<NormalizedMessage>& normals,
                            std::size_t min_df = 1);

// One bag-of-words row: component j counts occurrences of dictionary word j.
std::vector<std::size_t> bow_count_row(const NormalizedMessage& msg,
                                       const Dictionary& dict);

// S: number of tokens in the message.
std::size_t token_length(const NormalizedMessage& msg);

// L: count of token occurrences absent from the dictionary,
// i.e. token_length minus the bag-of-words row sum.
std::size_t oov_count(const NormalizedMessage& msg, const Dictionary& dict);

// Fits document frequencies over all training messages.
// Throws EmptyCorpus when `training` is empty.
IdfTable fit_idf(const std::vector<NormalizedMessage>& training);

// G: sum over the distinct words of msg of tf * ln(N / max(df, df_floor)).
double tfidf_sum(const NormalizedMessage& msg, const IdfTable& idf);

// (S, L, G) for one message.
FeatureVector extract_features(const NormalizedMessage& msg,
                               const Dictionary& dict, const IdfTable& idf);

// Batch feature extraction; parallel over messages, output order matches
// input order. The serial variant is the reference for testing.
std::vector<FeatureVector> extract_features_batch(
    const std::vector<NormalizedMessage>& msgs, const Dictionary& dict,
    const IdfTable& idf);
std::vector<FeatureVector> extract_features_batch_serial(
    const std::vector<NormalizedMessage>& msgs, const Dictionary& dict,
    const IdfTable& idf);

// Sample mean and sample standard deviation (divisor l-1) per component.
// Zero-variance components get std 1. Throws InsufficientData for fewer
// than 2 vectors.
FeatureScaler fit_feature_scaler(const std::vector<FeatureVector>& vectors);

// (v - mean) / std componentwise when enabled; raw (S, L, G) otherwise.
Point3 scale(const FeatureVector& v, const FeatureScaler& scaler);

std::vector<Point3> scale_batch(const std::vector<FeatureVector>& vectors,
                                const FeatureScaler& scaler);

}  // namespace loganomaly

#endif  // LOGANOMALY_FEATURES_HPP

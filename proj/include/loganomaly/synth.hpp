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

#ifndef LOGANOMALY_SYNTH_HPP
#define LOGANOMALY_SYNTH_HPP

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace loganomaly {

// Configuration for the deterministic router-syslog generator.
struct SynthConfig {
    std::size_t n_messages = 2040;
    double anomaly_rate = 0.02;
    std::uint64_t seed = 42;
    std::size_t n_devices = 20;
    std::chrono::sys_seconds start_time =
        std::chrono::sys_days{std::chrono::year{2021} / 3 / 1} +
        std::chrono::hours{6};
    double mean_interarrival_seconds = 30.0;
};

struct SynthCorpus {
    std::vector<std::string> lines;          // wire-format syslog lines
    std::vector<std::size_t> anomaly_lines;  // zero-based indices, ascending
};

// Generates exactly cfg.n_messages template-filled log lines with
// nondecreasing timestamps, round(n * anomaly_rate) of them drawn from the
// anomaly templates. Identical configs produce byte-identical corpora.
SynthCorpus generate_corpus(const SynthConfig& cfg);

// Writes corpus.lines to log_path (one line each, trailing newline) and the
// anomaly indices to labels_path (one per line, with a comment header).
void write_corpus(const SynthCorpus& corpus, const std::string& log_path,
                  const std::string& labels_path);

}  // namespace loganomaly

#endif  // LOGANOMALY_SYNTH_HPP

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

#ifndef LOGANOMALY_MODEL_IO_HPP
#define LOGANOMALY_MODEL_IO_HPP

#include <cstdint>
#include <string>

#include "loganomaly/evaluation.hpp"
#include "loganomaly/ocsvm.hpp"

namespace loganomaly {

// Provenance recorded alongside the model payload.
struct ModelProvenance {
    std::uint64_t seed = 42;
    SplitMode split_mode = SplitMode::seeded;
    double split_ratio = 0.6;
    std::uint64_t config_hash = 0;  // FNV-1a over the training configuration
    // Creation time formatted as the syslog timestamp; honors the
    // SOURCE_DATE_EPOCH convention so identical runs write identical bytes.
    std::string created;
};

// FNV-1a 64-bit hash of the textual training configuration.
std::uint64_t fnv1a64(const std::string& text);

// Writes the versioned model document (JSON, format_version first, reals in
// shortest round-trip form). Throws IoError when the path is not writable.
void save_model(const OcsvmModel& model, const ModelProvenance& provenance,
                const std::string& path);

// Reads a model document, validating format_version and the dual-feasibility
// invariants. Throws IoError, UnsupportedVersion, or CorruptModel.
OcsvmModel load_model(const std::string& path,
                      ModelProvenance* provenance = nullptr);

}  // namespace loganomaly

#endif  // LOGANOMALY_MODEL_IO_HPP

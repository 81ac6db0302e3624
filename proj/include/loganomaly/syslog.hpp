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

#ifndef LOGANOMALY_SYSLOG_HPP
#define LOGANOMALY_SYSLOG_HPP

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace loganomaly {

// One raw line from a syslog file, newline already stripped.
struct RawLogLine {
    std::string text;
    std::size_t line_number = 1;  // 1-based position in the source file
};

// A parsed router log line. Layout on the wire:
//
//   30-06-2018 07:00:07 AM HCM-Q12-MX5 last message repeated 19 times
//   ^~~~~~~~~~~~~~~~~~~~~~ ^~~~~~~~~~~ ^~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
//   timestamp              device       message
struct LogRecord {
    std::chrono::sys_seconds timestamp{};
    std::string device_name;
    std::string message;
    std::string raw;                // original line, byte-exact
    std::size_t line_number = 1;    // 1-based position in the source file
};

// A message after text normalization. Tokens are non-empty and consist of
// lowercase ASCII letters only.
struct NormalizedMessage {
    std::vector<std::string> tokens;
};

enum class ParseError {
    none,
    malformed_timestamp,  // leading field is not DD-MM-YYYY HH:MM:SS AM|PM
    missing_device,       // nothing after the AM/PM marker
};

const char* parse_error_name(ParseError err);

struct LineParseResult {
    std::optional<LogRecord> record;
    ParseError error = ParseError::none;
};

// Parses one syslog line. On failure the result carries the error reason and
// no record; callers decide whether to skip or abort.
LineParseResult parse_syslog_line(const RawLogLine& line);

// Formats a time point back into the wire format above. Inverse of the
// timestamp parsing inside parse_syslog_line.
std::string format_syslog_timestamp(std::chrono::sys_seconds tp);

// Applies the normalization steps to a message body: every character that is
// not an ASCII letter becomes a space, letters are lowercased, and the result
// is split on whitespace. Idempotent.
NormalizedMessage normalize_message(const std::string& message);

enum class Label : std::uint8_t { normal, anomaly };

struct CorpusEntry {
    LogRecord record;
    NormalizedMessage normalized;
    Label label = Label::normal;
};

// A malformed line that was skipped during ingestion.
struct SkippedLine {
    std::size_t line_number = 1;
    ParseError error = ParseError::none;
    std::string text;
};

struct LabeledCorpus {
    std::vector<CorpusEntry> entries;   // file order among parsed lines
    std::vector<SkippedLine> skipped;
    bool labeled = false;               // true iff a labels file was supplied
};

// Reads a syslog file (and optionally a labels file of zero-based line
// indices, one per line, '#' comments ignored). Malformed log lines are
// quarantined in `skipped`, never fatal.
//
// Throws FileNotFound and LabelIndexOutOfRange.
LabeledCorpus load_corpus(const std::string& log_path,
                          const std::optional<std::string>& labels_path = std::nullopt);

// Parses the labels-file payload: zero-based decimal indices, one per line.
// `line_count` is the number of lines in the log file the labels refer to.
std::vector<std::size_t> parse_label_indices(const std::string& labels_text,
                                             std::size_t line_count);

}  // namespace loganomaly

#endif  // LOGANOMALY_SYSLOG_HPP

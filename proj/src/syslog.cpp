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

#include "loganomaly/syslog.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "loganomaly/errors.hpp"

namespace loganomaly {

namespace {

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v';
}

// Reads exactly `width` digits at `pos` into `out`. Advances `pos`.
bool read_digits(const std::string& s, std::size_t& pos, int width, int& out) {
    if (pos + static_cast<std::size_t>(width) > s.size()) return false;
    int value = 0;
    for (int i = 0; i < width; ++i) {
        char c = s[pos + static_cast<std::size_t>(i)];
        if (c < '0' || c > '9') return false;
        value = value * 10 + (c - '0');
    }
    pos += static_cast<std::size_t>(width);
    out = value;
    return true;
}

bool expect(const std::string& s, std::size_t& pos, char c) {
    if (pos >= s.size() || s[pos] != c) return false;
    ++pos;
    return true;
}

// Strict DD-MM-YYYY HH:MM:SS AM|PM parse. Leaves `pos` just past the marker.
bool parse_timestamp(const std::string& s, std::size_t& pos,
                     std::chrono::sys_seconds& out) {
    int day = 0, month = 0, year = 0, hour = 0, minute = 0, second = 0;
    if (!read_digits(s, pos, 2, day)) return false;
    if (!expect(s, pos, '-')) return false;
    if (!read_digits(s, pos, 2, month)) return false;
    if (!expect(s, pos, '-')) return false;
    if (!read_digits(s, pos, 4, year)) return false;
    if (!expect(s, pos, ' ')) return false;
    if (!read_digits(s, pos, 2, hour)) return false;
    if (!expect(s, pos, ':')) return false;
    if (!read_digits(s, pos, 2, minute)) return false;
    if (!expect(s, pos, ':')) return false;
    if (!read_digits(s, pos, 2, second)) return false;
    if (!expect(s, pos, ' ')) return false;
    if (pos + 2 > s.size()) return false;
    char meridiem = s[pos];
    if ((meridiem != 'A' && meridiem != 'P') || s[pos + 1] != 'M') return false;
    pos += 2;

    if (hour < 1 || hour > 12 || minute > 59 || second > 59) return false;
    std::chrono::year_month_day ymd{std::chrono::year{year},
                                    std::chrono::month{static_cast<unsigned>(month)},
                                    std::chrono::day{static_cast<unsigned>(day)}};
    if (!ymd.ok()) return false;

    int hour24 = hour % 12;  // 12 AM -> 00, 12 PM -> 12
    if (meridiem == 'P') hour24 += 12;

    out = std::chrono::sys_days{ymd} + std::chrono::hours{hour24} +
          std::chrono::minutes{minute} + std::chrono::seconds{second};
    return true;
}

}  // namespace

const char* parse_error_name(ParseError err) {
    switch (err) {
        case ParseError::none: return "none";
        case ParseError::malformed_timestamp: return "malformed timestamp";
        case ParseError::missing_device: return "missing device name";
    }
    return "unknown";
}

LineParseResult parse_syslog_line(const RawLogLine& line) {
    const std::string& s = line.text;
    std::size_t pos = 0;

    LogRecord record;
    record.raw = s;
    record.line_number = line.line_number;

    if (!parse_timestamp(s, pos, record.timestamp)) {
        return {std::nullopt, ParseError::malformed_timestamp};
    }
    if (pos < s.size() && !is_space(s[pos])) {
        // Trailing junk glued to the AM/PM marker.
        return {std::nullopt, ParseError::malformed_timestamp};
    }
    while (pos < s.size() && is_space(s[pos])) ++pos;

    std::size_t device_begin = pos;
    while (pos < s.size() && !is_space(s[pos])) ++pos;
    if (pos == device_begin) {
        return {std::nullopt, ParseError::missing_device};
    }
    record.device_name = s.substr(device_begin, pos - device_begin);

    std::size_t msg_begin = pos;
    while (msg_begin < s.size() && is_space(s[msg_begin])) ++msg_begin;
    std::size_t msg_end = s.size();
    while (msg_end > msg_begin && is_space(s[msg_end - 1])) --msg_end;
    record.message = s.substr(msg_begin, msg_end - msg_begin);

    return {std::move(record), ParseError::none};
}

std::string format_syslog_timestamp(std::chrono::sys_seconds tp) {
    auto days = std::chrono::floor<std::chrono::days>(tp);
    std::chrono::year_month_day ymd{days};
    std::chrono::hh_mm_ss<std::chrono::seconds> tod{tp - days};

    int hour24 = static_cast<int>(tod.hours().count());
    int hour12 = hour24 % 12;
    if (hour12 == 0) hour12 = 12;
    const char* meridiem = hour24 < 12 ? "AM" : "PM";

    char buf[32];
    std::snprintf(buf, sizeof(buf), "%02u-%02u-%04d %02d:%02d:%02d %s",
                  static_cast<unsigned>(ymd.day()),
                  static_cast<unsigned>(ymd.month()),
                  static_cast<int>(ymd.year()), hour12,
                  static_cast<int>(tod.minutes().count()),
                  static_cast<int>(tod.seconds().count()), meridiem);
    return buf;
}

NormalizedMessage normalize_message(const std::string& message) {
    NormalizedMessage out;
    std::string current;
    for (char c : message) {
        if (c >= 'a' && c <= 'z') {
            current.push_back(c);
        } else if (c >= 'A' && c <= 'Z') {
            current.push_back(static_cast<char>(c - 'A' + 'a'));
        } else if (!current.empty()) {
            out.tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) out.tokens.push_back(std::move(current));
    return out;
}

std::vector<std::size_t> parse_label_indices(const std::string& labels_text,
                                             std::size_t line_count) {
    std::vector<std::size_t> indices;
    std::istringstream stream(labels_text);
    std::string line;
    std::size_t label_line = 0;
    while (std::getline(stream, line)) {
        ++label_line;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t begin = 0;
        while (begin < line.size() && is_space(line[begin])) ++begin;
        std::size_t end = line.size();
        while (end > begin && is_space(line[end - 1])) --end;
        if (begin == end || line[begin] == '#') continue;

        std::uint64_t value = 0;
        auto [ptr, ec] = std::from_chars(line.data() + begin, line.data() + end, value);
        if (ec != std::errc{} || ptr != line.data() + end) {
            throw LabelIndexOutOfRange("labels file line " + std::to_string(label_line) +
                                       ": not a nonnegative integer: '" +
                                       line.substr(begin, end - begin) + "'");
        }
        if (value >= line_count) {
            throw LabelIndexOutOfRange("labels file line " + std::to_string(label_line) +
                                       ": index " + std::to_string(value) +
                                       " out of range for a " + std::to_string(line_count) +
                                       "-line log file");
        }
        indices.push_back(static_cast<std::size_t>(value));
    }
    return indices;
}

LabeledCorpus load_corpus(const std::string& log_path,
                          const std::optional<std::string>& labels_path) {
    std::ifstream log_file(log_path, std::ios::binary);
    if (!log_file) {
        throw FileNotFound("cannot open log file: " + log_path);
    }

    LabeledCorpus corpus;
    std::string line;
    std::size_t line_number = 0;  // 1-based after increment
    while (std::getline(log_file, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        RawLogLine raw{line, line_number};
        LineParseResult parsed = parse_syslog_line(raw);
        if (!parsed.record) {
            corpus.skipped.push_back({line_number, parsed.error, line});
            continue;
        }
        CorpusEntry entry;
        entry.normalized = normalize_message(parsed.record->message);
        entry.record = std::move(*parsed.record);
        corpus.entries.push_back(std::move(entry));
    }
    const std::size_t line_count = line_number;

    if (labels_path) {
        std::ifstream labels_file(*labels_path, std::ios::binary);
        if (!labels_file) {
            throw FileNotFound("cannot open labels file: " + *labels_path);
        }
        std::ostringstream contents;
        contents << labels_file.rdbuf();
        std::vector<std::size_t> indices = parse_label_indices(contents.str(), line_count);
        std::sort(indices.begin(), indices.end());
        for (CorpusEntry& entry : corpus.entries) {
            // Labels are zero-based line indices; records carry 1-based numbers.
            if (std::binary_search(indices.begin(), indices.end(),
                                   entry.record.line_number - 1)) {
                entry.label = Label::anomaly;
            }
        }
        corpus.labeled = true;
    }
    return corpus;
}

}  // namespace loganomaly

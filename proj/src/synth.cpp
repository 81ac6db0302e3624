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

#include "loganomaly/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>

#include "loganomaly/errors.hpp"
#include "loganomaly/syslog.hpp"

namespace loganomaly {

namespace {

// A weighted word pool. Weights are per-mille and sum to 1000, so a pick is
// a single modular draw. Skewed weights give the feature extractor a spread
// of document frequencies, which is what makes the TF-IDF coordinate vary
// from message to message instead of collapsing onto a handful of values.
struct Pool {
    std::vector<const char*> words;
    std::vector<int> weights;

    const char* pick(std::mt19937_64& rng) const {
        int roll = static_cast<int>(rng() % 1000);
        for (std::size_t i = 0; i < words.size(); ++i) {
            roll -= weights[i];
            if (roll < 0) return words[i];
        }
        return words.back();
    }
};

// sshd and rpd also appear verbatim in other templates below, which drags
// their document frequencies up and their IDF contributions down. They get
// the smallest weights here so the low-IDF corner of the feature space
// stays sparsely populated instead of accumulating repeated lines.
const Pool kDaemons{
    {"sshd", "snmpd", "mgd", "rpd", "dcd", "cosd", "kmd", "pfed", "craftd",
     "telnetd"},
    {45, 200, 160, 50, 130, 110, 95, 80, 70, 60}};

const Pool kExitVerbs{{"exited", "killed", "stopped", "restarted"},
                      {330, 280, 220, 170}};
// Paired with kExitVerbs by index: exited/status, killed/signal, ...
const char* const kExitNouns[] = {"status", "signal", "signal", "status"};

const Pool kAuthMethods{
    {"password", "authentication", "radius", "tacacs", "publickey",
     "keyboard"},
    {260, 210, 170, 140, 120, 100}};

const Pool kUsers{{"admin", "operator", "backup", "monitor", "audit", "deploy",
                   "netops", "support", "dbadmin", "fieldtech", "observer",
                   "autosys"},
                  {170, 140, 120, 105, 90, 80, 70, 60, 50, 45, 40, 30}};

const Pool kDisconnectVerbs{{"disconnected", "closed", "reset", "terminated"},
                            {330, 280, 220, 170}};
const Pool kDisconnectActors{{"user", "remote", "peer", "client", "session",
                              "host"},
                             {260, 210, 170, 140, 120, 100}};

const Pool kLinkDirections{{"DOWN", "UP"}, {550, 450}};
const Pool kIfTypes{{"ge", "xe", "et", "fe", "so", "ae"},
                    {260, 210, 170, 140, 120, 100}};

const Pool kChassisParts{{"fan", "psu", "sfp", "pic", "fpc", "pem", "fabric",
                          "fantray"},
                         {220, 180, 150, 120, 100, 90, 80, 60}};
const Pool kChassisStates{{"online", "offline", "inserted", "removed"},
                          {310, 270, 230, 190}};

const Pool kBgpStates{{"established", "idle", "active", "connect", "opensent",
                       "openconfirm"},
                      {260, 210, 170, 140, 120, 100}};

const Pool kAlarmColors{{"red", "yellow", "amber"}, {340, 330, 330}};

// Trailing detail phrases, one word pool per normal template. A line gets
// zero to five detail words, so token count and the TF-IDF sum spread out
// within each template instead of collapsing onto a handful of points that
// repeat verbatim across the corpus. The word weights are deliberately
// uneven: a mix of frequent and scarce detail words keeps the per-word
// inverse document frequencies apart, which is what separates neighboring
// lines near the edges of the normal cluster.
const char* const kDetailWords[6][8] = {
    {"respawning", "delayed", "suppressed", "batch", "quiet", "managed",
     "tracked", "scheduled"},
    {"attempt", "retry", "limit", "lockout", "expired", "notified", "cached",
     "source"},
    {"preauth", "cleanup", "graceful", "timeout", "rekey", "channel",
     "banner", "applied"},
    {"flap", "damped", "polled", "queued", "asserted", "cleared", "holdtime",
     "remnant"},
    {"acknowledged", "masked", "serviced", "logged", "stable", "recheck",
     "deferred", "margin"},
    {"refresh", "holddown", "restart", "policy", "import", "export",
     "flapped", "stale"}};
const int kDetailWordWeights[] = {250, 200, 150, 120, 90, 80, 60, 50};
// Cumulative per-mille weights for detail word counts 0 through 5.
constexpr int kDetailLengthCutoffs[] = {200, 440, 670, 840, 950, 1000};

// Diagnostic vocabulary reserved for anomalous lines; none of these words
// occurs in any normal template or pool above. The hot pool is small, so
// its words recur across many anomalous lines and keep a moderate inverse
// document frequency; the cold pool is large enough that most of its words
// land in only a few lines and score near the IDF ceiling.
const char* const kHotRare[] = {
    "voltage", "thermal",      "watchdog",  "parity",   "checksum",
    "backplane", "overcurrent", "undervoltage", "brownout", "ecc",
    "asic",    "microcode",    "firmware",  "surge"};
constexpr std::size_t kHotRareCount = sizeof(kHotRare) / sizeof(char*);

const char* const kColdRare[] = {
    "dram",       "sram",        "tcam",         "ucode",       "crosstalk",
    "skew",       "latchup",     "thermistor",   "fuse",        "rail",
    "glitch",     "derate",      "throttle",     "halt",        "panic",
    "traceback",  "corrupted",   "unrecoverable", "watchpoint", "breakpoint",
    "scratchpad", "arbiter",     "deadlock",     "livelock",    "lockstep",
    "quiesce",    "refclock",    "wearout",      "leakage",     "clockgate",
    "retimer",    "equalizer",   "preemphasis",  "crossbar",    "serdes",
    "framer",     "deframer",    "scrambler",    "descrambler", "interposer",
    "bondwire",   "heatsink",    "thermocouple", "varistor",    "inductor",
    "capacitor",  "rectifier",   "oscillator",   "regulator",   "feedthrough",
    "ballast",    "transient",   "substrate",    "galvanic",    "biasline",
    "derating",   "crowbar",     "snubber",      "choke",       "ferrite",
    "shunt",      "trace",       "via",          "solder",      "reflow",
    "whisker",    "dendrite",    "electromigration", "dropout", "ringing",
    "overshoot",  "undershoot"};
constexpr std::size_t kColdRareCount = sizeof(kColdRare) / sizeof(char*);

// Ordinary fleet vocabulary blended into diagnostic dumps. Every word here
// also occurs in the normal templates above, so these tokens stay inside
// the fitted dictionary and decouple message length from the
// out-of-vocabulary count on anomalous lines.
const char* const kCommonFill[] = {
    "user",     "status",  "signal",      "peer",    "client",
    "session",  "online",  "offline",     "established", "idle",
    "password", "radius",  "link",        "trap",    "sensor",
    "failure",  "disconnect", "port",     "slot",    "state"};
constexpr std::size_t kCommonFillCount = sizeof(kCommonFill) / sizeof(char*);

// Cumulative per-mille weights of the six normal templates.
constexpr int kTemplateCutoffs[] = {160, 320, 500, 680, 840, 1000};

std::string device_name(std::size_t index) {
    static const char* const prefixes[] = {"core-rtr", "edge-rtr", "agg-rtr",
                                           "bdr-rtr"};
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s-%02zu", prefixes[index % 4],
                  index / 4 + 1);
    return buf;
}

std::string random_ip(std::mt19937_64& rng) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "10.%d.%d.%d",
                  static_cast<int>(rng() % 32), static_cast<int>(rng() % 256),
                  static_cast<int>(rng() % 254 + 1));
    return buf;
}

std::string detail_suffix(std::mt19937_64& rng, int which) {
    const int roll = static_cast<int>(rng() % 1000);
    int len = 0;
    while (roll >= kDetailLengthCutoffs[len]) ++len;
    if (len == 0) return "";
    std::string out = " (";
    for (int i = 0; i < len; ++i) {
        if (i > 0) out.push_back(' ');
        int word = static_cast<int>(rng() % 1000);
        std::size_t w = 0;
        while (word >= kDetailWordWeights[w] && w + 1 < 8) {
            word -= kDetailWordWeights[w];
            ++w;
        }
        out += kDetailWords[which][w];
    }
    out.push_back(')');
    return out;
}

std::string normal_message(std::mt19937_64& rng) {
    const int roll = static_cast<int>(rng() % 1000);
    int which = 0;
    while (roll >= kTemplateCutoffs[which]) ++which;

    const int pid = static_cast<int>(rng() % 9000 + 1000);
    char buf[256];
    const std::string base = [&]() -> std::string {
        switch (which) {
        case 0: {
            const char* daemon = kDaemons.pick(rng);
            const std::size_t verb = static_cast<std::size_t>(
                [&] {
                    int r = static_cast<int>(rng() % 1000);
                    for (std::size_t i = 0; i < kExitVerbs.words.size(); ++i) {
                        r -= kExitVerbs.weights[i];
                        if (r < 0) return i;
                    }
                    return kExitVerbs.words.size() - 1;
                }());
            std::snprintf(buf, sizeof(buf),
                          "inetd[%d]: /usr/sbin/%s[%d]: %s, %s %d", pid, daemon,
                          static_cast<int>(rng() % 9000 + 1000),
                          kExitVerbs.words[verb], kExitNouns[verb],
                          static_cast<int>(rng() % 16));
            return buf;
        }
        case 1: {
            const char* method = kAuthMethods.pick(rng);
            const char* user = kUsers.pick(rng);
            return "login[" + std::to_string(pid) + "]: " + method +
                   " failure for user " + user + " from " + random_ip(rng);
        }
        case 2: {
            const char* verb = kDisconnectVerbs.pick(rng);
            const char* actor = kDisconnectActors.pick(rng);
            std::snprintf(buf, sizeof(buf),
                          "sshd[%d]: Received disconnect from %s port %d: "
                          "11: %s by %s",
                          pid, random_ip(rng).c_str(),
                          static_cast<int>(rng() % 60000 + 1024), verb, actor);
            return buf;
        }
        case 3: {
            const char* dir = kLinkDirections.pick(rng);
            const char* iftype = kIfTypes.pick(rng);
            std::snprintf(buf, sizeof(buf),
                          "mib2d[%d]: SNMP_TRAP_LINK_%s: ifIndex %d, "
                          "ifName %s-%d/%d/%d",
                          pid, dir, static_cast<int>(rng() % 600),
                          iftype, static_cast<int>(rng() % 4),
                          static_cast<int>(rng() % 2),
                          static_cast<int>(rng() % 48));
            return buf;
        }
        case 4: {
            const char* part = kChassisParts.pick(rng);
            const char* state = kChassisStates.pick(rng);
            std::snprintf(buf, sizeof(buf),
                          "chassisd[%d]: SNMP trap generated: %s %s on "
                          "slot %d, sensor ok",
                          pid, part, state, static_cast<int>(rng() % 12));
            return buf;
        }
        default: {
            const char* st1 = kBgpStates.pick(rng);
            const char* st2 = kBgpStates.pick(rng);
            std::snprintf(buf, sizeof(buf),
                          "rpd[%d]: BGP peer %s (external AS %d) changed "
                          "state from %s to %s",
                          pid, random_ip(rng).c_str(),
                          static_cast<int>(rng() % 200 + 64512), st1, st2);
            return buf;
        }
        }
    }();
    return base + detail_suffix(rng, which);
}

double triangle_wave(double x) {
    return std::fabs(2.0 * (x - std::floor(x)) - 1.0);
}

// Diagnostic dump appended to an anomalous line. The dump profile walks a
// fixed path through (length, rare fraction, cold fraction) space as the
// ordinal advances, with the golden-ratio step spreading successive
// anomalies evenly along it. One knob alone would string every anomalous
// line along a single ray in feature space and let a handful of them shadow
// the rest; three staggered knobs keep each line's feature triple distant
// from the others so each contributes evidence of its own.
std::string diagnostic_tail(std::mt19937_64& rng, std::size_t ordinal) {
    const double u = std::fmod(
        static_cast<double>(ordinal + 1) * 0.6180339887498949, 1.0);
    const std::size_t count = 25 + static_cast<std::size_t>(60.0 * u + 0.5);
    const double rare_fraction = 0.30 + 0.65 * triangle_wave(6.0 * u);
    const double cold_fraction = 0.10 + 0.80 * triangle_wave(11.0 * u + 0.25);
    std::string tail;
    for (std::size_t i = 0; i < count; ++i) {
        if (!tail.empty()) tail.push_back(' ');
        const double roll = static_cast<double>(rng() % 1000) * 0.001;
        if (roll >= rare_fraction) {
            tail += kCommonFill[rng() % kCommonFillCount];
        } else if (static_cast<double>(rng() % 1000) * 0.001 < cold_fraction) {
            tail += kColdRare[rng() % kColdRareCount];
        } else {
            tail += kHotRare[rng() % kHotRareCount];
        }
    }
    return tail;
}

std::string anomaly_message(std::mt19937_64& rng, std::size_t ordinal) {
    const int which = static_cast<int>(rng() % 3);
    const int pid = static_cast<int>(rng() % 9000 + 1000);
    switch (which) {
        case 0: {
            const char* color = kAlarmColors.pick(rng);
            return "alarmd[" + std::to_string(pid) + "]: Alarm set: RE " +
                   color + " alarm: chassis fan tray " +
                   std::to_string(rng() % 8) +
                   " failure, temperature threshold exceeded: " +
                   diagnostic_tail(rng, ordinal);
        }
        case 1: {
            const char* daemon =
                kDaemons.words[rng() % kDaemons.words.size()];
            return std::string("init: ") + daemon + " (PID " +
                   std::to_string(pid) + ") terminated by signal " +
                   std::to_string(rng() % 15 + 1) +
                   ": core dumped, respawning too fast to continue, "
                   "disabled: " +
                   diagnostic_tail(rng, ordinal);
        }
        default: {
            return "chassisd[" + std::to_string(pid) +
                   "]: CHASSISD_IFDEV_DETACH: fpc " +
                   std::to_string(rng() % 8) +
                   " offline: diagnostic register dump follows: " +
                   diagnostic_tail(rng, ordinal);
        }
    }
}

}  // namespace

SynthCorpus generate_corpus(const SynthConfig& cfg) {
    // Domain-separate the generator's stream from other consumers of the
    // same user-facing seed. The train/test splitter also runs a
    // Fisher-Yates shuffle over [0..n), and with a shared default seed the
    // two permutations would coincide, silently sweeping every anomaly into
    // the training partition. The mix constant is splitmix64's increment.
    std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);

    // Pick the anomaly positions first so the count contract is exact.
    const std::size_t n = cfg.n_messages;
    const std::size_t n_anomalies = static_cast<std::size_t>(
        std::llround(static_cast<double>(n) * cfg.anomaly_rate));
    std::vector<std::size_t> positions(n);
    std::iota(positions.begin(), positions.end(), std::size_t{0});
    for (std::size_t i = n; i > 1; --i) {
        std::swap(positions[i - 1], positions[rng() % i]);
    }
    std::vector<std::size_t> anomaly_lines(positions.begin(),
                                           positions.begin() + n_anomalies);
    std::sort(anomaly_lines.begin(), anomaly_lines.end());

    SynthCorpus corpus;
    corpus.lines.reserve(n);
    corpus.anomaly_lines = anomaly_lines;

    std::chrono::sys_seconds now = cfg.start_time;
    const std::uint64_t gap_modulus =
        2 * static_cast<std::uint64_t>(
                std::llround(std::max(cfg.mean_interarrival_seconds, 0.5))) +
        1;
    std::size_t next_anomaly = 0;
    for (std::size_t i = 0; i < n; ++i) {
        now += std::chrono::seconds{static_cast<long>(rng() % gap_modulus)};
        const std::string device =
            device_name(rng() % std::max<std::size_t>(cfg.n_devices, 1));
        const bool is_anomaly = next_anomaly < anomaly_lines.size() &&
                                anomaly_lines[next_anomaly] == i;
        const std::string message = is_anomaly
                                        ? anomaly_message(rng, next_anomaly++)
                                        : normal_message(rng);
        corpus.lines.push_back(format_syslog_timestamp(now) + " " + device +
                               " " + message);
    }
    return corpus;
}

void write_corpus(const SynthCorpus& corpus, const std::string& log_path,
                  const std::string& labels_path) {
    std::ofstream log_file(log_path, std::ios::binary);
    if (!log_file) {
        throw IoError("cannot write log file: " + log_path);
    }
    for (const std::string& line : corpus.lines) {
        log_file << line << '\n';
    }
    if (!log_file.flush()) {
        throw IoError("short write: " + log_path);
    }

    std::ofstream labels_file(labels_path, std::ios::binary);
    if (!labels_file) {
        throw IoError("cannot write labels file: " + labels_path);
    }
    labels_file << "# anomalous line indices (zero-based)\n";
    for (std::size_t index : corpus.anomaly_lines) {
        labels_file << index << '\n';
    }
    if (!labels_file.flush()) {
        throw IoError("short write: " + labels_path);
    }
}

}  // namespace loganomaly

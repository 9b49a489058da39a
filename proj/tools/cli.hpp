// Copyright 2026 The fockdist Authors
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

#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace fockdist::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kValidation = 3, kInternal = 4 };

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kOutputDirEnv = "FOCKDIST_OUTPUT_DIR";

/// Bad command line or config file (exit code 2).
class UsageError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

enum class KeyType { String, Real, Complex, Integer, Boolean };

struct KeySpec {
    std::string key;
    KeyType type = KeyType::String;
    std::string default_value;
    std::string help;
};

/// The commands in the order they are listed by --help.
const std::vector<std::string>& commands();
/// Keys accepted by `command`, shared ones included. Throws UsageError for an
/// unknown command.
const std::vector<KeySpec>& keys_for(std::string_view command);

/// key=value lines; '#' starts a comment; blank lines are skipped. Dashes in
/// keys are read as underscores. Throws UsageError on malformed lines and
/// duplicate keys; `source` names the file in messages.
std::map<std::string, std::string> parse_config_text(std::string_view text, const std::string& source = "config");
std::map<std::string, std::string> read_config_file(const std::string& path);

/// "0.6", "-0.3i", "0.6+0.8i" (j also accepted). Throws std::invalid_argument.
std::complex<double> parse_complex(std::string_view text);

/// Fully resolved parameters of one run: defaults, then the config file,
/// then flags.
class ExperimentConfig {
   public:
    /// Throws UsageError for an unknown command or key.
    static ExperimentConfig resolve(std::string_view command, const std::map<std::string, std::string>& file,
                                    const std::map<std::string, std::string>& flags);

    const std::string& command() const { return command_; }
    const std::map<std::string, std::string>& values() const { return values_; }

    // Typed accessors throw fockdist::ValidationError naming the key.
    std::string text(const std::string& key) const;
    double real(const std::string& key) const;
    std::complex<double> complex(const std::string& key) const;
    std::int64_t integer(const std::string& key) const;
    std::uint64_t unsigned_integer(const std::string& key) const;
    bool boolean(const std::string& key) const;

   private:
    const std::string& raw(const std::string& key) const;

    std::string command_;
    std::map<std::string, std::string> values_;
};

/// A finished run: the JSON document and its CSV form.
struct Report {
    nlohmann::json json;
    std::vector<std::string> csv_header;
    std::vector<std::vector<std::string>> csv_rows;
    /// Human-readable lines printed to stdout in addition to the file.
    std::vector<std::string> summary;
    int exit_code = kOk;
};

/// Runs the configured experiment. Library errors propagate.
Report run_command(const ExperimentConfig& cfg);

std::string to_csv(const Report& report);
/// Pretty JSON with a trailing newline.
std::string to_json_text(const Report& report);
/// Writes the report in `format` ("json" or "csv"). Throws std::runtime_error
/// with the path on I/O failure.
void emit_report(const Report& report, const std::string& format, const std::string& path);

/// Structural check of a JSON report; returns the problems found (empty when
/// valid).
std::vector<std::string> validate_report_schema(const nlohmann::json& report);

/// Entry point behind the executable; returns the exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fockdist::cli

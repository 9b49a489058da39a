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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "cli.hpp"
#include "fockdist/errors.hpp"

using namespace fockdist::cli;

namespace {

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun run(std::vector<std::string> args) {
    args.insert(args.begin(), "fockdist");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

Report report(std::string_view command, std::map<std::string, std::string> flags) {
    return run_command(ExperimentConfig::resolve(command, {}, flags));
}

std::filesystem::path temp_dir() {
    auto p = std::filesystem::temp_directory_path() / ("fockdist_cli_test_" + std::to_string(::getpid()));
    std::filesystem::create_directories(p);
    return p;
}

}  // namespace

TEST(ConfigText, ParsesKeysCommentsAndDashes) {
    auto m = parse_config_text("# header\nalpha = 0.6\n\nphi-h=1.5  # trailing\n");
    ASSERT_EQ(m.size(), 2u);
    EXPECT_EQ(m.at("alpha"), "0.6");
    EXPECT_EQ(m.at("phi_h"), "1.5");
    EXPECT_THROW(parse_config_text("alpha 0.6"), UsageError);
    EXPECT_THROW(parse_config_text("alpha=1\nalpha=2"), UsageError);
}

TEST(ConfigText, MissingFileNamesPath) {
    try {
        read_config_file("/nonexistent/fockdist.cfg");
        FAIL() << "expected an error";
    } catch (const std::exception& e) {
        EXPECT_NE(std::string(e.what()).find("/nonexistent/fockdist.cfg"), std::string::npos);
    }
}

TEST(Complex, Forms) {
    EXPECT_EQ(parse_complex("0.6"), std::complex<double>(0.6, 0.0));
    EXPECT_EQ(parse_complex("-0.3i"), std::complex<double>(0.0, -0.3));
    EXPECT_EQ(parse_complex("0.6+0.8i"), std::complex<double>(0.6, 0.8));
    EXPECT_EQ(parse_complex("1-2j"), std::complex<double>(1.0, -2.0));
    EXPECT_EQ(parse_complex("i"), std::complex<double>(0.0, 1.0));
    EXPECT_THROW(parse_complex("abc"), std::invalid_argument);
    EXPECT_THROW(parse_complex(""), std::invalid_argument);
}

TEST(Resolve, PrecedenceAndUnknownKeys) {
    auto cfg = ExperimentConfig::resolve("dephasing", {{"alpha", "0.6"}, {"beta", "0.8"}}, {{"alpha", "1"}});
    EXPECT_EQ(cfg.text("alpha"), "1");
    EXPECT_EQ(cfg.text("beta"), "0.8");
    EXPECT_THROW(ExperimentConfig::resolve("dephasing", {{"bogus", "1"}}, {}), UsageError);
    EXPECT_THROW(ExperimentConfig::resolve("teleport", {}, {}), UsageError);
    auto bad = ExperimentConfig::resolve("dephasing", {}, {{"eta", "lots"}});
    try {
        bad.real("eta");
        FAIL() << "expected a validation error";
    } catch (const fockdist::ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("eta"), std::string::npos);
    }
}

TEST(Report, DephasingAggregateIsOneRow) {
    auto r = report("dephasing", {{"phi_h", "0.3"}, {"phi_v", "1.2"}});
    EXPECT_EQ(r.csv_rows.size(), 1u);
    EXPECT_TRUE(validate_report_schema(r.json).empty());
    EXPECT_EQ(r.json["schema_version"], kSchemaVersion);
    EXPECT_EQ(r.json["command"], "dephasing");
    for (const auto& row : r.csv_rows) EXPECT_EQ(row.size(), r.csv_header.size());
}

TEST(Report, PerTrialRows) {
    auto r = report("rotation", {{"haar", "true"}, {"trials", "7"}, {"per_trial", "true"}});
    EXPECT_EQ(r.csv_rows.size(), 7u);
    auto agg = report("rotation", {{"haar", "true"}, {"trials", "7"}});
    EXPECT_EQ(agg.csv_rows.size(), 1u);
}

TEST(Report, DeterministicExceptTimestamp) {
    std::map<std::string, std::string> flags{{"rounds", "300"}, {"seed", "5"}};
    auto a = report("bb84", flags).json;
    auto b = report("bb84", flags).json;
    a.erase("timestamp");
    b.erase("timestamp");
    EXPECT_EQ(a, b);
}

TEST(Report, JsonRoundTripKeepsSchema) {
    auto r = report("stats", {{"source", "pdc"}, {"p", "0.01"}});
    auto parsed = nlohmann::json::parse(to_json_text(r));
    EXPECT_TRUE(validate_report_schema(parsed).empty());
    EXPECT_EQ(parsed, r.json);
    nlohmann::json broken = parsed;
    broken.erase("config");
    EXPECT_FALSE(validate_report_schema(broken).empty());
}

TEST(Report, CsvHasHeaderLine) {
    auto r = report("stats", {{"source", "coherent"}, {"nu", "0.1"}, {"mu", "0.1"}});
    std::string csv = to_csv(r);
    EXPECT_EQ(csv.rfind("nu,mu,p11,pmul,bound,ratio,condition_met,", 0), 0u);
    EXPECT_EQ(r.csv_rows.size(), 1u);
}

TEST(RunCli, ExitCodes) {
    EXPECT_EQ(run({"dephasing", "--phi-h", "0.4"}).code, kOk);
    EXPECT_EQ(run({"dephasing", "--no-such-flag", "1"}).code, kUsage);
    EXPECT_EQ(run({}).code, kUsage);
    CliRun bad = run({"dephasing", "--eta", "1.5"});
    EXPECT_EQ(bad.code, kValidation);
    EXPECT_NE(bad.err.find("eta"), std::string::npos);
    EXPECT_EQ(run({"stats", "--source", "pdc", "--p", "0.5"}).code, kValidation);
    EXPECT_EQ(run({"dephasing", "--config", "/nonexistent/x.cfg"}).code, kUsage);
}

TEST(RunCli, WritesOutputFile) {
    auto dir = temp_dir();
    auto path = (dir / "run.csv").string();
    CliRun r = run({"dephasing", "--output", path, "--format", "csv"});
    ASSERT_EQ(r.code, kOk) << r.err;
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    EXPECT_FALSE(header.empty());
    // The parent is a regular file, so the report cannot be created.
    auto blocked = (dir / "run.csv" / "run.json").string();
    CliRun unwritable = run({"dephasing", "--output", blocked});
    EXPECT_NE(unwritable.code, kOk);
    EXPECT_NE(unwritable.err.find(blocked), std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST(RunCli, ConfigFileUnknownKeyIsUsageError) {
    auto dir = temp_dir();
    auto path = (dir / "bad.cfg").string();
    std::ofstream(path) << "alpha=1\nwavelength=1550\n";
    CliRun r = run({"dephasing", "--config", path});
    EXPECT_EQ(r.code, kUsage);
    EXPECT_NE(r.err.find("wavelength"), std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST(RunCli, ToolBinaryMatchesLibrary) {
    const char* tool = std::getenv("FOCKDIST_TOOL");
    if (tool == nullptr) GTEST_SKIP() << "FOCKDIST_TOOL not set";
    std::string cmd = std::string(tool) + " stats --source coherent --nu 0.1 --mu 0.1 --format csv 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    ASSERT_NE(pipe, nullptr);
    std::string out;
    char buf[256];
    while (fgets(buf, sizeof buf, pipe)) out += buf;
    EXPECT_EQ(pclose(pipe), 0);
    EXPECT_EQ(out, to_csv(report("stats", {{"source", "coherent"}, {"nu", "0.1"}, {"mu", "0.1"}})));
}

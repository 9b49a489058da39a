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

#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "fockdist/bb84.hpp"
#include "fockdist/errors.hpp"
#include "fockdist/protocol.hpp"
#include "fockdist/source_stats.hpp"
#include "fockdist/verify.hpp"

namespace fockdist::cli {

using nlohmann::json;

namespace {

// ---------------------------------------------------------------- key tables

std::vector<KeySpec> shared_keys() {
    return {{"seed", KeyType::Integer, "0", "random seed"},
            {"output", KeyType::String, "", "report path (default: $FOCKDIST_OUTPUT_DIR/<command>.<format>, else stdout)"},
            {"format", KeyType::String, "json", "report format: json | csv"}};
}

std::vector<KeySpec> protocol_keys(const std::string& acceptance) {
    return {{"alpha", KeyType::Complex, "1", "signal amplitude on H"},
            {"beta", KeyType::Complex, "0", "signal amplitude on V"},
            {"eta", KeyType::Real, "1", "detector efficiency"},
            {"resolving", KeyType::String, "threshold", "threshold | pnr"},
            {"variant", KeyType::String, "port3", "port3 | port3+port4"},
            {"acceptance", KeyType::String, acceptance, "both | d-only"},
            {"double_click", KeyType::String, "abort", "abort | random"},
            {"convention", KeyType::String, "real", "beam splitter phase convention: real | imaginary"}};
}

std::vector<KeySpec> monte_carlo_keys() {
    return {{"trials", KeyType::Integer, "1000", "Monte Carlo trials"},
            {"threads", KeyType::Integer, "0", "worker threads (0 = all cores)"},
            {"per_trial", KeyType::Boolean, "false", "one CSV row per trial"}};
}

std::map<std::string, std::vector<KeySpec>> build_tables() {
    std::map<std::string, std::vector<KeySpec>> t;
    auto add = [&t](const std::string& cmd, std::vector<std::vector<KeySpec>> groups) {
        auto& v = t[cmd];
        for (auto& g : groups) v.insert(v.end(), g.begin(), g.end());
    };
    add("dephasing", {shared_keys(), protocol_keys("both"), monte_carlo_keys(),
                      {{"phi_h", KeyType::Real, "0", "channel 1 phase (rad)"},
                       {"phi_v", KeyType::Real, "0", "channel 2 phase (rad)"},
                       {"random", KeyType::Boolean, "false", "sample uniform phases instead of fixed ones"}}});
    add("rotation", {shared_keys(), protocol_keys("both"), monte_carlo_keys(),
                     {{"delta1", KeyType::Complex, "1", "channel 1: H -> delta1 H + gamma1 V"},
                      {"gamma1", KeyType::Complex, "0", "channel 1: H -> delta1 H + gamma1 V"},
                      {"delta2", KeyType::Complex, "0", "channel 2: V -> delta2 H + gamma2 V"},
                      {"gamma2", KeyType::Complex, "1", "channel 2: V -> delta2 H + gamma2 V"},
                      {"haar", KeyType::Boolean, "false", "sample Haar-random rotations"},
                      {"product_su2", KeyType::Boolean, "false", "sample Euler-angle rotations"},
                      {"jitter", KeyType::Real, "0", "rotation jitter on the later pulse (rad, needs a sampler)"},
                      {"decode", KeyType::Boolean, "true", "run the decoder (false: parity factor only)"}}});
    add("bb84", {shared_keys(), protocol_keys("d-only"),
                 {{"rounds", KeyType::Integer, "10000", "protocol rounds"},
                  {"noise", KeyType::String, "haar-rotation", "none | dephasing | haar-rotation | product-su2"},
                  {"jitter", KeyType::Real, "0", "rotation jitter on the later pulse (rad)"},
                  {"per_trial", KeyType::Boolean, "false", "one CSV row per round"}}});
    // alpha/beta are fixed by the BB84 states.
    std::erase_if(t["bb84"], [](const KeySpec& k) { return k.key == "alpha" || k.key == "beta"; });
    add("stats", {shared_keys(),
                  {{"source", KeyType::String, "coherent", "coherent | pdc | triggered"},
                   {"nu", KeyType::Real, "0.1", "signal mean photon number (coherent)"},
                   {"mu", KeyType::Real, "0.1", "reference mean photon number (coherent, triggered)"},
                   {"p", KeyType::Real, "0.01", "mean pair number (pdc)"},
                   {"p1", KeyType::Real, "1", "trigger: one-photon probability"},
                   {"pmul", KeyType::Real, "0", "trigger: multi-photon probability"},
                   {"threshold", KeyType::Real, "20", "condition p11 >= threshold * pmul"},
                   {"grid", KeyType::Integer, "0", "points per axis of a parameter grid (0 = single point)"},
                   {"grid_max", KeyType::Real, "1", "upper end of the grid"}}});
    add("verify", {shared_keys(),
                   {{"haar_trials", KeyType::Integer, "100000", "trials of the Haar averaging check"},
                    {"bb84_rounds", KeyType::Integer, "10000", "rounds of the BB84 check"},
                    {"threads", KeyType::Integer, "0", "worker threads (0 = all cores)"}}});
    for (auto& k : t["verify"]) {
        if (k.key == "seed") k.default_value = "20260101";
    }
    add("multiphoton", {shared_keys(), protocol_keys("both"),
                        {{"source", KeyType::String, "fock-pair", "ideal | pdc | coherent | triggered | fock-pair"},
                         {"nu", KeyType::Real, "0.1", "signal mean photon number"},
                         {"mu", KeyType::Real, "0.1", "reference mean photon number"},
                         {"pair_mean", KeyType::Real, "0.01", "mean pair number (pdc)"},
                         {"p1", KeyType::Real, "1", "trigger: one-photon probability"},
                         {"pmul", KeyType::Real, "0", "trigger: multi-photon probability"},
                         {"n_ref", KeyType::Integer, "2", "reference photons (fock-pair)"},
                         {"n_sig", KeyType::Integer, "0", "signal photons (fock-pair)"},
                         {"source_cutoff", KeyType::Integer, "2", "photons kept per pulse"},
                         {"registry_cutoff", KeyType::Integer, "4", "total photon cutoff (3..8)"},
                         {"phi_h", KeyType::Real, "0", "channel 1 phase (rad)"},
                         {"phi_v", KeyType::Real, "0", "channel 2 phase (rad)"},
                         {"per_trial", KeyType::Boolean, "false", "one CSV row per photon-number configuration"}}});
    return t;
}

const std::map<std::string, std::vector<KeySpec>>& tables() {
    static const auto t = build_tables();
    return t;
}

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::string normalize_key(std::string key) {
    for (char& c : key) {
        if (c == '-') c = '_';
    }
    return key;
}

// ---------------------------------------------------------------- formatting

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string num(const std::optional<double>& x) { return x ? num(*x) : std::string(); }

json opt(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

json cjson(Complex c) { return json::array({c.real(), c.imag()}); }

json matrix_json(const Eigen::Matrix2cd& m) {
    json rows = json::array();
    for (int i = 0; i < 2; ++i) rows.push_back(json::array({cjson(m(i, 0)), cjson(m(i, 1))}));
    return rows;
}

json noise_json(const NoiseDraw& n) {
    json j;
    if (const auto* d = std::get_if<DephasingParams>(&n.params)) {
        j = {{"type", "dephasing"}, {"phi_h", d->phi_h}, {"phi_v", d->phi_v}};
    } else {
        const auto& r = std::get<RotationParams>(n.params);
        j = {{"type", "rotation"},
             {"delta1", cjson(r.delta1)},
             {"gamma1", cjson(r.gamma1)},
             {"delta2", cjson(r.delta2)},
             {"gamma2", cjson(r.gamma2)}};
    }
    j["jitter"] = n.jitter ? json{{"channel1", matrix_json(n.jitter->channel1)},
                                  {"channel2", matrix_json(n.jitter->channel2)}}
                           : json(nullptr);
    return j;
}

std::string noise_text(const NoiseDraw& n) {
    std::ostringstream os;
    os.precision(17);
    if (const auto* d = std::get_if<DephasingParams>(&n.params)) {
        os << "phi_h=" << d->phi_h << ";phi_v=" << d->phi_v;
    } else {
        const auto& r = std::get<RotationParams>(n.params);
        auto c = [&os](const char* name, Complex z) { os << name << '=' << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << 'i'; };
        c("delta1", r.delta1);
        os << ';';
        c("gamma1", r.gamma1);
        os << ';';
        c("delta2", r.delta2);
        os << ';';
        c("gamma2", r.gamma2);
    }
    if (n.jitter) os << ";jitter";
    return os.str();
}

std::string timestamp() {
    auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

// ---------------------------------------------------------------- builders

Resolving parse_resolving(const std::string& s) {
    if (s == "threshold") return Resolving::Threshold;
    if (s == "pnr" || s == "number-resolving") return Resolving::NumberResolving;
    throw ConfigurationError("unknown detector type '" + s + "' (threshold | pnr)");
}

PhaseConvention parse_convention(const std::string& s) {
    if (s == "real") return PhaseConvention::Real;
    if (s == "imaginary") return PhaseConvention::Imaginary;
    throw ConfigurationError("unknown value '" + s + "' (real | imaginary)");
}

/// Re-throws library configuration errors with the offending key in front.
template <class F>
auto keyed(const std::string& key, F&& f) {
    try {
        return f();
    } catch (const ConfigurationError& e) {
        throw ConfigurationError(key + ": " + e.what());
    } catch (const ValidationError& e) {
        throw ValidationError(key + ": " + e.what());
    }
}

DetectorModel detector_from(const ExperimentConfig& c) {
    const double eta = c.real("eta");
    const std::string resolving = c.text("resolving");
    DetectorModel d{eta, keyed("resolving", [&] { return parse_resolving(resolving); })};
    keyed("eta", [&] {
        d.validate();
        return 0;
    });
    return d;
}

ProtocolConfig protocol_from(const ExperimentConfig& c, bool with_signal = true) {
    ProtocolConfig p;
    if (with_signal) {
        const Complex a = c.complex("alpha");
        const Complex b = c.complex("beta");
        p.signal = keyed("alpha", [&] { return SignalState::normalized(a, b); });
    }
    p.detector = detector_from(c);
    p.variant = keyed("variant", [&] { return parse_variant(c.text("variant")); });
    p.acceptance = keyed("acceptance", [&] { return parse_acceptance(c.text("acceptance")); });
    p.double_click = keyed("double_click", [&] { return parse_double_click(c.text("double_click")); });
    p.convention = keyed("convention", [&] { return parse_convention(c.text("convention")); });
    return p;
}

json signal_json(const SignalState& s) { return {{"alpha", cjson(s.alpha)}, {"beta", cjson(s.beta)}}; }

std::size_t positive_count(const ExperimentConfig& c, const std::string& key) {
    std::int64_t n = c.integer(key);
    if (n < 1) throw ConfigurationError(key + ": must be at least 1, got " + std::to_string(n));
    return static_cast<std::size_t>(n);
}

unsigned thread_count(const ExperimentConfig& c) {
    std::int64_t n = c.integer("threads");
    if (n < 0 || n > 4096) throw ConfigurationError("threads: must be in [0, 4096], got " + std::to_string(n));
    return static_cast<unsigned>(n);
}

void single_run_report(Report& rep, const ProtocolConfig& pc) {
    RunReport r = run_distribution(pc);
    json outcomes = json::array();
    for (const auto& o : r.outcomes) {
        outcomes.push_back({{"label", o.label}, {"probability", o.probability}, {"fidelity", o.fidelity}});
    }
    rep.json["result"] = {{"mode", "single"},
                          {"signal", signal_json(pc.signal)},
                          {"success_probability", r.success_probability},
                          {"parity_factor", r.parity_factor},
                          {"routing_factor", opt(r.routing_factor)},
                          {"detection_factor", opt(r.detection_factor)},
                          {"fidelity", opt(r.fidelity)},
                          {"double_click_probability", r.double_click_probability},
                          {"outcomes", outcomes},
                          {"noise_draw", noise_json(r.noise_draw)}};
    rep.csv_header = {"success_probability", "parity_factor", "routing_factor", "detection_factor",
                      "fidelity", "double_click_probability", "noise"};
    rep.csv_rows.push_back({num(r.success_probability), num(r.parity_factor), num(r.routing_factor),
                            num(r.detection_factor), num(r.fidelity), num(r.double_click_probability),
                            noise_text(r.noise_draw)});
    rep.summary.push_back("success probability " + num(r.success_probability) + ", parity factor " +
                          num(r.parity_factor) + ", fidelity " + (r.fidelity ? num(*r.fidelity) : "undefined"));
}

void monte_carlo_report(Report& rep, const ExperimentConfig& c, MonteCarloConfig mc) {
    mc.trials = positive_count(c, "trials");
    mc.threads = thread_count(c);
    const bool per_trial = c.boolean("per_trial");
    mc.keep_trials = per_trial;
    MonteCarloReport m = run_monte_carlo(mc);
    rep.json["result"] = {{"mode", "monte-carlo"},
                          {"sampler", std::string(to_string(mc.sampler.kind))},
                          {"signal", signal_json(mc.base.signal)},
                          {"trials", m.trials},
                          {"decoded", m.decoded},
                          {"accepted_trials", m.accepted_trials},
                          {"mean_success", m.decoded ? json(m.mean_success) : json(nullptr)},
                          {"se_success", m.decoded ? json(m.se_success) : json(nullptr)},
                          {"mean_parity", m.mean_parity},
                          {"se_parity", m.se_parity},
                          {"mean_fidelity", opt(m.mean_fidelity)},
                          {"se_fidelity", m.mean_fidelity ? json(m.se_fidelity) : json(nullptr)},
                          {"min_fidelity", opt(m.min_fidelity)},
                          {"seed", m.seed}};
    if (per_trial) {
        rep.csv_header = {"index", "success_probability", "parity_factor", "fidelity", "noise"};
        for (const auto& row : m.rows) {
            rep.csv_rows.push_back({std::to_string(row.index), m.decoded ? num(row.success_probability) : "",
                                    num(row.parity_factor), num(row.fidelity), noise_text(row.noise_draw)});
        }
    } else {
        rep.csv_header = {"trials", "accepted_trials", "mean_success", "se_success", "mean_parity",
                          "se_parity", "mean_fidelity", "se_fidelity", "min_fidelity", "seed"};
        rep.csv_rows.push_back({std::to_string(m.trials), std::to_string(m.accepted_trials),
                                m.decoded ? num(m.mean_success) : "", m.decoded ? num(m.se_success) : "",
                                num(m.mean_parity), num(m.se_parity), num(m.mean_fidelity),
                                m.mean_fidelity ? num(m.se_fidelity) : "", num(m.min_fidelity),
                                std::to_string(m.seed)});
    }
    rep.summary.push_back(std::to_string(m.trials) + " trials: mean parity factor " + num(m.mean_parity) + " +- " +
                          num(m.se_parity) +
                          (m.decoded ? ", mean success " + num(m.mean_success) + ", mean fidelity " +
                                           (m.mean_fidelity ? num(*m.mean_fidelity) : "undefined")
                                     : std::string()));
}

void run_dephasing(Report& rep, const ExperimentConfig& c) {
    ProtocolConfig pc = protocol_from(c);
    if (c.boolean("random")) {
        MonteCarloConfig mc;
        mc.base = pc;
        mc.sampler = {NoiseKind::Dephasing, c.unsigned_integer("seed"), 0.0};
        monte_carlo_report(rep, c, mc);
        return;
    }
    pc.noise.params = DephasingParams{c.real("phi_h"), c.real("phi_v")};
    single_run_report(rep, pc);
}

void run_rotation(Report& rep, const ExperimentConfig& c) {
    ProtocolConfig pc = protocol_from(c);
    const bool haar = c.boolean("haar");
    const bool euler = c.boolean("product_su2");
    const double jitter = c.real("jitter");
    if (haar && euler) throw ConfigurationError("haar: cannot be combined with product_su2");
    if (jitter < 0.0 || !std::isfinite(jitter)) throw ConfigurationError("jitter: must be finite and non-negative");
    if (haar || euler) {
        MonteCarloConfig mc;
        mc.base = pc;
        mc.sampler = {haar ? NoiseKind::HaarRotation : NoiseKind::ProductSU2, c.unsigned_integer("seed"), jitter};
        mc.decode = c.boolean("decode");
        monte_carlo_report(rep, c, mc);
        return;
    }
    if (jitter > 0.0) throw ConfigurationError("jitter: needs a sampler (haar or product_su2)");
    RotationParams r{c.complex("delta1"), c.complex("gamma1"), c.complex("delta2"), c.complex("gamma2")};
    keyed("delta1", [&] {
        r.validate();
        return 0;
    });
    pc.noise.params = r;
    single_run_report(rep, pc);
}

void run_bb84(Report& rep, const ExperimentConfig& c) {
    ProtocolConfig pc = protocol_from(c, false);
    Bb84Config b;
    b.rounds = positive_count(c, "rounds");
    b.noise = {keyed("noise", [&] { return parse_noise_kind(c.text("noise")); }), c.unsigned_integer("seed"),
               c.real("jitter")};
    b.detector = pc.detector;
    b.acceptance = pc.acceptance;
    b.variant = pc.variant;
    b.double_click = pc.double_click;
    b.convention = pc.convention;
    b.keep_rounds = c.boolean("per_trial");
    keyed("jitter", [&] {
        b.validate();
        return 0;
    });
    Bb84Report r = run_bb84_session(b);
    rep.json["result"] = {{"rounds", r.rounds},
                          {"accepted", r.accepted},
                          {"sifted", r.sifted},
                          {"errors", r.errors},
                          {"qber", opt(r.qber)},
                          {"qber_expected", opt(r.qber_expected)},
                          {"qber_rectilinear", opt(r.qber_rectilinear)},
                          {"qber_diagonal", opt(r.qber_diagonal)},
                          {"acceptance_rate", r.acceptance_rate},
                          {"sift_fraction", opt(r.sift_fraction)},
                          {"seed", r.seed}};
    if (b.keep_rounds) {
        rep.csv_header = {"round", "alice_state", "alice_basis", "bob_basis", "accept_probability", "accepted",
                          "bob_bit"};
        for (const auto& round : r.log) {
            rep.csv_rows.push_back({std::to_string(round.index), std::string(to_string(round.alice_state)),
                                    std::string(to_string(round.alice_basis)),
                                    std::string(to_string(round.bob_basis)), num(round.accept_probability),
                                    round.accepted ? "1" : "0",
                                    round.bob_bit ? std::to_string(*round.bob_bit) : ""});
        }
    } else {
        rep.csv_header = {"rounds", "accepted", "sifted", "errors", "qber", "qber_expected", "acceptance_rate",
                          "sift_fraction", "qber_rectilinear", "qber_diagonal", "seed"};
        rep.csv_rows.push_back({std::to_string(r.rounds), std::to_string(r.accepted), std::to_string(r.sifted),
                                std::to_string(r.errors), num(r.qber), num(r.qber_expected), num(r.acceptance_rate),
                                num(r.sift_fraction), num(r.qber_rectilinear), num(r.qber_diagonal),
                                std::to_string(r.seed)});
    }
    rep.summary.push_back(std::to_string(r.rounds) + " rounds: " + std::to_string(r.accepted) + " accepted, " +
                          std::to_string(r.sifted) + " sifted, QBER " + (r.qber ? num(*r.qber) : "undefined"));
}

void run_stats(Report& rep, const ExperimentConfig& c) {
    const std::string source = c.text("source");
    const double threshold = c.real("threshold");
    const std::int64_t grid = c.integer("grid");
    const double grid_max = c.real("grid_max");
    if (grid < 0 || grid > 1000) throw ConfigurationError("grid: must be in [0, 1000]");
    if (grid > 0 && !(grid_max > 0.0)) throw ConfigurationError("grid_max: must be positive");

    struct Row {
        std::optional<double> nu, mu, p, p1, pm;
        StatsResult s;
    };
    std::vector<Row> rows;
    auto axis = [&](int i) { return grid_max * static_cast<double>(i) / static_cast<double>(std::max<std::int64_t>(grid - 1, 1)); };
    if (source == "coherent") {
        if (grid == 0) {
            double nu = c.real("nu"), mu = c.real("mu");
            rows.push_back({nu, mu, {}, {}, {}, keyed("nu", [&] { return coherent_stats(nu, mu, threshold); })});
        } else {
            for (int i = 0; i < grid; ++i) {
                for (int j = 0; j < grid; ++j) {
                    rows.push_back({axis(i), axis(j), {}, {}, {}, coherent_stats(axis(i), axis(j), threshold)});
                }
            }
        }
    } else if (source == "pdc") {
        if (grid == 0) {
            double p = c.real("p");
            rows.push_back({{}, {}, p, {}, {}, keyed("p", [&] { return pdc_stats(p, threshold); })});
        } else {
            for (int i = 0; i < grid; ++i) {
                double p = axis(i);
                rows.push_back({{}, {}, p, {}, {}, keyed("grid_max", [&] { return pdc_stats(p, threshold); })});
            }
        }
    } else if (source == "triggered") {
        double p1 = c.real("p1"), pm = c.real("pmul");
        auto one = [&](double mu) {
            return Row{{}, mu, {}, p1, pm, keyed("p1", [&] { return triggered_plus_coherent_stats(p1, pm, mu, threshold); })};
        };
        if (grid == 0) {
            rows.push_back(one(c.real("mu")));
        } else {
            for (int i = 0; i < grid; ++i) rows.push_back(one(axis(i)));
        }
    } else {
        throw ConfigurationError("source: unknown value '" + source + "' (coherent | pdc | triggered)");
    }

    json jrows = json::array();
    rep.csv_header = {"nu", "mu", "p11", "pmul", "bound", "ratio", "condition_met", "pair_prob",
                      "trigger_p1", "trigger_pmul", "pmul_over_p11_sq", "mu_window_low", "mu_window_high"};
    for (const auto& r : rows) {
        jrows.push_back({{"nu", opt(r.nu)},
                         {"mu", opt(r.mu)},
                         {"pair_prob", opt(r.p)},
                         {"trigger_p1", opt(r.p1)},
                         {"trigger_pmul", opt(r.pm)},
                         {"p11", r.s.p11},
                         {"pmul", r.s.pmul},
                         {"bound", opt(r.s.bound)},
                         {"ratio", opt(r.s.ratio)},
                         {"condition_met", r.s.condition_met},
                         {"pmul_over_p11_sq", opt(r.s.pmul_over_p11_sq)},
                         {"mu_window_low", opt(r.s.mu_window_low)},
                         {"mu_window_high", opt(r.s.mu_window_high)}});
        rep.csv_rows.push_back({num(r.nu), num(r.mu), num(r.s.p11), num(r.s.pmul), num(r.s.bound), num(r.s.ratio),
                                r.s.condition_met ? "1" : "0", num(r.p), num(r.p1), num(r.pm),
                                num(r.s.pmul_over_p11_sq), num(r.s.mu_window_low), num(r.s.mu_window_high)});
    }
    rep.json["result"] = {{"source", source}, {"threshold", threshold}, {"rows", jrows}};
    if (source == "pdc") {
        rep.json["result"]["note"] = "pmul_over_p11_sq is computed by this implementation (no closed-form reference)";
    }
    if (rows.size() == 1) {
        const auto& s = rows.front().s;
        rep.summary.push_back("p11 " + num(s.p11) + ", pmul " + num(s.pmul) + ", ratio " +
                              (s.ratio ? num(*s.ratio) : "undefined") + ", condition " +
                              (s.condition_met ? "met" : "not met"));
    } else {
        rep.summary.push_back(std::to_string(rows.size()) + " grid points");
    }
}

void run_verify_command(Report& rep, const ExperimentConfig& c) {
    VerifyOptions o;
    o.seed = c.unsigned_integer("seed");
    o.haar_trials = positive_count(c, "haar_trials");
    o.bb84_rounds = positive_count(c, "bb84_rounds");
    o.threads = thread_count(c);
    json criteria = json::array();
    rep.csv_header = {"id", "name", "passed", "seconds", "time_limit", "detail"};
    bool all = true;
    for (const auto& r : run_verify(o)) {
        all = all && r.passed;
        criteria.push_back({{"id", r.id},
                            {"name", r.name},
                            {"passed", r.passed},
                            {"seconds", r.seconds},
                            {"time_limit", r.time_limit > 0 ? json(r.time_limit) : json(nullptr)},
                            {"detail", r.detail}});
        rep.csv_rows.push_back({std::to_string(r.id), r.name, r.passed ? "1" : "0", num(r.seconds),
                                r.time_limit > 0 ? num(r.time_limit) : "", r.detail});
        char line[64];
        std::snprintf(line, sizeof line, "[%s] %d  %-48s", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str());
        char secs[32];
        std::snprintf(secs, sizeof secs, "%7.2f s  ", r.seconds);
        rep.summary.push_back(std::string(line) + secs + r.detail);
    }
    rep.json["result"] = {{"passed", all}, {"criteria", criteria}};
    rep.summary.push_back(all ? "all checks passed" : "some checks FAILED");
    rep.exit_code = all ? kOk : kValidation;
}

void run_multiphoton(Report& rep, const ExperimentConfig& c) {
    ProtocolConfig pc = protocol_from(c);
    pc.noise.params = DephasingParams{c.real("phi_h"), c.real("phi_v")};
    SourceSpec s;
    s.kind = keyed("source", [&] { return parse_source_kind(c.text("source")); });
    s.signal = pc.signal;
    s.nu = c.real("nu");
    s.mu = c.real("mu");
    s.pair_mean = c.real("pair_mean");
    s.trigger_p1 = c.real("p1");
    s.trigger_pmul = c.real("pmul");
    s.n_ref = static_cast<int>(c.integer("n_ref"));
    s.n_sig = static_cast<int>(c.integer("n_sig"));
    s.cutoff = static_cast<int>(c.integer("source_cutoff"));
    const std::int64_t cutoff = c.integer("registry_cutoff");
    if (cutoff < 3 || cutoff > ModeRegistry::kMaxCutoff) {
        throw ConfigurationError("registry_cutoff: must be in [3, " + std::to_string(ModeRegistry::kMaxCutoff) + "]");
    }
    keyed("source", [&] {
        s.validate();
        return 0;
    });
    auto registry = ModeRegistry::standard(3, static_cast<int>(cutoff));
    MultiphotonReport m = keyed("source_cutoff", [&] { return run_multiphoton_error(s, pc, registry); });
    json traj = json::array();
    for (const auto& t : m.trajectories) {
        traj.push_back({{"n_ref", t.n_ref},
                        {"n_sig", t.n_sig},
                        {"weight", t.weight},
                        {"accepted", t.accepted},
                        {"false_accept", t.false_accept},
                        {"error", t.error}});
    }
    rep.json["result"] = {{"source", std::string(to_string(m.source))},
                          {"signal", signal_json(pc.signal)},
                          {"p11_input", m.p11_input},
                          {"pmul_input", m.pmul_input},
                          {"truncation_error", m.truncation_error},
                          {"accepted_probability", m.accepted_probability},
                          {"accepted_single", m.accepted_single},
                          {"accepted_multiphoton", m.accepted_multiphoton},
                          {"false_accept_probability", m.false_accept_probability},
                          {"error_rate", opt(m.error_rate)},
                          {"trajectories", traj}};
    if (c.boolean("per_trial")) {
        rep.csv_header = {"n_ref", "n_sig", "weight", "accepted", "false_accept", "error"};
        for (const auto& t : m.trajectories) {
            rep.csv_rows.push_back({std::to_string(t.n_ref), std::to_string(t.n_sig), num(t.weight),
                                    num(t.accepted), num(t.false_accept), num(t.error)});
        }
    } else {
        rep.csv_header = {"source", "p11_input", "pmul_input", "truncation_error", "accepted_probability",
                          "accepted_single", "accepted_multiphoton", "false_accept_probability", "error_rate"};
        rep.csv_rows.push_back({std::string(to_string(m.source)), num(m.p11_input), num(m.pmul_input),
                                num(m.truncation_error), num(m.accepted_probability), num(m.accepted_single),
                                num(m.accepted_multiphoton), num(m.false_accept_probability), num(m.error_rate)});
    }
    rep.summary.push_back("accepted " + num(m.accepted_probability) + ", false accepts " +
                          num(m.false_accept_probability) + ", error rate " +
                          (m.error_rate ? num(*m.error_rate) : "undefined"));
}

}  // namespace

// ---------------------------------------------------------------- config

const std::vector<std::string>& commands() {
    static const std::vector<std::string> c{"dephasing", "rotation", "bb84", "stats", "verify", "multiphoton"};
    return c;
}

const std::vector<KeySpec>& keys_for(std::string_view command) {
    auto it = tables().find(std::string(command));
    if (it == tables().end()) throw UsageError("unknown command '" + std::string(command) + "'");
    return it->second;
}

std::map<std::string, std::string> parse_config_text(std::string_view text, const std::string& source) {
    std::map<std::string, std::string> out;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::string t = trim(line);
        if (t.empty()) continue;
        auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw UsageError(source + ":" + std::to_string(lineno) + ": expected key=value");
        }
        std::string key = normalize_key(trim(t.substr(0, eq)));
        if (key.empty()) throw UsageError(source + ":" + std::to_string(lineno) + ": empty key");
        if (!out.emplace(key, trim(t.substr(eq + 1))).second) {
            throw UsageError(source + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
        }
    }
    return out;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path);
}

std::complex<double> parse_complex(std::string_view text) {
    std::string s = trim(text);
    auto number = [](const std::string& t) {
        if (t.empty() || t == "+") return 1.0;
        if (t == "-") return -1.0;
        std::size_t used = 0;
        double v = std::stod(t, &used);
        if (used != t.size()) throw std::invalid_argument("trailing characters");
        return v;
    };
    if (s.empty()) throw std::invalid_argument("empty value");
    if (s.back() != 'i' && s.back() != 'j') return {number(s), 0.0};
    s.pop_back();
    // Split at the last sign that is not part of an exponent.
    std::size_t split = std::string::npos;
    for (std::size_t k = s.size(); k-- > 1;) {
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    if (split == std::string::npos) return {0.0, number(s)};
    return {number(s.substr(0, split)), number(s.substr(split))};
}

ExperimentConfig ExperimentConfig::resolve(std::string_view command, const std::map<std::string, std::string>& file,
                                           const std::map<std::string, std::string>& flags) {
    ExperimentConfig c;
    c.command_ = std::string(command);
    const auto& keys = keys_for(command);
    for (const auto& k : keys) c.values_[k.key] = k.default_value;
    for (const auto* layer : {&file, &flags}) {
        for (const auto& [key, value] : *layer) {
            auto k = normalize_key(key);
            if (!c.values_.contains(k)) {
                throw UsageError("unknown key '" + key + "' for command '" + c.command_ + "'");
            }
            c.values_[k] = value;
        }
    }
    return c;
}

const std::string& ExperimentConfig::raw(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ValidationError(key + ": not a key of command '" + command_ + "'");
    return it->second;
}

std::string ExperimentConfig::text(const std::string& key) const { return raw(key); }

double ExperimentConfig::real(const std::string& key) const {
    const auto& v = raw(key);
    try {
        std::size_t used = 0;
        double x = std::stod(v, &used);
        if (used == v.size() && std::isfinite(x)) return x;
    } catch (const std::exception&) {
    }
    throw ValidationError(key + ": expected a finite number, got '" + v + "'");
}

std::complex<double> ExperimentConfig::complex(const std::string& key) const {
    const auto& v = raw(key);
    try {
        auto z = parse_complex(v);
        if (std::isfinite(z.real()) && std::isfinite(z.imag())) return z;
    } catch (const std::exception&) {
    }
    throw ValidationError(key + ": expected a complex number like 0.6 or 0.3+0.4i, got '" + v + "'");
}

std::int64_t ExperimentConfig::integer(const std::string& key) const {
    const auto& v = raw(key);
    try {
        std::size_t used = 0;
        long long x = std::stoll(v, &used);
        if (used == v.size()) return x;
    } catch (const std::exception&) {
    }
    throw ValidationError(key + ": expected an integer, got '" + v + "'");
}

std::uint64_t ExperimentConfig::unsigned_integer(const std::string& key) const {
    const auto& v = raw(key);
    try {
        std::size_t used = 0;
        if (!v.empty() && v[0] != '-') {
            unsigned long long x = std::stoull(v, &used);
            if (used == v.size()) return x;
        }
    } catch (const std::exception&) {
    }
    throw ValidationError(key + ": expected a non-negative integer, got '" + v + "'");
}

bool ExperimentConfig::boolean(const std::string& key) const {
    const auto& v = raw(key);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ValidationError(key + ": expected true or false, got '" + v + "'");
}

// ---------------------------------------------------------------- reports

Report run_command(const ExperimentConfig& cfg) {
    Report rep;
    rep.json = {{"schema_version", kSchemaVersion},
                {"command", cfg.command()},
                {"timestamp", timestamp()},
                {"config", cfg.values()}};
    const std::string format = cfg.text("format");
    if (format != "json" && format != "csv") {
        throw ConfigurationError("format: expected json or csv, got '" + format + "'");
    }
    const auto& cmd = cfg.command();
    if (cmd == "dephasing") {
        run_dephasing(rep, cfg);
    } else if (cmd == "rotation") {
        run_rotation(rep, cfg);
    } else if (cmd == "bb84") {
        run_bb84(rep, cfg);
    } else if (cmd == "stats") {
        run_stats(rep, cfg);
    } else if (cmd == "verify") {
        run_verify_command(rep, cfg);
    } else if (cmd == "multiphoton") {
        run_multiphoton(rep, cfg);
    } else {
        throw UsageError("unknown command '" + cmd + "'");
    }
    return rep;
}

std::string to_csv(const Report& report) {
    std::string out;
    auto line = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += csv_escape(cells[i]);
        }
        out += '\n';
    };
    line(report.csv_header);
    for (const auto& row : report.csv_rows) line(row);
    return out;
}

std::string to_json_text(const Report& report) { return report.json.dump(2) + "\n"; }

void emit_report(const Report& report, const std::string& format, const std::string& path) {
    std::filesystem::path p(path);
    std::error_code ec;
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << (format == "csv" ? to_csv(report) : to_json_text(report));
    out.flush();
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

std::vector<std::string> validate_report_schema(const json& report) {
    std::vector<std::string> problems;
    auto need = [&problems](const json& obj, const std::string& where, const std::string& key, auto check,
                            const char* type) {
        if (!obj.is_object() || !obj.contains(key)) {
            problems.push_back(where + key + ": missing");
        } else if (!check(obj.at(key))) {
            problems.push_back(where + key + ": expected " + type);
        }
    };
    auto is_num = [](const json& j) { return j.is_number(); };
    auto is_num_or_null = [](const json& j) { return j.is_number() || j.is_null(); };
    auto is_int = [](const json& j) { return j.is_number_integer(); };
    auto is_str = [](const json& j) { return j.is_string(); };
    auto is_obj = [](const json& j) { return j.is_object(); };
    auto is_arr = [](const json& j) { return j.is_array(); };
    auto is_bool = [](const json& j) { return j.is_boolean(); };

    if (!report.is_object()) return {"report: expected an object"};
    need(report, "", "schema_version", is_int, "integer");
    if (report.contains("schema_version") && report["schema_version"] != kSchemaVersion) {
        problems.push_back("schema_version: unsupported value " + report["schema_version"].dump());
    }
    need(report, "", "command", is_str, "string");
    need(report, "", "timestamp", is_str, "string");
    need(report, "", "config", is_obj, "object");
    need(report, "", "result", is_obj, "object");
    if (!problems.empty()) return problems;
    for (const auto& [k, v] : report["config"].items()) {
        if (!v.is_string()) problems.push_back("config." + k + ": expected string");
    }
    const std::string cmd = report["command"];
    const json& r = report["result"];
    const std::string w = "result.";
    if (cmd == "dephasing" || cmd == "rotation") {
        need(r, w, "mode", is_str, "string");
        if (r.value("mode", "") == "single") {
            need(r, w, "success_probability", is_num, "number");
            need(r, w, "parity_factor", is_num, "number");
            need(r, w, "fidelity", is_num_or_null, "number or null");
            need(r, w, "outcomes", is_arr, "array");
            need(r, w, "noise_draw", is_obj, "object");
        } else {
            need(r, w, "trials", is_int, "integer");
            need(r, w, "mean_parity", is_num, "number");
            need(r, w, "se_parity", is_num, "number");
            need(r, w, "mean_success", is_num_or_null, "number or null");
            need(r, w, "mean_fidelity", is_num_or_null, "number or null");
            need(r, w, "seed", is_int, "integer");
        }
    } else if (cmd == "bb84") {
        for (const char* k : {"rounds", "accepted", "sifted", "errors", "seed"}) need(r, w, k, is_int, "integer");
        need(r, w, "acceptance_rate", is_num, "number");
        for (const char* k : {"qber", "qber_expected", "sift_fraction"}) need(r, w, k, is_num_or_null, "number or null");
    } else if (cmd == "stats") {
        need(r, w, "rows", is_arr, "array");
        if (r.contains("rows") && r["rows"].is_array()) {
            for (std::size_t i = 0; i < r["rows"].size(); ++i) {
                const std::string rw = w + "rows[" + std::to_string(i) + "].";
                need(r["rows"][i], rw, "p11", is_num, "number");
                need(r["rows"][i], rw, "pmul", is_num, "number");
                need(r["rows"][i], rw, "condition_met", is_bool, "boolean");
            }
        }
    } else if (cmd == "verify") {
        need(r, w, "passed", is_bool, "boolean");
        need(r, w, "criteria", is_arr, "array");
    } else if (cmd == "multiphoton") {
        need(r, w, "accepted_probability", is_num, "number");
        need(r, w, "false_accept_probability", is_num, "number");
        need(r, w, "error_rate", is_num_or_null, "number or null");
        need(r, w, "trajectories", is_arr, "array");
    } else {
        problems.push_back("command: unknown value '" + cmd + "'");
    }
    return problems;
}

// ---------------------------------------------------------------- entry

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"fockdist: collective-noise immune qubit distribution simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "fockdist 0.1.0");
    app.footer("Exit codes: 0 ok, 2 usage, 3 validation, 4 internal.\n"
               "Every key can also be given in a key=value file passed with --config; flags win.");

    std::map<std::string, std::string> config_paths;
    std::map<std::string, std::map<std::string, std::string>> storage;
    std::map<std::string, std::vector<std::pair<std::string, CLI::Option*>>> options;
    for (const auto& cmd : commands()) {
        auto* sub = app.add_subcommand(cmd);
        sub->add_option("--config", config_paths[cmd], "key=value config file");
        for (const auto& k : keys_for(cmd)) {
            std::string flag = "--" + k.key;
            for (char& ch : flag) {
                if (ch == '_') ch = '-';
            }
            std::string help = k.help + (k.default_value.empty() ? "" : " [" + k.default_value + "]");
            auto& slot = storage[cmd][k.key];
            CLI::Option* o = k.type == KeyType::Boolean ? sub->add_flag(flag + "{true}", slot, help)
                                                        : sub->add_option(flag, slot, help);
            options[cmd].emplace_back(k.key, o);
        }
    }
    app.get_subcommand("dephasing")->description("fixed or sampled collective dephasing");
    app.get_subcommand("rotation")->description("fixed or sampled collective polarization rotation");
    app.get_subcommand("bb84")->description("BB84 session through the scheme");
    app.get_subcommand("stats")->description("photon statistics of candidate sources");
    app.get_subcommand("verify")->description("acceptance check suite");
    app.get_subcommand("multiphoton")->description("false coincidences from multi-photon sources");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    std::string command;
    for (const auto* sub : app.get_subcommands()) command = sub->get_name();

    try {
        std::map<std::string, std::string> file;
        if (!config_paths[command].empty()) file = read_config_file(config_paths[command]);
        std::map<std::string, std::string> flags;
        for (const auto& [key, o] : options[command]) {
            if (o->count() > 0) flags[key] = storage[command][key];
        }
        ExperimentConfig cfg = ExperimentConfig::resolve(command, file, flags);
        Report rep = run_command(cfg);

        std::string format = cfg.text("format");
        std::string path = cfg.text("output");
        if (path.empty()) {
            if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir) {
                path = (std::filesystem::path(dir) / (command + "." + format)).string();
            }
        }
        if (path.empty() && command != "verify") {
            out << (format == "csv" ? to_csv(rep) : to_json_text(rep));
            for (const auto& s : rep.summary) err << s << '\n';
        } else {
            for (const auto& s : rep.summary) out << s << '\n';
            if (!path.empty()) {
                try {
                    emit_report(rep, format, path);
                } catch (const std::exception& e) {
                    err << "error: " << e.what() << '\n';
                    return kInternal;
                }
                out << "report written to " << path << '\n';
            }
        }
        return rep.exit_code;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const ConfigurationError& e) {
        err << "configuration error: " << e.what() << '\n';
        return kValidation;
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << '\n';
        return kValidation;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kInternal;
    }
}

}  // namespace fockdist::cli

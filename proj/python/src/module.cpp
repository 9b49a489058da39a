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

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fockdist/bb84.hpp"
#include "fockdist/errors.hpp"
#include "fockdist/protocol.hpp"
#include "fockdist/source_stats.hpp"
#include "fockdist/verify.hpp"

namespace py = pybind11;
using namespace fockdist;

namespace {

py::object opt(const std::optional<double>& x) { return x ? py::cast(*x) : py::none(); }

py::dict noise_dict(const NoiseDraw& n) {
    py::dict d;
    if (const auto* p = std::get_if<DephasingParams>(&n.params)) {
        d["type"] = "dephasing";
        d["phi_h"] = p->phi_h;
        d["phi_v"] = p->phi_v;
    } else {
        const auto& r = std::get<RotationParams>(n.params);
        d["type"] = "rotation";
        d["delta1"] = r.delta1;
        d["gamma1"] = r.gamma1;
        d["delta2"] = r.delta2;
        d["gamma2"] = r.gamma2;
    }
    d["jitter"] = n.jitter.has_value();
    return d;
}

PhaseConvention convention_of(const std::string& s) {
    if (s == "real") return PhaseConvention::Real;
    if (s == "imaginary") return PhaseConvention::Imaginary;
    throw ConfigurationError("unknown convention '" + s + "' (real | imaginary)");
}

ProtocolConfig make_config(Complex alpha, Complex beta, double eta, const std::string& variant,
                           const std::string& acceptance, const std::string& double_click,
                           const std::string& convention) {
    ProtocolConfig c;
    c.signal = SignalState::normalized(alpha, beta);
    c.detector = {eta, Resolving::Threshold};
    c.variant = parse_variant(variant);
    c.acceptance = parse_acceptance(acceptance);
    c.double_click = parse_double_click(double_click);
    c.convention = convention_of(convention);
    return c;
}

py::dict stats_dict(const StatsResult& s) {
    py::dict d;
    d["p11"] = s.p11;
    d["pmul"] = s.pmul;
    d["ratio"] = opt(s.ratio);
    d["threshold"] = s.threshold;
    d["condition_met"] = s.condition_met;
    d["bound"] = opt(s.bound);
    d["pmul_over_p11_sq"] = opt(s.pmul_over_p11_sq);
    d["mu_window_low"] = opt(s.mu_window_low);
    d["mu_window_high"] = opt(s.mu_window_high);
    return d;
}

py::list checks_list(const std::vector<CheckReport>& checks) {
    py::list out;
    for (const auto& c : checks) {
        py::dict d;
        d["name"] = c.name;
        d["passed"] = c.passed;
        d["residual"] = c.residual;
        d["tolerance"] = c.tolerance;
        d["constants"] = c.constants;
        d["detail"] = c.detail;
        out.append(d);
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Fock-space simulator for two-pulse qubit distribution over collectively noisy channels.";

    py::register_exception<ConfigurationError>(m, "ConfigurationError", PyExc_ValueError);
    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);

    m.def(
        "run_distribution",
        [](Complex alpha, Complex beta, std::optional<std::pair<double, double>> dephasing,
           std::optional<std::vector<Complex>> rotation, double eta, const std::string& variant,
           const std::string& acceptance, const std::string& double_click, const std::string& convention) {
            ProtocolConfig c = make_config(alpha, beta, eta, variant, acceptance, double_click, convention);
            if (dephasing && rotation) throw ConfigurationError("give either dephasing or rotation, not both");
            if (dephasing) {
                c.noise.params = DephasingParams{dephasing->first, dephasing->second};
            } else if (rotation) {
                if (rotation->size() != 4) throw ConfigurationError("rotation needs (delta1, gamma1, delta2, gamma2)");
                c.noise.params = RotationParams{(*rotation)[0], (*rotation)[1], (*rotation)[2], (*rotation)[3]};
            }
            RunReport r;
            {
                py::gil_scoped_release release;
                r = run_distribution(c);
            }
            py::dict d;
            d["success_probability"] = r.success_probability;
            d["parity_factor"] = r.parity_factor;
            d["routing_factor"] = opt(r.routing_factor);
            d["detection_factor"] = opt(r.detection_factor);
            d["fidelity"] = opt(r.fidelity);
            d["double_click_probability"] = r.double_click_probability;
            py::dict outcomes;
            for (const auto& o : r.outcomes) outcomes[py::str(o.label)] = py::make_tuple(o.probability, o.fidelity);
            d["outcomes"] = outcomes;
            d["noise_draw"] = noise_dict(r.noise_draw);
            return d;
        },
        py::arg("alpha") = Complex(1.0), py::arg("beta") = Complex(0.0), py::arg("dephasing") = py::none(),
        py::arg("rotation") = py::none(), py::arg("eta") = 1.0, py::arg("variant") = "port3",
        py::arg("acceptance") = "both", py::arg("double_click") = "abort", py::arg("convention") = "real",
        "One protocol run for fixed noise. `dephasing` is (phi_h, phi_v); `rotation` is "
        "(delta1, gamma1, delta2, gamma2). Identity channels when neither is given.");

    m.def(
        "run_monte_carlo",
        [](const std::string& sampler, std::size_t trials, std::uint64_t seed, double jitter, Complex alpha,
           Complex beta, double eta, const std::string& variant, bool decode, unsigned threads) {
            MonteCarloConfig mc;
            mc.base = make_config(alpha, beta, eta, variant, "both", "abort", "real");
            mc.sampler = {parse_noise_kind(sampler), seed, jitter};
            mc.trials = trials;
            mc.decode = decode;
            mc.threads = threads;
            MonteCarloReport r;
            {
                py::gil_scoped_release release;
                r = run_monte_carlo(mc);
            }
            py::dict d;
            d["trials"] = r.trials;
            d["accepted_trials"] = r.accepted_trials;
            d["mean_success"] = r.decoded ? py::cast(r.mean_success) : py::none();
            d["se_success"] = r.decoded ? py::cast(r.se_success) : py::none();
            d["mean_parity"] = r.mean_parity;
            d["se_parity"] = r.se_parity;
            d["mean_fidelity"] = opt(r.mean_fidelity);
            d["min_fidelity"] = opt(r.min_fidelity);
            d["seed"] = r.seed;
            return d;
        },
        py::arg("sampler") = "haar-rotation", py::arg("trials") = 1000, py::arg("seed") = 0, py::arg("jitter") = 0.0,
        py::arg("alpha") = Complex(1.0), py::arg("beta") = Complex(0.0), py::arg("eta") = 1.0,
        py::arg("variant") = "port3", py::arg("decode") = true, py::arg("threads") = 0,
        "Seeded Monte Carlo over sampled channel noise.");

    m.def(
        "run_bb84_session",
        [](std::size_t rounds, const std::string& noise, std::uint64_t seed, double jitter, double eta,
           const std::string& acceptance) {
            Bb84Config c;
            c.rounds = rounds;
            c.noise = {parse_noise_kind(noise), seed, jitter};
            c.detector = {eta, Resolving::Threshold};
            c.acceptance = parse_acceptance(acceptance);
            Bb84Report r;
            {
                py::gil_scoped_release release;
                r = run_bb84_session(c);
            }
            py::dict d;
            d["rounds"] = r.rounds;
            d["accepted"] = r.accepted;
            d["sifted"] = r.sifted;
            d["errors"] = r.errors;
            d["qber"] = opt(r.qber);
            d["qber_expected"] = opt(r.qber_expected);
            d["acceptance_rate"] = r.acceptance_rate;
            d["sift_fraction"] = opt(r.sift_fraction);
            return d;
        },
        py::arg("rounds") = 10000, py::arg("noise") = "haar-rotation", py::arg("seed") = 0, py::arg("jitter") = 0.0,
        py::arg("eta") = 1.0, py::arg("acceptance") = "d-only");

    m.def(
        "coherent_stats", [](double nu, double mu, double threshold) { return stats_dict(coherent_stats(nu, mu, threshold)); },
        py::arg("nu"), py::arg("mu"), py::arg("threshold") = kDefaultThreshold);
    m.def(
        "pdc_stats", [](double p, double threshold) { return stats_dict(pdc_stats(p, threshold)); }, py::arg("p"),
        py::arg("threshold") = kDefaultThreshold);
    m.def(
        "triggered_plus_coherent_stats",
        [](double p1, double pm, double mu, double threshold) {
            return stats_dict(triggered_plus_coherent_stats(p1, pm, mu, threshold));
        },
        py::arg("trigger_p1"), py::arg("trigger_pmul"), py::arg("mu"), py::arg("threshold") = kDefaultThreshold);

    m.def(
        "run_multiphoton_error",
        [](const std::string& source, int n_ref, int n_sig, double nu, double mu, double pair_mean, double eta,
           int source_cutoff, int registry_cutoff) {
            ProtocolConfig c = make_config(1.0, 0.0, eta, "port3", "both", "abort", "real");
            SourceSpec s;
            s.kind = parse_source_kind(source);
            s.signal = c.signal;
            s.n_ref = n_ref;
            s.n_sig = n_sig;
            s.nu = nu;
            s.mu = mu;
            s.pair_mean = pair_mean;
            s.cutoff = source_cutoff;
            s.validate();
            MultiphotonReport r = run_multiphoton_error(s, c, ModeRegistry::standard(3, registry_cutoff));
            py::dict d;
            d["p11_input"] = r.p11_input;
            d["pmul_input"] = r.pmul_input;
            d["accepted_probability"] = r.accepted_probability;
            d["false_accept_probability"] = r.false_accept_probability;
            d["error_rate"] = opt(r.error_rate);
            d["truncation_error"] = r.truncation_error;
            return d;
        },
        py::arg("source") = "fock-pair", py::arg("n_ref") = 2, py::arg("n_sig") = 0, py::arg("nu") = 0.1,
        py::arg("mu") = 0.1, py::arg("pair_mean") = 0.01, py::arg("eta") = 1.0, py::arg("source_cutoff") = 2,
        py::arg("registry_cutoff") = 4);

    m.def("verify_projection_equivalence", [] { return checks_list(verify_projection_equivalence()); });
    m.def("verify_virtual_qubits", [] { return checks_list(verify_virtual_qubits()); });

    m.def(
        "run_criterion",
        [](int id, std::uint64_t seed, std::size_t haar_trials, std::size_t bb84_rounds) {
            VerifyOptions o;
            o.seed = seed;
            o.haar_trials = haar_trials;
            o.bb84_rounds = bb84_rounds;
            CriterionResult r;
            {
                py::gil_scoped_release release;
                r = run_criterion(id, o);
            }
            py::dict d;
            d["id"] = r.id;
            d["name"] = r.name;
            d["passed"] = r.passed;
            d["detail"] = r.detail;
            d["seconds"] = r.seconds;
            return d;
        },
        py::arg("id"), py::arg("seed") = VerifyOptions{}.seed, py::arg("haar_trials") = VerifyOptions{}.haar_trials,
        py::arg("bb84_rounds") = VerifyOptions{}.bb84_rounds, "Runs one acceptance check (1..9).");
}

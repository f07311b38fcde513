/**
 * Copyright 2026 The Indistinguo Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "indistinguo/bounds.hpp"
#include "indistinguo/interference.hpp"
#include "indistinguo/montecarlo.hpp"
#include "indistinguo/noise.hpp"
#include "indistinguo/reconstruct.hpp"
#include "indistinguo/states.hpp"

namespace indistinguo::cli {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(ErrorKind::Input, "cannot open '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json read_json(const std::string& path) {
    try {
        return json::parse(read_file(path));
    } catch (const json::exception& e) {
        fail(ErrorKind::Input, "'" + path + "' is not valid JSON: " + e.what());
    }
}

std::istringstream open_text(const std::string& path) { return std::istringstream(read_file(path)); }

long parse_long(const std::string& text, const std::string& context) {
    try {
        std::size_t used = 0;
        const long v = std::stol(text, &used);
        if (used == text.size()) {
            return v;
        }
    } catch (const std::exception&) {
    }
    fail(ErrorKind::Input, "expected an integer in '" + context + "'");
}

double parse_double(const std::string& text, const std::string& context) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used == text.size() && std::isfinite(v)) {
            return v;
        }
    } catch (const std::exception&) {
    }
    fail(ErrorKind::Input, "expected a number in '" + context + "'");
}

std::vector<int> parse_modes(const std::string& text) {
    std::vector<int> modes;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        modes.push_back(static_cast<int>(parse_long(part, text)));
    }
    if (modes.empty()) {
        fail(ErrorKind::Input, "empty input-mode list");
    }
    return modes;
}

std::vector<int> first_modes(int n) {
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), 0);
    return v;
}

std::string num(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json estimate_json(const EstimateWithError& e) { return {{"value", e.value}, {"error", e.error}}; }

json counts_json(const CountMap& counts) {
    json a = json::array();
    for (auto it = counts.rbegin(); it != counts.rend(); ++it) {
        a.push_back({{"config", it->first}, {"count", it->second}});
    }
    return a;
}

CountMap read_counts_file(const std::string& path) {
    auto in = open_text(path);
    try {
        return read_counts_csv(in);
    } catch (const Error& e) {
        fail(e.kind(), path + ": " + e.what());
    }
}

// With detectors == 0 every output pattern is recorded with unit efficiency;
// otherwise each mode feeds that many threshold detectors through an even split.
DetectionModel uniform_detection(int modes, int photons, int detectors) {
    if (detectors < 0) {
        fail(ErrorKind::Input, "--detectors must be non-negative");
    }
    if (detectors == 0) {
        DetectionModel det;
        for (const auto& c : enumerate_configurations(modes, photons)) {
            det.table[c] = 1.0;
        }
        return det;
    }
    const std::vector<std::vector<double>> splits(modes, std::vector<double>(detectors, 1.0 / detectors));
    return detection_model_from_splits(splits, 1.0, photons);
}

struct Common {
    std::uint64_t seed = 0;
    std::string out = "-";
    std::string format = "json";
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--seed", c.seed, "Master seed")->capture_default_str();
    sub->add_option("--out", c.out, "Output file, '-' for standard output")->capture_default_str();
    sub->add_option("--format", c.format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
}

// simulate ------------------------------------------------------------------

struct SimulateArgs {
    std::string unitary;
    std::string scenario;
    std::string noise;
    std::string inputs;
    std::string reference;
    long shots = 0;
    Common common;
};

std::string cmd_simulate(const SimulateArgs& a) {
    const auto u = parse_unitary_spec(a.unitary, a.common.seed);
    const auto s = scenario_from_json(read_json(a.scenario));
    const auto inputs = a.inputs.empty() ? first_modes(s.dim()) : parse_modes(a.inputs);
    std::optional<NoiseParameters> noise;
    if (!a.noise.empty()) {
        noise = noise_from_json(read_json(a.noise));
    }
    const auto distribute = [&](const GramMatrix& g) {
        return noise ? noisy_distribution(u, g, *noise, inputs) : interference_distribution(u, g, inputs);
    };
    const auto d = distribute(s);
    const GramMatrix ref =
        a.reference.empty() ? GramMatrix::identity(s.dim()) : scenario_from_json(read_json(a.reference));
    const double p_fb = full_bunching_probability(d);
    const double p_ref = full_bunching_probability(distribute(ref));

    CountMap counts;
    if (a.shots < 0) {
        fail(ErrorKind::Input, "--shots must be non-negative");
    }
    if (a.shots > 0) {
        counts = sample_counts(d, a.shots, a.common.seed);
    }
    if (a.common.format == "csv") {
        std::ostringstream os;
        if (a.shots > 0) {
            write_counts_csv(os, counts);
        } else {
            os << "config,probability\n";
            for (std::size_t c = 0; c < d.size(); ++c) {
                os << format_config(d.configs[c]) << ',' << num(d.probs[c]) << '\n';
            }
        }
        return os.str();
    }
    json j;
    j["unitary"] = a.unitary;
    j["inputs"] = inputs;
    j["photons"] = d.photons;
    j["modes"] = d.modes;
    j["p_fb"] = p_fb;
    j["p_fb_per_mode"] = full_bunching_per_mode(d);
    j["sigma"] = variance_from_distribution(d);
    j["reference"] = a.reference.empty() ? std::string("distinguishable") : a.reference;
    j["r_fb"] = p_ref > 1e-14 ? json(p_fb / p_ref) : json(nullptr);
    j["noise"] = noise ? noise_to_json(*noise) : json(nullptr);
    j["distribution"] = distribution_to_json(d);
    if (a.shots > 0) {
        j["shots"] = a.shots;
        j["seed"] = a.common.seed;
        j["counts"] = counts_json(counts);
    }
    return dump(j);
}

// bounds --------------------------------------------------------------------

struct BoundsArgs {
    double sigma = 0.0;
    std::optional<double> sigma_d;
    int n = 3;
    Common common;
};

json bounds_json(double sigma, int n, std::optional<double> sigma_d) {
    json j;
    j["sigma"] = sigma;
    j["n"] = n;
    j["average_overlap_balanced"] = average_overlap_from_balanced(sigma, n);
    if (n == 3) {
        const auto mb = min_overlap_lower_bounds(sigma);
        j["min_overlap"] = {{"linear", bound_to_json(mb.linear)}, {"product", bound_to_json(mb.product)}};
    }
    const double sd = sigma_d.value_or(1.0 - 1.0 / n);
    j["sigma_d"] = sd;
    j["sigma_d_source"] = sigma_d ? "given" : "balanced";
    j["average_overlap_lb"] = bound_to_json(average_overlap_sdi_bound(sigma, sd, n));
    return j;
}

std::string cmd_bounds(const BoundsArgs& a) {
    if (!std::isfinite(a.sigma) || a.n < 2) {
        fail(ErrorKind::Input, "bounds need a finite --sigma and --n >= 2");
    }
    const json j = bounds_json(a.sigma, a.n, a.sigma_d);
    if (a.common.format == "csv") {
        std::ostringstream os;
        os << "quantity,value,trivial\n";
        os << "average_overlap_balanced," << num(j["average_overlap_balanced"].get<double>()) << ",\n";
        if (j.contains("min_overlap")) {
            for (const char* k : {"linear", "product"}) {
                const auto& b = j["min_overlap"][k];
                os << "min_overlap_" << k << ',' << num(b["value"].get<double>()) << ','
                   << (b["trivial"].get<bool>() ? "true" : "false") << '\n';
            }
        }
        const auto& lb = j["average_overlap_lb"];
        os << "average_overlap_lb," << num(lb["value"].get<double>()) << ','
           << (lb["trivial"].get<bool>() ? "true" : "false") << '\n';
        return os.str();
    }
    return dump(j);
}

// analyze -------------------------------------------------------------------

struct AnalyzeArgs {
    std::string counts;
    std::string detection;
    std::string moduli;
    std::string unitary;
    std::string table;
    int detectors = 0;
    int resamples = 1000;
    double tolerance = 0.01;
    Common common;
};

std::string analyze_table(const AnalyzeArgs& a) {
    auto in = open_text(a.table);
    const auto t = read_numeric_table(in);
    const auto has = [&](const char* c) { return std::find(t.columns.begin(), t.columns.end(), c) != t.columns.end(); };
    std::vector<std::string> p_cols;
    if (has("p300")) {
        p_cols = {"p300", "p030", "p003"};
    } else if (has("p200_t12")) {
        p_cols = {"p200_t12", "p020_t22", "p002_t32"};
    } else {
        fail(ErrorKind::Input, "table has neither three-photon nor reconstructed bunching columns");
    }
    const std::vector<std::string> r_cols{"ratio300", "ratio030", "ratio003"};
    json rows = json::array();
    std::ostringstream csv;
    csv << "row,r_fb,r_fb_err,rebuilt,difference\n";
    int within = 0;
    double worst = 0.0;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        std::vector<double> p, ratio;
        for (std::size_t k = 0; k < 3; ++k) {
            p.push_back(t.at(r, p_cols[k]));
            ratio.push_back(t.at(r, r_cols[k]));
        }
        const double rebuilt = combined_bunching_ratio(p, ratio);
        const double printed = t.at(r, "r_fb");
        const double diff = rebuilt - printed;
        within += std::abs(diff) <= a.tolerance ? 1 : 0;
        worst = std::max(worst, std::abs(diff));
        const int id = has("row") ? static_cast<int>(t.at(r, "row")) : static_cast<int>(r + 1);
        rows.push_back({{"row", id},
                        {"r_fb", printed},
                        {"r_fb_err", has("r_fb_err") ? t.at(r, "r_fb_err") : 0.0},
                        {"rebuilt", rebuilt},
                        {"difference", diff}});
        csv << id << ',' << num(printed) << ',' << num(rows.back()["r_fb_err"].get<double>()) << ','
            << num(rebuilt) << ',' << num(diff) << '\n';
    }
    if (a.common.format == "csv") {
        return csv.str();
    }
    json j;
    j["table"] = a.table;
    j["rows"] = rows;
    j["tolerance"] = a.tolerance;
    j["rows_within_tolerance"] = within;
    j["max_abs_difference"] = worst;
    return dump(j);
}

std::string cmd_analyze(const AnalyzeArgs& a) {
    if (!a.table.empty()) {
        return analyze_table(a);
    }
    if (a.counts.empty()) {
        fail(ErrorKind::Input, "analyze needs --counts or --table");
    }
    const CountMap raw = read_counts_file(a.counts);
    const auto& any = raw.begin()->first;
    const int modes = static_cast<int>(any.size());
    const int photons = std::accumulate(any.begin(), any.end(), 0);
    const DetectionModel det = a.detection.empty() ? uniform_detection(modes, photons, a.detectors)
                                                   : detection_model_from_json(read_json(a.detection));
    const auto corrected = correct_counts(raw, det);
    const auto& d = corrected.distribution;

    std::optional<RealMatrix> moduli;
    if (!a.moduli.empty()) {
        moduli = StochasticModuli(real_matrix_from_json(read_json(a.moduli))).matrix();
    } else if (!a.unitary.empty()) {
        moduli = stochastic_moduli(parse_unitary_spec(a.unitary, a.common.seed)).matrix();
    }
    std::optional<double> p_dist;
    std::optional<double> sigma_d;
    if (moduli) {
        if (moduli->rows() != modes || photons != modes) {
            fail(ErrorKind::Input, "moduli analysis assumes one photon in each input mode");
        }
        double p = 0.0;
        for (int i = 0; i < modes; ++i) {
            double row = 1.0;
            for (int j = 0; j < modes; ++j) {
                row *= (*moduli)(i, j);
            }
            p += row;
        }
        p_dist = p;
        sigma_d = 1.0 - (moduli->transpose() * *moduli).trace() / modes;
    }

    const auto corrected_of = [&](const CountMap& c) { return correct_counts(c, det).distribution; };
    const auto sigma = bootstrap([&](const CountMap& c) { return variance_from_distribution(corrected_of(c)); }, raw,
                                 a.resamples, a.common.seed);
    const auto p_fb = bootstrap([&](const CountMap& c) { return full_bunching_probability(corrected_of(c)); }, raw,
                                a.resamples, a.common.seed);

    if (a.common.format == "csv") {
        std::ostringstream os;
        os << "config,raw,efficiency,probability,error\n";
        for (std::size_t c = 0; c < d.size(); ++c) {
            const auto it = raw.find(d.configs[c]);
            os << format_config(d.configs[c]) << ',' << num(it == raw.end() ? 0.0 : it->second) << ','
               << num(det.efficiency(d.configs[c])) << ',' << num(d.probs[c]) << ',' << num(corrected.errors[c])
               << '\n';
        }
        return os.str();
    }
    json j;
    j["counts"] = a.counts;
    j["photons"] = photons;
    j["modes"] = modes;
    j["corrected_total"] = corrected.corrected_total;
    j["distribution"] = distribution_to_json(d);
    j["errors"] = corrected.errors;
    j["sigma"] = {{"value", variance_from_distribution(d)}, {"error", sigma.error}};
    j["p_fb"] = {{"value", full_bunching_probability(d)}, {"error", p_fb.error}};
    j["resamples"] = a.resamples;
    if (p_dist) {
        j["p_fb_distinguishable"] = *p_dist;
        j["r_fb"] = {{"value", full_bunching_probability(d) / *p_dist}, {"error", p_fb.error / *p_dist}};
    }
    if (photons == modes && photons >= 2) {
        j["bounds"] = bounds_json(variance_from_distribution(d), photons, sigma_d);
    }
    return dump(j);
}

// ensemble ------------------------------------------------------------------

struct EnsembleArgs {
    std::string scenario;
    std::string noise;
    std::string hist;
    int draws = 1000;
    int threads = 0;
    int bins = 20;
    Common common;
};

std::string cmd_ensemble(const EnsembleArgs& a, std::ostream& out) {
    const auto s = scenario_from_json(read_json(a.scenario));
    std::optional<NoiseParameters> noise;
    if (!a.noise.empty()) {
        noise = noise_from_json(read_json(a.noise));
    }
    if (a.bins < 1) {
        fail(ErrorKind::Input, "--bins must be positive");
    }
    const auto r = run_haar_ensemble(s.dim(), s, a.draws, a.common.seed, noise, a.threads);

    // Bins span [0, n * n!/n^n], the largest mode-summed bunching probability.
    const int n = s.dim();
    double cap = n;
    for (int k = 1; k <= n; ++k) {
        cap *= static_cast<double>(k) / n;
    }
    std::vector<double> edges(a.bins + 1);
    for (int b = 0; b <= a.bins; ++b) {
        edges[b] = cap * b / a.bins;
    }
    std::vector<double> p_fb;
    for (const auto& rec : r.records) {
        p_fb.push_back(rec.p_fb);
    }
    const auto counts = histogram(p_fb, edges);
    if (!a.hist.empty()) {
        std::ostringstream h;
        h << "lo,hi,count\n";
        for (int b = 0; b < a.bins; ++b) {
            h << num(edges[b]) << ',' << num(edges[b + 1]) << ',' << counts[b] << '\n';
        }
        write_output(a.hist, h.str(), out);
    }
    if (a.common.format == "csv") {
        std::ostringstream os;
        write_ensemble_csv(os, r);
        return os.str();
    }
    json j = ensemble_summary_json(r);
    j["scenario"] = a.scenario;
    j["seed"] = a.common.seed;
    j["noise"] = noise ? noise_to_json(*noise) : json(nullptr);
    j["p_fb_histogram"] = {{"edges", edges}, {"counts", counts}};
    return dump(j);
}

// reconstruct ---------------------------------------------------------------

struct OverlapArgs {
    std::string variances;
    std::string moduli;
    int n = 3;
    int resamples = 1000;
    Common common;
};

std::string cmd_reconstruct_overlaps(const OverlapArgs& a) {
    auto in = open_text(a.variances);
    const auto obs = read_variance_csv(in, read_json(a.moduli));
    const auto r = reconstruct_overlaps(obs, a.n, a.resamples, a.common.seed);
    if (a.common.format == "csv") {
        std::ostringstream os;
        os << "pair,value,error,analytic_error,out_of_range\n";
        for (std::size_t k = 0; k < r.overlaps.size(); ++k) {
            os << pair_label(a.n, static_cast<int>(k)) << ',' << num(r.overlaps[k].value) << ','
               << num(r.overlaps[k].error) << ',' << num(r.analytic_errors[k]) << ','
               << (r.out_of_range[k] ? "true" : "false") << '\n';
        }
        return os.str();
    }
    json j;
    j["overlaps"] = json::array();
    for (std::size_t k = 0; k < r.overlaps.size(); ++k) {
        j["overlaps"].push_back({{"pair", pair_label(a.n, static_cast<int>(k))},
                                 {"value", r.overlaps[k].value},
                                 {"error", r.overlaps[k].error},
                                 {"analytic_error", r.analytic_errors[k]},
                                 {"out_of_range", static_cast<bool>(r.out_of_range[k])}});
    }
    j["chi2"] = r.chi2;
    j["observations"] = r.observations;
    j["resamples"] = a.resamples;
    j["seed"] = a.common.seed;
    return dump(j);
}

struct UnitaryArgs {
    std::string ratios;
    std::string reference;
    double omega = 1.0;
    int restarts = 120;
    Common common;
};

std::string cmd_reconstruct_unitary(const UnitaryArgs& a) {
    auto in = open_text(a.ratios);
    const auto obs = read_ratio_csv(in);
    const auto r = reconstruct_unitary(obs, a.omega, {a.restarts, a.common.seed});
    if (a.common.format == "csv") {
        std::ostringstream os;
        os << "row,col,modulus,phase\n";
        for (int i = 0; i < 3; ++i) {
            for (int k = 0; k < 3; ++k) {
                os << i << ',' << k << ',' << num(std::abs(r.u(i, k))) << ',' << num(std::arg(r.u(i, k))) << '\n';
            }
        }
        return os.str();
    }
    json moduli = json::array();
    json phases = json::array();
    for (int i = 0; i < 3; ++i) {
        json mrow = json::array();
        json prow = json::array();
        for (int k = 0; k < 3; ++k) {
            mrow.push_back(std::abs(r.u(i, k)));
            prow.push_back(std::arg(r.u(i, k)));
        }
        moduli.push_back(mrow);
        phases.push_back(prow);
    }
    json j;
    j["u"] = matrix_to_json(r.u);
    j["moduli"] = moduli;
    j["phases"] = phases;
    j["params"] = r.params;
    j["cost"] = r.cost;
    j["restarts"] = r.restarts;
    j["converged"] = r.converged;
    j["omega"] = a.omega;
    j["seed"] = a.common.seed;
    if (!a.reference.empty()) {
        const auto ref = gauge_fix(load_complex_matrix(a.reference, a.common.seed));
        // Ratio data cannot tell U from its complex conjugate.
        j["fidelity"] = std::max(fidelity(ref, r.u), fidelity(ref, r.u.conjugate()));
        j["amplitude_fidelity"] = amplitude_fidelity(ref, r.u);
        j["reference"] = a.reference;
    }
    return dump(j);
}

// phase-fit -----------------------------------------------------------------

struct PhaseArgs {
    std::string cyclic;
    std::string counts;
    std::string scenario;
    std::string unitary;
    std::string inputs;
    std::string detection;
    Common common;
};

std::string cmd_phase_fit(const PhaseArgs& a) {
    json j;
    if (!a.cyclic.empty()) {
        auto in = open_text(a.cyclic);
        const auto points = read_cyclic_csv(in);
        const auto fit = estimate_gram_phase_fit(points);
        j["method"] = "cyclic";
        j["phi"] = estimate_json(fit.phi);
        j["amplitude"] = estimate_json(fit.amplitude);
        j["c_plus"] = fit.c_plus;
        j["c_minus"] = fit.c_minus;
        j["chi2"] = fit.chi2;
        j["points"] = points.size();
    } else {
        if (a.counts.empty() || a.scenario.empty() || a.unitary.empty()) {
            fail(ErrorKind::Input, "phase-fit needs --cyclic, or --counts with --scenario and --unitary");
        }
        const auto u = parse_unitary_spec(a.unitary, a.common.seed);
        const auto d = overlaps(scenario_from_json(read_json(a.scenario)));
        if (d.dim() != 3) {
            fail(ErrorKind::Input, "phase-fit works with three-photon scenarios");
        }
        const CountMap raw = read_counts_file(a.counts);
        const int modes = static_cast<int>(raw.begin()->first.size());
        const DetectionModel det = a.detection.empty() ? uniform_detection(modes, 3, 0)
                                                       : detection_model_from_json(read_json(a.detection));
        const auto corrected = correct_counts(raw, det);
        std::vector<double> errors = corrected.errors;
        for (double& e : errors) {
            // Empty bins still carry the uncertainty of a single event.
            e = std::max(e, 1.0 / corrected.corrected_total);
        }
        const auto inputs = a.inputs.empty() ? first_modes(3) : parse_modes(a.inputs);
        const auto est = estimate_gram_phase_distribution(corrected.distribution, errors, d(0, 1), d(0, 2), d(1, 2),
                                                          u, inputs);
        j["method"] = "distribution";
        j["phi"] = estimate_json(est);
    }
    if (a.common.format == "csv") {
        std::ostringstream os;
        os << "phi,error\n" << num(j["phi"]["value"].get<double>()) << ',' << num(j["phi"]["error"].get<double>())
           << '\n';
        return os.str();
    }
    return dump(j);
}

} // namespace

int exit_code_for(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::InvalidScenario:
        return 3;
    case ErrorKind::Identifiability:
    case ErrorKind::ReconstructionFailed:
    case ErrorKind::UnidentifiablePhase:
    case ErrorKind::DegenerateGeometry:
    case ErrorKind::UnstableEstimator:
        return 4;
    case ErrorKind::Internal:
        return 1;
    default:
        return 2;
    }
}

UnitaryMatrix parse_unitary_spec(const std::string& spec, std::uint64_t default_seed) {
    const auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    const std::string arg = colon == std::string::npos ? std::string() : spec.substr(colon + 1);
    if (colon != std::string::npos) {
        if (kind == "fourier") {
            return fourier_unitary(static_cast<int>(parse_long(arg, spec)));
        }
        if (kind == "identity") {
            return UnitaryMatrix::identity(static_cast<int>(parse_long(arg, spec)));
        }
        if (kind == "cyclic") {
            const std::string value = arg.rfind("alpha=", 0) == 0 ? arg.substr(6) : arg;
            return cyclic_unitary(parse_double(value, spec));
        }
        if (kind == "haar") {
            const auto second = arg.find(':');
            const int n = static_cast<int>(parse_long(arg.substr(0, second), spec));
            std::uint64_t seed = default_seed;
            if (second != std::string::npos) {
                const long s = parse_long(arg.substr(second + 1), spec);
                if (s < 0) {
                    fail(ErrorKind::Input, "haar seed must be non-negative in '" + spec + "'");
                }
                seed = static_cast<std::uint64_t>(s);
            }
            return haar_random_unitary(n, seed);
        }
    }
    return UnitaryMatrix(load_complex_matrix(spec, default_seed));
}

ComplexMatrix load_complex_matrix(const std::string& spec, std::uint64_t default_seed) {
    const auto colon = spec.find(':');
    if (colon != std::string::npos) {
        const std::string kind = spec.substr(0, colon);
        if (kind == "fourier" || kind == "identity" || kind == "cyclic" || kind == "haar") {
            return parse_unitary_spec(spec, default_seed).matrix();
        }
    }
    const json j = read_json(spec);
    if (j.is_object() && j.contains("moduli")) {
        try {
            const auto mod = j.at("moduli").get<std::vector<std::vector<double>>>();
            const auto ph = j.value("phases", std::vector<std::vector<double>>(mod.size(), std::vector<double>(mod.size(), 0.0)));
            if (mod.empty() || ph.size() != mod.size()) {
                fail(ErrorKind::Input, "moduli and phases must have the same shape");
            }
            ComplexMatrix m(mod.size(), mod.size());
            for (std::size_t i = 0; i < mod.size(); ++i) {
                if (mod[i].size() != mod.size() || ph[i].size() != mod.size()) {
                    fail(ErrorKind::Input, "moduli and phases must be square");
                }
                for (std::size_t k = 0; k < mod.size(); ++k) {
                    m(i, k) = std::polar(mod[i][k], ph[i][k]);
                }
            }
            return m;
        } catch (const json::exception& e) {
            fail(ErrorKind::Input, std::string("malformed moduli/phases matrix: ") + e.what());
        }
    }
    return matrix_from_json(j);
}

void write_output(const std::string& path, const std::string& content, std::ostream& stdout_stream) {
    if (path == "-") {
        stdout_stream << content;
        return;
    }
    const std::string tmp = path + ".partial";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) {
            fail(ErrorKind::Input, "cannot write '" + path + "'");
        }
        f << content;
        f.flush();
        if (!f) {
            fail(ErrorKind::Input, "cannot write '" + path + "'");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        fail(ErrorKind::Input, "cannot replace '" + path + "'");
    }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Multiphoton indistinguishability: simulation, bounds and estimation", "indistinguo"};
    app.require_subcommand(1);
    std::function<std::string()> action;
    std::string out_path = "-";

    SimulateArgs sim;
    auto* s = app.add_subcommand("simulate", "Output distribution of an interferometer and scenario");
    s->add_option("--unitary", sim.unitary, "fourier:N | identity:N | cyclic:ALPHA | haar:N[:SEED] | matrix file")
        ->required();
    s->add_option("--scenario", sim.scenario, "Scenario JSON")->required();
    s->add_option("--noise", sim.noise, "Noise parameters JSON");
    s->add_option("--inputs", sim.inputs, "Comma-separated input modes (default 0..n-1)");
    s->add_option("--reference", sim.reference, "Scenario for the bunching ratio (default distinguishable)");
    s->add_option("--shots", sim.shots, "Also draw this many events")->capture_default_str();
    add_common(s, sim.common);
    s->callback([&] {
        action = [&] { return cmd_simulate(sim); };
        out_path = sim.common.out;
    });

    BoundsArgs bnd;
    auto* b = app.add_subcommand("bounds", "Overlap bounds from a measured variance");
    b->add_option("--sigma", bnd.sigma, "Measured photon-number variance")->required();
    b->add_option("--sigma-d", bnd.sigma_d, "Distinguishable-photon variance (default balanced 1-1/n)");
    b->add_option("--n", bnd.n, "Number of photons")->capture_default_str();
    add_common(b, bnd.common);
    b->callback([&] {
        action = [&] { return cmd_bounds(bnd); };
        out_path = bnd.common.out;
    });

    AnalyzeArgs an;
    auto* z = app.add_subcommand("analyze", "Correct measured counts and estimate variance, bunching and bounds");
    z->add_option("--counts", an.counts, "config,count CSV");
    z->add_option("--detection", an.detection, "Detection model JSON");
    z->add_option("--detectors", an.detectors, "Threshold detectors per mode when no model is given (0: number resolving)")
        ->capture_default_str();
    z->add_option("--moduli", an.moduli, "|U|^2 matrix JSON of the interferometer");
    z->add_option("--unitary", an.unitary, "Interferometer spec, used for its moduli");
    z->add_option("--resamples", an.resamples, "Bootstrap resamples")->capture_default_str();
    z->add_option("--table", an.table, "Bunching table CSV to rebuild row by row");
    z->add_option("--tolerance", an.tolerance, "Agreement tolerance in table mode")->capture_default_str();
    add_common(z, an.common);
    z->callback([&] {
        action = [&] { return cmd_analyze(an); };
        out_path = an.common.out;
    });

    EnsembleArgs ens;
    auto* e = app.add_subcommand("ensemble", "Haar-random interferometer ensemble");
    e->add_option("--scenario", ens.scenario, "Scenario JSON")->required();
    e->add_option("--noise", ens.noise, "Noise parameters JSON");
    e->add_option("--draws", ens.draws, "Number of Haar draws")->capture_default_str();
    e->add_option("--threads", ens.threads, "Worker threads (0: INDISTINGUO_THREADS or all cores)")
        ->capture_default_str();
    e->add_option("--bins", ens.bins, "Histogram bins for p_fb")->capture_default_str();
    e->add_option("--hist", ens.hist, "Also write the p_fb histogram CSV here");
    add_common(e, ens.common);
    e->callback([&] {
        action = [&] { return cmd_ensemble(ens, out); };
        out_path = ens.common.out;
    });

    auto* r = app.add_subcommand("reconstruct", "Overlap or interferometer reconstruction");
    r->require_subcommand(1);
    OverlapArgs ov;
    auto* ro = r->add_subcommand("overlaps", "Pairwise overlaps from variances on known interferometers");
    ro->add_option("--variances", ov.variances, "unitary_id,sigma,sigma_var CSV")->required();
    ro->add_option("--moduli", ov.moduli, "JSON object mapping unitary ids to |U|^2 matrices")->required();
    ro->add_option("--n", ov.n, "Number of photons")->capture_default_str();
    ro->add_option("--resamples", ov.resamples, "Bootstrap resamples")->capture_default_str();
    add_common(ro, ov.common);
    ro->callback([&] {
        action = [&] { return cmd_reconstruct_overlaps(ov); };
        out_path = ov.common.out;
    });
    UnitaryArgs un;
    auto* ru = r->add_subcommand("unitary", "3x3 interferometer from two-photon coincidence ratios");
    ru->add_option("--ratios", un.ratios, "m,n,i,j,R,err CSV")->required();
    ru->add_option("--omega", un.omega, "Two-photon overlap")->required();
    ru->add_option("--restarts", un.restarts, "Optimizer restarts")->capture_default_str();
    ru->add_option("--reference", un.reference, "Unitary spec or matrix file to compare with");
    add_common(ru, un.common);
    ru->callback([&] {
        action = [&] { return cmd_reconstruct_unitary(un); };
        out_path = un.common.out;
    });

    PhaseArgs ph;
    auto* p = app.add_subcommand("phase-fit", "Three-photon Gram phase from cyclic or full output data");
    p->add_option("--cyclic", ph.cyclic, "alpha,set,counts CSV");
    p->add_option("--counts", ph.counts, "config,count CSV of the full output distribution");
    p->add_option("--scenario", ph.scenario, "Scenario JSON supplying the overlaps");
    p->add_option("--unitary", ph.unitary, "Interferometer spec");
    p->add_option("--inputs", ph.inputs, "Comma-separated input modes (default 0,1,2)");
    p->add_option("--detection", ph.detection, "Detection model JSON");
    add_common(p, ph.common);
    p->callback([&] {
        action = [&] { return cmd_phase_fit(ph); };
        out_path = ph.common.out;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& ex) {
        const int code = app.exit(ex, out, err);
        return code == 0 ? 0 : 2;
    }
    try {
        write_output(out_path, action(), out);
        return 0;
    } catch (const Error& ex) {
        err << "indistinguo: " << ex.what() << '\n';
        return exit_code_for(ex.kind());
    } catch (const std::exception& ex) {
        err << "indistinguo: internal error: " << ex.what() << '\n';
        return 1;
    }
}

} // namespace indistinguo::cli

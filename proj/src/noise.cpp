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

#include "indistinguo/noise.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "indistinguo/errors.hpp"
#include "text.hpp"

namespace indistinguo {

using text::trim;

namespace {

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) {
        f *= i;
    }
    return f;
}

// Elementary symmetric polynomial e_k of `x`.
double elementary_symmetric(const std::vector<double>& x, int k) {
    std::vector<double> e(k + 1, 0.0);
    e[0] = 1.0;
    for (double v : x) {
        for (int j = k; j >= 1; --j) {
            e[j] += e[j - 1] * v;
        }
    }
    return e[k];
}

} // namespace

EmissionProbabilities emission_probabilities(double g2, double brightness) {
    if (!std::isfinite(g2) || g2 < 0.0 || g2 >= 1.0) {
        fail(ErrorKind::Parameter, "g2 must lie in [0,1)");
    }
    if (!std::isfinite(brightness) || brightness <= 0.0 || brightness > 1.0) {
        fail(ErrorKind::Parameter, "brightness must lie in (0,1]");
    }
    // g2 (B + p2)^2 = 2 p2 with p1 = B - p2; smaller root, written without
    // cancellation.
    const double disc = 1.0 - 2.0 * g2 * brightness;
    if (disc < 0.0) {
        std::ostringstream os;
        os << "no emission probabilities reproduce g2=" << g2 << " at B=" << brightness;
        fail(ErrorKind::Parameter, os.str());
    }
    const double p2 = g2 * brightness * brightness / ((1.0 - g2 * brightness) + std::sqrt(disc));
    const double p1 = brightness - p2;
    if (p1 < 0.0) {
        fail(ErrorKind::Parameter, "emission solution has negative single-photon probability");
    }
    return {1.0 - brightness, p1, p2};
}

NoiseParameters NoiseParameters::make(double g2, double brightness, double eta0) {
    NoiseParameters p;
    p.g2 = g2;
    p.brightness = brightness;
    p.eta0 = eta0;
    p.emission = emission_probabilities(g2, brightness);
    p.validate();
    return p;
}

void NoiseParameters::validate() const {
    if (!(eta0 > 0.0) || eta0 > 1.0) {
        fail(ErrorKind::Parameter, "eta0 must lie in (0,1]");
    }
    const auto& e = emission;
    for (double v : {e.p0, e.p1, e.p2}) {
        if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
            fail(ErrorKind::Parameter, "emission probabilities must lie in [0,1]");
        }
    }
    if (std::abs(e.p0 + e.p1 + e.p2 - 1.0) > 1e-9) {
        fail(ErrorKind::Parameter, "emission probabilities must sum to 1");
    }
    const double denom = e.p1 + 2.0 * e.p2;
    if (denom > 0.0 && std::abs(2.0 * e.p2 / (denom * denom) - g2) > 1e-9) {
        fail(ErrorKind::Parameter, "emission probabilities are inconsistent with g2");
    }
}

nlohmann::json noise_to_json(const NoiseParameters& p) {
    return {{"g2", p.g2},
            {"brightness", p.brightness},
            {"eta0", p.eta0},
            {"p0", p.emission.p0},
            {"p1", p.emission.p1},
            {"p2", p.emission.p2}};
}

NoiseParameters noise_from_json(const nlohmann::json& j) {
    try {
        return NoiseParameters::make(j.at("g2").get<double>(), j.at("brightness").get<double>(),
                                     j.value("eta0", 1.0));
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::Input, std::string("malformed noise parameters: ") + e.what());
    }
}

OutputDistribution noisy_distribution(const UnitaryMatrix& u, const GramMatrix& s,
                                      const NoiseParameters& params,
                                      const std::vector<int>& input_modes) {
    params.validate();
    const int n = static_cast<int>(input_modes.size());
    if (n > kMaxNoisyPhotons) {
        fail(ErrorKind::Capacity, "noise model supports at most 4 primary photons");
    }
    if (s.dim() != n) {
        fail(ErrorKind::Dimension, "Gram matrix does not match the number of inputs");
    }
    for (int k = 0; k < n; ++k) {
        if (input_modes[k] < 0 || input_modes[k] >= u.dim()) {
            fail(ErrorKind::Index, "input mode out of range");
        }
        for (int j = 0; j < k; ++j) {
            if (input_modes[j] == input_modes[k]) {
                fail(ErrorKind::Input, "duplicate input mode " + std::to_string(input_modes[k]));
            }
        }
    }

    const auto& e = params.emission;
    const double eta = params.eta0;
    // Per input: vacuum, primary only, noise only, primary and noise.
    const double w[4] = {e.p0 + e.p1 * (1.0 - eta) + e.p2 * (1.0 - eta) * (1.0 - eta),
                         e.p1 * eta + e.p2 * eta * (1.0 - eta), e.p2 * (1.0 - eta) * eta,
                         e.p2 * eta * eta};
    const int photons_of[4] = {0, 1, 1, 2};

    OutputDistribution out;
    out.modes = u.dim();
    out.photons = n;
    out.configs = enumerate_configurations(out.modes, n);
    out.probs.assign(out.configs.size(), 0.0);

    int combos = 1;
    for (int k = 0; k < n; ++k) {
        combos *= 4;
    }
    double total_weight = 0.0;
    for (int c = 0; c < combos; ++c) {
        std::vector<int> kind(n);
        int photons = 0;
        double weight = 1.0;
        for (int k = 0, rest = c; k < n; ++k, rest /= 4) {
            kind[k] = rest % 4;
            photons += photons_of[kind[k]];
            weight *= w[kind[k]];
        }
        if (photons != n || weight == 0.0) {
            continue;
        }
        std::vector<int> primaries;
        std::vector<int> modes;
        for (int k = 0; k < n; ++k) {
            if (kind[k] == 1 || kind[k] == 3) {
                primaries.push_back(k);
                modes.push_back(input_modes[k]);
            }
        }
        const int np = static_cast<int>(primaries.size());
        for (int k = 0; k < n; ++k) {
            if (kind[k] == 2 || kind[k] == 3) {
                modes.push_back(input_modes[k]);
            }
        }
        ComplexMatrix g = ComplexMatrix::Identity(n, n);
        for (int a = 0; a < np; ++a) {
            for (int b = 0; b < np; ++b) {
                g(a, b) = s(primaries[a], primaries[b]);
            }
        }
        const OutputDistribution part = interference_distribution(u, GramMatrix(std::move(g)), modes);
        for (std::size_t i = 0; i < out.size(); ++i) {
            out.probs[i] += weight * part.probs[i];
        }
        total_weight += weight;
    }
    if (!(total_weight > 0.0)) {
        fail(ErrorKind::Parameter, "no n-photon events survive the noise model");
    }
    for (double& p : out.probs) {
        p /= total_weight;
    }
    return out;
}

double split_efficiency(const std::vector<std::vector<double>>& splits, double eta,
                        const OccupationVector& c) {
    if (splits.size() != c.size()) {
        fail(ErrorKind::Dimension, "split table does not match the configuration length");
    }
    double p = 1.0;
    int n = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const int k = c[i];
        n += k;
        if (k > static_cast<int>(splits[i].size())) {
            return 0.0;
        }
        p *= factorial(k) * elementary_symmetric(splits[i], k);
    }
    return p * std::pow(eta, n);
}

double DetectionModel::efficiency(const OccupationVector& c) const {
    const auto it = table.find(c);
    if (it != table.end()) {
        return it->second;
    }
    if (!splits.empty()) {
        return split_efficiency(splits, eta, c);
    }
    fail(ErrorKind::Input, "detection model does not cover configuration " + format_config(c));
}

DetectionModel detection_model_from_splits(const std::vector<std::vector<double>>& splits,
                                           double eta, int photons) {
    if (!(eta > 0.0) || eta > 1.0) {
        fail(ErrorKind::Parameter, "detection efficiency must lie in (0,1]");
    }
    if (splits.empty()) {
        fail(ErrorKind::Dimension, "split table is empty");
    }
    for (const auto& row : splits) {
        double sum = 0.0;
        for (double v : row) {
            if (v < 0.0 || v > 1.0) {
                fail(ErrorKind::Parameter, "split probabilities must lie in [0,1]");
            }
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-9) {
            fail(ErrorKind::Parameter, "split probabilities of a mode must sum to 1");
        }
    }
    DetectionModel d;
    d.splits = splits;
    d.eta = eta;
    for (const auto& c : enumerate_configurations(static_cast<int>(splits.size()), photons)) {
        d.table[c] = split_efficiency(splits, eta, c);
    }
    return d;
}

DetectionModel pnr_detection_efficiencies(double eta) {
    const std::vector<double> third(3, 1.0 / 3.0);
    return detection_model_from_splits({third, third, third}, eta, 3);
}

DetectionModel detection_model_from_json(const nlohmann::json& j) {
    try {
        DetectionModel d;
        d.eta = j.value("eta", 1.0);
        if (j.contains("splits")) {
            d.splits = j.at("splits").get<std::vector<std::vector<double>>>();
        }
        if (j.contains("table")) {
            for (const auto& row : j.at("table")) {
                const double v = row.at("efficiency").get<double>();
                if (!(v > 0.0) || v > 1.0) {
                    fail(ErrorKind::Input, "detection efficiencies must lie in (0,1]");
                }
                d.table[row.at("config").get<OccupationVector>()] = v;
            }
        }
        if (d.splits.empty() && d.table.empty()) {
            fail(ErrorKind::Input, "detection model needs 'splits' or 'table'");
        }
        return d;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::Input, std::string("malformed detection model: ") + e.what());
    }
}

nlohmann::json detection_model_to_json(const DetectionModel& d) {
    nlohmann::json table = nlohmann::json::array();
    for (const auto& [c, v] : d.table) {
        table.push_back({{"config", c}, {"efficiency", v}});
    }
    nlohmann::json j = {{"eta", d.eta}, {"table", table}};
    if (!d.splits.empty()) {
        j["splits"] = d.splits;
    }
    return j;
}

CorrectedDistribution correct_counts(const CountMap& raw, const DetectionModel& det) {
    if (raw.empty()) {
        fail(ErrorKind::EmptyData, "no counts");
    }
    const int modes = static_cast<int>(raw.begin()->first.size());
    const int photons = std::accumulate(raw.begin()->first.begin(), raw.begin()->first.end(), 0);
    for (const auto& [c, v] : raw) {
        if (static_cast<int>(c.size()) != modes || std::accumulate(c.begin(), c.end(), 0) != photons) {
            fail(ErrorKind::Input, "count configurations differ in modes or photon number");
        }
        if (!std::isfinite(v) || v < 0.0) {
            fail(ErrorKind::Input, "counts must be non-negative");
        }
    }

    CorrectedDistribution out;
    auto& d = out.distribution;
    d.modes = modes;
    d.photons = photons;
    d.configs = enumerate_configurations(modes, photons);
    d.probs.assign(d.size(), 0.0);
    std::vector<double> var_n(d.size(), 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const auto it = raw.find(d.configs[i]);
        const double count = it == raw.end() ? 0.0 : it->second;
        const double eff = det.efficiency(d.configs[i]);
        if (!(eff > 0.0)) {
            fail(ErrorKind::Input, "zero detection efficiency for " + format_config(d.configs[i]));
        }
        d.probs[i] = count / eff;
        var_n[i] = count / (eff * eff);
        total += d.probs[i];
    }
    if (!(total > 0.0)) {
        fail(ErrorKind::EmptyData, "all counts are zero");
    }
    out.corrected_total = total;
    double var_sum = 0.0;
    for (double v : var_n) {
        var_sum += v;
    }
    out.errors.assign(d.size(), 0.0);
    for (std::size_t i = 0; i < d.size(); ++i) {
        d.probs[i] /= total;
        const double p = d.probs[i];
        // dp_c/dN_k = (delta_ck - p_c)/T with Var(N_k) = raw_k / P_k^2.
        const double v = ((1.0 - p) * (1.0 - p) * var_n[i] + p * p * (var_sum - var_n[i])) / (total * total);
        out.errors[i] = std::sqrt(v);
    }
    return out;
}

std::vector<double> distinguishable_bunching_from_moduli(const StochasticModuli& t) {
    std::vector<double> out(t.dim(), 1.0);
    for (int i = 0; i < t.dim(); ++i) {
        for (int l = 0; l < t.dim(); ++l) {
            out[i] *= t(i, l);
        }
    }
    return out;
}

std::vector<double> reconstruct_one_distinguishable_bunching(const std::vector<double>& two_photon,
                                                             const std::vector<double>& t_column) {
    if (two_photon.size() != t_column.size()) {
        fail(ErrorKind::Dimension, "two-photon probabilities and moduli column differ in length");
    }
    std::vector<double> out(two_photon.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = two_photon[i] * t_column[i];
    }
    return out;
}

OccupationVector parse_config(const std::string& text) {
    OccupationVector c;
    std::stringstream ss(trim(text));
    std::string part;
    while (std::getline(ss, part, '-')) {
        part = trim(part);
        if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos) {
            fail(ErrorKind::Input, "bad configuration '" + text + "'");
        }
        c.push_back(std::stoi(part));
    }
    if (c.empty()) {
        fail(ErrorKind::Input, "empty configuration");
    }
    return c;
}

std::string format_config(const OccupationVector& c) {
    std::string s;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i) {
            s += '-';
        }
        s += std::to_string(c[i]);
    }
    return s;
}

CountMap read_counts_csv(std::istream& in) {
    CountMap counts;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') {
            continue;
        }
        if (line.rfind("config", 0) == 0) {
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            fail(ErrorKind::Input, "line " + std::to_string(lineno) + ": expected 'config,count'");
        }
        try {
            const OccupationVector c = parse_config(line.substr(0, comma));
            std::size_t used = 0;
            const std::string value = trim(line.substr(comma + 1));
            const double v = std::stod(value, &used);
            if (used != value.size() || !std::isfinite(v) || v < 0.0) {
                throw std::invalid_argument("count");
            }
            if (!counts.emplace(c, v).second) {
                fail(ErrorKind::Input, "duplicate configuration");
            }
        } catch (const Error& e) {
            fail(ErrorKind::Input, "line " + std::to_string(lineno) + ": " + e.what());
        } catch (const std::exception&) {
            fail(ErrorKind::Input, "line " + std::to_string(lineno) + ": bad count value");
        }
    }
    if (counts.empty()) {
        fail(ErrorKind::Input, "counts file has no data rows");
    }
    return counts;
}

void write_counts_csv(std::ostream& out, const CountMap& counts) {
    out << "config,count\n";
    // Descending order matches the distribution layout.
    for (auto it = counts.rbegin(); it != counts.rend(); ++it) {
        out << format_config(it->first) << ',' << it->second << '\n';
    }
}

double combined_bunching_ratio(const std::vector<double>& p, const std::vector<double>& ratio) {
    if (p.size() != ratio.size() || p.empty()) {
        fail(ErrorKind::Dimension, "need one ratio per bunching probability");
    }
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!(ratio[i] > 0.0) || !(p[i] >= 0.0)) {
            fail(ErrorKind::Input, "bunching probabilities must be non-negative and ratios positive");
        }
        num += p[i];
        den += p[i] / ratio[i];
    }
    if (!(den > 0.0)) {
        fail(ErrorKind::EmptyData, "all bunching probabilities are zero");
    }
    return num / den;
}

std::size_t NumericTable::column(const std::string& name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) {
        fail(ErrorKind::Input, "table has no column '" + name + "'");
    }
    return static_cast<std::size_t>(it - columns.begin());
}

NumericTable read_numeric_table(std::istream& in) {
    NumericTable t;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = text::trim(line);
        if (line.empty() || line[0] == '#') {
            continue;
        }
        auto fields = text::split(line);
        if (t.columns.empty()) {
            t.columns = std::move(fields);
            continue;
        }
        if (fields.size() != t.columns.size()) {
            fail(ErrorKind::Input, "line " + std::to_string(lineno) + ": expected " +
                                       std::to_string(t.columns.size()) + " fields");
        }
        std::vector<double> row;
        for (const auto& f : fields) {
            try {
                row.push_back(text::to_double(f));
            } catch (const std::exception&) {
                fail(ErrorKind::Input, "line " + std::to_string(lineno) + ": bad number '" + f + "'");
            }
        }
        t.rows.push_back(std::move(row));
    }
    if (t.rows.empty()) {
        fail(ErrorKind::Input, "table has no data rows");
    }
    return t;
}

} // namespace indistinguo

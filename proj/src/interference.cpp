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

#include "indistinguo/interference.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_map>

#include "indistinguo/errors.hpp"
#include "indistinguo/parallel.hpp"
#include "indistinguo/permanent.hpp"

namespace indistinguo {

namespace {

// Roundoff allowance for slightly negative probabilities.
constexpr double kNegativeClamp = -1e-12;
// Configurations above which the engine evaluates terms in parallel.
constexpr std::size_t kParallelConfigs = 256;

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) {
        f *= i;
    }
    return f;
}

void enumerate(int mode, int left, OccupationVector& cur, std::vector<OccupationVector>& out) {
    const int m = static_cast<int>(cur.size());
    if (mode == m - 1) {
        cur[mode] = left;
        out.push_back(cur);
        return;
    }
    for (int k = left; k >= 0; --k) {
        cur[mode] = k;
        enumerate(mode + 1, left - k, cur, out);
    }
}

void check_inputs(const UnitaryMatrix& u, const GramMatrix& s, const std::vector<int>& inputs,
                  int limit, bool distinct) {
    const int n = static_cast<int>(inputs.size());
    if (n == 0) {
        fail(ErrorKind::Input, "at least one input photon is required");
    }
    if (s.dim() != n) {
        fail(ErrorKind::Dimension, "Gram matrix dimension " + std::to_string(s.dim()) +
                                       " does not match " + std::to_string(n) + " input photons");
    }
    if (n > limit) {
        fail(ErrorKind::Capacity, std::to_string(n) + " photons exceed the limit of " +
                                      std::to_string(limit));
    }
    for (int k = 0; k < n; ++k) {
        if (inputs[k] < 0 || inputs[k] >= u.dim()) {
            fail(ErrorKind::Index, "input mode " + std::to_string(inputs[k]) + " outside [0," +
                                       std::to_string(u.dim()) + ")");
        }
        for (int j = 0; j < k && distinct; ++j) {
            if (inputs[j] == inputs[k]) {
                fail(ErrorKind::Input, "duplicate input mode " + std::to_string(inputs[k]));
            }
        }
    }
    if (distinct && n > u.dim()) {
        fail(ErrorKind::Input, "more photons than modes");
    }
}

// <psi|psi> for the unnormalized input state: Per(S o D) with D_jk = [in_j == in_k].
double input_norm(const GramMatrix& s, const std::vector<int>& inputs) {
    const int n = s.dim();
    ComplexMatrix g(n, n);
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            g(j, k) = inputs[j] == inputs[k] ? s(j, k) : Complex(0.0, 0.0);
        }
    }
    return permanent(g).real();
}

// Unnormalized probability of one configuration (before the input norm).
double raw_probability(const ComplexMatrix& u, const ComplexMatrix& s, const std::vector<int>& inputs,
                       const OccupationVector& config) {
    const int n = static_cast<int>(inputs.size());
    std::vector<int> outs;
    outs.reserve(n);
    double denom = 1.0;
    for (int mode = 0; mode < static_cast<int>(config.size()); ++mode) {
        for (int c = 0; c < config[mode]; ++c) {
            outs.push_back(mode);
        }
        denom *= factorial(config[mode]);
    }

    // m(j, k): amplitude for photon j to reach the k-th output slot.
    ComplexMatrix m(n, n);
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            m(j, k) = u(outs[k], inputs[j]);
        }
    }

    std::vector<int> sigma(n);
    std::iota(sigma.begin(), sigma.end(), 0);
    ComplexMatrix a(n, n);
    Complex total(0.0, 0.0);
    do {
        Complex amp(1.0, 0.0);
        for (int k = 0; k < n; ++k) {
            amp *= m(sigma[k], k);
        }
        if (amp == Complex(0.0, 0.0)) {
            continue;
        }
        for (int k = 0; k < n; ++k) {
            for (int j = 0; j < n; ++j) {
                a(k, j) = s(j, sigma[k]) * std::conj(m(j, k));
            }
        }
        total += amp * permanent(a);
    } while (std::next_permutation(sigma.begin(), sigma.end()));

    if (std::abs(total.imag()) > 1e-9 * std::max(1.0, std::abs(total.real()))) {
        fail(ErrorKind::Internal, "probability has an imaginary part");
    }
    return total.real() / denom;
}

double clamp_probability(double p) {
    if (p < 0.0) {
        if (p < kNegativeClamp) {
            fail(ErrorKind::Internal, "negative probability " + std::to_string(p));
        }
        return 0.0;
    }
    return p;
}

void normalize(OutputDistribution& d) {
    for (double& p : d.probs) {
        p = clamp_probability(p);
    }
    const double total = d.total();
    if (!(total > 0.0)) {
        fail(ErrorKind::Internal, "distribution has zero total weight");
    }
    for (double& p : d.probs) {
        p /= total;
    }
}

} // namespace

double OutputDistribution::probability(const OccupationVector& config) const {
    const long idx = index_of(config);
    return idx < 0 ? 0.0 : probs[static_cast<std::size_t>(idx)];
}

long OutputDistribution::index_of(const OccupationVector& config) const {
    if (static_cast<int>(config.size()) != modes) {
        fail(ErrorKind::Dimension, "configuration has " + std::to_string(config.size()) +
                                       " modes, expected " + std::to_string(modes));
    }
    if (std::accumulate(config.begin(), config.end(), 0) != photons) {
        fail(ErrorKind::Dimension, "configuration photon number differs from the distribution");
    }
    // Configurations are sorted descending, so binary search with greater<>.
    const auto it = std::lower_bound(configs.begin(), configs.end(), config,
                                     std::greater<OccupationVector>());
    if (it == configs.end() || *it != config) {
        return -1;
    }
    return static_cast<long>(it - configs.begin());
}

double OutputDistribution::total() const {
    double t = 0.0;
    for (double p : probs) {
        t += p;
    }
    return t;
}

std::vector<OccupationVector> enumerate_configurations(int modes, int photons) {
    if (modes < 1 || photons < 0) {
        fail(ErrorKind::Dimension, "need modes >= 1 and photons >= 0");
    }
    std::vector<OccupationVector> out;
    OccupationVector cur(modes, 0);
    enumerate(0, photons, cur, out);
    return out;
}

OutputDistribution output_distribution(const UnitaryMatrix& u, const GramMatrix& s,
                                       const std::vector<int>& input_modes) {
    check_inputs(u, s, input_modes, kMaxEnginePhotons, true);
    return interference_distribution(u, s, input_modes);
}

OutputDistribution interference_distribution(const UnitaryMatrix& u, const GramMatrix& s,
                                             const std::vector<int>& input_modes) {
    check_inputs(u, s, input_modes, kMaxEnginePhotons, false);
    const int n = static_cast<int>(input_modes.size());
    const double norm = input_norm(s, input_modes);
    if (!(norm > 1e-14)) {
        fail(ErrorKind::InvalidScenario, "input state has zero norm");
    }

    OutputDistribution d;
    d.modes = u.dim();
    d.photons = n;
    d.configs = enumerate_configurations(d.modes, n);
    d.probs.assign(d.configs.size(), 0.0);
    const auto body = [&](std::size_t i) {
        d.probs[i] = raw_probability(u.matrix(), s.matrix(), input_modes, d.configs[i]) / norm;
    };
    parallel_for(d.configs.size(), body, d.configs.size() >= kParallelConfigs ? 0 : 1);
    normalize(d);
    return d;
}

double configuration_probability(const UnitaryMatrix& u, const GramMatrix& s,
                                 const std::vector<int>& input_modes,
                                 const OccupationVector& config) {
    check_inputs(u, s, input_modes, kMaxEnginePhotons, false);
    if (static_cast<int>(config.size()) != u.dim() ||
        std::accumulate(config.begin(), config.end(), 0) != static_cast<int>(input_modes.size())) {
        fail(ErrorKind::Dimension, "configuration does not match modes or photon number");
    }
    const double norm = input_norm(s, input_modes);
    if (!(norm > 1e-14)) {
        fail(ErrorKind::InvalidScenario, "input state has zero norm");
    }
    return clamp_probability(raw_probability(u.matrix(), s.matrix(), input_modes, config) / norm);
}

OutputDistribution oracle_distribution(const UnitaryMatrix& u, const GramMatrix& s,
                                       const std::vector<int>& input_modes) {
    check_inputs(u, s, input_modes, kMaxOraclePhotons, false);
    const int n = static_cast<int>(input_modes.size());
    const int m = u.dim();
    const InternalStateBasis basis = realize_basis(s);
    const int r = basis.rank();
    const int ext = m * r;

    // amp[j][e]: coefficient of a^dagger_e in the creation operator of photon j,
    // with extended mode e = output_mode * r + internal_label.
    std::vector<std::vector<Complex>> amp(n, std::vector<Complex>(ext));
    for (int j = 0; j < n; ++j) {
        for (int mode = 0; mode < m; ++mode) {
            for (int t = 0; t < r; ++t) {
                amp[j][mode * r + t] = u(mode, input_modes[j]) * basis.vectors(t, j);
            }
        }
    }

    std::unordered_map<std::uint64_t, Complex> coef;
    std::vector<int> tuple(n, 0);
    std::vector<int> sorted(n);
    std::uint64_t total_tuples = 1;
    for (int j = 0; j < n; ++j) {
        total_tuples *= static_cast<std::uint64_t>(ext);
    }
    for (std::uint64_t idx = 0; idx < total_tuples; ++idx) {
        Complex c(1.0, 0.0);
        for (int j = 0; j < n; ++j) {
            c *= amp[j][tuple[j]];
        }
        if (c != Complex(0.0, 0.0)) {
            sorted = tuple;
            std::sort(sorted.begin(), sorted.end());
            std::uint64_t key = 0;
            for (int e : sorted) {
                key = key * static_cast<std::uint64_t>(ext) + static_cast<std::uint64_t>(e);
            }
            coef[key] += c;
        }
        for (int j = n - 1; j >= 0; --j) {
            if (++tuple[j] < ext) {
                break;
            }
            tuple[j] = 0;
        }
    }

    OutputDistribution d;
    d.modes = m;
    d.photons = n;
    d.configs = enumerate_configurations(m, n);
    d.probs.assign(d.configs.size(), 0.0);
    std::vector<int> ext_occ(ext);
    for (const auto& [key, c] : coef) {
        std::fill(ext_occ.begin(), ext_occ.end(), 0);
        std::uint64_t k = key;
        OccupationVector config(m, 0);
        for (int j = 0; j < n; ++j) {
            const int e = static_cast<int>(k % static_cast<std::uint64_t>(ext));
            k /= static_cast<std::uint64_t>(ext);
            ++ext_occ[e];
            ++config[e / r];
        }
        double weight = std::norm(c);
        for (int occ : ext_occ) {
            weight *= factorial(occ);
        }
        d.probs[static_cast<std::size_t>(d.index_of(config))] += weight;
    }
    normalize(d);
    return d;
}

std::vector<double> full_bunching_per_mode(const OutputDistribution& d) {
    std::vector<double> out(d.modes, 0.0);
    for (int mode = 0; mode < d.modes; ++mode) {
        OccupationVector c(d.modes, 0);
        c[mode] = d.photons;
        out[mode] = d.probability(c);
    }
    return out;
}

double full_bunching_probability(const OutputDistribution& d) {
    const auto per = full_bunching_per_mode(d);
    return std::accumulate(per.begin(), per.end(), 0.0);
}

std::vector<double> full_bunching_per_mode(const UnitaryMatrix& u, const GramMatrix& s,
                                           const std::vector<int>& input_modes) {
    const int m = u.dim();
    const int n = static_cast<int>(input_modes.size());
    std::vector<double> out(m, 0.0);
    for (int mode = 0; mode < m; ++mode) {
        OccupationVector c(m, 0);
        c[mode] = n;
        out[mode] = configuration_probability(u, s, input_modes, c);
    }
    return out;
}

double bunching_ratio(const UnitaryMatrix& u, const GramMatrix& s1, const GramMatrix& s2,
                      const std::vector<int>& input_modes) {
    check_inputs(u, s1, input_modes, kMaxEnginePhotons, true);
    const auto num = full_bunching_per_mode(u, s1, input_modes);
    const auto den = full_bunching_per_mode(u, s2, input_modes);
    const double p1 = std::accumulate(num.begin(), num.end(), 0.0);
    const double p2 = std::accumulate(den.begin(), den.end(), 0.0);
    if (!(p2 > 1e-14)) {
        fail(ErrorKind::DegenerateInterferometer,
             "reference scenario has zero full-bunching probability");
    }
    return p1 / p2;
}

double variance_from_distribution(const OutputDistribution& d) {
    double sigma = 0.0;
    for (int mode = 0; mode < d.modes; ++mode) {
        double mean = 0.0;
        double second = 0.0;
        for (std::size_t c = 0; c < d.size(); ++c) {
            const double k = d.configs[c][mode];
            mean += d.probs[c] * k;
            second += d.probs[c] * k * k;
        }
        sigma += second - mean * mean;
    }
    return sigma / d.modes;
}

double variance_closed_form(const UnitaryMatrix& u, const OverlapMatrix& delta) {
    const int n = u.dim();
    if (delta.dim() != n) {
        fail(ErrorKind::Dimension, "overlap matrix and unitary dimensions differ");
    }
    const RealMatrix p = u.matrix().cwiseAbs2();
    const RealMatrix q = p.transpose() * p;
    double cross = 0.0;
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            if (a != b) {
                cross += delta(a, b) * q(a, b);
            }
        }
    }
    return 1.0 + (cross - q.trace()) / n;
}

double variance_distinguishable(const UnitaryMatrix& u) {
    const RealMatrix p = u.matrix().cwiseAbs2();
    return 1.0 - (p.transpose() * p).trace() / u.dim();
}

double two_mode_correlator(const UnitaryMatrix& u, const OverlapMatrix& delta, int i, int j) {
    const int n = u.dim();
    if (delta.dim() != n) {
        fail(ErrorKind::Dimension, "overlap matrix and unitary dimensions differ");
    }
    if (i < 0 || j < 0 || i >= n || j >= n || i == j) {
        fail(ErrorKind::Index, "correlator needs two distinct modes in range");
    }
    Complex exchange(0.0, 0.0);
    double direct = 0.0;
    for (int a = 0; a < n; ++a) {
        direct += std::norm(u(i, a)) * std::norm(u(j, a));
        for (int b = 0; b < n; ++b) {
            if (a != b) {
                exchange += delta(a, b) * u(i, a) * u(j, b) * std::conj(u(i, b) * u(j, a));
            }
        }
    }
    return exchange.real() - direct;
}

double two_mode_correlator(const UnitaryMatrix& u, const GramMatrix& s, int i, int j) {
    return two_mode_correlator(u, overlaps(s), i, j);
}

nlohmann::json distribution_to_json(const OutputDistribution& d) {
    nlohmann::json probs = nlohmann::json::array();
    for (std::size_t c = 0; c < d.size(); ++c) {
        probs.push_back({{"config", d.configs[c]}, {"p", d.probs[c]}});
    }
    return {{"modes", d.modes}, {"photons", d.photons}, {"probs", std::move(probs)}};
}

OutputDistribution distribution_from_json(const nlohmann::json& j) {
    OutputDistribution d;
    try {
        d.modes = j.at("modes").get<int>();
        d.photons = j.at("photons").get<int>();
        d.configs = enumerate_configurations(d.modes, d.photons);
        d.probs.assign(d.configs.size(), 0.0);
        for (const auto& entry : j.at("probs")) {
            const auto config = entry.at("config").get<OccupationVector>();
            const long idx = d.index_of(config);
            if (idx < 0) {
                fail(ErrorKind::Input, "unknown configuration in distribution");
            }
            d.probs[static_cast<std::size_t>(idx)] = entry.at("p").get<double>();
        }
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::Input, std::string("malformed distribution: ") + e.what());
    }
    return d;
}

} // namespace indistinguo

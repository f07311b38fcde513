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

#include "indistinguo/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "indistinguo/bounds.hpp"
#include "indistinguo/errors.hpp"
#include "indistinguo/parallel.hpp"

namespace indistinguo {

namespace {

double quantile(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) {
        return 0.0;
    }
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double t = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - t) + sorted[hi] * t;
}

nlohmann::json stats_json(const SummaryStats& s) {
    return {{"mean", s.mean},     {"stddev", s.stddev}, {"min", s.min},
            {"max", s.max},       {"q05", s.q05},       {"q25", s.q25},
            {"median", s.median}, {"q75", s.q75},       {"q95", s.q95}};
}

} // namespace

SummaryStats summarize(std::vector<double> values) {
    SummaryStats s;
    if (values.empty()) {
        return s;
    }
    const double n = static_cast<double>(values.size());
    // Accumulate in input order so the result is independent of threading.
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    s.mean = sum / n;
    double ss = 0.0;
    for (double v : values) {
        ss += (v - s.mean) * (v - s.mean);
    }
    s.stddev = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    std::sort(values.begin(), values.end());
    s.min = values.front();
    s.max = values.back();
    s.q05 = quantile(values, 0.05);
    s.q25 = quantile(values, 0.25);
    s.median = quantile(values, 0.5);
    s.q75 = quantile(values, 0.75);
    s.q95 = quantile(values, 0.95);
    return s;
}

EnsembleResult run_haar_ensemble(int n_modes, const GramMatrix& scenario, int draws,
                                 std::uint64_t seed, const std::optional<NoiseParameters>& noise,
                                 int threads) {
    if (draws < 1) {
        fail(ErrorKind::Parameter, "draws must be >= 1");
    }
    if (n_modes != scenario.dim()) {
        fail(ErrorKind::Dimension, "ensemble uses one photon per mode: scenario dimension must equal n_modes");
    }
    const int n = n_modes;
    std::vector<int> inputs(n);
    std::iota(inputs.begin(), inputs.end(), 0);
    const GramMatrix distinguishable = GramMatrix::identity(n);
    const OverlapMatrix delta = overlaps(scenario);

    EnsembleResult out;
    out.records.resize(static_cast<std::size_t>(draws));
    parallel_for(out.records.size(), [&](std::size_t k) {
        EnsembleRecord& rec = out.records[k];
        rec.seed = derive_seed(seed, k);
        const UnitaryMatrix u = haar_random_unitary(n, rec.seed);
        std::vector<double> per_mode;
        double ref = 0.0;
        if (noise) {
            const auto d = noisy_distribution(u, scenario, *noise, inputs);
            per_mode = full_bunching_per_mode(d);
            ref = full_bunching_probability(noisy_distribution(u, distinguishable, *noise, inputs));
            rec.sigma = variance_from_distribution(d);
        } else {
            per_mode = full_bunching_per_mode(u, scenario, inputs);
            const auto ref_modes = full_bunching_per_mode(u, distinguishable, inputs);
            ref = std::accumulate(ref_modes.begin(), ref_modes.end(), 0.0);
            rec.sigma = variance_closed_form(u, delta);
        }
        rec.p_fb = std::accumulate(per_mode.begin(), per_mode.end(), 0.0);
        rec.p_fb_max_mode = *std::max_element(per_mode.begin(), per_mode.end());
        rec.r_fb = ref > 0.0 ? rec.p_fb / ref : std::numeric_limits<double>::quiet_NaN();
        rec.sigma_d = variance_distinguishable(u);
        const BoundReport b = average_overlap_sdi_bound(rec.sigma, rec.sigma_d, n);
        rec.bound = b.value;
        rec.nontrivial = !b.trivial;
    }, threads);

    std::vector<double> p, r, s, b;
    long nontrivial = 0;
    for (const auto& rec : out.records) {
        p.push_back(rec.p_fb);
        r.push_back(rec.r_fb);
        s.push_back(rec.sigma);
        b.push_back(rec.bound);
        nontrivial += rec.nontrivial ? 1 : 0;
    }
    out.p_fb = summarize(std::move(p));
    out.r_fb = summarize(std::move(r));
    out.sigma = summarize(std::move(s));
    out.bound = summarize(std::move(b));
    out.nontrivial_fraction = static_cast<double>(nontrivial) / draws;
    return out;
}

void write_ensemble_csv(std::ostream& out, const EnsembleResult& r) {
    out.precision(17);
    out << "draw,seed,p_fb,p_fb_max_mode,r_fb,sigma,sigma_d,bound,nontrivial\n";
    for (std::size_t k = 0; k < r.records.size(); ++k) {
        const auto& e = r.records[k];
        out << k << ',' << e.seed << ',' << e.p_fb << ',' << e.p_fb_max_mode << ',' << e.r_fb << ','
            << e.sigma << ',' << e.sigma_d << ',' << e.bound << ',' << (e.nontrivial ? 1 : 0) << '\n';
    }
}

nlohmann::json ensemble_summary_json(const EnsembleResult& r) {
    return {{"draws", r.records.size()},
            {"nontrivial_fraction", r.nontrivial_fraction},
            {"p_fb", stats_json(r.p_fb)},
            {"r_fb", stats_json(r.r_fb)},
            {"sigma", stats_json(r.sigma)},
            {"bound", stats_json(r.bound)}};
}

std::vector<long> histogram(const std::vector<double>& values, const std::vector<double>& edges) {
    if (edges.size() < 2 || !std::is_sorted(edges.begin(), edges.end()) ||
        std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
        fail(ErrorKind::Parameter, "histogram edges must be strictly increasing (at least two)");
    }
    std::vector<long> counts(edges.size() - 1, 0);
    for (double v : values) {
        if (!(v >= edges.front()) || v > edges.back()) {
            continue;
        }
        auto it = std::upper_bound(edges.begin(), edges.end(), v);
        auto bin = static_cast<std::size_t>(it - edges.begin()) - 1;
        bin = std::min(bin, counts.size() - 1);
        ++counts[bin];
    }
    return counts;
}

CountMap sample_counts(const OutputDistribution& d, long shots, std::uint64_t seed) {
    if (shots < 0) {
        fail(ErrorKind::Parameter, "shots must be >= 0");
    }
    CountMap counts;
    std::mt19937_64 gen(seed);
    // The last configuration with positive probability takes the remainder.
    std::size_t last = 0;
    for (std::size_t c = 0; c < d.size(); ++c) {
        if (d.probs[c] > 0.0) {
            last = c;
        }
    }
    long left = shots;
    double mass = d.total();
    for (std::size_t c = 0; c < d.size(); ++c) {
        long k = 0;
        if (left > 0 && d.probs[c] > 0.0) {
            if (c == last || d.probs[c] >= mass) {
                k = left;
            } else {
                std::binomial_distribution<long> bin(left, std::clamp(d.probs[c] / mass, 0.0, 1.0));
                k = bin(gen);
            }
        }
        counts[d.configs[c]] = static_cast<double>(k);
        left -= k;
        mass -= d.probs[c];
    }
    return counts;
}

EstimateWithError bootstrap(const CountEstimator& estimator, const CountMap& raw, int resamples,
                            std::uint64_t seed) {
    if (resamples < 100) {
        fail(ErrorKind::Parameter, "bootstrap needs at least 100 resamples");
    }
    std::vector<double> values(static_cast<std::size_t>(resamples), 0.0);
    std::vector<char> ok(values.size(), 0);
    parallel_for(values.size(), [&](std::size_t b) {
        std::mt19937_64 gen(derive_seed(seed, b));
        CountMap draw;
        for (const auto& [config, count] : raw) {
            double k = 0.0;
            if (count > 0.0) {
                std::poisson_distribution<long> pois(count);
                k = static_cast<double>(pois(gen));
            }
            draw.emplace(config, k);
        }
        try {
            values[b] = estimator(draw);
            ok[b] = std::isfinite(values[b]) ? 1 : 0;
        } catch (const Error&) {
            ok[b] = 0;
        }
    });
    std::vector<double> good;
    for (std::size_t b = 0; b < values.size(); ++b) {
        if (ok[b]) {
            good.push_back(values[b]);
        }
    }
    const std::size_t failures = values.size() - good.size();
    if (failures * 10 > values.size()) {
        fail(ErrorKind::UnstableEstimator, std::to_string(failures) + " of " +
                                               std::to_string(values.size()) + " resamples failed");
    }
    const SummaryStats s = summarize(std::move(good));
    return {s.mean, s.stddev};
}

OutputDistribution empirical_distribution(const CountMap& counts) {
    DetectionModel unit;
    for (const auto& [config, count] : counts) {
        unit.table[config] = 1.0;
    }
    if (!counts.empty()) {
        // Configurations absent from the map are zero counts at unit efficiency.
        const auto& any = counts.begin()->first;
        const int photons = std::accumulate(any.begin(), any.end(), 0);
        for (const auto& c : enumerate_configurations(static_cast<int>(any.size()), photons)) {
            unit.table.emplace(c, 1.0);
        }
    }
    return correct_counts(counts, unit).distribution;
}

} // namespace indistinguo

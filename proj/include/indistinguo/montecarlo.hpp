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

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <vector>

#include <json.hpp>

#include "indistinguo/interference.hpp"
#include "indistinguo/noise.hpp"
#include "indistinguo/reconstruct.hpp"
#include "indistinguo/states.hpp"

namespace indistinguo {

struct EnsembleRecord {
    std::uint64_t seed = 0;
    double p_fb = 0.0;           ///< summed over output modes
    double p_fb_max_mode = 0.0;  ///< largest single-mode value
    double r_fb = 0.0;           ///< versus fully distinguishable photons
    double sigma = 0.0;
    double sigma_d = 0.0;
    double bound = 0.0;  ///< interferometer-independent average-overlap bound
    bool nontrivial = false;
};

struct SummaryStats {
    double mean = 0.0;
    double stddev = 0.0;
    double min = 0.0;
    double max = 0.0;
    double q05 = 0.0;
    double q25 = 0.0;
    double median = 0.0;
    double q75 = 0.0;
    double q95 = 0.0;
};

SummaryStats summarize(std::vector<double> values);

struct EnsembleResult {
    std::vector<EnsembleRecord> records;
    SummaryStats p_fb;
    SummaryStats r_fb;
    SummaryStats sigma;
    SummaryStats bound;
    double nontrivial_fraction = 0.0;
};

/// Haar-random interferometers with one photon in each of the `n_modes`
/// input modes. Draw k uses seed derive_seed(seed, k), so the result does not
/// depend on the number of worker threads.
EnsembleResult run_haar_ensemble(int n_modes, const GramMatrix& scenario, int draws,
                                 std::uint64_t seed,
                                 const std::optional<NoiseParameters>& noise = std::nullopt,
                                 int threads = 0);

void write_ensemble_csv(std::ostream& out, const EnsembleResult& r);
nlohmann::json ensemble_summary_json(const EnsembleResult& r);

/// Counts of values per bin; `edges` must be increasing. Values equal to the
/// last edge go to the last bin; values outside are dropped.
std::vector<long> histogram(const std::vector<double>& values, const std::vector<double>& edges);

/// Multinomial sample of `shots` events; every configuration is present.
CountMap sample_counts(const OutputDistribution& d, long shots, std::uint64_t seed);

using CountEstimator = std::function<double(const CountMap&)>;

/// Poisson resampling of each count, re-running `estimator`. Reports the
/// mean and standard deviation over successful resamples. Throws
/// UnstableEstimator when more than 10% of the resamples fail.
EstimateWithError bootstrap(const CountEstimator& estimator, const CountMap& raw, int resamples,
                            std::uint64_t seed);

/// Empirical distribution of counts (unit detection efficiency).
OutputDistribution empirical_distribution(const CountMap& counts);

} // namespace indistinguo

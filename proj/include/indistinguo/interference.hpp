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

#include <vector>

#include <json.hpp>

#include "indistinguo/matrix.hpp"
#include "indistinguo/states.hpp"

namespace indistinguo {

using OccupationVector = std::vector<int>;

/// Largest photon number accepted by the permutation-sum engine.
inline constexpr int kMaxEnginePhotons = 8;
/// Largest photon number accepted by the brute-force oracle.
inline constexpr int kMaxOraclePhotons = 5;

/**
 * Probabilities over output occupation vectors.
 *
 * Configurations are stored in lexicographically descending order, so
 * (n,0,...,0) comes first and (0,...,0,n) last.
 */
struct OutputDistribution {
    int modes = 0;
    int photons = 0;
    std::vector<OccupationVector> configs;
    std::vector<double> probs;

    std::size_t size() const noexcept { return configs.size(); }
    /// Probability of `config`, 0 if absent. Throws Dimension on a length
    /// or photon-number mismatch.
    double probability(const OccupationVector& config) const;
    /// Index of `config` in the canonical order, or -1.
    long index_of(const OccupationVector& config) const;
    double total() const;
};

/// All occupation vectors of `photons` in `modes`, lexicographically descending.
std::vector<OccupationVector> enumerate_configurations(int modes, int photons);

/// Output distribution for one photon in each of the distinct `input_modes`.
/// The Gram matrix row/column k belongs to the photon in input_modes[k].
OutputDistribution output_distribution(const UnitaryMatrix& u, const GramMatrix& s,
                                       const std::vector<int>& input_modes);

/// Same engine, but input modes may repeat (several photons with different
/// internal states sharing a mode). The result is normalized by the norm of
/// the input state.
OutputDistribution interference_distribution(const UnitaryMatrix& u, const GramMatrix& s,
                                             const std::vector<int>& input_modes);

/// Probability of a single configuration under interference_distribution.
double configuration_probability(const UnitaryMatrix& u, const GramMatrix& s,
                                 const std::vector<int>& input_modes,
                                 const OccupationVector& config);

/// Reference distribution obtained by expanding the creation operators over
/// explicit internal-state labels (n <= 5).
OutputDistribution oracle_distribution(const UnitaryMatrix& u, const GramMatrix& s,
                                       const std::vector<int>& input_modes);

double full_bunching_probability(const OutputDistribution& d);
std::vector<double> full_bunching_per_mode(const OutputDistribution& d);

/// Full-bunching probabilities of the exact distribution, per output mode.
std::vector<double> full_bunching_per_mode(const UnitaryMatrix& u, const GramMatrix& s,
                                           const std::vector<int>& input_modes);

/// p_FB(s1) / p_FB(s2) for the same interferometer and inputs.
double bunching_ratio(const UnitaryMatrix& u, const GramMatrix& s1, const GramMatrix& s2,
                      const std::vector<int>& input_modes);

/// Photon-number variance averaged over the output modes.
double variance_from_distribution(const OutputDistribution& d);

/// Closed-form variance for one photon per input mode of a square
/// interferometer: 1 + (1/n) sum_{a!=b} Delta_ab Q_ab - tr(Q)/n, Q = P^T P.
double variance_closed_form(const UnitaryMatrix& u, const OverlapMatrix& delta);

/// Variance for fully distinguishable photons, 1 - tr(Q)/n.
double variance_distinguishable(const UnitaryMatrix& u);

/**
 * Covariance of the photon numbers in output modes i and j (i != j).
 *
 * The exchange term of <n_i n_j> carries S_ab S_ba = |S_ab|^2, so the overlap
 * matrix determines C_ij exactly. Individual (a,b) terms are complex; the
 * (a,b) and (b,a) terms are conjugate, so only their sum is real.
 */
double two_mode_correlator(const UnitaryMatrix& u, const OverlapMatrix& delta, int i, int j);
double two_mode_correlator(const UnitaryMatrix& u, const GramMatrix& s, int i, int j);

nlohmann::json distribution_to_json(const OutputDistribution& d);
OutputDistribution distribution_from_json(const nlohmann::json& j);

} // namespace indistinguo

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

#include <istream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "indistinguo/interference.hpp"
#include "indistinguo/matrix.hpp"
#include "indistinguo/states.hpp"

namespace indistinguo {

inline constexpr int kMaxNoisyPhotons = 4;

struct EmissionProbabilities {
    double p0 = 1.0;
    double p1 = 0.0;
    double p2 = 0.0;
};

/// Per-pulse emission probabilities with p1 + p2 = B and
/// g2 = 2 p2 / (p1 + 2 p2)^2. Throws Parameter when no solution exists.
EmissionProbabilities emission_probabilities(double g2, double brightness);

/// Source and loss parameters. `eta0` is a balanced transmission applied to
/// every photon before the interferometer.
struct NoiseParameters {
    double g2 = 0.0;
    double brightness = 1.0;
    double eta0 = 1.0;
    EmissionProbabilities emission;

    static NoiseParameters make(double g2, double brightness, double eta0 = 1.0);
    /// Checks ranges and the emission invariants; throws Parameter.
    void validate() const;
};

nlohmann::json noise_to_json(const NoiseParameters& p);
NoiseParameters noise_from_json(const nlohmann::json& j);

/**
 * Distribution of post-selected n-fold events with an imperfect source.
 *
 * Each heralded input mode carries vacuum, the primary photon, an extra noise
 * photon, or both, with weights from the emission probabilities after loss
 * eta0. The noise photon is orthogonal to every other photon. Only mixture
 * components with exactly n surviving photons (n = number of inputs) are
 * kept; their weighted distributions are summed and renormalized.
 */
OutputDistribution noisy_distribution(const UnitaryMatrix& u, const GramMatrix& s,
                                      const NoiseParameters& params,
                                      const std::vector<int>& input_modes);

/// Pseudo photon-number-resolving detection: each output mode is split over
/// several threshold detectors, `splits[i][a]` being the probability that a
/// photon in mode i reaches detector a. Explicit per-configuration values
/// in `table` override the combinatorial ones.
struct DetectionModel {
    std::vector<std::vector<double>> splits;
    double eta = 1.0;
    std::map<OccupationVector, double> table;

    /// Probability that configuration `c` is registered as such.
    double efficiency(const OccupationVector& c) const;
};

/// Balanced three-way splitting of three modes with efficiency eta. Classes
/// {3,0,0}, {2,1,0}, {1,1,1} get 2 eta^3/9, 2 eta^3/3 and eta^3.
DetectionModel pnr_detection_efficiencies(double eta);

/// Combinatorial model for arbitrary split tables; fills `table` for every
/// configuration of `photons` photons.
DetectionModel detection_model_from_splits(const std::vector<std::vector<double>>& splits,
                                           double eta, int photons);

/// Efficiency of `c` from the splits alone: prod_i n_i! e_{n_i}(splits_i) eta^n.
double split_efficiency(const std::vector<std::vector<double>>& splits, double eta,
                        const OccupationVector& c);

DetectionModel detection_model_from_json(const nlohmann::json& j);
nlohmann::json detection_model_to_json(const DetectionModel& d);

using CountMap = std::map<OccupationVector, double>;

struct CorrectedDistribution {
    OutputDistribution distribution;
    std::vector<double> errors;  ///< first-order Poisson standard errors
    double corrected_total = 0.0;
};

/// N_c = raw_c / P_c, p_c = N_c / sum N. All configurations of the
/// distribution are present; absent counts are zero.
CorrectedDistribution correct_counts(const CountMap& raw, const DetectionModel& det);

/// Three-photon full-bunching probabilities of distinguishable photons: the
/// product of each row of the moduli matrix.
std::vector<double> distinguishable_bunching_from_moduli(const StochasticModuli& t);

/// p(3 in mode i) = p(2 in mode i) * T_i2 for a third photon that is
/// distinguishable from the other two.
std::vector<double> reconstruct_one_distinguishable_bunching(const std::vector<double>& two_photon,
                                                             const std::vector<double>& t_column);

/// Overall bunching ratio from per-mode bunching probabilities p_i and
/// per-mode ratios p_i / p^D_i: sum p / sum (p / ratio).
double combined_bunching_ratio(const std::vector<double>& p, const std::vector<double>& ratio);

/// A CSV table of numbers with a header row.
struct NumericTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    /// Index of `name`; throws Input when the column is missing.
    std::size_t column(const std::string& name) const;
    double at(std::size_t row, const std::string& name) const { return rows.at(row)[column(name)]; }
};

NumericTable read_numeric_table(std::istream& in);

/// Parses "3-0-0".
OccupationVector parse_config(const std::string& text);
std::string format_config(const OccupationVector& c);

/// Reads a `config,count` CSV. Errors name the offending line.
CountMap read_counts_csv(std::istream& in);
void write_counts_csv(std::ostream& out, const CountMap& counts);

} // namespace indistinguo

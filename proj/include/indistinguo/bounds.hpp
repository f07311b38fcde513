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

#include <map>
#include <string>

#include <json.hpp>

namespace indistinguo {

/// A certified bound. `trivial` is set when the value carries no
/// information about an overlap, i.e. it is <= 0 or > 1.
struct BoundReport {
    std::string formula;
    std::map<std::string, double> inputs;
    double value = 0.0;
    bool trivial = true;
};

nlohmann::json bound_to_json(const BoundReport& b);

/// Largest photon-number variance, reached by indistinguishable photons in a
/// balanced interferometer: 2 - 2/n.
double sigma_max(int n);

/// Average overlap from the variance measured on a balanced interferometer:
/// (sigma - 1 + 1/n) n/(n-1). Values outside [0,1] are returned unclipped.
double average_overlap_from_balanced(double sigma, int n);

struct MinOverlapBounds {
    BoundReport linear;   ///< 9 sigma/2 - 5
    BoundReport product;  ///< (9 sigma/4 - 2)^2, only informative for sigma > 8/9
};

/// Lower bounds on min_ab Delta_ab for three photons in a balanced
/// three-mode interferometer.
MinOverlapBounds min_overlap_lower_bounds(double sigma);

/// Interferometer-independent lower bound on the average overlap from the
/// measured variance and the distinguishable-photon variance sigma_d < 1.
BoundReport average_overlap_sdi_bound(double sigma, double sigma_d, int n);

struct CyclicProbabilities {
    double plus = 0.0;
    double minus = 0.0;
};

/// Grouped output probabilities of the six-mode cyclic interferometer:
/// (1/32)[1 +- sqrt(d_ab d_bc d_ac) cos(alpha + phi)].
CyclicProbabilities cyclic_probabilities(double d_ab, double d_bc, double d_ac, double phi,
                                         double alpha);

} // namespace indistinguo

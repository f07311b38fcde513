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

#include "indistinguo/bounds.hpp"

#include <cmath>

#include "indistinguo/errors.hpp"

namespace indistinguo {

namespace {

BoundReport make_report(std::string formula, std::map<std::string, double> inputs, double value) {
    BoundReport b;
    b.formula = std::move(formula);
    b.inputs = std::move(inputs);
    b.value = value;
    b.trivial = !(value > 0.0) || value > 1.0;
    return b;
}

void check_overlap(double v) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
        fail(ErrorKind::Range, "overlap outside [0,1]");
    }
}

} // namespace

nlohmann::json bound_to_json(const BoundReport& b) {
    nlohmann::json inputs = nlohmann::json::object();
    for (const auto& [k, v] : b.inputs) {
        inputs[k] = v;
    }
    return {{"formula", b.formula}, {"inputs", inputs}, {"value", b.value}, {"trivial", b.trivial}};
}

double sigma_max(int n) {
    if (n < 1) {
        fail(ErrorKind::Dimension, "sigma_max needs n >= 1");
    }
    return 2.0 - 2.0 / n;
}

double average_overlap_from_balanced(double sigma, int n) {
    if (n < 2) {
        fail(ErrorKind::Dimension, "average overlap needs n >= 2");
    }
    return (sigma - 1.0 + 1.0 / n) * n / (n - 1.0);
}

MinOverlapBounds min_overlap_lower_bounds(double sigma) {
    const double t = 2.25 * sigma - 2.0;
    MinOverlapBounds out;
    out.linear = make_report("min_overlap_linear", {{"sigma", sigma}}, 4.5 * sigma - 5.0);
    out.product = make_report("min_overlap_product", {{"sigma", sigma}}, t * t);
    // The square is positive for any sigma; below 8/9 the base is negative
    // and the inequality it comes from says nothing.
    if (!(sigma > 8.0 / 9.0)) {
        out.product.trivial = true;
    }
    return out;
}

BoundReport average_overlap_sdi_bound(double sigma, double sigma_d, int n) {
    if (n < 2) {
        fail(ErrorKind::Dimension, "average overlap bound needs n >= 2");
    }
    if (!(sigma_d < 1.0)) {
        fail(ErrorKind::Domain, "sigma_d must be below 1");
    }
    const double r = (sigma - 2.0 * sigma_d + 1.0) / (1.0 - sigma_d);
    const double value = r * r / (static_cast<double>(n) * (n - 1)) - 1.0 / (n - 1);
    BoundReport b = make_report("average_overlap_sdi",
                                {{"sigma", sigma}, {"sigma_d", sigma_d}, {"n", static_cast<double>(n)}},
                                value);
    // A negative base means sigma fell below 2 sigma_d - 1; squaring would
    // then report a spurious positive value.
    if (r < 0.0) {
        b.trivial = true;
    }
    return b;
}

CyclicProbabilities cyclic_probabilities(double d_ab, double d_bc, double d_ac, double phi,
                                         double alpha) {
    check_overlap(d_ab);
    check_overlap(d_bc);
    check_overlap(d_ac);
    const double c = std::sqrt(d_ab * d_bc * d_ac) * std::cos(alpha + phi);
    return {(1.0 + c) / 32.0, (1.0 - c) / 32.0};
}

} // namespace indistinguo

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

#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "indistinguo/bounds.hpp"
#include "indistinguo/errors.hpp"
#include "indistinguo/interference.hpp"
#include "indistinguo/states.hpp"

using namespace indistinguo;

namespace {

const double kPi = std::acos(-1.0);

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::Internal;
}

// Smallest pairwise overlap of a three-photon scenario.
double min_overlap(const OverlapMatrix& d) {
    return std::min({d(0, 1), d(0, 2), d(1, 2)});
}

} // namespace

TEST_CASE("variance maximum") {
    CHECK(sigma_max(2) == doctest::Approx(1.0));
    CHECK(sigma_max(3) == doctest::Approx(4.0 / 3.0));
    CHECK(sigma_max(10) == doctest::Approx(1.8));
}

TEST_CASE("average overlap on balanced interferometers") {
    CHECK(average_overlap_from_balanced(4.0 / 3.0, 3) == doctest::Approx(1.0));
    CHECK(average_overlap_from_balanced(2.0 / 3.0, 3) == doctest::Approx(0.0));
    CHECK(std::abs(average_overlap_from_balanced(1.199, 3) - 0.80) <= 0.01);
    CHECK(std::abs(average_overlap_from_balanced(0.885, 3) - 0.33) <= 0.01);
    // Below the distinguishable floor the value is reported as is.
    CHECK(average_overlap_from_balanced(0.5, 3) < 0.0);

    // Agrees with the forward model on Fourier interferometers of any size.
    std::mt19937_64 gen(3);
    for (int n = 2; n <= 5; ++n) {
        const auto s = random_gram(n, gen());
        const auto d = overlaps(s);
        const double sigma = variance_closed_form(fourier_unitary(n), d);
        CHECK(average_overlap_from_balanced(sigma, n) == doctest::Approx(average_overlap(d)).epsilon(1e-10));
    }
}

TEST_CASE("min-overlap lower bounds") {
    const auto full = min_overlap_lower_bounds(4.0 / 3.0);
    CHECK(full.product.value == doctest::Approx(1.0));
    CHECK_FALSE(full.product.trivial);
    CHECK(full.linear.value == doctest::Approx(1.0));

    const auto a = min_overlap_lower_bounds(1.199);
    CHECK(std::abs(a.product.value - 0.49) <= 0.01);
    CHECK_FALSE(a.product.trivial);

    const auto b = min_overlap_lower_bounds(0.885);
    CHECK(b.product.trivial);
    CHECK(b.linear.trivial);

    CHECK(min_overlap_lower_bounds(8.0 / 9.0).product.trivial);
    CHECK(min_overlap_lower_bounds(0.5).product.trivial);
    CHECK(min_overlap_lower_bounds(0.5).product.value > 0.0);
}

TEST_CASE("min-overlap bounds hold for every valid scenario on the tritter") {
    std::mt19937_64 gen(41);
    for (int rep = 0; rep < 2000; ++rep) {
        const auto s = random_gram(3, gen());
        const auto d = overlaps(s);
        const double sigma = variance_closed_form(fourier_unitary(3), d);
        const auto lb = min_overlap_lower_bounds(sigma);
        const double truth = min_overlap(d);
        if (!lb.product.trivial) {
            CHECK(lb.product.value <= truth + 1e-9);
        }
        if (!lb.linear.trivial) {
            CHECK(lb.linear.value <= truth + 1e-9);
        }
    }
}

TEST_CASE("semi-device-independent average-overlap bound") {
    const auto id = average_overlap_sdi_bound(0.0, 0.0, 3);
    CHECK(id.value == doctest::Approx(-1.0 / 3.0));
    CHECK(id.trivial);

    const auto a = average_overlap_sdi_bound(1.199, 2.0 / 3.0, 3);
    CHECK(std::abs(a.value - 0.63) <= 0.01);
    CHECK_FALSE(a.trivial);

    const auto sat = average_overlap_sdi_bound(4.0 / 3.0, 2.0 / 3.0, 3);
    CHECK(sat.value == doctest::Approx(1.0));
    CHECK_FALSE(sat.trivial);

    CHECK(kind_of([] { average_overlap_sdi_bound(1.0, 1.0, 3); }) == ErrorKind::Domain);
    CHECK(kind_of([] { average_overlap_sdi_bound(1.0, 1.2, 3); }) == ErrorKind::Domain);

    const auto j = bound_to_json(a);
    CHECK(j.at("value").get<double>() == doctest::Approx(a.value));
    CHECK(j.at("trivial") == false);
    CHECK(j.at("inputs").at("sigma").get<double>() == doctest::Approx(1.199));
}

TEST_CASE("semi-device-independent bound never exceeds the true average overlap") {
    std::mt19937_64 gen(99);
    int nontrivial = 0;
    for (int rep = 0; rep < 3000; ++rep) {
        const int n = 3 + rep % 2;
        const auto u = haar_random_unitary(n, gen());
        const auto d = overlaps(random_gram(n, gen()));
        const double sd = variance_distinguishable(u);
        if (sd >= 1.0) {
            continue;
        }
        const auto b = average_overlap_sdi_bound(variance_closed_form(u, d), sd, n);
        CHECK(b.value <= average_overlap(d) + 1e-9);
        nontrivial += b.trivial ? 0 : 1;
    }
    CHECK(nontrivial > 0);
}

TEST_CASE("cyclic interferometer probabilities") {
    const auto full = cyclic_probabilities(1, 1, 1, 0, 0);
    CHECK(full.plus == doctest::Approx(1.0 / 16.0));
    CHECK(full.minus == doctest::Approx(0.0));
    const auto none = cyclic_probabilities(0, 0, 0, 0.4, 1.1);
    CHECK(none.plus == doctest::Approx(1.0 / 32.0));
    CHECK(none.minus == doctest::Approx(1.0 / 32.0));
    const auto a = cyclic_probabilities(0.875, 0.848, 0.874, 0.0, kPi / 2);
    CHECK(a.plus == doctest::Approx(1.0 / 32.0));
    CHECK(a.minus == doctest::Approx(1.0 / 32.0));

    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int rep = 0; rep < 500; ++rep) {
        const auto p = cyclic_probabilities(unif(gen), unif(gen), unif(gen), 2 * kPi * unif(gen), 2 * kPi * unif(gen));
        CHECK(p.plus >= 0.0);
        CHECK(p.plus <= 1.0 / 16.0);
        CHECK(p.minus >= 0.0);
        CHECK(p.plus + p.minus == doctest::Approx(1.0 / 16.0));
    }
    CHECK(kind_of([] { cyclic_probabilities(1.2, 0.5, 0.5, 0, 0); }) == ErrorKind::Range);
}

TEST_CASE("cyclic closed form matches the interference engine") {
    // Outputs are zero-indexed; photons enter modes 0, 2 and 4.
    const std::vector<OccupationVector> plus_set{
        {1, 0, 1, 0, 1, 0}, {1, 0, 0, 1, 0, 1}, {0, 1, 1, 0, 0, 1}, {0, 1, 0, 1, 1, 0}};
    const std::vector<OccupationVector> minus_set{
        {1, 0, 1, 0, 0, 1}, {1, 0, 0, 1, 1, 0}, {0, 1, 1, 0, 1, 0}, {0, 1, 0, 1, 0, 1}};
    std::mt19937_64 gen(6);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    int checked = 0;
    while (checked < 40) {
        const double ab = unif(gen), ac = unif(gen), bc = unif(gen);
        const double phi = 2 * kPi * unif(gen) - kPi;
        const double alpha = 2 * kPi * unif(gen);
        GramMatrix s = GramMatrix::identity(3);
        try {
            s = gram_from_overlaps(ab, ac, bc, phi);
        } catch (const Error&) {
            continue;
        }
        const auto d = output_distribution(cyclic_unitary(alpha), s, {0, 2, 4});
        const auto expected = cyclic_probabilities(ab, bc, ac, phi, alpha);
        for (const auto& c : plus_set) {
            CHECK(std::abs(d.probability(c) - expected.plus) < 1e-10);
        }
        for (const auto& c : minus_set) {
            CHECK(std::abs(d.probability(c) - expected.minus) < 1e-10);
        }
        ++checked;
    }
}

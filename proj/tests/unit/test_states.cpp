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

#include "indistinguo/errors.hpp"
#include "indistinguo/permanent.hpp"
#include "indistinguo/states.hpp"
#include "oracles.hpp"

using namespace indistinguo;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::Internal;
}

} // namespace

TEST_CASE("three-photon Gram matrix from overlaps") {
    CHECK(gram_from_overlaps(1, 1, 1, 0).matrix() == ComplexMatrix::Ones(3, 3));

    const auto sa = gram_from_overlaps(0.875, 0.874, 0.848, 0.0);
    CHECK(sa(0, 1).real() == doctest::Approx(std::sqrt(0.875)));
    CHECK(sa(0, 2).real() == doctest::Approx(std::sqrt(0.874)));
    CHECK(sa(1, 2).real() == doctest::Approx(std::sqrt(0.848)));

    const auto ph = gram_from_overlaps(0.5, 0.5, 0.5, 0.4);
    CHECK(std::arg(ph(1, 2)) == doctest::Approx(0.4));
    CHECK(ph(2, 1) == std::conj(ph(1, 2)));
    CHECK(ph(0, 1).imag() == 0.0);

    CHECK(kind_of([] { gram_from_overlaps(1, 1, 0, 0); }) == ErrorKind::InvalidScenario);
    CHECK(kind_of([] { gram_from_overlaps(1.2, 0.5, 0.5, 0); }) == ErrorKind::InvalidScenario);
    CHECK(kind_of([] { gram_from_overlaps(0.875, 0.874, 0.848, 0.5); }) == ErrorKind::InvalidScenario);
}

TEST_CASE("Gram validation") {
    ComplexMatrix s = ComplexMatrix::Identity(2, 2);
    s(0, 1) = 0.5;
    CHECK(kind_of([&] { GramMatrix g(s); }) == ErrorKind::InvalidScenario);  // not Hermitian
    s(1, 0) = 0.5;
    s(0, 0) = 0.9;
    CHECK(kind_of([&] { GramMatrix g(s); }) == ErrorKind::InvalidScenario);  // diagonal
    // Slightly indefinite within the floor is accepted.
    ComplexMatrix near = ComplexMatrix::Ones(3, 3);
    near(0, 1) = near(1, 0) = 1.0 - 2e-10;
    CHECK_NOTHROW(GramMatrix g(near));
}

TEST_CASE("phase sign gives conjugate Gram matrices with equal permanent modulus at zero phase") {
    for (double phi : {0.0, 0.2, -0.5}) {
        const auto p = gram_from_overlaps(0.5, 0.6, 0.7, phi);
        const auto m = gram_from_overlaps(0.5, 0.6, 0.7, -phi);
        CHECK((p.matrix().transpose() - m.matrix()).cwiseAbs().maxCoeff() < 1e-15);
        CHECK(std::abs(permanent(p.matrix())) == doctest::Approx(std::abs(permanent(m.matrix()))));
    }
}

TEST_CASE("overlaps and their average") {
    CHECK(overlaps(GramMatrix::identity(4)).matrix() == RealMatrix::Identity(4, 4));
    CHECK(overlaps(GramMatrix::ones(4)).matrix() == RealMatrix::Ones(4, 4));
    const auto d = overlaps(gram_from_overlaps(0.875, 0.874, 0.848, 0.0));
    CHECK(d(0, 1) == doctest::Approx(0.875));
    CHECK(d(2, 1) == doctest::Approx(0.848));
    CHECK(average_overlap(OverlapMatrix::ones(3)) == doctest::Approx(1.0));
    CHECK(average_overlap(OverlapMatrix::identity(3)) == doctest::Approx(0.0));
    CHECK(average_overlap(d) == doctest::Approx((0.875 + 0.874 + 0.848) / 3.0));
    CHECK(kind_of([] { average_overlap(OverlapMatrix::ones(1)); }) == ErrorKind::Dimension);
}

TEST_CASE("overlaps of random Gram matrices stay in range") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto s = random_gram(2 + static_cast<int>(seed % 4), seed, 1 + static_cast<int>(seed % 3));
        const auto d = overlaps(s);
        CHECK(d.matrix().minCoeff() >= 0.0);
        CHECK(d.matrix().maxCoeff() <= 1.0);
        const double avg = average_overlap(d);
        CHECK(avg >= 0.0);
        CHECK(avg <= 1.0);
    }
}

TEST_CASE("HOM visibility correction") {
    CHECK(hom_to_overlap(0.7, 0.0) == doctest::Approx(0.7));
    // (0.91 + 0.02) / (1 - 0.02)
    CHECK(hom_to_overlap(0.91, 0.02) == doctest::Approx(0.93 / 0.98).epsilon(1e-12));
    CHECK(std::abs(hom_to_overlap(0.91, 0.02) - 0.9490) < 5e-5);
    // Inverting the correction for the quoted overlap 0.875 at g2 = 0.0218.
    const double v_ab = 0.875 * (1.0 - 0.0218) - 0.0218;
    CHECK(std::abs(hom_to_overlap(v_ab, 0.0218) - 0.875) < 1e-12);
    CHECK(hom_to_overlap(0.856, 0.0218) == doctest::Approx(0.8778 / 0.9782).epsilon(1e-12));
    CHECK(kind_of([] { hom_to_overlap(0.99, 0.05); }) == ErrorKind::Range);
    CHECK(kind_of([] { hom_to_overlap(-0.5, 0.0); }) == ErrorKind::Range);
}

TEST_CASE("basis realization round trips") {
    SUBCASE("identity gives an orthonormal basis") {
        const auto b = realize_basis(GramMatrix::identity(3));
        CHECK(b.rank() == 3);
        CHECK((b.vectors.adjoint() * b.vectors - ComplexMatrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-14);
    }
    SUBCASE("all-ones collapses to one vector") {
        const auto b = realize_basis(GramMatrix::ones(4));
        CHECK(b.rank() == 1);
        for (int j = 1; j < 4; ++j) {
            CHECK((b.vectors.col(j) - b.vectors.col(0)).norm() < 1e-14);
        }
    }
    SUBCASE("overlaps of the realized vectors") {
        const auto b = realize_basis(gram_from_overlaps(0.875, 0.874, 0.848, 0.0));
        const auto v = b.vectors;
        CHECK(std::abs(std::norm(v.col(0).dot(v.col(1))) - 0.875) < 1e-10);
        CHECK(std::abs(std::norm(v.col(0).dot(v.col(2))) - 0.874) < 1e-10);
        CHECK(std::abs(std::norm(v.col(1).dot(v.col(2))) - 0.848) < 1e-10);
    }
    SUBCASE("random PSD matrices of every rank") {
        std::mt19937_64 gen(3);
        for (int rep = 0; rep < 60; ++rep) {
            const int n = 2 + rep % 5;
            const int dim = 1 + rep % n;
            const GramMatrix s(oracle::random_gram(n, dim, gen));
            const auto b = realize_basis(s);
            CHECK(b.rank() <= dim);
            CHECK((b.gram() - s.matrix()).cwiseAbs().maxCoeff() < 1e-10);
        }
    }
}

TEST_CASE("scenario JSON") {
    const auto s = scenario_from_json(
        nlohmann::json::parse(R"({"n":3,"overlaps":{"ab":0.875,"ac":0.874,"bc":0.848},"phase":0})"));
    CHECK(s(0, 1).real() == doctest::Approx(std::sqrt(0.875)));
    const auto back = scenario_from_json(scenario_to_json(s));
    CHECK((back.matrix() - s.matrix()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(kind_of([] { scenario_from_json(nlohmann::json::parse(R"({"n":3})")); }) == ErrorKind::Input);
    CHECK(kind_of([] {
              scenario_from_json(nlohmann::json::parse(R"({"overlaps":{"ab":1,"ac":1,"bc":0}})"));
          }) == ErrorKind::InvalidScenario);
    CHECK(kind_of([] {
              scenario_from_json(nlohmann::json::parse(R"({"overlaps":{"ab":"x","ac":1,"bc":0}})"));
          }) == ErrorKind::Input);
}

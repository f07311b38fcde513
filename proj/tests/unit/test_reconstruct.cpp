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
#include <sstream>

#include "indistinguo/bounds.hpp"
#include "indistinguo/errors.hpp"
#include "indistinguo/reconstruct.hpp"
#include "oracles.hpp"

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

std::string message_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.what();
    }
    return {};
}

// Variance read off the full output distribution of the internal-state
// expansion.
double sigma_from_oracle(const UnitaryMatrix& u, const GramMatrix& s) {
    std::vector<int> in(u.dim());
    for (int k = 0; k < u.dim(); ++k) {
        in[k] = k;
    }
    const auto d = oracle_distribution(u, s, in);
    double total = 0.0;
    for (int i = 0; i < u.dim(); ++i) {
        double m1 = 0.0, m2 = 0.0;
        for (std::size_t c = 0; c < d.size(); ++c) {
            m1 += d.probs[c] * d.configs[c][i];
            m2 += d.probs[c] * d.configs[c][i] * d.configs[c][i];
        }
        total += m2 - m1 * m1;
    }
    return total / u.dim();
}

// Coincidence probability of outputs (i, j) for inputs (m, n) and pair
// overlap omega, from the interference engine.
double coincidence(const UnitaryMatrix& u, double omega, int i, int j, int m, int n) {
    ComplexMatrix g = ComplexMatrix::Identity(2, 2);
    g(0, 1) = g(1, 0) = std::sqrt(omega);
    const auto d = output_distribution(u, GramMatrix(g), {m, n});
    OccupationVector c(u.dim(), 0);
    c[i] = c[j] = 1;
    return d.probability(c);
}

double gauge_fidelity(const ComplexMatrix& a, const ComplexMatrix& b) {
    const auto ga = gauge_fix(a);
    const auto gb = gauge_fix(b);
    return std::max(fidelity(ga, gb), fidelity(ga.conjugate(), gb));
}

std::vector<RatioObservation> synthetic_ratios(const ComplexMatrix& u, double omega) {
    auto obs = ratio_geometry();
    for (auto& o : obs) {
        o.ratio = predicted_ratio(u, omega, o.i, o.j, o.m, o.n);
        o.error = 0.01;
    }
    return obs;
}

std::vector<CyclicPoint> cyclic_series(double phi, double amp, double c, int points) {
    std::vector<CyclicPoint> out;
    for (int k = 0; k < points; ++k) {
        const double alpha = 2 * kPi * k / points;
        out.push_back({alpha, c * (1 + amp * std::cos(alpha + phi)), c * (1 - amp * std::cos(alpha + phi))});
    }
    return out;
}

} // namespace

TEST_CASE("overlap reconstruction is exact on noiseless data") {
    const auto s = gram_from_overlaps(0.7, 0.5, 0.9, 0.0);
    std::vector<VarianceObservation> obs;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto u = haar_random_unitary(3, 100 + seed);
        obs.push_back({stochastic_moduli(u).matrix(), sigma_from_oracle(u, s), 1e-4, "u" + std::to_string(seed)});
    }
    const auto r = reconstruct_overlaps(obs);
    REQUIRE(r.overlaps.size() == 3);
    CHECK(std::abs(r.overlaps[0].value - 0.7) < 1e-8);
    CHECK(std::abs(r.overlaps[1].value - 0.5) < 1e-8);
    CHECK(std::abs(r.overlaps[2].value - 0.9) < 1e-8);
    CHECK(r.chi2 < 1e-12);
    CHECK(r.observations == 5);
    CHECK(pair_label(3, 0) == "ab");
    CHECK(pair_label(3, 1) == "ac");
    CHECK(pair_label(3, 2) == "bc");
}

TEST_CASE("overlap reconstruction for four photons") {
    std::mt19937_64 gen(21);
    const auto s = random_gram(4, gen());
    const auto d = overlaps(s);
    std::vector<VarianceObservation> obs;
    for (int k = 0; k < 9; ++k) {
        const auto u = haar_random_unitary(4, gen());
        obs.push_back({stochastic_moduli(u).matrix(), sigma_from_oracle(u, s), 1e-4, ""});
    }
    const auto r = reconstruct_overlaps(obs, 4, 0);
    REQUIRE(r.overlaps.size() == 6);
    int c = 0;
    for (int a = 0; a < 4; ++a) {
        for (int b = a + 1; b < 4; ++b) {
            CHECK(std::abs(r.overlaps[c++].value - d(a, b)) < 1e-8);
        }
    }
}

TEST_CASE("overlap reconstruction rejects unidentifiable designs") {
    const VarianceObservation id{RealMatrix::Identity(3, 3), 0.0, 1e-4, "id"};
    CHECK(kind_of([&] { reconstruct_overlaps({id, id, id, id}); }) == ErrorKind::Identifiability);

    // The balanced tritter only sees the sum of the overlaps.
    const auto t = stochastic_moduli(fourier_unitary(3)).matrix();
    const std::vector<VarianceObservation> balanced{{t, 1.2, 1e-4, ""}, {t, 1.21, 1e-4, ""}, {t, 1.19, 1e-4, ""}};
    const auto msg = message_of([&] { reconstruct_overlaps(balanced); });
    CHECK(msg.find("D_ab") != std::string::npos);
    CHECK(msg.find("D_bc") != std::string::npos);
    CHECK(kind_of([&] { reconstruct_overlaps(balanced); }) == ErrorKind::Identifiability);

    const auto u = stochastic_moduli(haar_random_unitary(3, 1)).matrix();
    CHECK(kind_of([&] { reconstruct_overlaps({{u, 1.0, 1e-4, ""}}); }) == ErrorKind::Identifiability);
    CHECK(kind_of([&] { reconstruct_overlaps({}); }) == ErrorKind::EmptyData);
    CHECK(kind_of([&] { reconstruct_overlaps({{u, 1.0, 0.0, ""}}); }) == ErrorKind::Input);
    CHECK(kind_of([&] { reconstruct_overlaps({{u, 1.0, 1e-4, ""}}, 4); }) == ErrorKind::Dimension);
}

TEST_CASE("overlap reconstruction is unbiased with calibrated errors") {
    const auto s = gram_from_overlaps(0.818, 0.84, 0.80, 0.0);
    std::vector<RealMatrix> moduli;
    std::vector<double> sigma;
    for (std::uint64_t seed = 0; seed < 23; ++seed) {
        const auto u = haar_random_unitary(3, 500 + seed);
        moduli.push_back(stochastic_moduli(u).matrix());
        sigma.push_back(variance_closed_form(u, overlaps(s)));
    }
    const double sd = 0.004;
    std::mt19937_64 gen(77);
    std::normal_distribution<double> noise(0.0, sd);
    const int trials = 1000;
    std::vector<double> mean(3, 0.0), m2(3, 0.0);
    double reported = 0.0;
    for (int t = 0; t < trials; ++t) {
        std::vector<VarianceObservation> obs;
        for (std::size_t k = 0; k < moduli.size(); ++k) {
            obs.push_back({moduli[k], sigma[k] + noise(gen), sd * sd, ""});
        }
        const auto r = reconstruct_overlaps(obs, 3, t == 0 ? 1000 : 0, 5);
        if (t == 0) {
            // Bootstrap and analytic errors describe the same linear model.
            for (int c = 0; c < 3; ++c) {
                CHECK(r.overlaps[c].error == doctest::Approx(r.analytic_errors[c]).epsilon(0.1));
            }
            reported = r.analytic_errors[0];
        }
        for (int c = 0; c < 3; ++c) {
            mean[c] += r.overlaps[c].value;
            m2[c] += r.overlaps[c].value * r.overlaps[c].value;
        }
    }
    const std::vector<double> truth{0.818, 0.84, 0.80};
    for (int c = 0; c < 3; ++c) {
        const double mu = mean[c] / trials;
        const double spread = std::sqrt(m2[c] / trials - mu * mu);
        CHECK(std::abs(mu - truth[c]) <= 3 * spread / std::sqrt(trials));
        if (c == 0) {
            CHECK(spread == doctest::Approx(reported).epsilon(0.1));
        }
    }
}

TEST_CASE("estimates outside the unit interval are flagged, not clipped") {
    std::vector<VarianceObservation> obs;
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const auto u = haar_random_unitary(3, seed);
        const RealMatrix p = stochastic_moduli(u).matrix();
        const RealMatrix q = p.transpose() * p;
        // Forward model with D_ab = 1.2, D_ac = 0.5, D_bc = 0.5.
        const double sigma = 1.0 + (2 * (1.2 * q(0, 1) + 0.5 * q(0, 2) + 0.5 * q(1, 2)) - q.trace()) / 3.0;
        obs.push_back({p, sigma, 1e-4, ""});
    }
    const auto r = reconstruct_overlaps(obs, 3, 0);
    CHECK(r.overlaps[0].value == doctest::Approx(1.2));
    CHECK(r.out_of_range[0]);
    CHECK_FALSE(r.out_of_range[1]);
}

TEST_CASE("two-photon ratios") {
    const auto t = fourier_unitary(3).matrix();
    for (const auto& o : ratio_geometry()) {
        CHECK(predicted_ratio(t, 0.0, o.i, o.j, o.m, o.n) == doctest::Approx(0.5));
        CHECK(predicted_ratio(t, 1.0, o.i, o.j, o.m, o.n) == doctest::Approx(0.25));
    }
    CHECK(ratio_geometry().size() == 9);
    CHECK(kind_of([] { predicted_ratio(ComplexMatrix::Identity(3, 3), 0.5, 0, 1, 0, 2); }) ==
          ErrorKind::DegenerateGeometry);
    CHECK(kind_of([&] { predicted_ratio(t, 0.5, 0, 0, 0, 1); }) == ErrorKind::Index);
    CHECK(kind_of([&] { predicted_ratio(t, 0.5, 0, 3, 0, 1); }) == ErrorKind::Index);
    CHECK(kind_of([&] { predicted_ratio(t, 1.5, 0, 1, 0, 1); }) == ErrorKind::Range);

    std::mt19937_64 gen(8);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int rep = 0; rep < 30; ++rep) {
        const auto u = haar_random_unitary(3, gen());
        const double omega = unif(gen);
        for (const auto& o : ratio_geometry()) {
            const auto& m = u.matrix();
            const double denominator = coincidence(u, 0.0, o.i, o.j, o.m, o.n) +
                                       std::norm(m(o.i, o.m) * m(o.j, o.m)) + std::norm(m(o.i, o.n) * m(o.j, o.n));
            CHECK(std::abs(predicted_ratio(m, omega, o.i, o.j, o.m, o.n) -
                           coincidence(u, omega, o.i, o.j, o.m, o.n) / denominator) < 1e-12);
        }
        // Row and column phases leave every ratio unchanged.
        ComplexMatrix g = u.matrix();
        for (int k = 0; k < 3; ++k) {
            g.row(k) *= std::polar(1.0, 2 * kPi * unif(gen));
            g.col(k) *= std::polar(1.0, 2 * kPi * unif(gen));
        }
        for (const auto& o : ratio_geometry()) {
            CHECK(std::abs(predicted_ratio(g, omega, o.i, o.j, o.m, o.n) -
                           predicted_ratio(u.matrix(), omega, o.i, o.j, o.m, o.n)) < 1e-12);
            CHECK(std::abs(predicted_ratio(g.conjugate(), omega, o.i, o.j, o.m, o.n) -
                           predicted_ratio(u.matrix(), omega, o.i, o.j, o.m, o.n)) < 1e-12);
        }
    }
}

TEST_CASE("mixing parameterization and gauge") {
    std::mt19937_64 gen(9);
    std::uniform_real_distribution<double> unif(0.0, 2 * kPi);
    for (int rep = 0; rep < 20; ++rep) {
        const auto m = mixing_unitary(unif(gen), unif(gen), unif(gen), unif(gen));
        CHECK(unitarity_residual(m) < 1e-12);
        const auto u = haar_random_unitary(3, gen());
        const auto g = gauge_fix(u.matrix());
        CHECK(unitarity_residual(g) < 1e-12);
        for (int k = 0; k < 3; ++k) {
            CHECK(std::abs(g(0, k).imag()) < 1e-12);
            CHECK(g(0, k).real() >= 0.0);
            CHECK(std::abs(g(k, 0).imag()) < 1e-12);
            CHECK(g(k, 0).real() >= 0.0);
        }
        CHECK((g.cwiseAbs() - u.matrix().cwiseAbs()).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("unitary reconstruction from noiseless ratios") {
    for (std::uint64_t seed : {3u, 11u, 42u}) {
        const auto u = haar_random_unitary(3, seed).matrix();
        const auto r = reconstruct_unitary(synthetic_ratios(u, 0.9), 0.9, {120, seed});
        CHECK(gauge_fidelity(r.u, u) > 1 - 1e-6);
        CHECK(r.restarts == 120);
        CHECK(r.converged > 0);
        CHECK(r.params.size() == 4);
    }
    const auto t = fourier_unitary(3).matrix();
    const auto rt = reconstruct_unitary(synthetic_ratios(t, 0.9), 0.9);
    CHECK(gauge_fidelity(rt.u, t) > 0.999);

    // Same seed, same answer.
    const auto u = haar_random_unitary(3, 5).matrix();
    const auto a = reconstruct_unitary(synthetic_ratios(u, 0.8), 0.8, {40, 1});
    const auto b = reconstruct_unitary(synthetic_ratios(u, 0.8), 0.8, {40, 1});
    CHECK((a.u - b.u).norm() == 0.0);

    CHECK(kind_of([] { reconstruct_unitary({}, 0.9); }) == ErrorKind::EmptyData);
    auto bad = synthetic_ratios(u, 0.8);
    bad[0].error = 0.0;
    CHECK(kind_of([&] { reconstruct_unitary(bad, 0.8); }) == ErrorKind::Input);
    CHECK(kind_of([&] { reconstruct_unitary(synthetic_ratios(u, 0.8), 0.8, {0, 1}); }) == ErrorKind::Parameter);
}

TEST_CASE("cyclic phase fit") {
    const auto fit = estimate_gram_phase_fit(cyclic_series(0.3, 0.7, 1000.0, 10));
    CHECK(std::abs(fit.phi.value - 0.3) < 1e-6);
    CHECK(std::abs(fit.amplitude.value - 0.7) < 1e-6);
    CHECK(fit.c_plus == doctest::Approx(1000.0));

    // A negative amplitude is the same curve shifted by pi.
    const auto flipped = estimate_gram_phase_fit(cyclic_series(0.3, -0.7, 1000.0, 10));
    CHECK(std::abs(std::remainder(flipped.phi.value - (0.3 + kPi), 2 * kPi)) < 1e-6);
    CHECK(flipped.amplitude.value > 0.0);

    CHECK(kind_of([] { estimate_gram_phase_fit(cyclic_series(0.3, 0.0, 1000.0, 10)); }) ==
          ErrorKind::UnidentifiablePhase);
    CHECK(kind_of([] { estimate_gram_phase_fit(cyclic_series(0.3, 0.7, 1000.0, 3)); }) == ErrorKind::Input);
}

TEST_CASE("cyclic phase fit under Poisson noise") {
    // Overlaps of the source scenario give A = sqrt(0.875 * 0.848 * 0.874).
    const double amp = std::sqrt(0.875 * 0.848 * 0.874);
    std::mt19937_64 gen(31);
    const int trials = 200;
    double sq = 0.0, reported = 0.0;
    for (int t = 0; t < trials; ++t) {
        auto pts = cyclic_series(0.0, amp, 500.0, 10);
        for (auto& p : pts) {
            p.plus = static_cast<double>(std::poisson_distribution<long>(p.plus)(gen));
            p.minus = static_cast<double>(std::poisson_distribution<long>(p.minus)(gen));
        }
        const auto fit = estimate_gram_phase_fit(pts);
        const double e = std::remainder(fit.phi.value, 2 * kPi);
        sq += e * e;
        reported += fit.phi.error;
    }
    const double rms = std::sqrt(sq / trials);
    CHECK(rms < 0.03);
    CHECK(rms == doctest::Approx(reported / trials).epsilon(0.2));
}

TEST_CASE("phase from the full output distribution") {
    const auto u = fourier_unitary(3);
    const std::vector<int> in{0, 1, 2};
    const auto sa = output_distribution(u, gram_from_overlaps(0.875, 0.874, 0.848, 0.0), in);
    const auto fa = estimate_gram_phase_distribution(sa, {}, 0.875, 0.874, 0.848, u, in);
    CHECK(std::abs(fa.value) < 1e-6);

    const auto exact = output_distribution(u, gram_from_overlaps(0.5, 0.5, 0.5, 0.5), in);
    CHECK(std::abs(estimate_gram_phase_distribution(exact, {}, 0.5, 0.5, 0.5, u, in).value - 0.5) < 1e-6);

    // 1e5 shots with Poisson-style uncertainties.
    std::mt19937_64 gen(3);
    std::discrete_distribution<std::size_t> pick(exact.probs.begin(), exact.probs.end());
    std::vector<double> counts(exact.size(), 0.0);
    const int shots = 100000;
    for (int k = 0; k < shots; ++k) {
        counts[pick(gen)] += 1.0;
    }
    OutputDistribution measured = exact;
    std::vector<double> errors(exact.size());
    for (std::size_t c = 0; c < exact.size(); ++c) {
        measured.probs[c] = counts[c] / shots;
        errors[c] = std::sqrt(std::max(counts[c], 1.0)) / shots;
    }
    const auto est = estimate_gram_phase_distribution(measured, errors, 0.5, 0.5, 0.5, u, in);
    CHECK(std::abs(est.value - 0.5) <= 0.01);
    CHECK(est.error > 0.0);

    const auto id = output_distribution(UnitaryMatrix::identity(3), GramMatrix::ones(3), in);
    CHECK(kind_of([&] { estimate_gram_phase_distribution(id, {}, 0.5, 0.5, 0.5, UnitaryMatrix::identity(3), in); }) ==
          ErrorKind::UnidentifiablePhase);
    CHECK(kind_of([&] { estimate_gram_phase_distribution(exact, {1.0}, 0.5, 0.5, 0.5, u, in); }) ==
          ErrorKind::Dimension);
}

TEST_CASE("comparison metrics") {
    const auto u = haar_random_unitary(4, 2).matrix();
    CHECK(fidelity(u, u) == doctest::Approx(1.0));
    CHECK(amplitude_fidelity(u, u) == doctest::Approx(1.0));
    CHECK(fidelity(u, std::polar(1.0, 0.7) * u) == doctest::Approx(1.0));
    CHECK(kind_of([&] { fidelity(u, ComplexMatrix::Identity(3, 3)); }) == ErrorKind::Dimension);

    const auto a = output_distribution(fourier_unitary(3), GramMatrix::ones(3), {0, 1, 2});
    CHECK(tvd(a, a) == 0.0);
    const auto id = output_distribution(UnitaryMatrix::identity(3), GramMatrix::ones(3), {0, 1, 2});
    OutputDistribution bunched = a;
    for (std::size_t c = 0; c < bunched.size(); ++c) {
        bunched.probs[c] = bunched.configs[c] == OccupationVector{3, 0, 0} ? 1.0 : 0.0;
    }
    CHECK(tvd(id, bunched) == doctest::Approx(1.0));

    std::mt19937_64 gen(4);
    for (int rep = 0; rep < 100; ++rep) {
        const auto u3 = haar_random_unitary(3, gen());
        const auto p = output_distribution(u3, random_gram(3, gen()), {0, 1, 2});
        const auto q = output_distribution(u3, random_gram(3, gen()), {0, 1, 2});
        const auto r = output_distribution(haar_random_unitary(3, gen()), random_gram(3, gen()), {0, 1, 2});
        CHECK(tvd(p, q) >= 0.0);
        CHECK(tvd(p, q) <= 1.0 + 1e-12);
        CHECK(tvd(p, r) <= tvd(p, q) + tvd(q, r) + 1e-12);
    }
}

TEST_CASE("observation files") {
    nlohmann::json moduli;
    moduli["t"] = real_matrix_to_json(stochastic_moduli(fourier_unitary(3)).matrix());
    std::istringstream v("unitary_id,sigma,sigma_var\nt,1.2,1e-5\n");
    const auto obs = read_variance_csv(v, moduli);
    REQUIRE(obs.size() == 1);
    CHECK(obs[0].sigma == 1.2);
    CHECK(obs[0].moduli(1, 2) == doctest::Approx(1.0 / 3));
    std::istringstream missing("unitary_id,sigma,sigma_var\nq,1.2,1e-5\n");
    CHECK(kind_of([&] { read_variance_csv(missing, moduli); }) == ErrorKind::Input);
    std::istringstream zero("unitary_id,sigma,sigma_var\nt,1.2,0\n");
    CHECK(kind_of([&] { read_variance_csv(zero, moduli); }) == ErrorKind::Input);

    std::istringstream r("m,n,i,j,R,err\n0,1,0,1,0.25,0.01\n0,2,1,2,0.3,0.02\n");
    const auto ratios = read_ratio_csv(r);
    REQUIRE(ratios.size() == 2);
    CHECK(ratios[1].n == 2);
    CHECK(ratios[1].error == 0.02);
    std::istringstream short_row("m,n,i,j,R,err\n0,1,0,1,0.25\n");
    CHECK(message_of([&] { read_ratio_csv(short_row); }).find("line 2") != std::string::npos);

    std::istringstream c("alpha,set,counts\n0,+,10\n0,-,4\n1.5,plus,7\n1.5,minus,7\n");
    const auto pts = read_cyclic_csv(c);
    REQUIRE(pts.size() == 2);
    CHECK(pts[0].plus == 10);
    CHECK(pts[0].minus == 4);
    std::istringstream bad("alpha,set,counts\n0,x,10\n");
    CHECK(kind_of([&] { read_cyclic_csv(bad); }) == ErrorKind::Input);
}

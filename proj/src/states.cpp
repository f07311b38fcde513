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

#include "indistinguo/states.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <string>

#include "indistinguo/errors.hpp"

namespace indistinguo {

namespace {

// Residual diagonal below which pivoted Cholesky treats the remainder as zero.
constexpr double kRankTolerance = 1e-13;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

} // namespace

GramMatrix::GramMatrix(ComplexMatrix s) : s_(std::move(s)) {
    if (s_.rows() == 0 || s_.rows() != s_.cols()) {
        fail(ErrorKind::Dimension, "Gram matrix must be square and non-empty");
    }
    require_finite(s_, "Gram matrix");
    const int n = dim();
    for (int i = 0; i < n; ++i) {
        if (std::abs(s_(i, i) - Complex(1.0, 0.0)) > kGramTolerance) {
            fail(ErrorKind::InvalidScenario, "Gram matrix diagonal must be 1 (entry " +
                                                 std::to_string(i) + " is " + fmt(s_(i, i).real()) + ")");
        }
        for (int j = 0; j < n; ++j) {
            if (std::abs(s_(i, j) - std::conj(s_(j, i))) > kGramTolerance) {
                fail(ErrorKind::InvalidScenario, "Gram matrix is not Hermitian");
            }
            if (std::abs(s_(i, j)) > 1.0 + kGramTolerance) {
                fail(ErrorKind::InvalidScenario, "Gram matrix entry exceeds unit modulus");
            }
        }
    }
    const double lmin = min_eigenvalue();
    if (lmin < kPsdFloor) {
        fail(ErrorKind::InvalidScenario,
             "Gram matrix is not positive semidefinite (min eigenvalue " + fmt(lmin) + ")");
    }
}

GramMatrix GramMatrix::identity(int n) {
    if (n < 1) {
        fail(ErrorKind::Dimension, "Gram matrix needs n >= 1");
    }
    return GramMatrix(ComplexMatrix::Identity(n, n));
}

GramMatrix GramMatrix::ones(int n) {
    if (n < 1) {
        fail(ErrorKind::Dimension, "Gram matrix needs n >= 1");
    }
    return GramMatrix(ComplexMatrix::Ones(n, n));
}

double GramMatrix::min_eigenvalue() const {
    const ComplexMatrix h = 0.5 * (s_ + s_.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

OverlapMatrix::OverlapMatrix(RealMatrix d) : d_(std::move(d)) {
    if (d_.rows() == 0 || d_.rows() != d_.cols()) {
        fail(ErrorKind::Dimension, "overlap matrix must be square and non-empty");
    }
    const int n = dim();
    for (int i = 0; i < n; ++i) {
        if (std::abs(d_(i, i) - 1.0) > kGramTolerance) {
            fail(ErrorKind::InvalidScenario, "overlap matrix diagonal must be 1");
        }
        for (int j = 0; j < n; ++j) {
            const double v = d_(i, j);
            if (!std::isfinite(v) || v < -kGramTolerance || v > 1.0 + kGramTolerance) {
                fail(ErrorKind::InvalidScenario, "overlap entries must lie in [0,1]");
            }
            if (std::abs(v - d_(j, i)) > kGramTolerance) {
                fail(ErrorKind::InvalidScenario, "overlap matrix is not symmetric");
            }
        }
    }
}

OverlapMatrix OverlapMatrix::identity(int n) { return OverlapMatrix(RealMatrix::Identity(n, n)); }

OverlapMatrix OverlapMatrix::ones(int n) { return OverlapMatrix(RealMatrix::Ones(n, n)); }

GramMatrix gram_from_overlaps(double d_ab, double d_ac, double d_bc, double phi) {
    for (double v : {d_ab, d_ac, d_bc}) {
        if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
            fail(ErrorKind::InvalidScenario, "overlap " + fmt(v) + " outside [0,1]");
        }
    }
    if (!std::isfinite(phi)) {
        fail(ErrorKind::Domain, "phase must be finite");
    }
    const double ab = std::sqrt(d_ab);
    const double ac = std::sqrt(d_ac);
    const double bc = std::sqrt(d_bc);
    ComplexMatrix s(3, 3);
    s(0, 0) = 1.0;
    s(1, 1) = 1.0;
    s(2, 2) = 1.0;
    s(0, 1) = ab;
    s(1, 0) = ab;
    s(0, 2) = ac;
    s(2, 0) = ac;
    s(1, 2) = std::polar(bc, phi);
    s(2, 1) = std::polar(bc, -phi);
    return GramMatrix(std::move(s));
}

OverlapMatrix overlaps(const GramMatrix& s) {
    RealMatrix d = s.matrix().cwiseAbs2();
    // The validated Gram matrix may carry roundoff up to kGramTolerance.
    d = d.cwiseMin(1.0);
    d.diagonal().setOnes();
    return OverlapMatrix(std::move(d));
}

double average_overlap(const OverlapMatrix& d) {
    const int n = d.dim();
    if (n < 2) {
        fail(ErrorKind::Dimension, "average overlap needs at least two photons");
    }
    const double off = d.matrix().sum() - d.matrix().trace();
    return off / (static_cast<double>(n) * (n - 1));
}

double hom_to_overlap(double visibility, double g2) {
    if (!std::isfinite(visibility) || !std::isfinite(g2) || g2 < 0.0 || g2 >= 1.0) {
        fail(ErrorKind::Range, "g2 must lie in [0,1) and V must be finite");
    }
    const double d = (visibility + g2) / (1.0 - g2);
    if (d < 0.0 || d > 1.0) {
        fail(ErrorKind::Range, "corrected overlap " + fmt(d) + " from V=" + fmt(visibility) +
                                   ", g2=" + fmt(g2) + " lies outside [0,1]");
    }
    return d;
}

InternalStateBasis realize_basis(const GramMatrix& s) {
    const ComplexMatrix& a = s.matrix();
    const int n = s.dim();
    ComplexMatrix l = ComplexMatrix::Zero(n, n);
    std::vector<double> diag(n);
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) {
        diag[i] = a(i, i).real();
        perm[i] = i;
    }

    int rank = 0;
    for (int k = 0; k < n; ++k) {
        int best = k;
        for (int j = k + 1; j < n; ++j) {
            if (diag[perm[j]] > diag[perm[best]]) {
                best = j;
            }
        }
        std::swap(perm[k], perm[best]);
        const int piv = perm[k];
        if (diag[piv] <= kRankTolerance) {
            break;
        }
        const double root = std::sqrt(diag[piv]);
        l(piv, k) = root;
        for (int j = k + 1; j < n; ++j) {
            const int i = perm[j];
            Complex acc = a(i, piv);
            for (int t = 0; t < k; ++t) {
                acc -= l(i, t) * std::conj(l(piv, t));
            }
            l(i, k) = acc / root;
            diag[i] -= std::norm(l(i, k));
        }
        rank = k + 1;
    }
    for (int j = rank; j < n; ++j) {
        if (diag[perm[j]] < kPsdFloor) {
            fail(ErrorKind::InvalidScenario, "Gram matrix is indefinite");
        }
    }
    InternalStateBasis basis;
    basis.vectors = l.leftCols(rank).adjoint();
    return basis;
}

GramMatrix random_gram(int n, std::uint64_t seed, int rank) {
    if (n < 1) {
        fail(ErrorKind::Dimension, "random_gram needs n >= 1");
    }
    const int r = rank > 0 ? rank : n;
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexMatrix v(r, n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < r; ++i) {
            const double re = normal(gen);
            const double im = normal(gen);
            v(i, j) = Complex(re, im);
        }
        v.col(j).normalize();
    }
    ComplexMatrix g = v.adjoint() * v;
    for (int i = 0; i < n; ++i) {
        g(i, i) = 1.0;
        for (int j = i + 1; j < n; ++j) {
            g(j, i) = std::conj(g(i, j));
        }
    }
    return GramMatrix(std::move(g));
}

GramMatrix scenario_from_json(const nlohmann::json& j) {
    try {
        if (!j.is_object()) {
            fail(ErrorKind::Input, "scenario must be a JSON object");
        }
        if (j.contains("gram")) {
            return GramMatrix(matrix_from_json(j.at("gram")));
        }
        if (j.contains("overlaps")) {
            const int n = j.value("n", 3);
            if (n != 3) {
                fail(ErrorKind::Input, "overlap form is only defined for n=3");
            }
            const auto& o = j.at("overlaps");
            return gram_from_overlaps(o.at("ab").get<double>(), o.at("ac").get<double>(),
                                      o.at("bc").get<double>(), j.value("phase", 0.0));
        }
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::Input, std::string("malformed scenario: ") + e.what());
    }
    fail(ErrorKind::Input, "scenario needs an 'overlaps' or 'gram' field");
}

nlohmann::json scenario_to_json(const GramMatrix& s) {
    nlohmann::json j;
    j["n"] = s.dim();
    j["gram"] = matrix_to_json(s.matrix());
    return j;
}

} // namespace indistinguo

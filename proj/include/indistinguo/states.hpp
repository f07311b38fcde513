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

namespace indistinguo {

/// Smallest eigenvalue a Gram matrix may have before it is rejected.
inline constexpr double kPsdFloor = -1e-9;

/// Tolerance on Hermiticity and the unit diagonal of a Gram matrix.
inline constexpr double kGramTolerance = 1e-10;

/**
 * Gram matrix S_ij = <chi_i|chi_j> of the photons' internal states.
 *
 * Construction validates Hermiticity, unit diagonal, |S_ij| <= 1 and the
 * eigenvalue floor, and throws InvalidScenario otherwise.
 */
class GramMatrix {
public:
    explicit GramMatrix(ComplexMatrix s);

    static GramMatrix identity(int n);
    static GramMatrix ones(int n);

    int dim() const noexcept { return static_cast<int>(s_.rows()); }
    const ComplexMatrix& matrix() const noexcept { return s_; }
    Complex operator()(int i, int j) const { return s_(i, j); }

    double min_eigenvalue() const;

private:
    ComplexMatrix s_;
};

/// Pairwise overlaps Delta_ab = |S_ab|^2: symmetric, unit diagonal, in [0,1].
class OverlapMatrix {
public:
    explicit OverlapMatrix(RealMatrix d);

    static OverlapMatrix identity(int n);
    static OverlapMatrix ones(int n);

    int dim() const noexcept { return static_cast<int>(d_.rows()); }
    const RealMatrix& matrix() const noexcept { return d_; }
    double operator()(int i, int j) const { return d_(i, j); }

private:
    RealMatrix d_;
};

/// Concrete internal-state vectors whose Gram matrix is S. Column i of
/// `vectors` holds |chi_i> in an orthonormal basis of dimension rank(S).
struct InternalStateBasis {
    ComplexMatrix vectors;

    int photons() const noexcept { return static_cast<int>(vectors.cols()); }
    int rank() const noexcept { return static_cast<int>(vectors.rows()); }
    ComplexMatrix gram() const { return vectors.adjoint() * vectors; }
};

/// Three-photon Gram matrix with real entries sqrt(Delta) and a single
/// collective phase phi carried by the (b, c) element.
GramMatrix gram_from_overlaps(double d_ab, double d_ac, double d_bc, double phi);

OverlapMatrix overlaps(const GramMatrix& s);

/// Mean off-diagonal overlap.
double average_overlap(const OverlapMatrix& d);

/// Two-photon overlap from a HOM visibility corrected for g2:
/// (V + g2) / (1 - g2). Throws Range if the result leaves [0,1].
double hom_to_overlap(double visibility, double g2);

/// Pivoted Cholesky factorization S = B^dagger B with B of shape rank x n.
InternalStateBasis realize_basis(const GramMatrix& s);

/// Random valid Gram matrix: n unit vectors with Gaussian components in a
/// space of dimension `rank` (n when rank <= 0).
GramMatrix random_gram(int n, std::uint64_t seed, int rank = 0);

// Scenario JSON: {"n":3,"overlaps":{"ab":..,"ac":..,"bc":..},"phase":..}
// or {"n":k,"gram":{"re":..,"im":..}}.
GramMatrix scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const GramMatrix& s);

} // namespace indistinguo

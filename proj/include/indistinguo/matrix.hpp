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

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

namespace indistinguo {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;

/// Maximum absolute elementwise deviation of U^dagger U from the identity
/// accepted by UnitaryMatrix.
inline constexpr double kUnitarityTolerance = 1e-10;

/// Tolerance on row and column sums of StochasticModuli.
inline constexpr double kStochasticTolerance = 1e-9;

/// Throws a Dimension error if `m` is empty and a Domain error if any entry is
/// not finite.
void require_finite(const ComplexMatrix& m, const char* what);

/// max_ij |(U^dagger U - I)_ij|; U must be square.
double unitarity_residual(const ComplexMatrix& u);

/**
 * Square matrix U with U^dagger U = I within kUnitarityTolerance.
 *
 * U(i, j) is the amplitude from input mode j to output mode i. Construction
 * rejects non-unitary input; nothing is re-orthonormalized.
 */
class UnitaryMatrix {
public:
    explicit UnitaryMatrix(ComplexMatrix m);

    static UnitaryMatrix identity(int n);

    int dim() const noexcept { return static_cast<int>(m_.rows()); }
    const ComplexMatrix& matrix() const noexcept { return m_; }
    Complex operator()(int i, int j) const { return m_(i, j); }

    UnitaryMatrix adjoint() const;
    UnitaryMatrix conjugate() const;

private:
    ComplexMatrix m_;
};

/// Doubly stochastic matrix of squared moduli P_ij = |U_ij|^2.
class StochasticModuli {
public:
    /// Validates entries in [0,1] and unit row/column sums.
    explicit StochasticModuli(RealMatrix p);

    int dim() const noexcept { return static_cast<int>(p_.rows()); }
    const RealMatrix& matrix() const noexcept { return p_; }
    double operator()(int i, int j) const { return p_(i, j); }

private:
    RealMatrix p_;
};

StochasticModuli stochastic_moduli(const UnitaryMatrix& u);

/// Haar-distributed unitary. Ginibre draw, Householder QR, then the columns of
/// Q are rephased by r_ii/|r_ii| so the result is Haar rather than biased by
/// the QR sign convention. Deterministic in `seed`.
UnitaryMatrix haar_random_unitary(int n, std::uint64_t seed);

/// F_jk = exp(2 pi i jk/n)/sqrt(n). fourier_unitary(3) is the balanced tritter.
UnitaryMatrix fourier_unitary(int n);

/// Six-mode cyclic interferometer with tunable phase alpha on the first two
/// columns of rows 3 and 4.
UnitaryMatrix cyclic_unitary(double alpha);

/// Sub-block rows x cols of `m`.
ComplexMatrix submatrix(const ComplexMatrix& m, const std::vector<int>& rows,
                        const std::vector<int>& cols);

// JSON layout: {"n": int, "re": [[...]], "im": [[...]]}. Rectangular matrices
// additionally carry "rows"/"cols".
nlohmann::json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& j);

nlohmann::json real_matrix_to_json(const RealMatrix& m);
RealMatrix real_matrix_from_json(const nlohmann::json& j);

} // namespace indistinguo

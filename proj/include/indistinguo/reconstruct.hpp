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

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "indistinguo/interference.hpp"
#include "indistinguo/matrix.hpp"
#include "indistinguo/states.hpp"

namespace indistinguo {

struct EstimateWithError {
    double value = 0.0;
    double error = 0.0;
};

/// One measured variance with the moduli of the interferometer it was
/// measured on.
struct VarianceObservation {
    RealMatrix moduli;  ///< |U_ij|^2
    double sigma = 0.0;
    double variance = 0.0;  ///< Var[sigma], > 0
    std::string id;
};

struct OverlapReconstruction {
    /// Overlaps for the pairs (0,1), (0,2), ..., (n-2,n-1) in that order.
    std::vector<EstimateWithError> overlaps;
    std::vector<double> analytic_errors;  ///< from the inverse normal matrix
    std::vector<bool> out_of_range;       ///< estimate outside [0,1]
    double chi2 = 0.0;
    int observations = 0;
};

/// Weighted linear least squares for the overlaps: the variance is affine in
/// Delta for fixed moduli, so the normal equations are solved directly.
/// Errors come from `resamples` parametric bootstrap draws of the measured
/// variances. Throws Identifiability when the design has a null direction.
OverlapReconstruction reconstruct_overlaps(const std::vector<VarianceObservation>& obs, int n = 3,
                                           int resamples = 1000, std::uint64_t seed = 0);

/// Label of pair index k, e.g. "ab".
std::string pair_label(int n, int k);

/// Two-photon coincidence ratio for inputs (m, n) and outputs (i, j) with
/// overlap omega: zero-delay over large-delay coincidence probability.
double predicted_ratio(const ComplexMatrix& u, double omega, int i, int j, int m, int n);

struct RatioObservation {
    int m = 0;
    int n = 1;
    int i = 0;
    int j = 1;
    double ratio = 0.0;
    double error = 1.0;
};

struct UnitaryReconstruction {
    ComplexMatrix u;           ///< gauge-fixed estimate
    std::vector<double> params;  ///< theta12, theta13, theta23, delta
    double cost = 0.0;           ///< weighted squared residual
    int restarts = 0;
    int converged = 0;
};

struct ReconstructOptions {
    int restarts = 120;
    std::uint64_t seed = 0;
};

/// 3x3 unitary from three mixing angles and one phase.
ComplexMatrix mixing_unitary(double t12, double t13, double t23, double delta);

/// Rephases rows and columns so the first row and first column are real and
/// non-negative.
ComplexMatrix gauge_fix(const ComplexMatrix& u);

/// Multistart Levenberg-Marquardt fit of a 3x3 unitary to ratio data.
/// Ratios are invariant under row/column phases and complex conjugation, so
/// the estimate is determined up to those.
UnitaryReconstruction reconstruct_unitary(const std::vector<RatioObservation>& obs, double omega,
                                          const ReconstructOptions& opt = {});

/// The nine (input pair, output pair) combinations of a 3x3 interferometer.
std::vector<RatioObservation> ratio_geometry();

struct CyclicPoint {
    double alpha = 0.0;
    double plus = 0.0;   ///< counts grouped in s+
    double minus = 0.0;  ///< counts grouped in s-
};

struct PhaseFit {
    EstimateWithError phi;
    EstimateWithError amplitude;
    double c_plus = 0.0;
    double c_minus = 0.0;
    double chi2 = 0.0;
};

/// Joint fit of c+ [1 + A cos(alpha + phi)] and c- [1 - A cos(alpha + phi)]
/// with Poisson weights.
PhaseFit estimate_gram_phase_fit(const std::vector<CyclicPoint>& points);

/// Minimizes e(phi) = sum_c (p_c - p_c(phi))^2 / err_c^2 over the phases for
/// which the three-photon Gram matrix is valid. Empty `errors` means unit
/// weights; the reported error is then zero.
EstimateWithError estimate_gram_phase_distribution(const OutputDistribution& measured,
                                                   const std::vector<double>& errors, double d_ab,
                                                   double d_ac, double d_bc, const UnitaryMatrix& u,
                                                   const std::vector<int>& input_modes);

/// |Tr(U1 U2^dagger)| / n.
double fidelity(const ComplexMatrix& u1, const ComplexMatrix& u2);
/// (1/n) sum_ij |U1_ij| |U2_ij|.
double amplitude_fidelity(const ComplexMatrix& u1, const ComplexMatrix& u2);
/// Half the L1 distance over the union of supports.
double tvd(const OutputDistribution& p, const OutputDistribution& q);

/// `unitary_id,sigma,sigma_var` rows; `moduli` maps ids to moduli matrices
/// in the matrix JSON layout.
std::vector<VarianceObservation> read_variance_csv(std::istream& in, const nlohmann::json& moduli);
/// `m,n,i,j,R,err` rows (0-based indices).
std::vector<RatioObservation> read_ratio_csv(std::istream& in);
/// `alpha,set,counts` rows with set `+`/`plus` or `-`/`minus`.
std::vector<CyclicPoint> read_cyclic_csv(std::istream& in);

} // namespace indistinguo

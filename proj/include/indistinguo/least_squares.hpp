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

#include <functional>

#include <Eigen/Dense>

namespace indistinguo {

using Residuals = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct LmOptions {
    int max_iterations = 400;
    /// An accepted step that lowers the cost by less than this ends the run
    /// as converged.
    double tolerance = 1e-10;
    double initial_lambda = 1e-3;
};

struct LmResult {
    Eigen::VectorXd x;
    double cost = 0.0;  ///< sum of squared residuals
    int iterations = 0;
    bool converged = false;
    Eigen::MatrixXd jacobian;  ///< at x
};

/// Levenberg-Marquardt with a central-difference Jacobian.
LmResult levenberg_marquardt(const Residuals& f, Eigen::VectorXd x0, const LmOptions& opt = {});

/// Central-difference Jacobian of `f` at `x`.
Eigen::MatrixXd numeric_jacobian(const Residuals& f, const Eigen::VectorXd& x);

/// Golden-section search for a minimum of `f` on [a, b].
double golden_section_minimize(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-10);

} // namespace indistinguo

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

#include "indistinguo/least_squares.hpp"

#include <algorithm>
#include <cmath>

namespace indistinguo {

Eigen::MatrixXd numeric_jacobian(const Residuals& f, const Eigen::VectorXd& x) {
    const Eigen::VectorXd r0 = f(x);
    Eigen::MatrixXd j(r0.size(), x.size());
    Eigen::VectorXd xp = x;
    for (Eigen::Index k = 0; k < x.size(); ++k) {
        const double h = 1e-6 * std::max(1.0, std::abs(x[k]));
        xp[k] = x[k] + h;
        const Eigen::VectorXd rp = f(xp);
        xp[k] = x[k] - h;
        const Eigen::VectorXd rm = f(xp);
        xp[k] = x[k];
        j.col(k) = (rp - rm) / (2.0 * h);
    }
    return j;
}

LmResult levenberg_marquardt(const Residuals& f, Eigen::VectorXd x0, const LmOptions& opt) {
    LmResult res;
    res.x = std::move(x0);
    Eigen::VectorXd r = f(res.x);
    res.cost = r.squaredNorm();
    double lambda = opt.initial_lambda;

    for (res.iterations = 0; res.iterations < opt.max_iterations; ++res.iterations) {
        if (res.cost < 1e-30) {
            res.converged = true;
            break;
        }
        const Eigen::MatrixXd j = numeric_jacobian(f, res.x);
        const Eigen::MatrixXd a = j.transpose() * j;
        const Eigen::VectorXd g = j.transpose() * r;

        bool accepted = false;
        while (!accepted) {
            Eigen::MatrixXd damped = a;
            for (Eigen::Index k = 0; k < a.rows(); ++k) {
                damped(k, k) += lambda * std::max(a(k, k), 1e-12);
            }
            const Eigen::VectorXd step = damped.ldlt().solve(-g);
            const Eigen::VectorXd x_new = res.x + step;
            const Eigen::VectorXd r_new = f(x_new);
            const double cost_new = r_new.squaredNorm();
            if (std::isfinite(cost_new) && cost_new < res.cost) {
                const double decrease = res.cost - cost_new;
                res.x = x_new;
                r = r_new;
                res.cost = cost_new;
                lambda = std::max(lambda / 3.0, 1e-12);
                accepted = true;
                if (decrease < opt.tolerance) {
                    res.converged = true;
                }
            } else {
                lambda *= 4.0;
                if (lambda > 1e14) {
                    // No descent direction left: stationary within roundoff.
                    res.converged = g.norm() < 1e-6 * (1.0 + std::sqrt(res.cost));
                    break;
                }
            }
        }
        if (res.converged || !accepted) {
            break;
        }
    }
    res.jacobian = numeric_jacobian(f, res.x);
    return res;
}

double golden_section_minimize(const std::function<double(double)>& f, double a, double b,
                               double tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (std::abs(b - a) > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

} // namespace indistinguo

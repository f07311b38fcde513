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

#include "indistinguo/matrix.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "indistinguo/errors.hpp"

namespace indistinguo {

void require_finite(const ComplexMatrix& m, const char* what) {
    if (m.rows() == 0 || m.cols() == 0) {
        fail(ErrorKind::Dimension, std::string(what) + " is empty");
    }
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) {
                fail(ErrorKind::Domain, std::string(what) + " has a non-finite entry");
            }
        }
    }
}

double unitarity_residual(const ComplexMatrix& u) {
    if (u.rows() != u.cols()) {
        fail(ErrorKind::Dimension, "unitarity check needs a square matrix");
    }
    const ComplexMatrix d = u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols());
    return d.cwiseAbs().maxCoeff();
}

UnitaryMatrix::UnitaryMatrix(ComplexMatrix m) : m_(std::move(m)) {
    require_finite(m_, "unitary");
    if (m_.rows() != m_.cols()) {
        fail(ErrorKind::Dimension, "unitary must be square");
    }
    const double r = unitarity_residual(m_);
    if (r > kUnitarityTolerance) {
        std::ostringstream os;
        os << "matrix is not unitary (max |U^dag U - I| = " << r << ")";
        fail(ErrorKind::Input, os.str());
    }
}

UnitaryMatrix UnitaryMatrix::identity(int n) {
    if (n < 1) {
        fail(ErrorKind::Dimension, "identity needs n >= 1");
    }
    return UnitaryMatrix(ComplexMatrix::Identity(n, n));
}

UnitaryMatrix UnitaryMatrix::adjoint() const { return UnitaryMatrix(m_.adjoint()); }

UnitaryMatrix UnitaryMatrix::conjugate() const { return UnitaryMatrix(m_.conjugate()); }

StochasticModuli::StochasticModuli(RealMatrix p) : p_(std::move(p)) {
    if (p_.rows() == 0 || p_.rows() != p_.cols()) {
        fail(ErrorKind::Dimension, "stochastic moduli must be square and non-empty");
    }
    for (Eigen::Index i = 0; i < p_.rows(); ++i) {
        for (Eigen::Index j = 0; j < p_.cols(); ++j) {
            const double v = p_(i, j);
            if (!std::isfinite(v) || v < -kStochasticTolerance || v > 1.0 + kStochasticTolerance) {
                fail(ErrorKind::Input, "stochastic moduli entries must lie in [0,1]");
            }
        }
    }
    const double row_dev = (p_.rowwise().sum().array() - 1.0).abs().maxCoeff();
    const double col_dev = (p_.colwise().sum().array() - 1.0).abs().maxCoeff();
    if (row_dev > kStochasticTolerance || col_dev > kStochasticTolerance) {
        std::ostringstream os;
        os << "moduli are not doubly stochastic (row dev " << row_dev << ", column dev "
           << col_dev << ")";
        fail(ErrorKind::Input, os.str());
    }
}

StochasticModuli stochastic_moduli(const UnitaryMatrix& u) {
    return StochasticModuli(u.matrix().cwiseAbs2());
}

UnitaryMatrix haar_random_unitary(int n, std::uint64_t seed) {
    if (n < 1) {
        fail(ErrorKind::Dimension, "haar_random_unitary needs n >= 1");
    }
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexMatrix z(n, n);
    const double scale = 1.0 / std::sqrt(2.0);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const double re = normal(gen);
            const double im = normal(gen);
            z(i, j) = Complex(re, im) * scale;
        }
    }
    Eigen::HouseholderQR<ComplexMatrix> qr(z);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
    const ComplexMatrix& r = qr.matrixQR();
    for (int j = 0; j < n; ++j) {
        const Complex d = r(j, j);
        const double a = std::abs(d);
        q.col(j) *= (a > 0.0) ? d / a : Complex(1.0, 0.0);
    }
    // Householder Q is unitary to ~1e-15; rounding never approaches the
    // validation tolerance for the dimensions supported here.
    return UnitaryMatrix(std::move(q));
}

UnitaryMatrix fourier_unitary(int n) {
    if (n < 1) {
        fail(ErrorKind::Dimension, "fourier_unitary needs n >= 1");
    }
    ComplexMatrix f(n, n);
    const double norm = 1.0 / std::sqrt(static_cast<double>(n));
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            // Reduce jk mod n first so the phase stays exact for large products.
            const double angle = 2.0 * std::numbers::pi * static_cast<double>((j * k) % n) / n;
            f(j, k) = std::polar(norm, angle);
        }
    }
    return UnitaryMatrix(std::move(f));
}

UnitaryMatrix cyclic_unitary(double alpha) {
    const Complex e = std::polar(1.0, alpha);
    ComplexMatrix c(6, 6);
    // clang-format off
    c << 1.0, -1.0,  1.0,  1.0,  0.0,  0.0,
         1.0, -1.0, -1.0, -1.0,  0.0,  0.0,
           e,    e,  0.0,  0.0,  1.0, -1.0,
           e,    e,  0.0,  0.0, -1.0,  1.0,
         0.0,  0.0,  1.0, -1.0,  1.0,  1.0,
         0.0,  0.0,  1.0, -1.0, -1.0, -1.0;
    // clang-format on
    return UnitaryMatrix(0.5 * c);
}

ComplexMatrix submatrix(const ComplexMatrix& m, const std::vector<int>& rows,
                        const std::vector<int>& cols) {
    ComplexMatrix out(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < cols.size(); ++j) {
            if (rows[i] < 0 || rows[i] >= m.rows() || cols[j] < 0 || cols[j] >= m.cols()) {
                fail(ErrorKind::Index, "submatrix index out of range");
            }
            out(i, j) = m(rows[i], cols[j]);
        }
    }
    return out;
}

namespace {

nlohmann::json rows_of(const RealMatrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back(m(i, j));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

RealMatrix parse_rows(const nlohmann::json& rows, const char* key) {
    if (!rows.is_array() || rows.empty() || !rows[0].is_array() || rows[0].empty()) {
        fail(ErrorKind::Input, std::string("matrix field '") + key + "' must be a non-empty array of rows");
    }
    const auto r = rows.size();
    const auto c = rows[0].size();
    RealMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
        if (!rows[i].is_array() || rows[i].size() != c) {
            fail(ErrorKind::Input, std::string("matrix field '") + key + "' is ragged");
        }
        for (std::size_t j = 0; j < c; ++j) {
            if (!rows[i][j].is_number()) {
                fail(ErrorKind::Input, std::string("matrix field '") + key + "' has a non-numeric entry");
            }
            m(i, j) = rows[i][j].get<double>();
        }
    }
    return m;
}

} // namespace

nlohmann::json matrix_to_json(const ComplexMatrix& m) {
    nlohmann::json j;
    if (m.rows() == m.cols()) {
        j["n"] = m.rows();
    } else {
        j["rows"] = m.rows();
        j["cols"] = m.cols();
    }
    j["re"] = rows_of(m.real());
    j["im"] = rows_of(m.imag());
    return j;
}

ComplexMatrix matrix_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("re")) {
        fail(ErrorKind::Input, "matrix JSON needs a 're' field");
    }
    const RealMatrix re = parse_rows(j.at("re"), "re");
    RealMatrix im = RealMatrix::Zero(re.rows(), re.cols());
    if (j.contains("im")) {
        im = parse_rows(j.at("im"), "im");
        if (im.rows() != re.rows() || im.cols() != re.cols()) {
            fail(ErrorKind::Input, "matrix 're' and 'im' shapes differ");
        }
    }
    if (j.contains("n") && (j.at("n").get<Eigen::Index>() != re.rows() || re.rows() != re.cols())) {
        fail(ErrorKind::Input, "matrix 'n' does not match the entries");
    }
    ComplexMatrix m(re.rows(), re.cols());
    m.real() = re;
    m.imag() = im;
    return m;
}

nlohmann::json real_matrix_to_json(const RealMatrix& m) {
    nlohmann::json j;
    j["n"] = m.rows();
    j["re"] = rows_of(m);
    return j;
}

RealMatrix real_matrix_from_json(const nlohmann::json& j) {
    const ComplexMatrix m = matrix_from_json(j);
    if (m.imag().cwiseAbs().maxCoeff() != 0.0) {
        fail(ErrorKind::Input, "expected a real matrix");
    }
    return m.real();
}

} // namespace indistinguo

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

#include "indistinguo/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "indistinguo/errors.hpp"
#include "indistinguo/least_squares.hpp"
#include "indistinguo/parallel.hpp"
#include "text.hpp"

namespace indistinguo {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_phase(double phi) {
    phi = std::fmod(phi + kPi, 2.0 * kPi);
    if (phi < 0.0) {
        phi += 2.0 * kPi;
    }
    return phi - kPi;
}

Complex unit_phase(Complex z) {
    const double a = std::abs(z);
    return a > 0.0 ? z / a : Complex(1.0, 0.0);
}

struct PairIndex {
    int a;
    int b;
};

std::vector<PairIndex> pairs_of(int n) {
    std::vector<PairIndex> p;
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            p.push_back({a, b});
        }
    }
    return p;
}

// Ratio without validation; NaN when the large-delay probability vanishes.
double raw_ratio(const ComplexMatrix& u, double omega, int i, int j, int m, int n) {
    const Complex a = u(i, m) * u(j, n);
    const Complex b = u(i, n) * u(j, m);
    const double p0 = std::norm(a) + std::norm(b) + 2.0 * omega * (a * std::conj(b)).real();
    const double pt = std::norm(u(i, m) * u(j, m)) + std::norm(u(i, n) * u(j, n)) + std::norm(a) +
                      std::norm(b);
    if (!(pt > 1e-15)) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return p0 / pt;
}

template <typename Fn>
void for_each_csv_row(std::istream& in, const char* header, Fn&& fn) {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = text::trim(line);
        if (line.empty() || line[0] == '#' || line.rfind(header, 0) == 0) {
            continue;
        }
        try {
            fn(text::split(line));
        } catch (const Error& e) {
            fail(ErrorKind::Input, "line " + std::to_string(lineno) + ": " + e.what());
        } catch (const std::exception&) {
            fail(ErrorKind::Input, "line " + std::to_string(lineno) + ": malformed row '" + line + "'");
        }
    }
}

void expect_fields(const std::vector<std::string>& f, std::size_t count) {
    if (f.size() != count) {
        fail(ErrorKind::Input, "expected " + std::to_string(count) + " fields, got " +
                                   std::to_string(f.size()));
    }
}

} // namespace

std::string pair_label(int n, int k) {
    const auto p = pairs_of(n).at(static_cast<std::size_t>(k));
    if (n <= 26) {
        return std::string{static_cast<char>('a' + p.a), static_cast<char>('a' + p.b)};
    }
    return std::to_string(p.a) + "-" + std::to_string(p.b);
}

OverlapReconstruction reconstruct_overlaps(const std::vector<VarianceObservation>& obs, int n,
                                           int resamples, std::uint64_t seed) {
    if (n < 2) {
        fail(ErrorKind::Dimension, "overlap reconstruction needs n >= 2");
    }
    if (obs.empty()) {
        fail(ErrorKind::EmptyData, "no variance observations");
    }
    const auto pairs = pairs_of(n);
    const int k = static_cast<int>(pairs.size());
    const int rows = static_cast<int>(obs.size());

    Eigen::MatrixXd x(rows, k);
    Eigen::VectorXd y(rows);
    Eigen::VectorXd sd(rows);
    for (int r = 0; r < rows; ++r) {
        const auto& o = obs[r];
        if (o.moduli.rows() != n || o.moduli.cols() != n) {
            fail(ErrorKind::Dimension, "moduli of observation " + std::to_string(r) + " are not " +
                                           std::to_string(n) + "x" + std::to_string(n));
        }
        if (!(o.variance > 0.0) || !std::isfinite(o.sigma)) {
            fail(ErrorKind::Input, "observation " + std::to_string(r) + " needs a positive variance");
        }
        const RealMatrix q = o.moduli.transpose() * o.moduli;
        sd[r] = std::sqrt(o.variance);
        for (int c = 0; c < k; ++c) {
            x(r, c) = 2.0 * q(pairs[c].a, pairs[c].b) / n / sd[r];
        }
        y[r] = (o.sigma - 1.0 + q.trace() / n) / sd[r];
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() ? sv[0] : 0.0;
    // Singular values are sorted; the right singular vectors past the
    // numerical rank span the directions the data cannot see.
    int rank = 0;
    for (Eigen::Index c = 0; c < sv.size(); ++c) {
        rank += (smax > 0.0 && sv[c] >= 1e-10 * smax) ? 1 : 0;
    }
    if (rank < k) {
        std::ostringstream os;
        os << "variance data do not constrain the overlap direction" << (k - rank > 1 ? "s " : " ");
        os.precision(3);
        for (int col = rank; col < k; ++col) {
            const Eigen::VectorXd v = svd.matrixV().col(col);
            os << (col > rank ? "; " : "");
            bool first = true;
            for (int c = 0; c < k; ++c) {
                if (std::abs(v[c]) < 1e-6) {
                    continue;
                }
                os << (first ? "" : (v[c] < 0 ? " - " : " + ")) << (first && v[c] < 0 ? "-" : "")
                   << std::abs(v[c]) << "*D_" << pair_label(n, c);
                first = false;
            }
        }
        fail(ErrorKind::Identifiability, os.str());
    }

    const Eigen::MatrixXd normal = x.transpose() * x;
    const auto solver = normal.ldlt();
    const Eigen::VectorXd est = solver.solve(x.transpose() * y);
    const Eigen::MatrixXd cov = solver.solve(Eigen::MatrixXd::Identity(k, k));

    OverlapReconstruction out;
    out.observations = rows;
    out.chi2 = (x * est - y).squaredNorm();
    out.overlaps.resize(k);
    out.analytic_errors.resize(k);
    out.out_of_range.resize(k);
    for (int c = 0; c < k; ++c) {
        out.overlaps[c].value = est[c];
        out.analytic_errors[c] = std::sqrt(cov(c, c));
        out.overlaps[c].error = out.analytic_errors[c];
        out.out_of_range[c] = est[c] < 0.0 || est[c] > 1.0;
    }

    if (resamples > 0) {
        std::mt19937_64 gen(seed);
        std::normal_distribution<double> normal_draw(0.0, 1.0);
        Eigen::VectorXd sum = Eigen::VectorXd::Zero(k);
        Eigen::VectorXd sum2 = Eigen::VectorXd::Zero(k);
        Eigen::VectorXd ys(rows);
        for (int b = 0; b < resamples; ++b) {
            // y is already scaled by 1/sd, so its noise has unit variance.
            for (int r = 0; r < rows; ++r) {
                ys[r] = y[r] + normal_draw(gen);
            }
            const Eigen::VectorXd e = solver.solve(x.transpose() * ys);
            sum += e;
            sum2 += e.cwiseProduct(e);
        }
        for (int c = 0; c < k; ++c) {
            const double mean = sum[c] / resamples;
            const double var = std::max(0.0, sum2[c] / resamples - mean * mean);
            out.overlaps[c].error = std::sqrt(var * resamples / std::max(1, resamples - 1));
        }
    }
    return out;
}

double predicted_ratio(const ComplexMatrix& u, double omega, int i, int j, int m, int n) {
    const int dim = static_cast<int>(u.rows());
    for (int v : {i, j, m, n}) {
        if (v < 0 || v >= dim) {
            fail(ErrorKind::Index, "ratio index out of range");
        }
    }
    if (i == j || m == n) {
        fail(ErrorKind::Index, "ratio needs distinct output and input pairs");
    }
    if (!(omega >= 0.0 && omega <= 1.0)) {
        fail(ErrorKind::Range, "omega must lie in [0,1]");
    }
    const double r = raw_ratio(u, omega, i, j, m, n);
    if (std::isnan(r)) {
        fail(ErrorKind::DegenerateGeometry, "no coincidences possible for this input/output pair");
    }
    return r;
}

ComplexMatrix mixing_unitary(double t12, double t13, double t23, double delta) {
    const double c12 = std::cos(t12), s12 = std::sin(t12);
    const double c13 = std::cos(t13), s13 = std::sin(t13);
    const double c23 = std::cos(t23), s23 = std::sin(t23);
    const Complex e = std::polar(1.0, delta);
    ComplexMatrix u(3, 3);
    u(0, 0) = c12 * c13;
    u(0, 1) = s12 * c13;
    u(0, 2) = s13 * std::conj(e);
    u(1, 0) = -s12 * c23 - c12 * s23 * s13 * e;
    u(1, 1) = c12 * c23 - s12 * s23 * s13 * e;
    u(1, 2) = s23 * c13;
    u(2, 0) = s12 * s23 - c12 * c23 * s13 * e;
    u(2, 1) = -c12 * s23 - s12 * c23 * s13 * e;
    u(2, 2) = c23 * c13;
    return u;
}

ComplexMatrix gauge_fix(const ComplexMatrix& u) {
    ComplexMatrix g = u;
    for (Eigen::Index c = 0; c < g.cols(); ++c) {
        g.col(c) *= std::conj(unit_phase(g(0, c)));
    }
    for (Eigen::Index r = 1; r < g.rows(); ++r) {
        g.row(r) *= std::conj(unit_phase(g(r, 0)));
    }
    return g;
}

std::vector<RatioObservation> ratio_geometry() {
    const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
    std::vector<RatioObservation> out;
    for (const auto& in : pairs) {
        for (const auto& o : pairs) {
            RatioObservation r;
            r.m = in[0];
            r.n = in[1];
            r.i = o[0];
            r.j = o[1];
            out.push_back(r);
        }
    }
    return out;
}

UnitaryReconstruction reconstruct_unitary(const std::vector<RatioObservation>& obs, double omega,
                                          const ReconstructOptions& opt) {
    if (obs.size() < 4) {
        fail(ErrorKind::EmptyData, "unitary reconstruction needs at least 4 ratios");
    }
    if (!(omega >= 0.0 && omega <= 1.0)) {
        fail(ErrorKind::Range, "omega must lie in [0,1]");
    }
    if (opt.restarts < 1) {
        fail(ErrorKind::Parameter, "at least one restart is required");
    }
    for (const auto& o : obs) {
        for (int v : {o.m, o.n, o.i, o.j}) {
            if (v < 0 || v > 2) {
                fail(ErrorKind::Index, "ratio indices must lie in [0,3)");
            }
        }
        if (o.m == o.n || o.i == o.j) {
            fail(ErrorKind::Index, "ratio needs distinct output and input pairs");
        }
        if (!(o.error > 0.0) || !std::isfinite(o.ratio)) {
            fail(ErrorKind::Input, "ratio observations need finite values and positive errors");
        }
    }

    const Residuals residuals = [&](const Eigen::VectorXd& p) {
        const ComplexMatrix u = mixing_unitary(p[0], p[1], p[2], p[3]);
        Eigen::VectorXd r(static_cast<Eigen::Index>(obs.size()));
        for (std::size_t k = 0; k < obs.size(); ++k) {
            const auto& o = obs[k];
            const double model = raw_ratio(u, omega, o.i, o.j, o.m, o.n);
            // A vanishing denominator is penalized as a unit-ratio miss.
            r[static_cast<Eigen::Index>(k)] = (std::isnan(model) ? 1.0 : o.ratio - model) / o.error;
        }
        return r;
    };

    std::vector<LmResult> runs(static_cast<std::size_t>(opt.restarts));
    parallel_for(runs.size(), [&](std::size_t k) {
        std::mt19937_64 gen(derive_seed(opt.seed, k));
        std::uniform_real_distribution<double> angle(0.0, kPi / 2.0);
        std::uniform_real_distribution<double> phase(-kPi, kPi);
        Eigen::VectorXd x0(4);
        x0 << angle(gen), angle(gen), angle(gen), phase(gen);
        runs[k] = levenberg_marquardt(residuals, x0);
    });

    int best = -1;
    int converged = 0;
    double best_any = std::numeric_limits<double>::infinity();
    for (int k = 0; k < opt.restarts; ++k) {
        best_any = std::min(best_any, runs[k].cost);
        if (!runs[k].converged) {
            continue;
        }
        ++converged;
        if (best < 0 || runs[k].cost < runs[best].cost) {
            best = k;
        }
    }
    if (best < 0) {
        std::ostringstream os;
        os << "no restart converged (best weighted residual " << best_any << ")";
        fail(ErrorKind::ReconstructionFailed, os.str());
    }

    UnitaryReconstruction out;
    const auto& x = runs[best].x;
    out.params = {x[0], x[1], x[2], wrap_phase(x[3])};
    out.u = gauge_fix(mixing_unitary(x[0], x[1], x[2], x[3]));
    out.cost = runs[best].cost;
    out.restarts = opt.restarts;
    out.converged = converged;
    return out;
}

PhaseFit estimate_gram_phase_fit(const std::vector<CyclicPoint>& points) {
    std::vector<double> alphas;
    for (const auto& p : points) {
        if (!std::isfinite(p.alpha) || !(p.plus >= 0.0) || !(p.minus >= 0.0)) {
            fail(ErrorKind::Input, "cyclic points need finite alpha and non-negative counts");
        }
        alphas.push_back(wrap_phase(p.alpha));
    }
    std::sort(alphas.begin(), alphas.end());
    const auto distinct =
        std::unique(alphas.begin(), alphas.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }) -
        alphas.begin();
    if (distinct < 4) {
        fail(ErrorKind::Input, "phase fit needs at least 4 distinct alpha values");
    }

    const int m = static_cast<int>(points.size());
    // Linear start: y = c0 + c1 cos(alpha) + c2 sin(alpha) for each series.
    Eigen::MatrixXd basis(m, 3);
    Eigen::VectorXd yp(m), ym(m);
    for (int k = 0; k < m; ++k) {
        basis(k, 0) = 1.0;
        basis(k, 1) = std::cos(points[k].alpha);
        basis(k, 2) = std::sin(points[k].alpha);
        yp[k] = points[k].plus;
        ym[k] = points[k].minus;
    }
    const auto qr = basis.colPivHouseholderQr();
    const Eigen::Vector3d a = qr.solve(yp);
    const Eigen::Vector3d b = qr.solve(ym);
    if (!(a[0] > 0.0) || !(b[0] > 0.0)) {
        fail(ErrorKind::UnidentifiablePhase, "series have no positive mean");
    }
    // c A cos(phi) = a1 = -b1 and -c A sin(phi) = a2 = -b2 after normalization.
    const double ac = 0.5 * (a[1] / a[0] - b[1] / b[0]);
    const double as = -0.5 * (a[2] / a[0] - b[2] / b[0]);
    Eigen::VectorXd x0(4);
    x0 << a[0], b[0], std::hypot(ac, as), std::atan2(as, ac);

    const Residuals residuals = [&](const Eigen::VectorXd& p) {
        Eigen::VectorXd r(2 * m);
        for (int k = 0; k < m; ++k) {
            const double c = std::cos(points[k].alpha + p[3]);
            r[2 * k] = (points[k].plus - p[0] * (1.0 + p[2] * c)) / std::sqrt(std::max(points[k].plus, 1.0));
            r[2 * k + 1] =
                (points[k].minus - p[1] * (1.0 - p[2] * c)) / std::sqrt(std::max(points[k].minus, 1.0));
        }
        return r;
    };
    LmOptions lm;
    lm.tolerance = 1e-14;
    const LmResult res = levenberg_marquardt(residuals, x0, lm);

    const Eigen::MatrixXd info = res.jacobian.transpose() * res.jacobian;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(info);
    if (!lu.isInvertible()) {
        fail(ErrorKind::UnidentifiablePhase, "fit information matrix is singular");
    }
    const Eigen::MatrixXd cov = lu.inverse();

    PhaseFit out;
    double amp = res.x[2];
    double phi = res.x[3];
    if (amp < 0.0) {
        amp = -amp;
        phi += kPi;
    }
    out.c_plus = res.x[0];
    out.c_minus = res.x[1];
    out.amplitude = {amp, std::sqrt(std::max(0.0, cov(2, 2)))};
    out.phi = {wrap_phase(phi), std::sqrt(std::max(0.0, cov(3, 3)))};
    out.chi2 = res.cost;
    if (amp < std::max(1e-6, 2.0 * out.amplitude.error)) {
        std::ostringstream os;
        os << "fringe amplitude " << amp << " is not resolved (error " << out.amplitude.error << ")";
        fail(ErrorKind::UnidentifiablePhase, os.str());
    }
    return out;
}

EstimateWithError estimate_gram_phase_distribution(const OutputDistribution& measured,
                                                   const std::vector<double>& errors, double d_ab,
                                                   double d_ac, double d_bc, const UnitaryMatrix& u,
                                                   const std::vector<int>& input_modes) {
    if (measured.modes != u.dim() || measured.photons != static_cast<int>(input_modes.size())) {
        fail(ErrorKind::Dimension, "measured distribution does not match the interferometer");
    }
    if (!errors.empty() && errors.size() != measured.size()) {
        fail(ErrorKind::Dimension, "one uncertainty per configuration is required");
    }
    for (double e : errors) {
        if (!(e > 0.0)) {
            fail(ErrorKind::Input, "uncertainties must be positive");
        }
    }
    const auto model = [&](double phi, double& value) {
        try {
            const GramMatrix s = gram_from_overlaps(d_ab, d_ac, d_bc, phi);
            const OutputDistribution p = output_distribution(u, s, input_modes);
            double e = 0.0;
            for (std::size_t c = 0; c < p.size(); ++c) {
                const double w = errors.empty() ? 1.0 : errors[c];
                const double d = (measured.probs[c] - p.probs[c]) / w;
                e += d * d;
            }
            value = e;
            return true;
        } catch (const Error& err) {
            if (err.kind() != ErrorKind::InvalidScenario) {
                throw;
            }
            return false;
        }
    };

    constexpr int grid = 2048;
    const double step = 2.0 * kPi / grid;
    std::vector<double> values(grid, std::numeric_limits<double>::infinity());
    std::vector<bool> valid(grid, false);
    int best = -1;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int g = 0; g < grid; ++g) {
        double v = 0.0;
        if (model(-kPi + g * step, v)) {
            valid[g] = true;
            values[g] = v;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            if (best < 0 || v < values[best]) {
                best = g;
            }
        }
    }
    if (best < 0) {
        fail(ErrorKind::InvalidScenario, "no phase gives a valid Gram matrix for these overlaps");
    }
    if (!(hi - lo > 1e-12 * (1.0 + hi))) {
        fail(ErrorKind::UnidentifiablePhase, "e(phi) is flat over the admissible phases");
    }

    // Refinement bracket: the neighbouring grid points, cut back to the edge
    // of the admissible region when a neighbour is not admissible.
    const double center = -kPi + best * step;
    const auto edge = [&](double outside) {
        double in = center;
        double out = outside;
        double dummy = 0.0;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (in + out);
            (model(mid, dummy) ? in : out) = mid;
        }
        return in;
    };
    const int left = (best + grid - 1) % grid;
    const int right = (best + 1) % grid;
    const double a = valid[left] ? center - step : edge(center - step);
    const double b = valid[right] ? center + step : edge(center + step);
    const auto objective = [&](double phi) {
        double v = 0.0;
        return model(phi, v) ? v : std::numeric_limits<double>::infinity();
    };
    const double phi = golden_section_minimize(objective, a, b, 1e-9);

    EstimateWithError out{wrap_phase(phi), 0.0};
    if (!errors.empty()) {
        const double h = 1e-4;
        const double fm = objective(phi - h);
        const double f0 = objective(phi);
        const double fp = objective(phi + h);
        const double curv = (fp - 2.0 * f0 + fm) / (h * h);
        if (std::isfinite(curv) && curv > 0.0) {
            out.error = std::sqrt(2.0 / curv);
        } else {
            out.error = std::numeric_limits<double>::quiet_NaN();
        }
    }
    return out;
}

double fidelity(const ComplexMatrix& u1, const ComplexMatrix& u2) {
    if (u1.rows() != u2.rows() || u1.cols() != u2.cols() || u1.rows() != u1.cols()) {
        fail(ErrorKind::Dimension, "fidelity needs square matrices of equal size");
    }
    return std::abs((u1 * u2.adjoint()).trace()) / static_cast<double>(u1.rows());
}

double amplitude_fidelity(const ComplexMatrix& u1, const ComplexMatrix& u2) {
    if (u1.rows() != u2.rows() || u1.cols() != u2.cols() || u1.rows() != u1.cols()) {
        fail(ErrorKind::Dimension, "amplitude fidelity needs square matrices of equal size");
    }
    return (u1.cwiseAbs().array() * u2.cwiseAbs().array()).sum() / static_cast<double>(u1.rows());
}

double tvd(const OutputDistribution& p, const OutputDistribution& q) {
    if (p.modes != q.modes) {
        fail(ErrorKind::Dimension, "distributions have different mode counts");
    }
    std::map<OccupationVector, double> diff;
    for (std::size_t c = 0; c < p.size(); ++c) {
        diff[p.configs[c]] += p.probs[c];
    }
    for (std::size_t c = 0; c < q.size(); ++c) {
        diff[q.configs[c]] -= q.probs[c];
    }
    double s = 0.0;
    for (const auto& [config, d] : diff) {
        s += std::abs(d);
    }
    return 0.5 * s;
}

std::vector<VarianceObservation> read_variance_csv(std::istream& in, const nlohmann::json& moduli) {
    std::vector<VarianceObservation> out;
    for_each_csv_row(in, "unitary_id", [&](const std::vector<std::string>& f) {
        expect_fields(f, 3);
        VarianceObservation o;
        o.id = f[0];
        o.sigma = text::to_double(f[1]);
        o.variance = text::to_double(f[2]);
        if (!moduli.contains(o.id)) {
            fail(ErrorKind::Input, "no moduli for unitary '" + o.id + "'");
        }
        o.moduli = StochasticModuli(real_matrix_from_json(moduli.at(o.id))).matrix();
        if (!(o.variance > 0.0)) {
            fail(ErrorKind::Input, "sigma_var must be positive");
        }
        out.push_back(std::move(o));
    });
    if (out.empty()) {
        fail(ErrorKind::Input, "variance file has no data rows");
    }
    return out;
}

std::vector<RatioObservation> read_ratio_csv(std::istream& in) {
    std::vector<RatioObservation> out;
    for_each_csv_row(in, "m,", [&](const std::vector<std::string>& f) {
        expect_fields(f, 6);
        RatioObservation r;
        r.m = text::to_int(f[0]);
        r.n = text::to_int(f[1]);
        r.i = text::to_int(f[2]);
        r.j = text::to_int(f[3]);
        r.ratio = text::to_double(f[4]);
        r.error = text::to_double(f[5]);
        out.push_back(r);
    });
    if (out.empty()) {
        fail(ErrorKind::Input, "ratio file has no data rows");
    }
    return out;
}

std::vector<CyclicPoint> read_cyclic_csv(std::istream& in) {
    std::map<double, CyclicPoint> by_alpha;
    for_each_csv_row(in, "alpha", [&](const std::vector<std::string>& f) {
        expect_fields(f, 3);
        const double alpha = text::to_double(f[0]);
        const double counts = text::to_double(f[2]);
        if (!(counts >= 0.0)) {
            fail(ErrorKind::Input, "counts must be non-negative");
        }
        auto& p = by_alpha[alpha];
        p.alpha = alpha;
        if (f[1] == "+" || f[1] == "plus") {
            p.plus += counts;
        } else if (f[1] == "-" || f[1] == "minus") {
            p.minus += counts;
        } else {
            fail(ErrorKind::Input, "set must be '+' or '-'");
        }
    });
    std::vector<CyclicPoint> out;
    for (const auto& [alpha, p] : by_alpha) {
        out.push_back(p);
    }
    if (out.empty()) {
        fail(ErrorKind::Input, "cyclic file has no data rows");
    }
    return out;
}

} // namespace indistinguo

#include "afc/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace afc {
namespace {

using Vec = std::vector<double>;

struct Model {
    // y values for parameter vector p
    virtual Vec eval(const Vec& p, std::span<const double> x) const = 0;
    // column-major Jacobian dy_i/dp_j, size n*np
    virtual Vec jacobian(const Vec& p, std::span<const double> x) const = 0;
    virtual ~Model() = default;
};

// Solves the small symmetric positive system H x = b in place.
bool solve_spd(std::vector<double>& h, std::vector<double>& b, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(h[i * n + k]) > std::abs(h[piv * n + k])) piv = i;
        if (std::abs(h[piv * n + k]) < 1e-300) return false;
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j)
                std::swap(h[k * n + j], h[piv * n + j]);
            std::swap(b[k], b[piv]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = h[i * n + k] / h[k * n + k];
            for (std::size_t j = k; j < n; ++j) h[i * n + j] -= f * h[k * n + j];
            b[i] -= f * b[k];
        }
    }
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= h[i * n + j] * b[j];
        b[i] = s / h[i * n + i];
    }
    return true;
}

struct LmOutcome {
    Vec p;
    Vec sigma;
    double residual_norm = std::numeric_limits<double>::infinity();
    bool converged = false;
    int iterations = 0;
};

double residual_norm_of(const Vec& r) {
    double s = 0.0;
    for (double v : r) s += v * v;
    return std::sqrt(s);
}

Vec weighted_residual(const Model& m, const Vec& p, std::span<const double> x,
                      std::span<const double> y, std::span<const double> w) {
    Vec f = m.eval(p, x);
    for (std::size_t i = 0; i < f.size(); ++i)
        f[i] = (y[i] - f[i]) * (w.empty() ? 1.0 : 1.0 / w[i]);
    return f;
}

LmOutcome levenberg(const Model& m, Vec p, std::span<const double> x,
                    std::span<const double> y, std::span<const double> w) {
    const std::size_t n = x.size();
    const std::size_t np = p.size();
    const int max_iters = 200;
    const double gtol = 1e-12;
    const double ftol = 1e-14;

    LmOutcome out;
    Vec r = weighted_residual(m, p, x, y, w);
    double rnorm = residual_norm_of(r);
    double lambda = 1e-3;

    int it = 0;
    for (; it < max_iters; ++it) {
        Vec jac = m.jacobian(p, x);
        if (!w.empty())
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < np; ++j) jac[j * n + i] /= w[i];

        // gradient of 0.5*||r||^2 w.r.t. p is -J^T r with our residual sign
        Vec g(np, 0.0);
        for (std::size_t j = 0; j < np; ++j)
            for (std::size_t i = 0; i < n; ++i) g[j] += jac[j * n + i] * r[i];
        double gmax = 0.0;
        for (double v : g) gmax = std::max(gmax, std::abs(v));
        if (gmax < gtol * std::max(1.0, rnorm)) {
            out.converged = true;
            break;
        }

        Vec h(np * np, 0.0);
        for (std::size_t a = 0; a < np; ++a)
            for (std::size_t b = a; b < np; ++b) {
                double s = 0.0;
                for (std::size_t i = 0; i < n; ++i)
                    s += jac[a * n + i] * jac[b * n + i];
                h[a * np + b] = h[b * np + a] = s;
            }

        bool accepted = false;
        for (int tries = 0; tries < 60 && !accepted; ++tries) {
            Vec hd = h;
            for (std::size_t a = 0; a < np; ++a)
                hd[a * np + a] += lambda * std::max(h[a * np + a], 1e-12);
            Vec step = g;
            if (!solve_spd(hd, step, np)) {
                lambda *= 10.0;
                continue;
            }
            Vec p_try(np);
            for (std::size_t a = 0; a < np; ++a) p_try[a] = p[a] + step[a];
            Vec r_try = weighted_residual(m, p_try, x, y, w);
            const double rnorm_try = residual_norm_of(r_try);
            if (std::isfinite(rnorm_try) && rnorm_try <= rnorm) {
                const double gain = rnorm - rnorm_try;
                p = std::move(p_try);
                r = std::move(r_try);
                accepted = true;
                lambda = std::max(lambda * 0.3, 1e-12);
                if (gain < ftol * std::max(1.0, rnorm)) {
                    rnorm = rnorm_try;
                    out.converged = true;
                }
                rnorm = rnorm_try;
            } else {
                lambda *= 10.0;
            }
        }
        if (!accepted || out.converged) break;
    }

    out.iterations = it + 1;
    out.p = p;
    out.residual_norm = rnorm;

    // covariance = s^2 (J^T J)^-1 via solves against unit vectors
    Vec jac = m.jacobian(p, x);
    if (!w.empty())
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < np; ++j) jac[j * n + i] /= w[i];
    Vec h(np * np, 0.0);
    for (std::size_t a = 0; a < np; ++a)
        for (std::size_t b = a; b < np; ++b) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                s += jac[a * n + i] * jac[b * n + i];
            h[a * np + b] = h[b * np + a] = s;
        }
    const double dof = static_cast<double>(n > np ? n - np : 1);
    const double s2 = (rnorm * rnorm) / dof;
    out.sigma.assign(np, 0.0);
    for (std::size_t a = 0; a < np; ++a) {
        Vec hh = h;
        Vec e(np, 0.0);
        e[a] = 1.0;
        if (solve_spd(hh, e, np) && e[a] > 0.0)
            out.sigma[a] = std::sqrt(s2 * e[a]);
    }
    return out;
}

// --- single exponential --------------------------------------------------

// parameters: (A, log T)
struct ExpModel : Model {
    Vec eval(const Vec& p, std::span<const double> x) const override {
        const double a = p[0], t0 = std::exp(p[1]);
        Vec f(x.size());
        for (std::size_t i = 0; i < x.size(); ++i)
            f[i] = a * std::exp(-x[i] / t0);
        return f;
    }
    Vec jacobian(const Vec& p, std::span<const double> x) const override {
        const double a = p[0], t0 = std::exp(p[1]);
        const std::size_t n = x.size();
        Vec jac(2 * n);
        for (std::size_t i = 0; i < n; ++i) {
            const double e = std::exp(-x[i] / t0);
            jac[0 * n + i] = e;
            jac[1 * n + i] = a * e * (x[i] / t0);  // d/d(logT)
        }
        return jac;
    }
};

// Log-linear regression of ln y on t for points with y > 0.
// Returns false when fewer than 3 usable points or no decay.
bool loglinear_init(std::span<const double> t, std::span<const double> y,
                    double& a, double& tau) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (y[i] <= 0.0) continue;
        const double ly = std::log(y[i]);
        sx += t[i];
        sy += ly;
        sxx += t[i] * t[i];
        sxy += t[i] * ly;
        ++n;
    }
    if (n < 3) return false;
    const double det = n * sxx - sx * sx;
    if (std::abs(det) < 1e-300) return false;
    const double slope = (n * sxy - sx * sy) / det;
    const double inter = (sy * sxx - sx * sxy) / det;
    if (!(slope < 0.0)) return false;
    a = std::exp(inter);
    tau = -1.0 / slope;
    return true;
}

FitResult package(const LmOutcome& lm, const std::vector<std::string>& names,
                  const std::vector<bool>& log_scale) {
    FitResult res;
    res.converged = lm.converged;
    res.iterations = lm.iterations;
    res.residual_norm = lm.residual_norm;
    for (std::size_t i = 0; i < names.size(); ++i) {
        FitParam fp;
        fp.name = names[i];
        if (log_scale[i]) {
            fp.value = std::exp(lm.p[i]);
            fp.sigma = fp.value * lm.sigma[i];
        } else {
            fp.value = lm.p[i];
            fp.sigma = lm.sigma[i];
        }
        res.params.push_back(fp);
    }
    return res;
}

void check_inputs(std::span<const double> t, std::span<const double> y,
                  std::span<const double> sigma, std::size_t min_points,
                  const char* who, bool require_increasing = true) {
    if (t.size() != y.size())
        throw std::invalid_argument(std::string(who) + ": x/y size mismatch");
    if (!sigma.empty() && sigma.size() != y.size())
        throw std::invalid_argument(std::string(who) + ": sigma size mismatch");
    if (t.size() < min_points)
        throw std::invalid_argument(std::string(who) + ": needs at least " +
                                    std::to_string(min_points) + " points");
    if (require_increasing)
        for (std::size_t i = 1; i < t.size(); ++i)
            if (t[i] <= t[i - 1])
                throw std::invalid_argument(std::string(who) +
                                            ": abscissa must be increasing");
    for (double s : sigma)
        if (s <= 0.0)
            throw std::invalid_argument(std::string(who) + ": sigma must be > 0");
}

}  // namespace

double FitResult::value(const std::string& name) const {
    for (const auto& p : params)
        if (p.name == name) return p.value;
    throw std::invalid_argument("FitResult: no parameter '" + name + "'");
}

double FitResult::sigma(const std::string& name) const {
    for (const auto& p : params)
        if (p.name == name) return p.sigma;
    throw std::invalid_argument("FitResult: no parameter '" + name + "'");
}

FitResult fit_exp(std::span<const double> t, std::span<const double> y,
                  std::span<const double> sigma) {
    check_inputs(t, y, sigma, 4, "fit_exp");
    double a0, tau0;
    if (!loglinear_init(t, y, a0, tau0)) {
        FitResult res;
        res.message = "non-identifiable: no exponential decay detected";
        res.params = {{"A", 0.0, 0.0}, {"T", 0.0, 0.0}};
        return res;
    }
    const ExpModel model;
    const LmOutcome lm =
        levenberg(model, {a0, std::log(tau0)}, t, y, sigma);
    return package(lm, {"A", "T"}, {false, true});
}

namespace {

// parameters: (A1, log T1, A2, log T2)
struct DoubleExpModel : Model {
    Vec eval(const Vec& p, std::span<const double> x) const override {
        const double a1 = p[0], t1 = std::exp(p[1]);
        const double a2 = p[2], t2 = std::exp(p[3]);
        Vec f(x.size());
        for (std::size_t i = 0; i < x.size(); ++i)
            f[i] = a1 * std::exp(-x[i] / t1) + a2 * std::exp(-x[i] / t2);
        return f;
    }
    Vec jacobian(const Vec& p, std::span<const double> x) const override {
        const double a1 = p[0], t1 = std::exp(p[1]);
        const double a2 = p[2], t2 = std::exp(p[3]);
        const std::size_t n = x.size();
        Vec jac(4 * n);
        for (std::size_t i = 0; i < n; ++i) {
            const double e1 = std::exp(-x[i] / t1);
            const double e2 = std::exp(-x[i] / t2);
            jac[0 * n + i] = e1;
            jac[1 * n + i] = a1 * e1 * (x[i] / t1);
            jac[2 * n + i] = e2;
            jac[3 * n + i] = a2 * e2 * (x[i] / t2);
        }
        return jac;
    }
};

}  // namespace

FitResult fit_double_exp(std::span<const double> t, std::span<const double> y,
                         std::span<const double> sigma) {
    check_inputs(t, y, sigma, 8, "fit_double_exp");

    // Peeling start: slow component from the tail, fast from the remainder.
    std::vector<Vec> starts;
    const std::size_t n = t.size();
    const std::size_t tail = n / 2;
    double as = 0, ts = 0;
    if (loglinear_init(t.subspan(tail), y.subspan(tail), as, ts)) {
        Vec head_y(y.begin(), y.end());
        for (std::size_t i = 0; i < n; ++i)
            head_y[i] -= as * std::exp(-t[i] / ts);
        double af = 0, tf = 0;
        if (loglinear_init({t.data(), n / 2}, {head_y.data(), n / 2}, af, tf) &&
            tf < ts)
            starts.push_back({af, std::log(tf), as, std::log(ts)});
    }
    double a0 = 0, tau0 = 0;
    if (loglinear_init(t, y, a0, tau0)) {
        starts.push_back(
            {a0 / 2, std::log(tau0 / 4), a0 / 2, std::log(tau0 * 2)});
        starts.push_back(
            {a0 / 2, std::log(tau0 / 10), a0 / 2, std::log(tau0)});
    }
    if (starts.empty()) {
        FitResult res;
        res.message = "non-identifiable: no exponential decay detected";
        res.params = {{"A1", 0.0, 0.0}, {"T1", 0.0, 0.0},
                      {"A2", 0.0, 0.0}, {"T2", 0.0, 0.0}};
        return res;
    }

    const DoubleExpModel model;
    LmOutcome best;
    for (const auto& s : starts) {
        LmOutcome lm = levenberg(model, s, t, y, sigma);
        if (lm.residual_norm < best.residual_norm) best = lm;
    }
    if (std::exp(best.p[1]) > std::exp(best.p[3])) {
        std::swap(best.p[0], best.p[2]);
        std::swap(best.p[1], best.p[3]);
        std::swap(best.sigma[0], best.sigma[2]);
        std::swap(best.sigma[1], best.sigma[3]);
    }
    FitResult res = package(best, {"A1", "T1", "A2", "T2"},
                            {false, true, false, true});
    const double ratio = res.value("T2") / res.value("T1");
    if (ratio < 3.0) {
        res.identifiability_warning = true;
        res.message = "timescales differ by less than 3x; components are "
                      "poorly separable";
    }
    return res;
}

namespace {

constexpr double kGaussKernel = 9.8696044010893586 / (2.0 * 0.6931471805599453);
// pi^2 / (2 ln 2); y = A exp(-kGaussKernel * (Gamma x)^2)

// parameters: (A, log Gamma)
struct GaussMismatchModel : Model {
    Vec eval(const Vec& p, std::span<const double> x) const override {
        const double a = p[0], g = std::exp(p[1]);
        Vec f(x.size());
        for (std::size_t i = 0; i < x.size(); ++i)
            f[i] = a * std::exp(-kGaussKernel * g * g * x[i] * x[i]);
        return f;
    }
    Vec jacobian(const Vec& p, std::span<const double> x) const override {
        const double a = p[0], g = std::exp(p[1]);
        const std::size_t n = x.size();
        Vec jac(2 * n);
        for (std::size_t i = 0; i < n; ++i) {
            const double e = std::exp(-kGaussKernel * g * g * x[i] * x[i]);
            jac[0 * n + i] = e;
            jac[1 * n + i] = a * e * (-2.0 * kGaussKernel * g * g * x[i] * x[i]);
        }
        return jac;
    }
};

}  // namespace

FitResult fit_gaussian_mismatch(std::span<const double> x,
                                std::span<const double> y,
                                std::span<const double> sigma) {
    check_inputs(x, y, sigma, 5, "fit_gaussian_mismatch",
                 /*require_increasing=*/false);

    double ymax = 0.0;
    for (double v : y) ymax = std::max(ymax, v);
    if (ymax <= 0.0) {
        FitResult res;
        res.message = "non-identifiable: no positive peak";
        res.params = {{"A", 0.0, 0.0}, {"Gamma", 0.0, 0.0}};
        return res;
    }
    // second-moment width estimate, y as weights
    double m0 = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double w = std::max(y[i], 0.0);
        m0 += w;
        m2 += w * x[i] * x[i];
    }
    const double var = m2 / m0;
    if (!(var > 0.0)) {
        FitResult res;
        res.message = "non-identifiable: zero spread in x";
        res.params = {{"A", ymax, 0.0}, {"Gamma", 0.0, 0.0}};
        return res;
    }
    const double gamma0 = 1.0 / std::sqrt(2.0 * kGaussKernel * var);
    const GaussMismatchModel model;
    const LmOutcome lm =
        levenberg(model, {ymax, std::log(gamma0)}, x, y, sigma);
    return package(lm, {"A", "Gamma"}, {false, true});
}

double dominant_frequency(std::span<const double> t, std::span<const double> y) {
    if (t.size() != y.size() || t.size() < 8)
        throw std::invalid_argument("dominant_frequency: needs >= 8 samples");
    double lo = y[0], hi = y[0];
    for (double v : y) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double mid = 0.5 * (lo + hi);
    double first = 0.0, last = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 1; i < y.size(); ++i) {
        const double a = y[i - 1] - mid, b = y[i] - mid;
        if (a == 0.0 || a * b >= 0.0) continue;
        const double tc = t[i - 1] + (t[i] - t[i - 1]) * a / (a - b);
        if (count == 0) first = tc;
        last = tc;
        ++count;
    }
    if (count < 2)
        throw std::invalid_argument(
            "dominant_frequency: fewer than two midline crossings");
    return static_cast<double>(count - 1) / (2.0 * (last - first));
}

}  // namespace afc

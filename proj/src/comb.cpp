#include "afc/comb.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "afc/csv.hpp"
#include "afc/errors.hpp"
#include "afc/units.hpp"

namespace afc {

ToothShape tooth_shape_from_string(const std::string& s) {
    if (s == "square") return ToothShape::square;
    if (s == "gaussian") return ToothShape::gaussian;
    if (s == "lorentzian") return ToothShape::lorentzian;
    throw std::invalid_argument("unknown tooth shape '" + s +
                                "' (square|gaussian|lorentzian)");
}

std::string to_string(ToothShape shape) {
    switch (shape) {
        case ToothShape::square: return "square";
        case ToothShape::gaussian: return "gaussian";
        case ToothShape::lorentzian: return "lorentzian";
    }
    return "?";
}

double CombProfile::grid_step_hz() const {
    if (detuning_hz.size() < 2)
        throw std::invalid_argument("CombProfile: profile not sampled");
    return detuning_hz[1] - detuning_hz[0];
}

double CombProfile::samples_per_period() const {
    return delta_hz / grid_step_hz();
}

namespace {

// Integral from -inf to x of a unit-peak tooth centred at 0.
double tooth_cumulative(ToothShape shape, double fwhm, double width,
                        double x) {
    switch (shape) {
        case ToothShape::square: {
            const double half = width / 2.0;
            return std::clamp(x, -half, half) + half;
        }
        case ToothShape::gaussian: {
            // exp(-4 ln2 x^2 / fwhm^2)
            const double a = 2.0 * std::sqrt(kLn2) / fwhm;
            const double norm = std::sqrt(kPi) / (2.0 * a);
            return norm * (1.0 + std::erf(a * x));
        }
        case ToothShape::lorentzian: {
            // 1 / (1 + (2x/fwhm)^2)
            const double half = fwhm / 2.0;
            return half * (std::atan(x / half) + kPi / 2.0);
        }
    }
    return 0.0;
}

double tooth_reach(ToothShape shape, double fwhm, double width) {
    switch (shape) {
        case ToothShape::square: return width / 2.0;
        case ToothShape::gaussian: return 4.0 * fwhm;
        case ToothShape::lorentzian: return 64.0 * fwhm;
    }
    return 0.0;
}

}  // namespace

CombProfile build_comb(double delta_hz, double d_peak, double finesse,
                       double d0, double bandwidth_hz, ToothShape shape,
                       double tooth_fwhm_hz, int samples_per_period) {
    if (delta_hz <= 0.0)
        throw std::invalid_argument("build_comb: delta must be > 0");
    if (finesse < 1.0)
        throw std::invalid_argument("build_comb: finesse must be >= 1");
    if (d_peak < 0.0 || d0 < 0.0)
        throw std::invalid_argument("build_comb: depths must be >= 0");
    if (bandwidth_hz < 10.0 * delta_hz)
        throw std::invalid_argument(
            "build_comb: bandwidth must be >= 10 * delta");
    if (samples_per_period < 64)
        throw std::invalid_argument(
            "build_comb: need >= 64 samples per period");
    if (shape != ToothShape::square && tooth_fwhm_hz <= 0.0)
        throw std::invalid_argument(
            "build_comb: broadened teeth need tooth_fwhm > 0");

    CombProfile comb;
    comb.delta_hz = delta_hz;
    comb.d_peak = d_peak;
    comb.finesse =
        shape == ToothShape::square ? finesse : delta_hz / tooth_fwhm_hz;
    comb.d0 = d0;
    comb.bandwidth_hz = bandwidth_hz;
    comb.tooth_shape = shape;
    comb.tooth_fwhm_hz = shape == ToothShape::square ? 0.0 : tooth_fwhm_hz;

    const double h = delta_hz / samples_per_period;
    const double width = delta_hz / finesse;
    const long m = static_cast<long>(std::floor(bandwidth_hz / (2.0 * h)));
    const double reach = tooth_reach(shape, tooth_fwhm_hz, width);

    comb.detuning_hz.resize(2 * m + 1);
    comb.depth.resize(2 * m + 1);
    for (long j = -m; j <= m; ++j) {
        const double centre = j * h;
        const double lo = centre - h / 2.0, hi = centre + h / 2.0;
        // cell average over all teeth whose support touches this cell
        const long k0 = static_cast<long>(std::floor((lo - reach) / delta_hz));
        const long k1 = static_cast<long>(std::ceil((hi + reach) / delta_hz));
        double acc = 0.0;
        for (long k = k0; k <= k1; ++k) {
            const double c = k * delta_hz;
            acc += tooth_cumulative(shape, tooth_fwhm_hz, width, hi - c) -
                   tooth_cumulative(shape, tooth_fwhm_hz, width, lo - c);
        }
        comb.detuning_hz[j + m] = centre;
        comb.depth[j + m] = d0 + d_peak * acc / h;
    }
    return comb;
}

double optimal_finesse(double d) {
    if (d <= 0.0) throw std::invalid_argument("optimal_finesse: d must be > 0");
    return kPi / std::atan(kTwoPi / d);
}

double analytic_efficiency(double d, double finesse, double d0) {
    if (d < 0.0 || d0 < 0.0)
        throw std::invalid_argument("analytic_efficiency: depths must be >= 0");
    if (finesse < 1.0)
        throw std::invalid_argument("analytic_efficiency: finesse must be >= 1");
    const double x = kPi / finesse;
    const double sinc = std::sin(x) / x;
    const double df = d / finesse;
    return df * df * sinc * sinc * std::exp(-df - d0);
}

EchoEfficiency fourier_efficiency(const CombProfile& comb) {
    if (comb.detuning_hz.size() < 2 ||
        comb.detuning_hz.size() != comb.depth.size())
        throw std::invalid_argument("fourier_efficiency: profile not sampled");
    const double spp_real = comb.samples_per_period();
    const long spp = static_cast<long>(std::llround(spp_real));
    if (spp < 64 || std::abs(spp_real - spp) > 1e-6)
        throw ResolutionError(
            "fourier_efficiency: need an integer number of >= 64 samples per "
            "period, got " + std::to_string(spp_real));

    // one full period of cells centred on delta = 0
    const long centre = static_cast<long>(comb.detuning_hz.size()) / 2;
    const long j0 = centre - spp / 2;
    if (j0 < 0 || j0 + spp > static_cast<long>(comb.depth.size()))
        throw ResolutionError(
            "fourier_efficiency: bandwidth narrower than one period");

    double c0 = 0.0;
    std::complex<double> c1(0.0, 0.0);
    for (long j = 0; j < spp; ++j) {
        const double d = comb.depth[j0 + j];
        const double phase = kTwoPi * comb.detuning_hz[j0 + j] / comb.delta_hz;
        c0 += d;
        c1 += d * std::complex<double>(std::cos(phase), -std::sin(phase));
    }
    c0 /= spp;
    c1 /= static_cast<double>(spp);

    EchoEfficiency out;
    out.c0 = c0;
    out.c1_mag = std::abs(c1);
    out.eta = out.c1_mag * out.c1_mag * std::exp(-c0);
    return out;
}

double two_component_decay(const CombDecay& decay, double delay_s) {
    const double w = decay.weight_fast;
    double v = 0.0;
    if (w > 0.0) v += w * std::exp(-4.0 * delay_s / decay.t_fast_s);
    if (w < 1.0) v += (1.0 - w) * std::exp(-4.0 * delay_s / decay.t_slow_s);
    return v;
}

std::vector<double> efficiency_vs_delay(double d, double d0, double t2_star_s,
                                        std::span<const double> delays_s) {
    return efficiency_vs_delay(d, d0, CombDecay{t2_star_s, t2_star_s, 1.0},
                               delays_s);
}

std::vector<double> efficiency_vs_delay(double d, double d0,
                                        const CombDecay& decay,
                                        std::span<const double> delays_s) {
    if (decay.t_fast_s <= 0.0 || decay.t_slow_s <= 0.0)
        throw std::invalid_argument("efficiency_vs_delay: T2* must be > 0");
    const double prefactor = analytic_efficiency(d, optimal_finesse(d), d0);
    std::vector<double> eta(delays_s.size());
    for (std::size_t i = 0; i < delays_s.size(); ++i) {
        if (delays_s[i] <= 0.0)
            throw std::invalid_argument("efficiency_vs_delay: delays must be > 0");
        eta[i] = prefactor * two_component_decay(decay, delays_s[i]);
    }
    return eta;
}

namespace {

BroadenedDecayResult broadened_decay_impl(ToothShape shape,
                                          double tooth_fwhm_hz,
                                          std::span<const double> delays_s,
                                          double d_peak, double d0,
                                          int samples_per_period,
                                          bool parallel) {
    if (shape != ToothShape::square && tooth_fwhm_hz <= 0.0)
        throw std::invalid_argument("broadened_comb_decay: fwhm must be > 0");
    if (delays_s.size() < 4)
        throw std::invalid_argument(
            "broadened_comb_decay: need at least 4 delays");

    BroadenedDecayResult out;
    out.delays_s.assign(delays_s.begin(), delays_s.end());
    out.eta.resize(delays_s.size());

    const auto eval_one = [&](std::size_t i) {
        const double delta = 1.0 / delays_s[i];
        const double finesse =
            shape == ToothShape::square ? optimal_finesse(d_peak) : 1.0;
        const CombProfile comb =
            build_comb(delta, d_peak, finesse, d0, 12.0 * delta, shape,
                       tooth_fwhm_hz, samples_per_period);
        out.eta[i] = fourier_efficiency(comb).eta;
    };

    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (long i = 0; i < static_cast<long>(delays_s.size()); ++i)
            eval_one(static_cast<std::size_t>(i));
    } else {
        for (std::size_t i = 0; i < delays_s.size(); ++i) eval_one(i);
    }

    // flat response (ideal teeth): no decay to fit, T2* unbounded
    double lo = out.eta[0], hi = out.eta[0];
    for (double e : out.eta) {
        lo = std::min(lo, e);
        hi = std::max(hi, e);
    }
    if (hi <= 0.0 || (hi - lo) <= 1e-9 * hi) {
        out.t2_star_s = std::numeric_limits<double>::infinity();
        return out;
    }

    out.fit = fit_exp(out.delays_s, out.eta);
    if (!out.fit.converged) {
        if (out.fit.message.rfind("non-identifiable", 0) == 0) {
            out.t2_star_s = std::numeric_limits<double>::infinity();
            return out;
        }
        throw FitNotConverged("broadened_comb_decay: decay fit failed",
                              out.fit.residual_norm);
    }
    out.t2_star_s = 4.0 * out.fit.value("T");
    return out;
}

}  // namespace

BroadenedDecayResult broadened_comb_decay(ToothShape shape,
                                          double tooth_fwhm_hz,
                                          std::span<const double> delays_s,
                                          double d_peak, double d0,
                                          int samples_per_period) {
    return broadened_decay_impl(shape, tooth_fwhm_hz, delays_s, d_peak, d0,
                                samples_per_period, true);
}

BroadenedDecayResult broadened_comb_decay_serial(
    ToothShape shape, double tooth_fwhm_hz, std::span<const double> delays_s,
    double d_peak, double d0, int samples_per_period) {
    return broadened_decay_impl(shape, tooth_fwhm_hz, delays_s, d_peak, d0,
                                samples_per_period, false);
}

void CombProfile::save_csv(const std::string& path) const {
    std::ofstream outf(path);
    if (!outf) throw std::runtime_error("cannot open for writing: " + path);
    outf << "# delta_hz=" << format_double(delta_hz)
         << " d_peak=" << format_double(d_peak)
         << " finesse=" << format_double(finesse)
         << " d0=" << format_double(d0)
         << " bandwidth_hz=" << format_double(bandwidth_hz)
         << " tooth_shape=" << to_string(tooth_shape)
         << " tooth_fwhm_hz=" << format_double(tooth_fwhm_hz) << "\n";
    outf << "detuning_hz,optical_depth\n";
    for (std::size_t i = 0; i < detuning_hz.size(); ++i)
        outf << format_double(detuning_hz[i]) << ","
             << format_double(depth[i]) << "\n";
    if (!outf) throw std::runtime_error("write failed: " + path);
}

CombProfile CombProfile::load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    CombProfile comb;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::stringstream meta(line.substr(1));
            std::string token;
            while (meta >> token) {
                const auto eq = token.find('=');
                if (eq == std::string::npos) continue;
                const std::string key = token.substr(0, eq);
                const std::string val = token.substr(eq + 1);
                if (key == "delta_hz") comb.delta_hz = std::stod(val);
                else if (key == "d_peak") comb.d_peak = std::stod(val);
                else if (key == "finesse") comb.finesse = std::stod(val);
                else if (key == "d0") comb.d0 = std::stod(val);
                else if (key == "bandwidth_hz") comb.bandwidth_hz = std::stod(val);
                else if (key == "tooth_shape")
                    comb.tooth_shape = tooth_shape_from_string(val);
                else if (key == "tooth_fwhm_hz")
                    comb.tooth_fwhm_hz = std::stod(val);
            }
            continue;
        }
        if (line.rfind("detuning_hz", 0) == 0) continue;  // header
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error(path + ": malformed row '" + line + "'");
        comb.detuning_hz.push_back(std::stod(line.substr(0, comma)));
        comb.depth.push_back(std::stod(line.substr(comma + 1)));
    }
    if (comb.detuning_hz.size() < 2)
        throw std::runtime_error(path + ": no samples");
    return comb;
}

}  // namespace afc

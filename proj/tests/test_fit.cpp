#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <vector>

#include "afc/fit.hpp"
#include "afc/rng.hpp"
#include "afc/units.hpp"

using namespace afc;

namespace {

std::vector<double> grid(double lo, double hi, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1.0);
    return v;
}

void noisify(std::vector<double>& y, double level, std::uint64_t seed) {
    for (std::size_t i = 0; i < y.size(); ++i)
        y[i] *= 1.0 + level * normal_draw(seed, i);
}

}  // namespace

TEST_CASE("single exponential round-trips noiselessly to 0.1%") {
    const auto t = grid(0.0, 600e-6, 40);
    std::vector<double> y(t.size());
    for (std::size_t i = 0; i < t.size(); ++i)
        y[i] = 1.0 * std::exp(-t[i] / 165e-6);
    const FitResult fit = fit_exp(t, y);
    REQUIRE(fit.converged);
    CHECK(fit.value("A") == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(fit.value("T") == doctest::Approx(165e-6).epsilon(1e-3));
}

TEST_CASE("constant data is flagged non-identifiable") {
    const auto t = grid(0.0, 1.0, 16);
    const std::vector<double> y(t.size(), 0.7);
    const FitResult fit = fit_exp(t, y);
    CHECK_FALSE(fit.converged);
    CHECK(fit.message.find("non-identifiable") != std::string::npos);
}

TEST_CASE("single-exponential fit leaves structure in two-component data") {
    const auto t = grid(1e-6, 30e-6, 30);
    std::vector<double> y(t.size());
    for (std::size_t i = 0; i < t.size(); ++i)
        y[i] = 0.5 * std::exp(-t[i] / 3.75e-6) + 0.5 * std::exp(-t[i] / 41.25e-6);
    const FitResult single = fit_exp(t, y);
    const FitResult twin = fit_double_exp(t, y);
    REQUIRE(twin.converged);
    CHECK(twin.residual_norm < 0.1 * single.residual_norm);
}

TEST_CASE("double exponential recovers the AFC decay pair noiselessly") {
    const auto t = grid(1e-6, 30e-6, 30);
    std::vector<double> y(t.size());
    for (std::size_t i = 0; i < t.size(); ++i)
        y[i] = 0.45 * std::exp(-t[i] / (15e-6 / 4.0)) +
               0.55 * std::exp(-t[i] / (165e-6 / 4.0));
    const FitResult fit = fit_double_exp(t, y);
    REQUIRE(fit.converged);
    CHECK(fit.value("T1") == doctest::Approx(15e-6 / 4.0).epsilon(0.01));
    CHECK(fit.value("T2") == doctest::Approx(165e-6 / 4.0).epsilon(0.01));
    CHECK_FALSE(fit.identifiability_warning);
}

TEST_CASE("double exponential recovers the hole lifetimes at 1% noise") {
    const auto t = grid(2e-3, 1.5, 48);
    std::vector<double> y(t.size());
    for (std::size_t i = 0; i < t.size(); ++i)
        y[i] = 0.5 * std::exp(-t[i] / 36e-3) + 0.5 * std::exp(-t[i] / 390e-3);
    noisify(y, 0.01, 99);
    const FitResult fit = fit_double_exp(t, y);
    REQUIRE(fit.converged);
    CHECK(fit.value("T1") == doctest::Approx(36e-3).epsilon(0.05));
    CHECK(fit.value("T2") == doctest::Approx(390e-3).epsilon(0.05));
}

TEST_CASE("equal timescales raise the separability warning") {
    const auto t = grid(0.0, 1.0, 24);
    std::vector<double> y(t.size());
    for (std::size_t i = 0; i < t.size(); ++i)
        y[i] = std::exp(-t[i] / 0.3);
    const FitResult fit = fit_double_exp(t, y);
    CHECK(fit.identifiability_warning);
}

TEST_CASE("gaussian mismatch recovers the spin linewidth") {
    const auto x = grid(-2e-6, 2e-6, 41);
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double arg = kPi * 0.73e6 * x[i];
        y[i] = 0.8 * std::exp(-arg * arg / (2.0 * kLn2));
    }
    noisify(y, 0.02, 1234);
    const FitResult fit = fit_gaussian_mismatch(x, y);
    REQUIRE(fit.converged);
    CHECK(fit.value("Gamma") == doctest::Approx(0.73e6).epsilon(0.055));
    CHECK(fit.sigma("Gamma") > 0.0);
}

TEST_CASE("fits are invariant under uniform y scaling") {
    const auto t = grid(0.0, 400e-6, 32);
    std::vector<double> y(t.size()), y10(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        y[i] = 0.7 * std::exp(-t[i] / 90e-6);
        y10[i] = 10.0 * y[i];
    }
    const FitResult a = fit_exp(t, y);
    const FitResult b = fit_exp(t, y10);
    REQUIRE(a.converged);
    REQUIRE(b.converged);
    CHECK(std::abs(a.value("T") - b.value("T")) <= 1e-10 * a.value("T"));
    CHECK(b.value("A") == doctest::Approx(10.0 * a.value("A")).epsilon(1e-9));
}

TEST_CASE("input validation") {
    const std::vector<double> t{0.0, 1.0, 2.0};
    const std::vector<double> y{1.0, 0.5, 0.25};
    CHECK_THROWS_AS(fit_exp(t, y), std::invalid_argument);  // < 4 points
    const std::vector<double> x1{0.0};
    const std::vector<double> y1{1.0};
    CHECK_THROWS_AS(fit_gaussian_mismatch(x1, y1), std::invalid_argument);
    const std::vector<double> tbad{0.0, 1.0, 1.0, 2.0, 3.0};
    const std::vector<double> ybad{1.0, 0.9, 0.8, 0.7, 0.6};
    CHECK_THROWS_AS(fit_exp(tbad, ybad), std::invalid_argument);
}

TEST_CASE("weighted fits accept a per-point sigma column") {
    const auto t = grid(0.0, 500e-6, 30);
    std::vector<double> y(t.size()), sigma(t.size(), 0.01);
    for (std::size_t i = 0; i < t.size(); ++i)
        y[i] = std::exp(-t[i] / 120e-6);
    const FitResult fit = fit_exp(t, y, sigma);
    REQUIRE(fit.converged);
    CHECK(fit.value("T") == doctest::Approx(120e-6).epsilon(1e-6));
}

TEST_CASE("dominant frequency from midline crossings") {
    const int n = 4096;
    std::vector<double> t(n), y(n);
    for (int i = 0; i < n; ++i) {
        t[i] = 10e-6 * i / (n - 1.0);
        y[i] = -std::cos(kTwoPi * 0.65e6 * t[i]);
    }
    CHECK(dominant_frequency(t, y) == doctest::Approx(0.65e6).epsilon(1e-3));
    const std::vector<double> flat(n, 1.0);
    CHECK_THROWS_AS(dominant_frequency(t, flat), std::invalid_argument);
}

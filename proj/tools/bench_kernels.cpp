// Times the OpenMP kernels against their serial reference paths and
// verifies the results are bit-identical. Run with --quick for a reduced
// problem size.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "afc/bloch.hpp"
#include "afc/comb.hpp"
#include "afc/pulse.hpp"
#include "afc/pumping.hpp"
#include "afc/spinline.hpp"

namespace {

double now_ms() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double, std::milli>(
               clock::now().time_since_epoch())
        .count();
}

template <class F>
double time_ms(F&& fn) {
    const double t0 = now_ms();
    fn();
    return now_ms() - t0;
}

bool same(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return false;
    return std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

void report(const char* name, double serial_ms, double parallel_ms,
            bool identical) {
    std::printf("%-28s serial %9.1f ms   openmp %9.1f ms   speedup %5.2fx   %s\n",
                name, serial_ms, parallel_ms, serial_ms / parallel_ms,
                identical ? "results identical" : "RESULTS DIFFER");
}

}  // namespace

int main(int argc, char** argv) {
    bool quick = false;
    for (int i = 1; i < argc; ++i)
        if (std::string(argv[i]) == "--quick") quick = true;

#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP; both paths are serial\n");
#endif

    // Monte-Carlo echo trace over the ion ensemble
    {
        const std::size_t n_ions = quick ? 20000 : 200000;
        const int n_times = quick ? 101 : 401;
        const auto ensemble = afc::SpinEnsemble::gaussian(0.73e6, n_ions, 7);
        const afc::EchoSchedule schedule{20e-6, 10e-6, 0.97, 1.2e-3};
        afc::EchoTrace a, b;
        const double ts = time_ms([&] {
            const auto pulses = schedule.pulse_times();
            std::vector<double> times(n_times);
            for (int i = 0; i < n_times; ++i)
                times[i] = 18e-6 + 4e-6 * i / (n_times - 1.0);
            a = afc::echo_trace_serial(ensemble, pulses, times, 0.97, 1.2e-3);
        });
        const double tp = time_ms([&] {
            const auto pulses = schedule.pulse_times();
            std::vector<double> times(n_times);
            for (int i = 0; i < n_times; ++i)
                times[i] = 18e-6 + 4e-6 * i / (n_times - 1.0);
            b = afc::echo_trace(ensemble, pulses, times, 0.97, 1.2e-3);
        });
        report("spin echo trace", ts, tp, same(a.intensity, b.intensity));
    }

    // Bloch transfer profile across the chirp band
    {
        const int n_det = quick ? 33 : 129;
        const auto pulse = afc::make_hsh(2.0e6, 5e-6, 10e6);
        std::vector<double> detunings(n_det);
        for (int i = 0; i < n_det; ++i)
            detunings[i] = -6e6 + 12e6 * i / (n_det - 1.0);
        afc::TransferProfile a, b;
        const double ts = time_ms(
            [&] { a = afc::transfer_profile_serial(pulse, detunings); });
        const double tp =
            time_ms([&] { b = afc::transfer_profile(pulse, detunings); });
        report("bloch transfer profile", ts, tp,
               same(a.transfer_prob, b.transfer_prob));
    }

    // optical pumping over the spectral-class grid
    {
        const double step = quick ? 2e6 : 0.5e6;
        afc::PumpConfig config;
        config.duration_s = quick ? 0.1 : 0.3;
        config.relaxation = afc::default_relaxation();
        for (int line = 2; line <= 4; ++line)
            config.beams.push_back({line, 5000.0, 20e6});
        const auto strengths = afc::default_strengths();
        auto a = afc::make_class_grid(60e6, step);
        auto b = a;
        const double ts = time_ms(
            [&] { afc::evolve_populations_serial(a, config, strengths); });
        const double tp =
            time_ms([&] { afc::evolve_populations(b, config, strengths); });
        bool identical = a.size() == b.size();
        for (std::size_t i = 0; identical && i < a.size(); ++i)
            identical = a[i].population == b[i].population;
        report("pump class evolution", ts, tp, identical);
    }

    // broadened-comb delay sweep through the Fourier oracle
    {
        const int n_delays = quick ? 8 : 24;
        std::vector<double> delays(n_delays);
        for (int i = 0; i < n_delays; ++i)
            delays[i] = 2e-6 + 8e-6 * i / (n_delays - 1.0);
        afc::BroadenedDecayResult a, b;
        const double ts = time_ms([&] {
            a = afc::broadened_comb_decay_serial(afc::ToothShape::lorentzian,
                                                 0.05e6, delays, 4.0, 0.0, 256);
        });
        const double tp = time_ms([&] {
            b = afc::broadened_comb_decay(afc::ToothShape::lorentzian, 0.05e6,
                                          delays, 4.0, 0.0, 256);
        });
        report("comb decay sweep", ts, tp, same(a.eta, b.eta));
    }

    return 0;
}

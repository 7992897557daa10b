// Compares the serial reference simulator against the OpenMP kernels and
// checks they produce identical estimates. Run manually:
//
//   ./cachenet_bench [drops]

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "cachenet/mc.hpp"
#include "cachenet/model.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace cachenet;

namespace {

template <class Fn>
double time_s(const Fn& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    return dt.count();
}

}  // namespace

int main(int argc, char** argv) {
    const std::int64_t drops = argc > 1 ? std::atoll(argv[1]) : 20000;

    MuTierConfig mu;
    mu.intercept = free_space_intercept(1e9);
    mu.noise_w = thermal_noise_w(1e7);
    MmTierConfig mm;
    mm.intercept = free_space_intercept(60e9);
    mm.noise_w = thermal_noise_w(1e9);

    const double phi_mu = sinr_threshold({4e5}, 1e7);
    const double phi_mm = sinr_threshold({4e5}, 1e9);

    McParams serial;
    serial.drops = drops;
    serial.seed = 1;
    serial.mode = ExecMode::Serial;
    McParams parallel = serial;
    parallel.mode = ExecMode::Parallel;

#ifdef _OPENMP
    std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
    std::printf("openmp: not enabled (parallel mode falls back to serial)\n");
#endif
    std::printf("drops: %lld\n\n", static_cast<long long>(drops));

    int mismatches = 0;
    const auto report = [&](const char* name, const McEstimate& s,
                            const McEstimate& p, double ts, double tp) {
        const bool same = s.mean == p.mean && s.std_error == p.std_error;
        if (!same) ++mismatches;
        std::printf("%-22s serial %8.3fs   parallel %8.3fs   speedup %5.2fx   %s\n",
                    name, ts, tp, ts / tp, same ? "identical" : "MISMATCH");
    };

    {
        McEstimate es, ep;
        const double ts =
            time_s([&] { es = simulate_scdp_mu(0.5, mu, phi_mu, serial); });
        const double tp =
            time_s([&] { ep = simulate_scdp_mu(0.5, mu, phi_mu, parallel); });
        report("mu b=0.5", es, ep, ts, tp);
    }
    {
        McEstimate es, ep;
        const double ts =
            time_s([&] { es = simulate_scdp_mu(1.0, mu, phi_mu, serial); });
        const double tp =
            time_s([&] { ep = simulate_scdp_mu(1.0, mu, phi_mu, parallel); });
        report("mu b=1.0", es, ep, ts, tp);
    }
    {
        McEstimate es, ep;
        const double ts =
            time_s([&] { es = simulate_scdp_mm(0.5, mm, phi_mm, serial); });
        const double tp =
            time_s([&] { ep = simulate_scdp_mm(0.5, mm, phi_mm, parallel); });
        report("mm b=0.5", es, ep, ts, tp);
    }

    return mismatches == 0 ? 0 : 1;
}

// bench — timings of the OpenMP-parallel kernels against the single-thread
// path, checking that both produce identical results.

#include "bistab/landscape.hpp"
#include "bistab/langevin.hpp"
#include "bistab/models.hpp"
#include "bistab/phasediag.hpp"
#include "bistab/varnorm.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace bistab;

namespace {

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

template <typename F>
double timed(F&& fn) {
    const double t0 = now_seconds();
    fn();
    return now_seconds() - t0;
}

void set_threads(int n) {
#ifdef _OPENMP
    omp_set_num_threads(n);
#else
    (void)n;
#endif
}

}  // namespace

int main(int argc, char** argv) {
    int max_threads = 2;
#ifdef _OPENMP
    max_threads = omp_get_max_threads();
#endif
    if (argc > 1) max_threads = std::atoi(argv[1]);

    std::printf("kernel, serial_s, parallel_s(%d threads), speedup, match\n", max_threads);

    {
        const NormEvaluator ev(build_ising(5.4, 5.0, 1.0));
        std::vector<Minimum> serial, parallel;
        set_threads(1);
        const double ts = timed([&] { serial = find_minima(ev); });
        set_threads(max_threads);
        const double tp = timed([&] { parallel = find_minima(ev); });
        bool match = serial.size() == parallel.size();
        for (std::size_t i = 0; match && i < serial.size(); ++i)
            match = std::abs(serial[i].f_v - parallel[i].f_v) < 1e-12;
        std::printf("ising multistart minima, %.3f, %.3f, %.2fx, %s\n", ts, tp, ts / tp,
                    match ? "yes" : "NO");
    }

    {
        const NormEvaluator ev(build_toom_classical(0.75, 0.0, 1.0));
        const auto minima = find_minima(ev);
        const FieldRotation rot = rotate_to_field(minima[0].alpha, minima[1].alpha);
        const double p1 = rot.phi_of(minima[0].alpha), p2 = rot.phi_of(minima[1].alpha);
        Profile f0s, f0p;
        set_threads(1);
        const double ts =
            timed([&] { f0s = effective_f0(ev, rot, default_phi_grid(p1, p2, 401)); });
        set_threads(max_threads);
        const double tp =
            timed([&] { f0p = effective_f0(ev, rot, default_phi_grid(p1, p2, 401)); });
        bool match = true;
        for (std::size_t i = 0; i < f0s.ys().size(); ++i)
            match = match && f0s.ys()[i] == f0p.ys()[i];
        std::printf("toom f0 profile (401 knots), %.3f, %.3f, %.2fx, %s\n", ts, tp, ts / tp,
                    match ? "yes" : "NO");

        const LangevinCoeffs lc =
            extract_coeffs(ev, rot, f0s, std::min(p1, p2), std::max(p1, p2));
        LangevinOptions lopt;
        lopt.t_max = 50.0;
        EnsembleStats s_serial, s_parallel;
        lopt.threads = 1;
        const double es = timed(
            [&] { s_serial = run_ensemble(lc, 20, 10, 32, 12345, lopt); });
        lopt.threads = max_threads;
        const double ep = timed(
            [&] { s_parallel = run_ensemble(lc, 20, 10, 32, 12345, lopt); });
        match = s_serial.stationary_mag == s_parallel.stationary_mag &&
                s_serial.retain_fraction == s_parallel.retain_fraction;
        std::printf("langevin ensemble (32 samples), %.3f, %.3f, %.2fx, %s\n", es, ep, es / ep,
                    match ? "yes" : "NO");
    }
    return 0;
}

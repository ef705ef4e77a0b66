// Timing comparison between the serial reference kernels and the
// OpenMP/early-exit paths: series evaluation batches and domain quadrature.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "wpc/beltrami.hpp"
#include "wpc/bergman.hpp"
#include "wpc/group.hpp"
#include "wpc/nets.hpp"
#include "wpc/quadrature.hpp"
#include "wpc/rng.hpp"

using namespace wpc;
namespace chrono = std::chrono;

static double ms_since(chrono::high_resolution_clock::time_point t0) {
    return chrono::duration<double, std::milli>(chrono::high_resolution_clock::now() - t0).count();
}

int main(int argc, char** argv) {
    const int L = argc > 1 ? std::atoi(argv[1]) : 5;
    const std::size_t npoints = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 2000;
    const std::size_t mc = argc > 3 ? std::strtoull(argv[3], nullptr, 10) : 200000;

#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (no OpenMP)\n");
#endif

    auto t0 = chrono::high_resolution_clock::now();
    const GroupPresentation pres = build_octagon_group();
    const GroupEnumeration e = enumerate_group(pres, L);
    std::printf("enumerate L=%d: %zu elements, %.1f ms\n", L, e.size(), ms_since(t0));

    ThetaPool pool(e, {disk_point({0.0, 0.0})});
    std::vector<complexd> zs(npoints);
    for (std::size_t j = 0; j < npoints; ++j) {
        zs[j] = uniform_hyperbolic_ball(2.4, 1234, j);
    }

    t0 = chrono::high_resolution_clock::now();
    complexd acc{0, 0};
    for (const complexd& z : zs) acc += theta_series_serial(pool, z).value;
    const double t_serial = ms_since(t0);
    std::printf("theta serial      : %8.1f ms  (%zu pts x %zu terms)  checksum %.12g\n", t_serial,
                npoints, pool.size(), std::abs(acc));

    std::vector<ThetaEval> out;
    t0 = chrono::high_resolution_clock::now();
    theta_series_batch(pool, zs, out, 0.0);
    const double t_par = ms_since(t0);
    complexd acc2{0, 0};
    for (const auto& v : out) acc2 += v.value;
    std::printf("theta omp         : %8.1f ms  speedup %.2fx  checksum %.12g\n", t_par,
                t_serial / t_par, std::abs(acc2));

    t0 = chrono::high_resolution_clock::now();
    theta_series_batch(pool, zs, out, 1e-9);
    const double t_cut = ms_since(t0);
    complexd acc3{0, 0};
    for (const auto& v : out) acc3 += v.value;
    std::printf("theta omp + cutoff: %8.1f ms  speedup %.2fx  checksum %.12g (eta 1e-9)\n", t_cut,
                t_serial / t_cut, std::abs(acc3));

    t0 = chrono::high_resolution_clock::now();
    const McEstimate area = integrate_domain(e, [](complexd) { return 1.0; }, mc, 99);
    std::printf("area quadrature   : %8.1f ms  (%zu proposals)  %.6f +- %.6f\n", ms_since(t0), mc,
                area.value, area.std_error);

    const auto bases = std::vector<SurfacePoint>{SurfacePoint{disk_point({0.0, 0.0})}};
    const BeltramiField field = make_field(e, bases, 4.0);
    t0 = chrono::high_resolution_clock::now();
    const McEstimate wp = wp_norm_squared(field, mc, 99);
    std::printf("wp norm quadrature: %8.1f ms  %.6f +- %.6f\n", ms_since(t0), wp.value,
                wp.std_error);
    return 0;
}

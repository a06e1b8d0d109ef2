// Throughput comparison of the phase-sweep kernels.

#include "slcp/kernels.hpp"
#include "slcp/rng.hpp"

#include <chrono>
#include <cstdio>
#include <vector>

using namespace slcp;

int main(int argc, char** argv) {
    const std::size_t n = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 1 << 16;
    const int reps = argc > 2 ? std::atoi(argv[2]) : 200;

    Rng rng(1);
    std::vector<double> gx(n), gy(n), hxx(n), hyy(n), hxy(n), k1(n), k2(n), F(n), G(n);
    for (std::size_t i = 0; i < n; ++i) {
        gx[i] = rng.uniform(-3, 3);
        gy[i] = rng.uniform(-3, 3);
        hxx[i] = rng.uniform(-6, 6);
        hyy[i] = rng.uniform(-6, 6);
        hxy[i] = rng.uniform(-4, 4);
    }

    auto bench = [&](kernels::PhaseSweepFn fn, const char* name) {
        // warmup
        fn(gx.data(), gy.data(), hxx.data(), hyy.data(), hxy.data(), n, 0.8, 2.0,
           k1.data(), k2.data(), F.data(), G.data());
        const auto t0 = std::chrono::steady_clock::now();
        for (int r = 0; r < reps; ++r)
            fn(gx.data(), gy.data(), hxx.data(), hyy.data(), hxy.data(), n, 0.8, 2.0,
               k1.data(), k2.data(), F.data(), G.data());
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%-8s %8.2f ns/node  (%zu nodes x %d reps, checksum %.6f)\n", name,
                    1e9 * secs / (static_cast<double>(n) * reps), n, reps, G[n / 2]);
    };

    bench(&kernels::phase_sweep_scalar, "scalar");
    if (kernels::avx2_available())
        bench(&kernels::phase_sweep_avx2, "avx2");
    else
        std::printf("avx2     unavailable on this host\n");
    return 0;
}

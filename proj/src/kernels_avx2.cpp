#include "slcp/kernels.hpp"

#include <cmath>
#include <immintrin.h>

namespace slcp::kernels {

namespace {

// atan/exp have no AVX2 instruction; evaluate lanes through libm so the
// transcendental steps match the scalar kernel bit for bit.
inline __m256d atan4(__m256d v) {
    alignas(32) double t[4];
    _mm256_store_pd(t, v);
    t[0] = std::atan(t[0]);
    t[1] = std::atan(t[1]);
    t[2] = std::atan(t[2]);
    t[3] = std::atan(t[3]);
    return _mm256_load_pd(t);
}

inline __m256d negexp4(__m256d v) {
    alignas(32) double t[4];
    _mm256_store_pd(t, v);
    t[0] = -std::exp(-t[0]);
    t[1] = -std::exp(-t[1]);
    t[2] = -std::exp(-t[2]);
    t[3] = -std::exp(-t[3]);
    return _mm256_load_pd(t);
}

} // namespace

void phase_sweep_avx2(const double* gx, const double* gy,
                      const double* hxx, const double* hyy, const double* hxy,
                      std::size_t count, double tScale, double aParam,
                      double* kappa1, double* kappa2, double* F, double* G) {
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d half_ = _mm256_set1_pd(0.5);
    const __m256d ts = _mm256_set1_pd(tScale);
    const __m256d ap = _mm256_set1_pd(aParam);

    std::size_t k = 0;
    for (; k + 4 <= count; k += 4) {
        const __m256d px = _mm256_mul_pd(ts, _mm256_loadu_pd(gx + k));
        const __m256d py = _mm256_mul_pd(ts, _mm256_loadu_pd(gy + k));
        const __m256d a = _mm256_loadu_pd(hxx + k);
        const __m256d b = _mm256_loadu_pd(hxy + k);
        const __m256d c = _mm256_loadu_pd(hyy + k);

        const __m256d w2 = _mm256_add_pd(one, _mm256_add_pd(_mm256_mul_pd(px, px), _mm256_mul_pd(py, py)));
        const __m256d w = _mm256_sqrt_pd(w2);
        const __m256d c1 = _mm256_mul_pd(w, _mm256_add_pd(one, w));
        const __m256d c2 = _mm256_mul_pd(c1, c1);

        const __m256d hpx = _mm256_add_pd(_mm256_mul_pd(a, px), _mm256_mul_pd(b, py));
        const __m256d hpy = _mm256_add_pd(_mm256_mul_pd(b, px), _mm256_mul_pd(c, py));
        const __m256d php = _mm256_add_pd(_mm256_mul_pd(px, hpx), _mm256_mul_pd(py, hpy));

        const __m256d pxhpx = _mm256_mul_pd(px, hpx);
        const __m256d pyhpy = _mm256_mul_pd(py, hpy);
        const __m256d a11 = _mm256_div_pd(
            _mm256_add_pd(_mm256_sub_pd(a, _mm256_div_pd(_mm256_add_pd(pxhpx, pxhpx), c1)),
                          _mm256_div_pd(_mm256_mul_pd(_mm256_mul_pd(px, px), php), c2)),
            w);
        const __m256d a12 = _mm256_div_pd(
            _mm256_add_pd(_mm256_sub_pd(b, _mm256_div_pd(_mm256_add_pd(_mm256_mul_pd(px, hpy), _mm256_mul_pd(py, hpx)), c1)),
                          _mm256_div_pd(_mm256_mul_pd(_mm256_mul_pd(px, py), php), c2)),
            w);
        const __m256d a22 = _mm256_div_pd(
            _mm256_add_pd(_mm256_sub_pd(c, _mm256_div_pd(_mm256_add_pd(pyhpy, pyhpy), c1)),
                          _mm256_div_pd(_mm256_mul_pd(_mm256_mul_pd(py, py), php), c2)),
            w);

        const __m256d mean = _mm256_mul_pd(half_, _mm256_add_pd(a11, a22));
        const __m256d halfd = _mm256_mul_pd(half_, _mm256_sub_pd(a11, a22));
        const __m256d rad = _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(halfd, halfd), _mm256_mul_pd(a12, a12)));
        const __m256d k1 = _mm256_add_pd(mean, rad);
        const __m256d k2 = _mm256_sub_pd(mean, rad);

        const __m256d f = _mm256_add_pd(atan4(k1), atan4(k2));
        _mm256_storeu_pd(kappa1 + k, k1);
        _mm256_storeu_pd(kappa2 + k, k2);
        _mm256_storeu_pd(F + k, f);
        _mm256_storeu_pd(G + k, negexp4(_mm256_mul_pd(ap, f)));
    }
    if (k < count) {
        phase_sweep_scalar(gx + k, gy + k, hxx + k, hyy + k, hxy + k,
                           count - k, tScale, aParam,
                           kappa1 + k, kappa2 + k, F + k, G + k);
    }
}

} // namespace slcp::kernels

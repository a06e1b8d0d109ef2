#include "slcp/kernels.hpp"
#include "slcp/errors.hpp"

namespace slcp::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(SLCP_HAVE_AVX2_BUILD) && defined(__x86_64__)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Backend& backend_slot() {
    static Backend b = cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
    return b;
}

} // namespace

#if !defined(SLCP_HAVE_AVX2_BUILD)
void phase_sweep_avx2(const double*, const double*, const double*, const double*, const double*,
                      std::size_t, double, double, double*, double*, double*, double*) {
    throw Error("AVX2 kernel not built for this target");
}
#endif

bool avx2_available() { return cpu_has_avx2(); }

Backend active_backend() { return backend_slot(); }

std::string backend_name() {
    return backend_slot() == Backend::avx2 ? "avx2" : "scalar";
}

void set_backend(Backend b) {
    if (b == Backend::avx2 && !avx2_available())
        throw Error("AVX2 backend unavailable");
    backend_slot() = b;
}

void phase_sweep(const double* gx, const double* gy,
                 const double* hxx, const double* hyy, const double* hxy,
                 std::size_t count, double tScale, double aParam,
                 double* kappa1, double* kappa2, double* F, double* G) {
    if (backend_slot() == Backend::avx2)
        phase_sweep_avx2(gx, gy, hxx, hyy, hxy, count, tScale, aParam, kappa1, kappa2, F, G);
    else
        phase_sweep_scalar(gx, gy, hxx, hyy, hxy, count, tScale, aParam, kappa1, kappa2, F, G);
}

} // namespace slcp::kernels

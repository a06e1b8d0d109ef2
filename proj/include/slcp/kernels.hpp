#pragma once

#include <cstddef>
#include <string>

namespace slcp::kernels {

// Batched pointwise evaluation of the transformed curvature operator for
// n = 2. Inputs are raw central-difference values per node (SoA); the
// gradient slot is scaled by tScale inside the kernel. Outputs per node:
// the two principal curvatures (descending), the phase sum
// F = atan(k1) + atan(k2) and the operator value G = -exp(-aParam * F).
//
// The scalar kernel is the reference; the AVX2 kernel applies the same
// operation sequence four nodes at a time and must agree to rounding level.
using PhaseSweepFn = void (*)(const double* gx, const double* gy,
                              const double* hxx, const double* hyy, const double* hxy,
                              std::size_t count, double tScale, double aParam,
                              double* kappa1, double* kappa2, double* F, double* G);

void phase_sweep_scalar(const double* gx, const double* gy,
                        const double* hxx, const double* hyy, const double* hxy,
                        std::size_t count, double tScale, double aParam,
                        double* kappa1, double* kappa2, double* F, double* G);

void phase_sweep_avx2(const double* gx, const double* gy,
                      const double* hxx, const double* hyy, const double* hxy,
                      std::size_t count, double tScale, double aParam,
                      double* kappa1, double* kappa2, double* F, double* G);

enum class Backend { scalar, avx2 };

// True when the binary carries the AVX2 kernel and the CPU supports it.
bool avx2_available();

Backend active_backend();
std::string backend_name();

// Force a backend (used by equivalence tests); throws if unavailable.
void set_backend(Backend b);

// Dispatched entry point.
void phase_sweep(const double* gx, const double* gy,
                 const double* hxx, const double* hyy, const double* hxy,
                 std::size_t count, double tScale, double aParam,
                 double* kappa1, double* kappa2, double* F, double* G);

} // namespace slcp::kernels

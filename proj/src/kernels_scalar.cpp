#include "slcp/kernels.hpp"

#include <cmath>

namespace slcp::kernels {

// Reference kernel. The AVX2 variant mirrors this operation sequence
// exactly; keep the two in sync when touching either.
void phase_sweep_scalar(const double* gx, const double* gy,
                        const double* hxx, const double* hyy, const double* hxy,
                        std::size_t count, double tScale, double aParam,
                        double* kappa1, double* kappa2, double* F, double* G) {
    for (std::size_t k = 0; k < count; ++k) {
        const double px = tScale * gx[k];
        const double py = tScale * gy[k];
        const double a = hxx[k];
        const double b = hxy[k];
        const double c = hyy[k];

        const double w2 = 1.0 + (px * px + py * py);
        const double w = std::sqrt(w2);
        const double c1 = w * (1.0 + w);
        const double c2 = c1 * c1;

        const double hpx = a * px + b * py;
        const double hpy = b * px + c * py;
        const double php = px * hpx + py * hpy;

        const double a11 = (a - (px * hpx + px * hpx) / c1 + (px * px) * php / c2) / w;
        const double a12 = (b - (px * hpy + py * hpx) / c1 + (px * py) * php / c2) / w;
        const double a22 = (c - (py * hpy + py * hpy) / c1 + (py * py) * php / c2) / w;

        const double mean = 0.5 * (a11 + a22);
        const double half = 0.5 * (a11 - a22);
        const double rad = std::sqrt(half * half + a12 * a12);
        const double k1 = mean + rad;
        const double k2 = mean - rad;

        const double f = std::atan(k1) + std::atan(k2);
        kappa1[k] = k1;
        kappa2[k] = k2;
        F[k] = f;
        G[k] = -std::exp(-aParam * f);
    }
}

} // namespace slcp::kernels

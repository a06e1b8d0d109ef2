#include "slcp/smalldense.hpp"
#include "slcp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace slcp {

SymMatrix::SymMatrix(int n) : n_(n) {
    if (n < 1 || n > 4) throw Error("SymMatrix dimension must be in [1,4]");
    packed_.fill(0.0);
}

SymMatrix SymMatrix::identity(int n) {
    SymMatrix m(n);
    for (int i = 0; i < n; ++i) m.set(i, i, 1.0);
    return m;
}

SymMatrix SymMatrix::diag(int n, const std::array<double, 4>& d) {
    SymMatrix m(n);
    for (int i = 0; i < n; ++i) m.set(i, i, d[static_cast<std::size_t>(i)]);
    return m;
}

int SymMatrix::index(int i, int j) const {
    if (i > j) std::swap(i, j);
    // packed upper triangle row-major: offset of row i is i*n - i(i-1)/2
    return i * n_ - (i * (i - 1)) / 2 + (j - i);
}

bool SymMatrix::finite() const {
    for (int i = 0; i < n_; ++i)
        for (int j = i; j < n_; ++j)
            if (!std::isfinite((*this)(i, j))) return false;
    return true;
}

double SymMatrix::max_abs() const {
    double m = 0.0;
    for (int i = 0; i < n_; ++i)
        for (int j = i; j < n_; ++j)
            m = std::max(m, std::fabs((*this)(i, j)));
    return m;
}

double SymMatrix::trace() const {
    double t = 0.0;
    for (int i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
}

namespace {

double det3(double a00, double a01, double a02,
            double a10, double a11, double a12,
            double a20, double a21, double a22) {
    return a00 * (a11 * a22 - a12 * a21)
         - a01 * (a10 * a22 - a12 * a20)
         + a02 * (a10 * a21 - a11 * a20);
}

} // namespace

double SymMatrix::det() const {
    const SymMatrix& m = *this;
    switch (n_) {
    case 1: return m(0, 0);
    case 2: return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    case 3:
        return det3(m(0,0), m(0,1), m(0,2),
                    m(1,0), m(1,1), m(1,2),
                    m(2,0), m(2,1), m(2,2));
    case 4: {
        double d = 0.0;
        for (int j = 0; j < 4; ++j) {
            double sub[3][3];
            for (int r = 1; r < 4; ++r) {
                int cc = 0;
                for (int c = 0; c < 4; ++c) {
                    if (c == j) continue;
                    sub[r - 1][cc++] = m(r, c);
                }
            }
            double minor = det3(sub[0][0], sub[0][1], sub[0][2],
                                sub[1][0], sub[1][1], sub[1][2],
                                sub[2][0], sub[2][1], sub[2][2]);
            d += ((j % 2 == 0) ? 1.0 : -1.0) * m(0, j) * minor;
        }
        return d;
    }
    default: throw Error("SymMatrix::det unsupported dimension");
    }
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& o) {
    if (o.n_ != n_) throw Error("SymMatrix dimension mismatch");
    for (std::size_t k = 0; k < packed_.size(); ++k) packed_[k] += o.packed_[k];
    return *this;
}

SymMatrix& SymMatrix::operator*=(double s) {
    for (double& v : packed_) v *= s;
    return *this;
}

EigenPair sym_eigen(const SymMatrix& m) {
    const int n = m.dim();
    if (n < 1) throw Error("sym_eigen: empty matrix");
    if (!m.finite()) throw NonFinite("sym_eigen");

    double a[4][4] = {};
    double q[4][4] = {};
    for (int i = 0; i < n; ++i) {
        q[i][i] = 1.0;
        for (int j = 0; j < n; ++j) a[i][j] = m(i, j);
    }

    const double target = 1e-14;
    const int max_sweeps = 50;
    for (int sweep = 0; sweep < max_sweeps && n > 1; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int r = p + 1; r < n; ++r) off += 2.0 * a[p][r] * a[p][r];
        if (std::sqrt(off) <= target) break;

        bool rotated = false;
        for (int p = 0; p < n - 1; ++p) {
            for (int r = p + 1; r < n; ++r) {
                const double apr = a[p][r];
                // skip rotations already at rounding level
                if (std::fabs(apr) <= 1e-300) continue;
                if (std::fabs(apr) <= 1e-17 * (std::fabs(a[p][p]) + std::fabs(a[r][r]))) continue;
                rotated = true;
                const double theta = (a[r][r] - a[p][p]) / (2.0 * apr);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                a[p][p] -= t * apr;
                a[r][r] += t * apr;
                a[p][r] = 0.0;
                a[r][p] = 0.0;
                for (int k = 0; k < n; ++k) {
                    if (k != p && k != r) {
                        const double akp = a[k][p], akr = a[k][r];
                        a[k][p] = a[p][k] = akp - s * (akr + tau * akp);
                        a[k][r] = a[r][k] = akr + s * (akp - tau * akr);
                    }
                    const double qkp = q[k][p], qkr = q[k][r];
                    q[k][p] = qkp - s * (qkr + tau * qkp);
                    q[k][r] = qkr + s * (qkp - tau * qkr);
                }
            }
        }
        if (!rotated) break;
    }

    EigenPair ep;
    ep.n = n;
    std::array<int, 4> order{0, 1, 2, 3};
    std::sort(order.begin(), order.begin() + n,
              [&](int i, int j) { return a[i][i] > a[j][j]; });
    for (int k = 0; k < n; ++k) {
        const int src = order[static_cast<std::size_t>(k)];
        ep.values[static_cast<std::size_t>(k)] = a[src][src];
        // canonical sign: largest-magnitude component positive
        int imax = 0;
        for (int i = 1; i < n; ++i)
            if (std::fabs(q[i][src]) > std::fabs(q[imax][src])) imax = i;
        const double sgn = q[imax][src] < 0 ? -1.0 : 1.0;
        for (int i = 0; i < n; ++i)
            ep.vectors[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] = sgn * q[i][src];
    }
    return ep;
}

SymMatrix eigen_reconstruct(const EigenPair& ep) {
    SymMatrix m(ep.n);
    for (int i = 0; i < ep.n; ++i) {
        for (int j = i; j < ep.n; ++j) {
            double s = 0.0;
            for (int k = 0; k < ep.n; ++k)
                s += ep.values[static_cast<std::size_t>(k)] *
                     ep.vectors[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] *
                     ep.vectors[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
            m.set(i, j, s);
        }
    }
    return m;
}

std::vector<double> arrow_eigen_reference(const std::vector<double>& d,
                                          const std::vector<double>& offdiag,
                                          double a) {
    if (d.size() != offdiag.size()) throw Error("arrow_eigen_reference: size mismatch");
    double dmax = 0.0;
    for (double v : d) dmax = std::max(dmax, std::fabs(v));
    for (double v : offdiag) dmax = std::max(dmax, std::fabs(v));
    if (a <= 2.0 * dmax)
        throw DegenerateArrow("corner entry must dominate the fixed block");
    std::vector<double> lam(d.size() + 1);
    for (std::size_t i = 0; i < d.size(); ++i) lam[i] = d[i];
    lam.back() = a;
    return lam;
}

SymMatrix arrow_matrix(const std::vector<double>& d,
                       const std::vector<double>& offdiag,
                       double a) {
    const int n = static_cast<int>(d.size()) + 1;
    SymMatrix m(n);
    for (int i = 0; i + 1 < n; ++i) {
        m.set(i, i, d[static_cast<std::size_t>(i)]);
        m.set(i, n - 1, offdiag[static_cast<std::size_t>(i)]);
    }
    m.set(n - 1, n - 1, a);
    return m;
}

SparseSystem::SparseSystem(int n) : n_(n), rows_(static_cast<std::size_t>(n)), rhs_(static_cast<std::size_t>(n), 0.0) {
    if (n < 1) throw Error("SparseSystem: size must be positive");
}

void SparseSystem::add(int row, int col, double v) {
    if (row < 0 || row >= n_ || col < 0 || col >= n_)
        throw Error("SparseSystem::add index out of range");
    rows_[static_cast<std::size_t>(row)].push_back({col, v});
    finalized_ = false;
}

void SparseSystem::finalize() {
    for (auto& row : rows_) {
        std::sort(row.begin(), row.end(), [](const Entry& a, const Entry& b) { return a.col < b.col; });
        std::size_t w = 0;
        for (std::size_t r = 0; r < row.size(); ++r) {
            if (w > 0 && row[w - 1].col == row[r].col) {
                row[w - 1].val += row[r].val;
            } else {
                row[w++] = row[r];
            }
        }
        row.resize(w);
    }
    finalized_ = true;
}

double SparseSystem::multiply_row(int row, const std::vector<double>& x) const {
    double s = 0.0;
    for (const Entry& e : rows_[static_cast<std::size_t>(row)])
        s += e.val * x[static_cast<std::size_t>(e.col)];
    return s;
}

double SparseSystem::diagonal(int row) const {
    double s = 0.0;
    for (const Entry& e : rows_[static_cast<std::size_t>(row)])
        if (e.col == row) s += e.val;
    return s;
}

namespace {

// Banded LU with partial pivoting, LAPACK-style storage. For band (kl, ku)
// the working array holds 2*kl+ku+1 rows; entry (i, j) lives at
// ab[kl + ku + i - j][j].
class BandedLU {
public:
    BandedLU(int n, int kl, int ku)
        : n_(n), kl_(kl), ku_(ku), ldab_(2 * kl + ku + 1),
          ab_(static_cast<std::size_t>(ldab_) * static_cast<std::size_t>(n), 0.0),
          piv_(static_cast<std::size_t>(n), 0) {}

    double& at(int i, int j) { return ab_[static_cast<std::size_t>(kl_ + ku_ + i - j) + static_cast<std::size_t>(j) * static_cast<std::size_t>(ldab_)]; }

    void factor() {
        const int kv = kl_ + ku_; // width of fill above the diagonal
        for (int j = 0; j < n_; ++j) {
            const int km = std::min(kl_, n_ - 1 - j); // depth of the column below diagonal
            // pivot search in column j (contiguous in the band layout)
            double* colj = col(j);
            const int dj = kl_ + ku_; // offset of the diagonal within a column
            int ip = 0;
            double pmax = std::fabs(colj[dj]);
            for (int i = 1; i <= km; ++i) {
                const double v = std::fabs(colj[dj + i]);
                if (v > pmax) { pmax = v; ip = i; }
            }
            piv_[static_cast<std::size_t>(j)] = j + ip;
            if (pmax == 0.0) throw SolveFailed("zero pivot in banded factorization");
            const int jmax = std::min(n_ - 1, j + kv); // last column touched by this step
            if (ip != 0) {
                for (int c = j; c <= jmax; ++c) {
                    double* cc = col(c);
                    std::swap(cc[kl_ + ku_ + j - c], cc[kl_ + ku_ + j - c + ip]);
                }
            }
            // scale the pivot column, then rank-1 update column by column
            const double diag = colj[dj];
            for (int i = 1; i <= km; ++i) colj[dj + i] /= diag;
            for (int c = j + 1; c <= jmax; ++c) {
                double* cc = col(c) + (kl_ + ku_ + j - c);
                const double ajc = cc[0];
                if (ajc != 0.0)
                    for (int i = 1; i <= km; ++i) cc[i] -= colj[dj + i] * ajc;
            }
        }
    }

    void solve(std::vector<double>& b) const {
        // forward substitution with row swaps (column-oriented)
        for (int j = 0; j < n_; ++j) {
            const int ip = piv_[static_cast<std::size_t>(j)];
            if (ip != j) std::swap(b[static_cast<std::size_t>(j)], b[static_cast<std::size_t>(ip)]);
            const int km = std::min(kl_, n_ - 1 - j);
            const double bj = b[static_cast<std::size_t>(j)];
            const double* colj = ccol(j) + kl_ + ku_;
            for (int i = 1; i <= km; ++i)
                b[static_cast<std::size_t>(j) + static_cast<std::size_t>(i)] -= colj[i] * bj;
        }
        // back substitution (column-oriented)
        const int kv = kl_ + ku_;
        for (int j = n_ - 1; j >= 0; --j) {
            const double* colj = ccol(j) + kl_ + ku_;
            b[static_cast<std::size_t>(j)] /= colj[0];
            const double bj = b[static_cast<std::size_t>(j)];
            const int itop = std::max(0, j - kv);
            for (int i = itop; i < j; ++i)
                b[static_cast<std::size_t>(i)] -= colj[i - j] * bj;
        }
    }

private:
    double* col(int j) { return ab_.data() + static_cast<std::size_t>(j) * static_cast<std::size_t>(ldab_); }
    const double* ccol(int j) const { return ab_.data() + static_cast<std::size_t>(j) * static_cast<std::size_t>(ldab_); }
    int n_, kl_, ku_, ldab_;
    std::vector<double> ab_;
    std::vector<int> piv_;
};

} // namespace

std::vector<double> sparse_solve(const SparseSystem& s) {
    SparseSystem sys = s;
    if (!sys.finalized()) sys.finalize();
    const int n = sys.size();

    int kl = 0, ku = 0;
    for (int i = 0; i < n; ++i) {
        bool has_diag = false;
        for (const auto& e : sys.rows_[static_cast<std::size_t>(i)]) {
            if (!std::isfinite(e.val)) throw NonFinite("sparse matrix entry");
            if (e.col == i && e.val != 0.0) has_diag = true;
            if (e.col < i) kl = std::max(kl, i - e.col);
            if (e.col > i) ku = std::max(ku, e.col - i);
        }
        if (!has_diag) throw SolveFailed("row " + std::to_string(i) + " has no nonzero diagonal entry");
    }

    BandedLU lu(n, kl, ku);
    for (int i = 0; i < n; ++i)
        for (const auto& e : sys.rows_[static_cast<std::size_t>(i)]) lu.at(i, e.col) += e.val;
    lu.factor();

    std::vector<double> x(sys.rhs_);
    lu.solve(x);

    // residual contract, with one refinement pass as backup
    double bnorm = 0.0;
    for (double v : sys.rhs_) bnorm += v * v;
    bnorm = std::sqrt(bnorm);
    auto residual = [&](const std::vector<double>& xs) {
        double r2 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double r = sys.multiply_row(i, xs) - sys.rhs_[static_cast<std::size_t>(i)];
            r2 += r * r;
        }
        return std::sqrt(r2);
    };
    const double tol = 1e-10;
    double rel = residual(x) / (bnorm > 0 ? bnorm : 1.0);
    if (rel > tol) {
        std::vector<double> r(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            r[static_cast<std::size_t>(i)] = sys.rhs_[static_cast<std::size_t>(i)] - sys.multiply_row(i, x);
        lu.solve(r);
        for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] += r[static_cast<std::size_t>(i)];
        rel = residual(x) / (bnorm > 0 ? bnorm : 1.0);
        if (rel > tol)
            throw SolveFailed("residual " + std::to_string(rel) + " above contract");
    }
    for (double v : x)
        if (!std::isfinite(v)) throw SolveFailed("non-finite solution");
    return x;
}

} // namespace slcp

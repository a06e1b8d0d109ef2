#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace slcp {

// Symmetric n x n matrix, 1 <= n <= 4, packed upper-triangle storage so the
// symmetry invariant holds by construction.
class SymMatrix {
public:
    SymMatrix() : n_(0) { packed_.fill(0.0); }
    explicit SymMatrix(int n);
    static SymMatrix identity(int n);
    static SymMatrix diag(int n, const std::array<double, 4>& d);

    int dim() const { return n_; }

    double operator()(int i, int j) const { return packed_[index(i, j)]; }
    void set(int i, int j, double v) { packed_[index(i, j)] = v; }
    void add(int i, int j, double v) { packed_[index(i, j)] += v; }

    bool finite() const;
    double max_abs() const;
    double trace() const;
    // cofactor-expansion determinant, n <= 4
    double det() const;

    SymMatrix& operator+=(const SymMatrix& o);
    SymMatrix& operator*=(double s);
    friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
    friend SymMatrix operator*(SymMatrix a, double s) { return a *= s; }
    friend SymMatrix operator*(double s, SymMatrix a) { return a *= s; }

private:
    int index(int i, int j) const;
    int n_;
    std::array<double, 10> packed_; // upper triangle, row-major
};

struct EigenPair {
    int n = 0;
    std::array<double, 4> values{};               // sorted descending
    std::array<std::array<double, 4>, 4> vectors{}; // vectors[k] = k-th eigenvector
};

// Cyclic Jacobi diagonalization. Values sorted descending, vectors orthonormal.
EigenPair sym_eigen(const SymMatrix& m);

// Rebuild Q diag(values) Q^T; used by tests and consistency checks.
SymMatrix eigen_reconstruct(const EigenPair& ep);

// Predicted eigenvalues of the arrow matrix
//   [ diag(d)    offdiag ]
//   [ offdiag^T     a    ]
// in the large-a regime: lambda_alpha ~ d_alpha, lambda_n ~ a. Throws
// DegenerateArrow when a is not dominant enough for the estimate to mean
// anything.
std::vector<double> arrow_eigen_reference(const std::vector<double>& d,
                                          const std::vector<double>& offdiag,
                                          double a);

// Assemble the full arrow matrix for comparison against sym_eigen.
SymMatrix arrow_matrix(const std::vector<double>& d,
                       const std::vector<double>& offdiag,
                       double a);

// General sparse system in compressed-row form, solved by conversion to a
// banded layout and direct LU with partial pivoting.
class SparseSystem {
public:
    explicit SparseSystem(int n);

    int size() const { return n_; }
    void add(int row, int col, double v);
    void set_rhs(int row, double v) { rhs_[row] = v; }
    double rhs(int row) const { return rhs_[row]; }

    // finalize row storage (sorts and merges duplicate column entries)
    void finalize();
    bool finalized() const { return finalized_; }

    double multiply_row(int row, const std::vector<double>& x) const;
    double diagonal(int row) const;

private:
    friend std::vector<double> sparse_solve(const SparseSystem& s);
    struct Entry { int col; double val; };
    int n_;
    bool finalized_ = false;
    std::vector<std::vector<Entry>> rows_;
    std::vector<double> rhs_;
};

// Direct banded-LU solve with partial pivoting and a residual contract of
// ||Ax-b||_2 / ||b||_2 <= 1e-10 (one refinement pass if the first factor
// solve misses it). Throws SolveFailed on singular systems or when the
// contract cannot be met.
std::vector<double> sparse_solve(const SparseSystem& s);

} // namespace slcp

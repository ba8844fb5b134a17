#pragma once
#include <Eigen/Dense>
#include <vector>

#include "rgeo/dual.hpp"

namespace rgeo {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Rank-3 / rank-4 arrays in row-major flat storage.
struct Tensor3 {
    int n = 0;
    std::vector<double> a;
    Tensor3() = default;
    explicit Tensor3(int dim) : n(dim), a(static_cast<size_t>(dim) * dim * dim, 0.0) {}
    double& operator()(int i, int j, int k) { return a[(static_cast<size_t>(i) * n + j) * n + k]; }
    double operator()(int i, int j, int k) const { return a[(static_cast<size_t>(i) * n + j) * n + k]; }
};

struct Tensor4 {
    int n = 0;
    std::vector<double> a;
    Tensor4() = default;
    explicit Tensor4(int dim) : n(dim), a(static_cast<size_t>(dim) * dim * dim * dim, 0.0) {}
    double& operator()(int i, int j, int k, int l) {
        return a[((static_cast<size_t>(i) * n + j) * n + k) * n + l];
    }
    double operator()(int i, int j, int k, int l) const {
        return a[((static_cast<size_t>(i) * n + j) * n + k) * n + l];
    }
    double max_abs() const {
        double m = 0.0;
        for (double x : a) m = std::max(m, std::abs(x));
        return m;
    }
};

// Contract a rank-4 tensor with four vectors.
inline double contract4(const Tensor4& R, const VectorXd& x, const VectorXd& y,
                        const VectorXd& z, const VectorXd& w) {
    const int n = R.n;
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        if (x[i] == 0.0) continue;
        for (int j = 0; j < n; ++j) {
            if (y[j] == 0.0) continue;
            for (int k = 0; k < n; ++k) {
                if (z[k] == 0.0) continue;
                double acc = 0.0;
                for (int l = 0; l < n; ++l) acc += R(i, j, k, l) * w[l];
                s += x[i] * y[j] * z[k] * acc;
            }
        }
    }
    return s;
}

// Orthonormal basis of the column span (SVD, relative threshold).
MatrixXd orthonormal_span(const MatrixXd& A, double rel_tol = 1e-10);

// Orthonormal basis of the nullspace of A (columns).
MatrixXd nullspace(const MatrixXd& A, double rel_tol = 1e-8);

// Principal angles between the column spans of two matrices (ascending).
VectorXd principal_angles(const MatrixXd& A, const MatrixXd& B);

// Gram-Schmidt against the columns of B under inner product G; returns the
// G-orthonormalized component of v orthogonal to span(B), or a zero vector
// if v is numerically inside the span.
VectorXd g_orthogonalize(const VectorXd& v, const MatrixXd& B, const MatrixXd& G);

// G-orthonormal basis completing the columns of B to all of R^n.
MatrixXd g_orthonormal_complement(const MatrixXd& B, const MatrixXd& G);

// Least-squares slope of log|y| vs log x, skipping non-positive y.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// Solve A x = b for SPD A with Dual2 scalars (Cholesky, no pivoting).
void solve_spd_dual(std::vector<Dual2>& A, std::vector<Dual2>& b, int n);

// 64-bit FNV-1a hash of a string (deterministic across platforms).
std::uint64_t fnv1a(const std::string& s);

}  // namespace rgeo

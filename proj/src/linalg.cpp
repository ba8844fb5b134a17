#include "rgeo/linalg.hpp"

#include <cmath>
#include <cstdint>
#include <string>

#include <Eigen/SVD>

namespace rgeo {

MatrixXd orthonormal_span(const MatrixXd& A, double rel_tol) {
    if (A.cols() == 0) return MatrixXd(A.rows(), 0);
    Eigen::JacobiSVD<MatrixXd> svd(A, Eigen::ComputeThinU);
    double smax = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
    int r = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()[i] > rel_tol * smax) ++r;
    return svd.matrixU().leftCols(r);
}

MatrixXd nullspace(const MatrixXd& A, double rel_tol) {
    Eigen::JacobiSVD<MatrixXd> svd(A, Eigen::ComputeFullV);
    double smax = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
    int r = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()[i] > rel_tol * std::max(smax, 1e-300)) ++r;
    return svd.matrixV().rightCols(A.cols() - r);
}

VectorXd principal_angles(const MatrixXd& A, const MatrixXd& B) {
    MatrixXd Qa = orthonormal_span(A), Qb = orthonormal_span(B);
    int k = std::min(Qa.cols(), Qb.cols());
    if (k == 0) return VectorXd(0);
    Eigen::JacobiSVD<MatrixXd> svd(Qa.transpose() * Qb);
    VectorXd ang(k);
    for (int i = 0; i < k; ++i) {
        double c = std::min(1.0, std::max(-1.0, svd.singularValues()[i]));
        ang[i] = std::acos(c);
    }
    return ang;
}

VectorXd g_orthogonalize(const VectorXd& v, const MatrixXd& B, const MatrixXd& G) {
    VectorXd w = v;
    // two passes of modified Gram-Schmidt for stability
    for (int pass = 0; pass < 2; ++pass)
        for (int c = 0; c < B.cols(); ++c) {
            const VectorXd b = B.col(c);
            double nb = b.dot(G * b);
            if (nb <= 0) continue;
            w -= (w.dot(G * b) / nb) * b;
        }
    double nw = std::sqrt(std::max(0.0, w.dot(G * w)));
    if (nw < 1e-10 * std::max(1.0, std::sqrt(v.dot(G * v)))) return VectorXd::Zero(v.size());
    return w / nw;
}

MatrixXd g_orthonormal_complement(const MatrixXd& B, const MatrixXd& G) {
    const int n = static_cast<int>(G.rows());
    MatrixXd out(n, 0);
    MatrixXd have = B;
    for (int i = 0; i < n && have.cols() < n; ++i) {
        VectorXd w = g_orthogonalize(VectorXd::Unit(n, i), have, G);
        if (w.isZero(0)) continue;
        have.conservativeResize(n, have.cols() + 1);
        have.col(have.cols() - 1) = w;
        out.conservativeResize(n, out.cols() + 1);
        out.col(out.cols() - 1) = w;
    }
    return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        if (!(y[i] > 0.0) || !(x[i] > 0.0)) continue;
        double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
        ++m;
    }
    if (m < 2) return 0.0;
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

void solve_spd_dual(std::vector<Dual2>& A, std::vector<Dual2>& b, int n) {
    // in-place LDL^T without pivoting; A is SPD by construction
    auto at = [&](int i, int j) -> Dual2& { return A[static_cast<size_t>(i) * n + j]; };
    for (int k = 0; k < n; ++k) {
        for (int i = k + 1; i < n; ++i) {
            Dual2 f = at(i, k) / at(k, k);
            for (int j = k + 1; j < n; ++j) at(i, j) -= f * at(k, j);
            b[i] -= f * b[k];
            at(i, k) = f;
        }
    }
    for (int i = n - 1; i >= 0; --i) {
        Dual2 s = b[i];
        for (int j = i + 1; j < n; ++j) s -= at(i, j) * b[j];
        b[i] = s / at(i, i);
    }
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace rgeo

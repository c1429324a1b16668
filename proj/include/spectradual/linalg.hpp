#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <vector>

namespace spectradual {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kRankTol = 1e-10;  // relative singular value cutoff

namespace linalg {

/**
 * @brief Orthonormal basis (columns) of the null space of M.
 *
 * Singular values below kRankTol times the largest one count as zero.
 */
inline Mat null_space(const Mat& M, long cols) {
    if (M.rows() == 0 || M.size() == 0) return Mat::Identity(cols, cols);
    Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    double smax = s.size() ? s(0) : 0.0;
    long rank = 0;
    for (long i = 0; i < s.size(); ++i)
        if (smax > 0 && s(i) > kRankTol * smax) ++rank;
    return svd.matrixV().rightCols(cols - rank);
}

inline Mat null_space(const Mat& M) { return null_space(M, M.cols()); }

// Orthonormal basis of the column span of M.
inline Mat orth(const Mat& M) {
    if (M.cols() == 0 || M.rows() == 0) return Mat(M.rows(), 0);
    Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeThinU);
    const auto& s = svd.singularValues();
    double smax = s.size() ? s(0) : 0.0;
    long rank = 0;
    for (long i = 0; i < s.size(); ++i)
        if (smax > 0 && s(i) > kRankTol * smax) ++rank;
    return svd.matrixU().leftCols(rank);
}

inline long rank(const Mat& M) { return orth(M).cols(); }

// Orthogonal complement in R^n of span(Q), Q with orthonormal columns.
inline Mat complement(const Mat& Q, long n) {
    if (Q.cols() == 0) return Mat::Identity(n, n);
    return null_space(Q.transpose(), n);
}

// Projector onto span(Q), Q orthonormal.
inline Mat projector(const Mat& Q, long n) {
    if (Q.cols() == 0) return Mat::Zero(n, n);
    return Q * Q.transpose();
}

// Projector onto span(Q)^perp.
inline Mat co_projector(const Mat& Q, long n) {
    return Mat::Identity(n, n) - projector(Q, n);
}

inline Vec project_out(const Mat& Q, const Vec& x) {
    if (Q.cols() == 0) return x;
    return x - Q * (Q.transpose() * x);
}

// Basis of span(Q1) ∩ span(Q2), both orthonormal.
inline Mat intersect(const Mat& Q1, const Mat& Q2, long n) {
    if (Q1.cols() == 0 || Q2.cols() == 0) return Mat(n, 0);
    Mat stacked(2 * n, n);
    stacked << co_projector(Q1, n), co_projector(Q2, n);
    return null_space(stacked, n);
}

// Basis of the part of span(Q) orthogonal to span(Z): span(Q) ⊖ span(Z).
inline Mat relative_complement(const Mat& Q, const Mat& Z, long n) {
    if (Z.cols() == 0) return Q;
    if (Q.cols() == 0) return Q;
    // Q is orthonormal, so the cutoff is absolute; a relative one would keep rounding noise.
    Eigen::JacobiSVD<Mat> svd(co_projector(Z, n) * Q, Eigen::ComputeThinU);
    const auto& s = svd.singularValues();
    long rank = 0;
    for (long i = 0; i < s.size(); ++i)
        if (s(i) > 1e-8) ++rank;
    return svd.matrixU().leftCols(rank);
}

inline bool contains_subspace(const Mat& Big, const Mat& Small, long n, double tol = 1e-8) {
    if (Small.cols() == 0) return true;
    return (co_projector(Big, n) * Small).norm() <= tol * std::max(1.0, Small.norm());
}

inline bool same_subspace(const Mat& A, const Mat& B, long n, double tol = 1e-8) {
    return A.cols() == B.cols() && contains_subspace(A, B, n, tol) && contains_subspace(B, A, n, tol);
}

inline Mat pinv(const Mat& M) {
    if (M.size() == 0) return Mat::Zero(M.cols(), M.rows());
    Eigen::CompleteOrthogonalDecomposition<Mat> cod(M);
    cod.setThreshold(kRankTol);
    return cod.pseudoInverse();
}

inline bool lex_less(const Vec& a, const Vec& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

inline std::vector<double> to_std(const Vec& v) { return {v.data(), v.data() + v.size()}; }

inline Vec from_std(const std::vector<double>& v) {
    Vec r(static_cast<long>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) r(static_cast<long>(i)) = v[i];
    return r;
}

}  // namespace linalg
}  // namespace spectradual

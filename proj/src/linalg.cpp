#include "ndt/channel.hpp"

#include <algorithm>
#include <limits>

namespace ndt {

SvdInfo svd_info(const Eigen::MatrixXcd& A)
{
    SvdInfo out;
    if (A.rows() == 0 || A.cols() == 0) {
        out.cond = 1.0;
        return out;
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
    out.sigma = svd.singularValues();
    const double smax = out.sigma(0);
    const double thr = static_cast<double>(std::max(A.rows(), A.cols())) * smax * kRankRelTol;
    for (Eigen::Index i = 0; i < out.sigma.size(); ++i)
        if (out.sigma(i) > thr) ++out.rank;
    const double smin = out.sigma(out.sigma.size() - 1);
    out.cond = smin > 0 ? smax / smin : std::numeric_limits<double>::infinity();
    return out;
}

Eigen::MatrixXcd nullspace(const Eigen::MatrixXcd& A, int* rank)
{
    const Eigen::Index n = A.cols();
    if (A.rows() == 0) {
        if (rank) *rank = 0;
        return Eigen::MatrixXcd::Identity(n, n);
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double thr = static_cast<double>(std::max(A.rows(), n)) * (s.size() ? s(0) : 0.0) * kRankRelTol;
    int r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > thr) ++r;
    if (rank) *rank = r;
    return svd.matrixV().rightCols(n - r);
}

} // namespace ndt

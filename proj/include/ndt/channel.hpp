#pragma once

#include <Eigen/Dense>

#include <complex>
#include <map>
#include <string>
#include <utility>

namespace ndt {

using cd = std::complex<double>;

// One channel use. f: DeNB->RN (M), g: DeNB->UE (K), H: RN->UE (K x M).
struct ChannelState {
    long t = 0;
    Eigen::VectorXcd f;
    Eigen::VectorXcd g;
    Eigen::MatrixXcd H;
};

// Scheme-agnostic transmit coefficients for one channel use, keyed by symbol label.
// nu: DeNB coefficient; beta: (symbol, RN index 1..M) coefficient.
struct CoefficientFrame {
    long t = 0;
    std::map<std::string, cd> nu;
    std::map<std::pair<std::string, int>, cd> beta;
};

// Numerical rank threshold shared by every rank decision in the library.
inline constexpr double kRankRelTol = 1e-10;
inline constexpr double kCondLimit = 1e10;
// Relative magnitude below which a scheme-construction quantity counts as zero.
inline constexpr double kDegenerateRelTol = 1e-8;

struct SvdInfo {
    Eigen::VectorXd sigma;
    int rank = 0;
    double cond = 0.0; // sigma_max / sigma_min over all min(r,c) values; inf if singular
};

SvdInfo svd_info(const Eigen::MatrixXcd& A);

// Orthonormal basis of the right nullspace of A; rank is reported through *rank.
Eigen::MatrixXcd nullspace(const Eigen::MatrixXcd& A, int* rank = nullptr);

} // namespace ndt

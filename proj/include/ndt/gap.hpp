#pragma once

#include "ndt/bounds.hpp"
#include "ndt/oneshot.hpp"

#include <optional>
#include <ostream>
#include <vector>

namespace ndt {

enum class BoundSource { BE, CD_i, CD_ii, CD_iii, DE, Optimal, None };
const char* to_string(BoundSource s);

enum class CdCase { i, ii, iii };

struct GapReport {
    int K = 1, M = 1;
    Rational mu;
    Rational achievable; // one-shot envelope
    Rational lower;      // converse
    Rational ratio;
    std::optional<Rational> corollary_bound;
    BoundSource bound_source = BoundSource::None;
    bool holds = true; // ratio <= corollary_bound (vacuously true without a bound)
};

struct CandidateBound {
    BoundSource source;
    Rational value;
};

Rational gap_bound_be(const Rational& theta, int M);
// case i and ii ignore param; case iii takes d.
Rational gap_bound_cd(int K, int M, CdCase c, const Rational& param = Rational(0));
Rational gap_bound_de(int M);

// Memory-sharing envelope of the one-shot points over the discrete cache grid.
Envelope oneshot_envelope(int K, int M);

// Gap bounds whose hypotheses hold at (K, M, mu); grid points only.
std::vector<CandidateBound> applicable_bounds(int K, int M, const Rational& mu);

GapReport empirical_gap(const NetworkConfig& cfg);

struct GapSweep {
    std::vector<GapReport> rows;
    Rational high_cache_max; // max ratio over mu >= ceil((M-1)/2)/M on the discrete grid
    int argmax_K = 0, argmax_M = 0;
    Rational argmax_mu;
    bool all_hold = true;
};

// mu ranges over m/M plus n/grid (grid <= 0: discrete points only).
GapSweep gap_sweep(int kmax, int mmax, int grid);

void write_gap_csv(std::ostream& os, const std::vector<GapReport>& rows);

} // namespace ndt

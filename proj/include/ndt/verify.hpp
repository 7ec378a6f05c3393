#pragma once

#include "ndt/channel.hpp"
#include "ndt/core.hpp"

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace ndt {

struct Receiver {
    enum class Kind { UE, RN };
    Kind kind = Kind::UE;
    int index = 1; // 1-based

    static Receiver ue(int k) { return {Kind::UE, k}; }
    static Receiver rn(int m) { return {Kind::RN, m}; }
    auto operator<=>(const Receiver&) const = default;
    std::string str() const;
};

// RN m -> labels of symbols in its cache
using CacheMap = std::map<int, std::set<std::string>>;

struct EffectiveMatrix {
    Receiver receiver;
    std::vector<std::string> columns;
    Eigen::MatrixXcd data; // rows: channel uses, cols: symbols

    int col(const std::string& label) const; // -1 when absent
    EffectiveMatrix row_block(Eigen::Index begin, Eigen::Index count) const;
};

// What a receiver must resolve: desired symbols, aligned groups, and symbols nulled there.
struct AlignmentSpec {
    Receiver receiver;
    std::vector<std::string> desired;
    std::vector<std::vector<std::string>> groups;
    std::vector<std::string> zero_forced;
    long rows = -1; // decode from the first `rows` uses; -1 = all
};

struct ZfReport {
    double max_residual = 0.0;
    std::string worst_symbol;
    bool pass = true;
};

struct AlignmentReport {
    double max_error = 0.0;
    bool vacuous = false; // some group has only zero columns
    bool pass = true;
};

struct DecodabilityReport {
    Receiver receiver;
    int columns = 0;
    int rank = 0;
    bool desired_rank_ok = false;
    bool alignment_ok = true;
    double zf_residual_max = 0.0;
    double alignment_error_max = 0.0;
    double grouped_condition_number = 0.0;
    double roundtrip_error = 0.0;
    bool verdict = false;
};

// Per-step one-shot certificate.
struct StepCheck {
    long t = 0;
    double min_desired_rel = 1.0;
    double max_interference_rel = 0.0;
    double roundtrip_error = 0.0;
    bool pass = true;
};

inline constexpr double kZfTol = 1e-9;
inline constexpr double kAlignTol = 1e-10;
inline constexpr double kStepDesiredMin = 1e-6;
inline constexpr double kStepInterferenceMax = 1e-9;
inline constexpr double kRoundTripTol = 1e-8;

// Seeded i.i.d. CN(0,1) source; draws f, g, H in that order per use.
class ChannelSampler {
public:
    explicit ChannelSampler(std::uint64_t seed) : rng_(seed) {}
    ChannelState next(long t, int K, int M);
    cd sample();
    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
    std::normal_distribution<double> n_{0.0, std::sqrt(0.5)};
};

std::vector<ChannelState> draw_channels(std::uint64_t seed, int T, int K, int M);

EffectiveMatrix effective_matrix(const std::vector<CoefficientFrame>& frames,
                                 const std::vector<ChannelState>& channels,
                                 const CacheMap& cache,
                                 Receiver receiver,
                                 const std::vector<std::string>& columns);

// Residual of a nulled symbol = |coef| / max_receivers |coef| at the same use (0 for a zero column).
ZfReport check_zero_forcing(const std::vector<EffectiveMatrix>& all,
                            const std::vector<AlignmentSpec>& specs,
                            double tol = kZfTol);
AlignmentReport check_alignment(const EffectiveMatrix& m, const AlignmentSpec& spec, double tol = kAlignTol);
DecodabilityReport check_decodability(const EffectiveMatrix& m,
                                      const std::vector<std::string>& desired,
                                      const std::vector<std::vector<std::string>>& groups);

// Solve the grouped system for random symbol values; relative error of desired symbols and group sums.
double roundtrip_recovery(const EffectiveMatrix& m,
                          const std::vector<std::string>& desired,
                          const std::vector<std::vector<std::string>>& groups,
                          std::uint64_t seed);

// One channel use: served receivers see their symbol, and nothing else survives.
StepCheck check_one_shot_step(const std::vector<EffectiveMatrix>& row_mats,
                              const std::map<Receiver, std::string>& served,
                              long t);

// Full certification of one receiver: alignment, rank, roundtrip; zf filled by caller.
DecodabilityReport certify_receiver(const EffectiveMatrix& m, const AlignmentSpec& spec, std::uint64_t seed);

Rational measure_ndt(const BigInt& total_T, const BigInt& symbols_per_file, long frag_factor);

} // namespace ndt

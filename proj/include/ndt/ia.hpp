#pragma once

#include "ndt/oneshot.hpp"
#include "ndt/verify.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <vector>

namespace ndt {

// Precoders of one channel use; symbol (i, j) is eta_{i,j}, RN indices 1-based.
struct IAPrecoderFrame {
    long t = 0;
    std::map<std::pair<int, int>, cd> nu;
    std::map<std::tuple<int, int, int>, cd> beta;
    std::map<std::pair<int, int>, cd> random_factors;

    CoefficientFrame coefficients() const;
};

std::string ia_label(int file, int j);

// Result of one seeded run of a scheme, with its certificates.
struct SchemeTrace {
    std::string scheme; // IA31 | IA22 | OneShot
    NetworkConfig cfg;
    long T = 0;
    BigInt symbols_per_file;
    long frag_factor = 1;
    Rational ndt;
    int redraws = 0;
    bool pass = false;

    std::vector<ChannelState> channels;
    std::vector<CoefficientFrame> frames;
    std::vector<std::string> columns;
    CacheMap cache;
    std::vector<AlignmentSpec> specs;
    std::vector<DecodabilityReport> reports;
    std::vector<StepCheck> step_checks;

    double max_zf_residual = 0.0;
    double max_alignment_error = 0.0;
    double max_condition_number = 0.0;
    double max_roundtrip_error = 0.0;
};

inline constexpr int kMaxRedraws = 16;

IAPrecoderFrame ia31_precoders(const ChannelState& ch);
IAPrecoderFrame ia22_precoders(const ChannelState& ch, std::uint64_t factor_seed);

// Receiver-side structure of the two constructions (ZF map, alignment chains, desired sets).
std::vector<AlignmentSpec> ia31_specs();
std::vector<AlignmentSpec> ia22_specs();
std::vector<std::string> ia31_columns();
std::vector<std::string> ia22_columns();
CacheMap ia31_cache();
CacheMap ia22_cache();

SchemeTrace ia31_run(std::uint64_t seed);
SchemeTrace ia22_run(std::uint64_t seed);

// One-shot delivery at any grid point mu = m/M, including the endpoints.
SchemeTrace corner_trace(const NetworkConfig& cfg, std::uint64_t seed);

} // namespace ndt

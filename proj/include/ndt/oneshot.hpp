#pragma once

#include "ndt/channel.hpp"
#include "ndt/core.hpp"

#include <compare>
#include <map>
#include <string>
#include <vector>

namespace ndt {

enum class Region { A, B, C, D, E, ZeroCache, FullCache };
const char* to_string(Region r);

struct OneShotCounts {
    int psi = 0;       // min(K, mu M)
    int psi_prime = 1; // min(K, 1 + mu M)
    BigInt gamma;      // C(K, psi)
    BigInt symbols_per_file;
    BigInt T1;
    BigInt N_UE;
    Rational T2;
    Rational n_rn_tx;  // per-RN phase-1 transmit load before fragmentation
    BigInt total_T;    // frag_factor * (T1 + T2)
    long frag_factor = 1;
};

struct SymbolId {
    int file = 0;
    std::vector<int> rn_subset; // T, sorted
    std::vector<int> ue_subset; // U, sorted
    int fragment = 1;

    auto operator<=>(const SymbolId&) const = default;
    std::string label() const;
};

struct ScheduleStep {
    long t = 0; // 1-based
    int phase = 1;
    std::vector<int> S_R;
    std::vector<int> S_U;
    std::vector<int> S_R_prime;
    std::map<int, SymbolId> rn_symbols; // RN m -> its desired symbol
    std::map<int, SymbolId> ue_symbols; // UE k -> its desired symbol
};

struct DeliveryPlan {
    NetworkConfig cfg;
    OneShotCounts counts;
    std::vector<ScheduleStep> steps;
};

struct BeamformerSet {
    std::map<SymbolId, cd> denb_coeff;
    std::map<std::pair<SymbolId, int>, cd> rn_coeffs;
};

Rational delta_man(const Rational& mu, int M);
Rational delta_os(const NetworkConfig& cfg);
Region classify_region(const NetworkConfig& cfg);

// Also defined at mu in {0,1}: unicast (T=K+M) and full joint ZF (psi' fragments per file).
OneShotCounts subpacketize(const NetworkConfig& cfg);
std::map<int, std::vector<SymbolId>> cache_placement(const NetworkConfig& cfg);
DeliveryPlan build_schedule(const NetworkConfig& cfg);

BeamformerSet phase1_beamformers(const ScheduleStep& step, const ChannelState& ch);
BeamformerSet phase2_beamformers(const ScheduleStep& step, const ChannelState& ch);
BeamformerSet step_beamformers(const ScheduleStep& step, const ChannelState& ch);

CoefficientFrame to_frame(const BeamformerSet& b, long t);

// RN m caches symbol s iff m in s.rn_subset.
inline bool is_cached(const SymbolId& s, int m)
{
    for (int r : s.rn_subset)
        if (r == m) return true;
    return false;
}

} // namespace ndt

#include "doctest.h"
#include "oracle.hpp"

#include "ndt/bounds.hpp"
#include "ndt/oneshot.hpp"
#include "ndt/verify.hpp"

#include <set>

using namespace ndt;
using oracle::Q;

namespace {
NetworkConfig cfg(int K, int M, Rational mu) { return make_config(K, M, mu); }
}

TEST_CASE("delta_man")
{
    CHECK(delta_man(1, 5) == 0);
    CHECK(delta_man(Rational(1, 2), 4) == Rational(2, 3));
    CHECK(oracle::same(delta_man(Rational(1, 2), 4), oracle::man(Q(1, 2), 4)));
    CHECK(delta_man(Rational(1, 3), 3) == 1);
}

TEST_CASE("delta_os: examples")
{
    CHECK(delta_os(cfg(2, 2, Rational(1, 2))) == Rational(5, 4));
    CHECK(delta_os(cfg(1, 2, Rational(1, 2))) == 1);
    CHECK(delta_os(cfg(2, 4, Rational(1, 2))) == 1);
    CHECK_THROWS_AS(delta_os(cfg(2, 2, Rational(4, 9))), Error);
}

TEST_CASE("delta_os: endpoints equal the corner values")
{
    for (int K = 1; K <= 8; ++K)
        for (int M = 1; M <= 8; ++M) {
            CHECK(delta_os(cfg(K, M, 0)) == corner_ndt(0, K, M));
            CHECK(delta_os(cfg(K, M, 1)) == corner_ndt(1, K, M));
        }
}

TEST_CASE("classify_region: examples and errors")
{
    CHECK(classify_region(cfg(2, 4, Rational(1, 2))) == Region::A);
    CHECK(classify_region(cfg(1, 3, Rational(1, 3))) == Region::B);
    CHECK(classify_region(cfg(3, 2, Rational(1, 2))) == Region::C);
    CHECK_THROWS_AS(classify_region(cfg(3, 2, 0)), Error);
    CHECK_THROWS_AS(classify_region(cfg(3, 2, 1)), Error);
}

TEST_CASE("classify_region agrees with delta_os and the region-table oracle, K,M <= 10")
{
    std::set<Region> seen;
    for (int K = 1; K <= 10; ++K)
        for (int M = 2; M <= 10; ++M)
            for (int m = 1; m < M; ++m) {
                auto c = cfg(K, M, Rational(m, M));
                const Region r = classify_region(c);
                seen.insert(r);
                const Rational os = delta_os(c), dm = delta_man(c.mu, M);
                REQUIRE(oracle::same(os, oracle::oneshot_by_region(K, M, m)));
                switch (r) {
                case Region::A: REQUIRE(os == 1); break;
                case Region::B:
                case Region::E: REQUIRE(os == dm); break;
                default: REQUIRE(os == (Rational(K) + dm) / (Rational(1) + c.mu * M));
                }
            }
    CHECK(seen.size() == 5);
}

TEST_CASE("subpacketize: examples")
{
    auto a = subpacketize(cfg(2, 2, Rational(1, 2)));
    CHECK(a.psi == 1);
    CHECK(a.gamma == 2);
    CHECK(a.symbols_per_file == 4);
    CHECK(a.T1 == 2);
    CHECK(a.N_UE == 1);
    CHECK(a.psi_prime == 2);
    CHECK(a.T2 == 3);
    CHECK(a.total_T == 5);

    auto b = subpacketize(cfg(1, 2, Rational(1, 2)));
    CHECK(b.psi == 1);
    CHECK(b.gamma == 1);
    CHECK(b.symbols_per_file == 2);
    CHECK(b.T1 == 1);
    CHECK(b.N_UE == 1);
    CHECK(b.T2 == 1);
    CHECK(b.total_T == 2);

    auto c = subpacketize(cfg(1, 3, Rational(1, 3)));
    CHECK(c.gamma == 1);
    CHECK(c.symbols_per_file == 3);
    CHECK(c.T1 == 3);
    CHECK(c.N_UE == 3);
    CHECK(c.T2 == 0);
}

TEST_CASE("subpacketize: invariants and NDT identity, K,M <= 10")
{
    for (int K = 1; K <= 10; ++K)
        for (int M = 1; M <= 10; ++M)
            for (int m = 0; m <= M; ++m) {
                auto c = cfg(K, M, Rational(m, M));
                auto s = subpacketize(c);
                if (m > 0 && m < M) {
                    const int psi = std::min(K, m);
                    REQUIRE(s.psi == psi);
                    REQUIRE(s.psi_prime == std::min(K, 1 + m));
                    REQUIRE(s.gamma == oracle::binom(K, psi));
                    REQUIRE(s.symbols_per_file == oracle::binom(K, psi) * oracle::binom(M, m));
                    REQUIRE(s.T1 == s.gamma * oracle::binom(M, 1 + m));
                    REQUIRE(s.N_UE == std::min(oracle::binom(M, m + 1) * oracle::binom(K - 1, psi - 1),
                                               oracle::binom(K, psi) * oracle::binom(M, m)));
                    REQUIRE(s.T2 >= 0);
                }
                REQUIRE((s.T2 * Rational(s.frag_factor)).is_integer());
                REQUIRE(s.total_T == (Rational(s.frag_factor) * (Rational(s.T1) + s.T2)).num());
                REQUIRE((Rational(s.T1) + s.T2) / Rational(s.symbols_per_file) == delta_os(c));
            }
}

TEST_CASE("cache_placement")
{
    auto c = cfg(2, 2, Rational(1, 2));
    auto p = cache_placement(c);
    const long per_file = subpacketize(c).symbols_per_file.convert_to<long>();
    for (int m = 1; m <= 2; ++m) {
        long file1 = 0;
        for (const auto& s : p[m]) {
            CHECK(is_cached(s, m));
            CHECK(s.rn_subset == std::vector<int>{m});
            if (s.file == 1) ++file1;
        }
        CHECK(file1 == 2);
        CHECK(Rational(file1, per_file) == c.mu);
    }
    // cached fraction equals mu for every grid point
    for (int K = 1; K <= 3; ++K)
        for (int M = 1; M <= 4; ++M)
            for (int m = 1; m < M; ++m) {
                auto cc = cfg(K, M, Rational(m, M));
                auto pl = cache_placement(cc);
                auto sp = subpacketize(cc);
                for (int r = 1; r <= M; ++r)
                    CHECK(Rational(static_cast<long long>(pl[r].size()), (sp.symbols_per_file * sp.frag_factor * cc.N)) == cc.mu);
            }
    CHECK(Rational(oracle::binom(2, 1), oracle::binom(3, 2)) == Rational(2, 3));
}

TEST_CASE("build_schedule: (2,2,1/2) has 2 + 3 steps")
{
    auto plan = build_schedule(cfg(2, 2, Rational(1, 2)));
    REQUIRE(plan.steps.size() == 5);
    CHECK(plan.steps[0].phase == 1);
    CHECK(plan.steps[1].phase == 1);
    for (int i = 2; i < 5; ++i) {
        CHECK(plan.steps[i].phase == 2);
        CHECK(plan.steps[i].ue_symbols.size() == 2);
    }
    const auto& t1 = plan.steps[0];
    CHECK(t1.S_U == std::vector<int>{1});
    CHECK(t1.S_R == std::vector<int>{1, 2});
    CHECK(t1.rn_symbols.at(1).file == 3);
    CHECK(t1.rn_symbols.at(1).rn_subset == std::vector<int>{2});
    CHECK(t1.ue_symbols.at(1).file == 1);
}

TEST_CASE("build_schedule: counting identities for all K,M <= 6")
{
    for (int K = 1; K <= 6; ++K)
        for (int M = 1; M <= 6; ++M)
            for (int m = 0; m <= M; ++m) {
                auto c = cfg(K, M, Rational(m, M));
                auto plan = build_schedule(c);
                const auto& n = plan.counts;
                const long F = n.frag_factor;
                std::map<int, std::set<SymbolId>> ue, rn;
                long p1 = 0, p2 = 0;
                std::map<int, long> ue_p1;
                for (const auto& st : plan.steps) {
                    (st.phase == 1 ? p1 : p2) += 1;
                    if (st.phase == 1 && m > 0 && m < M) {
                        REQUIRE(st.S_R.size() == static_cast<std::size_t>(1 + m));
                        REQUIRE(st.S_U.size() == static_cast<std::size_t>(n.psi));
                        for (const auto& [r, s] : st.rn_symbols) {
                            REQUIRE(s.file == K + r);
                            REQUIRE(s.ue_subset == st.S_U);
                        }
                        if (!st.ue_symbols.empty()) REQUIRE(st.S_R_prime.size() == static_cast<std::size_t>(n.psi));
                        for (const auto& [k, s] : st.ue_symbols) {
                            REQUIRE(std::includes(s.rn_subset.begin(), s.rn_subset.end(), st.S_R_prime.begin(),
                                                  st.S_R_prime.end()));
                            ++ue_p1[k];
                        }
                    }
                    if (st.phase == 2) REQUIRE(st.ue_symbols.size() == static_cast<std::size_t>(n.psi_prime));
                    for (const auto& [r, s] : st.rn_symbols) REQUIRE(rn[r].insert(s).second);
                    for (const auto& [k, s] : st.ue_symbols) {
                        REQUIRE(s.file == k);
                        REQUIRE(ue[k].insert(s).second);
                    }
                }
                const BigInt W = n.symbols_per_file * F;
                for (int k = 1; k <= K; ++k) REQUIRE(BigInt(ue[k].size()) == W);
                if (m > 0 && m < M) {
                    REQUIRE(BigInt(p1) == n.T1 * F);
                    for (int r = 1; r <= M; ++r)
                        REQUIRE(BigInt(rn[r].size()) == oracle::binom(K, n.psi) * oracle::binom(M - 1, m) * F);
                    for (int k = 1; k <= K; ++k) REQUIRE(BigInt(ue_p1[k]) == n.N_UE * F);
                }
                REQUIRE(Rational(p2) == n.T2 * Rational(F));
                REQUIRE(measure_ndt(BigInt(plan.steps.size()), n.symbols_per_file, F) == delta_os(c));
            }
}

TEST_CASE("build_schedule: S_R' round-robin keeps RN transmit load balanced when psi = mu M < K")
{
    for (int K = 2; K <= 6; ++K)
        for (int M = 2; M <= 6; ++M)
            for (int m = 1; m < M && m < K; ++m) {
                auto plan = build_schedule(cfg(K, M, Rational(m, M)));
                std::map<int, long> load;
                for (const auto& st : plan.steps)
                    if (!st.ue_symbols.empty())
                        for (int r : st.S_R_prime) ++load[r];
                long lo = 1L << 40, hi = 0;
                for (int r = 1; r <= M; ++r) lo = std::min(lo, load[r]), hi = std::max(hi, load[r]);
                INFO(K, " ", M, " ", m, " lo=", lo, " hi=", hi);
                CHECK(hi - lo <= 1);
            }
}

TEST_CASE("phase1_beamformers: nullspace residuals on a seeded channel (K=2, M=4, mu M=2)")
{
    auto plan = build_schedule(cfg(2, 4, Rational(1, 2)));
    ChannelSampler smp(11);
    int checked = 0;
    for (const auto& st : plan.steps) {
        if (st.phase != 1) continue;
        auto ch = smp.next(st.t, 2, 4);
        auto b = phase1_beamformers(st, ch);
        for (const auto& [m, s] : st.rn_symbols) {
            // (g_SU, H_SU,SR\{m}) * beta~ = 0
            Eigen::VectorXcd v(1 + s.rn_subset.size());
            v(0) = b.denb_coeff.at(s);
            for (std::size_t j = 0; j < s.rn_subset.size(); ++j) v(1 + j) = b.rn_coeffs.at({s, s.rn_subset[j]});
            CHECK(std::abs(v.norm() - 1.0) < 1e-12);
            for (int k : st.S_U) {
                cd acc = ch.g(k - 1) * v(0);
                for (std::size_t j = 0; j < s.rn_subset.size(); ++j) acc += ch.H(k - 1, s.rn_subset[j] - 1) * v(1 + j);
                CHECK(std::abs(acc) / v.norm() < 1e-10);
            }
        }
        for (const auto& [p, s] : st.ue_symbols) {
            CHECK(b.denb_coeff.count(s) == 0);
            for (int k : st.S_U) {
                if (k == p) continue;
                cd acc = 0;
                double nrm = 0;
                for (int r : st.S_R_prime) {
                    acc += ch.H(k - 1, r - 1) * b.rn_coeffs.at({s, r});
                    nrm += std::norm(b.rn_coeffs.at({s, r}));
                }
                CHECK(std::abs(acc) / std::sqrt(nrm) < 1e-10);
            }
        }
        ++checked;
    }
    CHECK(checked == 4);
}

TEST_CASE("phase1_beamformers: identical UE rows are degenerate")
{
    auto plan = build_schedule(cfg(2, 4, Rational(1, 2)));
    auto ch = draw_channels(5, 1, 2, 4)[0];
    ch.H.row(1) = ch.H.row(0);
    ch.g(1) = ch.g(0);
    try {
        phase1_beamformers(plan.steps[0], ch);
        FAIL("expected DegenerateChannel");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DegenerateChannel);
    }
}

TEST_CASE("phase1_beamformers: psi = 1 emits no UE zero-forcing constraint")
{
    auto plan = build_schedule(cfg(2, 2, Rational(1, 2)));
    const auto& st = plan.steps[0];
    REQUIRE(st.S_R_prime.size() == 1);
    auto ch = draw_channels(9, 1, 2, 2)[0];
    auto b = phase1_beamformers(st, ch);
    const auto& s = st.ue_symbols.at(1);
    CHECK(b.rn_coeffs.at({s, st.S_R_prime[0]}) == cd(1.0, 0.0));
}

TEST_CASE("phase2_beamformers: cross coefficients vanish, psi' deliveries per step")
{
    auto plan = build_schedule(cfg(2, 2, Rational(1, 2)));
    ChannelSampler smp(4);
    for (const auto& st : plan.steps) {
        if (st.phase != 2) continue;
        REQUIRE(st.ue_symbols.size() == 2);
        auto ch = smp.next(st.t, 2, 2);
        auto b = phase2_beamformers(st, ch);
        for (const auto& [k, s] : st.ue_symbols) {
            for (int u : st.S_U) {
                cd acc = ch.g(u - 1) * b.denb_coeff.at(s);
                for (int r : s.rn_subset) acc += ch.H(u - 1, r - 1) * b.rn_coeffs.at({s, r});
                if (u == k) CHECK(std::abs(acc) > 1e-6);
                else CHECK(std::abs(acc) < 1e-10);
            }
        }
    }
}

TEST_CASE("phase2_beamformers: psi' = 1 is plain unicast")
{
    auto plan = build_schedule(cfg(1, 2, Rational(1, 2)));
    const auto& st = plan.steps.back();
    REQUIRE(st.phase == 2);
    REQUIRE(st.ue_symbols.size() == 1);
    auto ch = draw_channels(2, 1, 1, 2)[0];
    auto b = phase2_beamformers(st, ch);
    CHECK(b.denb_coeff.size() == 1);
}

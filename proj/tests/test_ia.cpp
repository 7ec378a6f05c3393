#include "doctest.h"

#include "ndt/ia.hpp"

using namespace ndt;

namespace {

ChannelState fixed(int K, int M, std::vector<cd> g, std::vector<cd> H)
{
    ChannelState ch;
    ch.t = 1;
    ch.f = Eigen::VectorXcd::Ones(M);
    ch.g = Eigen::Map<Eigen::VectorXcd>(g.data(), K);
    ch.H.resize(K, M);
    for (int k = 0; k < K; ++k)
        for (int m = 0; m < M; ++m) ch.H(k, m) = H[k * M + m];
    return ch;
}

ErrorKind kind_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error thrown");
    return ErrorKind::InvalidConfig;
}

} // namespace

TEST_CASE("degenerate channels are rejected")
{
    auto eq = fixed(3, 1, {1.0, 1.0, 1.0}, {1.0, 1.0, 1.0});
    CHECK(kind_of([&] { ia31_precoders(eq); }) == ErrorKind::DegenerateChannel);
    auto zero = fixed(3, 1, {1.0, 0.0, 2.0}, {1.0, 3.0, 1.0});
    CHECK(kind_of([&] { ia31_precoders(zero); }) == ErrorKind::DegenerateChannel);
    // g1 h21 == g2 h11 makes l13 vanish
    auto l13 = fixed(2, 2, {1.0, 2.0}, {1.0, 0.5, 2.0, 0.7});
    CHECK(kind_of([&] { ia22_precoders(l13, 1); }) == ErrorKind::DegenerateChannel);
    CHECK(kind_of([&] { ia31_precoders(l13); }) == ErrorKind::ShapeMismatch);
}

TEST_CASE("(3,1) layer-1 alignment identity holds exactly")
{
    ChannelSampler s(11);
    for (int n = 0; n < 50; ++n) {
        auto ch = s.next(1, 3, 1);
        auto p = ia31_precoders(ch);
        const cd nu45 = p.nu.at({4, 5});
        for (int k = 1; k <= 3; ++k) {
            const int k1 = k % 3 + 1;
            const cd lhs = ch.g(k - 1) * nu45;
            const cd rhs = ch.H(k - 1, 0) * p.beta.at({k1, 4, 1});
            CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(lhs));
        }
    }
}

TEST_CASE("(2,2) interference vectors are orthogonal to the nulled channel")
{
    ChannelSampler s(12);
    for (int n = 0; n < 50; ++n) {
        auto ch = s.next(1, 2, 2);
        auto p = ia22_precoders(ch, n);
        for (int k = 1; k <= 2; ++k) {
            const int kp = k % 2 + 1;
            // file 3 symbols go through RN2, file 4 symbols through RN1
            for (int j : {9 - 2 * k, 10 - 2 * k}) {
                const cd nu = p.nu.at({3, j}), b = p.beta.at({3, j, 2});
                const cd r = ch.g(kp - 1) * nu + ch.H(kp - 1, 1) * b;
                CHECK(std::abs(r) <= 1e-12 * (std::abs(ch.g(kp - 1) * nu) + 1e-300));
            }
            for (int j : {5 - 2 * k, 6 - 2 * k}) {
                const cd nu = p.nu.at({4, j}), b = p.beta.at({4, j, 1});
                const cd r = ch.g(kp - 1) * nu + ch.H(kp - 1, 0) * b;
                CHECK(std::abs(r) <= 1e-12 * (std::abs(ch.g(kp - 1) * nu) + 1e-300));
            }
        }
        REQUIRE(p.random_factors.size() == 8);
        for (const auto& [key, c] : p.random_factors) CHECK(std::abs(std::abs(c) - 1.0) < 1e-12);
        for (int i = 1; i <= 2; ++i)
            for (int j : {1, 5}) CHECK(std::abs(p.random_factors.at({i, j}) - p.random_factors.at({i, j + 1})) > 1e-8);
    }
}

TEST_CASE("scheme runs certify and report their NDT")
{
    for (std::uint64_t seed : {0ull, 1ull, 2ull, 99ull}) {
        auto a = ia31_run(seed);
        CHECK(a.pass);
        CHECK(a.T == 8);
        CHECK(a.symbols_per_file == 5);
        CHECK(a.ndt == Rational(8, 5));
        CHECK(a.max_zf_residual < kZfTol);
        CHECK(a.max_alignment_error < kAlignTol);
        CHECK(a.max_condition_number < kCondLimit);
        CHECK(a.max_roundtrip_error < kRoundTripTol);
        CHECK(a.reports.size() == 4);

        auto b = ia22_run(seed);
        CHECK(b.pass);
        CHECK(b.T == 12);
        CHECK(b.symbols_per_file == 9);
        CHECK(b.ndt == Rational(4, 3));
        CHECK(b.max_zf_residual < kZfTol);
        CHECK(b.max_roundtrip_error < kRoundTripTol);
        CHECK(b.reports.size() == 4);
    }
    auto x = ia31_run(5), y = ia31_run(5);
    CHECK(x.channels[3].g == y.channels[3].g);
}

TEST_CASE("(3,1) desired rank per UE and RN rows")
{
    auto tr = ia31_run(3);
    REQUIRE(tr.pass);
    for (const auto& r : tr.reports) {
        CHECK(r.verdict);
        CHECK(r.desired_rank_ok);
        if (r.receiver.kind == Receiver::Kind::UE) CHECK(r.columns == 8);
        else CHECK(r.columns == 4);
    }
}

TEST_CASE("degenerate draws are rare")
{
    ChannelSampler s(2024);
    int bad31 = 0, bad22 = 0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        try {
            ia31_precoders(s.next(1, 3, 1));
        } catch (const Error&) {
            ++bad31;
        }
        try {
            ia22_precoders(s.next(1, 2, 2), i);
        } catch (const Error&) {
            ++bad22;
        }
    }
    CHECK(bad31 < n / 100);
    CHECK(bad22 < n / 100);
}

TEST_CASE("one-shot corner traces")
{
    for (auto [K, M, mu] : {std::tuple{2, 2, Rational(1, 2)}, {1, 2, Rational(1, 2)}, {3, 2, Rational(0)},
                            {3, 2, Rational(1)}, {2, 4, Rational(1, 2)}}) {
        auto cfg = make_config(K, M, mu);
        auto tr = corner_trace(cfg, 17);
        CHECK(tr.pass);
        CHECK(tr.ndt == delta_os(cfg));
        CHECK(tr.max_zf_residual < kStepInterferenceMax);
    }
}

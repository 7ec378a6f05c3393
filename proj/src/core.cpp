#include "ndt/core.hpp"

namespace ndt {

const char* to_string(ErrorKind k)
{
    switch (k) {
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::Domain: return "DomainError";
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::MissingEndpoint: return "MissingEndpoint";
    case ErrorKind::DegenerateChannel: return "DegenerateChannel";
    case ErrorKind::TooManyRedraws: return "TooManyRedraws";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::UnsupportedScheme: return "UnsupportedScheme";
    }
    return "Error";
}

const char* to_string(SchemeLabel s)
{
    switch (s) {
    case SchemeLabel::Unicast: return "Unicast";
    case SchemeLabel::FullZF: return "FullZF";
    case SchemeLabel::OneShot: return "OneShot";
    case SchemeLabel::IA31: return "IA31";
    case SchemeLabel::IA22: return "IA22";
    case SchemeLabel::Envelope: return "Envelope";
    }
    return "?";
}

int NetworkConfig::cached_count() const
{
    Rational x = mu * Rational(M);
    if (!x.is_integer()) return -1;
    return static_cast<int>(x.num());
}

BigInt binomial(long n, long k)
{
    if (n < 0 || k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt r = 1;
    for (long i = 1; i <= k; ++i)
        r = r * (n - k + i) / i; // exact at every step
    return r;
}

NetworkConfig validate_config(const NetworkConfig& cfg)
{
    if (cfg.M < 1) throw Error(ErrorKind::InvalidConfig, "M", "M must be >= 1");
    if (cfg.K < 1) throw Error(ErrorKind::InvalidConfig, "K", "K must be >= 1");
    if (cfg.N < cfg.K + cfg.M)
        throw Error(ErrorKind::InvalidConfig, "N",
                    "N must be >= K+M (got N=" + std::to_string(cfg.N) + ")");
    if (cfg.mu < Rational(0) || cfg.mu > Rational(1))
        throw Error(ErrorKind::InvalidConfig, "mu", "mu must lie in [0,1] (got " + cfg.mu.str() + ")");
    return cfg;
}

std::vector<Rational> discrete_cache_grid(int M)
{
    if (M < 1) throw Error(ErrorKind::Domain, "M", "M must be >= 1");
    std::vector<Rational> g;
    g.reserve(M + 1);
    for (int m = 0; m <= M; ++m) g.emplace_back(m, M);
    return g;
}

NetworkConfig make_config(int K, int M, const Rational& mu, int N)
{
    NetworkConfig c;
    c.K = K;
    c.M = M;
    c.N = N > 0 ? N : K + M;
    c.mu = mu;
    return validate_config(c);
}

} // namespace ndt

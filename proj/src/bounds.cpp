#include "ndt/bounds.hpp"

#include <algorithm>

namespace ndt {

Rational delta_lb_term(const Rational& mu, int ell, int s, int K, int M)
{
    if (s < 1 || s > std::min(M + 1, K))
        throw Error(ErrorKind::Domain, "s", "s=" + std::to_string(s) + " outside [1, min(M+1,K)]");
    const int sb = M + 1 - s;
    if (ell < sb || ell > M)
        throw Error(ErrorKind::Domain, "ell", "ell=" + std::to_string(ell) + " outside [M+1-s, M]");
    if (mu < Rational(0) || mu > Rational(1))
        throw Error(ErrorKind::Domain, "mu", "mu outside [0,1]");

    Rational load = Rational(sb) * (Rational(K - s) + Rational(sb - 1, 2))
                  + Rational(static_cast<long long>(ell) * (ell + 1), 2);
    return (Rational(K + ell) - mu * load) / Rational(s);
}

LowerBound lower_bound(const NetworkConfig& cfg)
{
    validate_config(cfg);
    LowerBound best{Rational(1), std::nullopt};
    // (s, ell) visited lexicographically; strict improvement keeps the smallest on ties
    for (int s = 1; s <= std::min(cfg.M + 1, cfg.K); ++s) {
        for (int ell = cfg.M + 1 - s; ell <= cfg.M; ++ell) {
            Rational v = delta_lb_term(cfg.mu, ell, s, cfg.K, cfg.M);
            if (v > best.value || (!best.witness && v == best.value && v > Rational(1))) {
                best.value = v;
                best.witness = BoundWitness{v, ell, s, cfg.M + 1 - s};
            }
        }
    }
    return best;
}

Rational corner_ndt(int mu_corner, int K, int M)
{
    if (mu_corner == 0) return Rational(K + M);
    if (mu_corner == 1) return rmax(Rational(1), Rational(K, M + 1));
    throw Error(ErrorKind::Domain, "mu", "corner must be 0 or 1");
}

namespace {

Rational closed_form(const NetworkConfig& cfg, bool literal)
{
    const Rational& mu = cfg.mu;
    const int K = cfg.K, M = cfg.M;
    Rational v = rmax(Rational(1), Rational(K + M) - mu * Rational(M) * Rational(K + M - 1));
    if (K >= 2 || literal) {
        const Rational q = Rational(M * M + (K - 3) * (M - 1));
        v = rmax(v, (Rational(K + M) - mu * q) / Rational(2));
        v = rmax(v, (Rational(K + M - 1) - mu * (q - Rational(M))) / Rational(2));
    }
    return v;
}

} // namespace

Rational optimal_tradeoff_closed(const NetworkConfig& cfg)
{
    validate_config(cfg);
    if (cfg.K + cfg.M > 4)
        throw Error(ErrorKind::Domain, "K+M", "closed form only holds for K+M <= 4");
    return closed_form(cfg, false);
}

bool closed_form_conditional_fires(const NetworkConfig& cfg)
{
    if (cfg.K + cfg.M > 4) return false;
    return closed_form(cfg, true) != closed_form(cfg, false);
}

Rational Envelope::operator()(const Rational& mu) const
{
    if (hull_.empty() || mu < hull_.front().mu || mu > hull_.back().mu)
        throw Error(ErrorKind::Domain, "mu", "mu outside envelope support");
    for (std::size_t i = 0; i + 1 < hull_.size(); ++i) {
        const auto& a = hull_[i];
        const auto& b = hull_[i + 1];
        if (mu <= b.mu)
            return a.ndt + (b.ndt - a.ndt) * (mu - a.mu) / (b.mu - a.mu);
    }
    return hull_.back().ndt;
}

Envelope lower_convex_envelope(const std::vector<SchemePoint>& points)
{
    std::vector<EnvelopePoint> pts;
    pts.reserve(points.size());
    for (const auto& p : points) {
        if (p.mu < Rational(0) || p.mu > Rational(1))
            throw Error(ErrorKind::Domain, "mu", "envelope point outside [0,1]");
        pts.push_back({p.mu, p.ndt});
    }
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
        return a.mu < b.mu || (a.mu == b.mu && a.ndt < b.ndt);
    });
    pts.erase(std::unique(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.mu == b.mu; }),
              pts.end());
    if (pts.empty() || pts.front().mu != Rational(0) || pts.back().mu != Rational(1))
        throw Error(ErrorKind::MissingEndpoint, "mu", "envelope needs points at mu=0 and mu=1");

    // monotone chain, lower hull; collinear middle points are dropped
    std::vector<EnvelopePoint> hull;
    for (const auto& p : pts) {
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull.back();
            if ((b.ndt - a.ndt) * (p.mu - a.mu) >= (p.ndt - a.ndt) * (b.mu - a.mu))
                hull.pop_back();
            else
                break;
        }
        hull.push_back(p);
    }
    return Envelope(std::move(hull));
}

Rational achievable_dof(const NetworkConfig& cfg, const Rational& ndt)
{
    if (ndt < Rational(1))
        throw Error(ErrorKind::Domain, "ndt", "ndt must be >= 1");
    return (Rational(cfg.K) + Rational(cfg.M) * (Rational(1) - cfg.mu)) / ndt;
}

} // namespace ndt

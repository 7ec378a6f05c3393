#include "ndt/gap.hpp"

#include <algorithm>
#include <set>

namespace ndt {

const char* to_string(BoundSource s)
{
    switch (s) {
    case BoundSource::BE: return "BE";
    case BoundSource::CD_i: return "CD_i";
    case BoundSource::CD_ii: return "CD_ii";
    case BoundSource::CD_iii: return "CD_iii";
    case BoundSource::DE: return "DE";
    case BoundSource::Optimal: return "Optimal";
    case BoundSource::None: return "";
    }
    return "";
}

Rational gap_bound_be(const Rational& theta, int M)
{
    if (theta < Rational(1) || theta > Rational(M - 3, 2))
        throw Error(ErrorKind::Domain, "theta", "theta must lie in [1, (M-3)/2]");
    return (Rational(M) - theta) / (Rational(1) + theta);
}

Rational gap_bound_cd(int K, int M, CdCase c, const Rational& param)
{
    if (K < 1 || M < 1) throw Error(ErrorKind::Domain, "K", "K, M must be >= 1");
    const Rational a = Rational(K, 2) + Rational(M - 5, 4);
    const Rational x = Rational(M, K) * Rational(K + M + 1, K + M - 1);
    switch (c) {
    case CdCase::i:
        if (K == 1) return Rational(1);
        if (M == 1) return Rational(1) + (Rational(K, 2) - Rational(2, K)) / Rational(K);
        return Rational(1) + a * rmin(Rational(1), x);
    case CdCase::ii:
        if (!(K > M && M >= 2)) throw Error(ErrorKind::Domain, "K", "case ii needs K > M >= 2");
        return Rational(1) + a * x;
    case CdCase::iii: {
        const Rational& d = param;
        if (d < Rational(M + 1, std::min(K, M)) || d > Rational(M + 1, 2))
            throw Error(ErrorKind::Domain, "d", "d must lie in [(M+1)/min(K,M), (M+1)/2]");
        return (d * Rational(K) + d * (d - Rational(1))) / Rational(std::max(M + 1, K));
    }
    }
    throw Error(ErrorKind::Domain, "case", "unknown case");
}

Rational gap_bound_de(int M)
{
    if (M < 1) throw Error(ErrorKind::Domain, "M", "M must be >= 1");
    return Rational(M - 1, 2);
}

Envelope oneshot_envelope(int K, int M)
{
    std::vector<SchemePoint> pts;
    for (const auto& mu : discrete_cache_grid(M))
        pts.push_back({mu, delta_os(make_config(K, M, mu)), SchemeLabel::OneShot});
    return lower_convex_envelope(pts);
}

std::vector<CandidateBound> applicable_bounds(int K, int M, const Rational& mu)
{
    std::vector<CandidateBound> out;
    const Rational x = mu * Rational(M);
    if (!x.is_integer()) return out;
    const int fm = static_cast<int>(x.num());
    const Rational one_over_M(1, M);

    std::optional<Region> region;
    if (fm > 0 && fm < M) region = classify_region(make_config(K, M, mu));
    const bool cd_region = region && (*region == Region::C || *region == Region::D);

    if (M >= 2 * K + 1) { // high M/K
        if (mu <= one_over_M) out.push_back({BoundSource::DE, gap_bound_de(M)});
        const Rational theta = rmin(Rational(fm), Rational(M - 3, 2));
        const Rational mu_hi(static_cast<long long>(Rational(M - 1, 2).ceil()), M);
        if (theta >= Rational(1) && mu <= mu_hi)
            out.push_back({BoundSource::BE, gap_bound_be(theta, M)});
    } else if (M >= K) { // moderate
        if (K == 1 || mu <= one_over_M) out.push_back({BoundSource::CD_i, gap_bound_cd(K, M, CdCase::i)});
        const int q = std::min(K, fm + 1);
        if (q >= 2 && mu <= Rational(K, M) && cd_region)
            out.push_back({BoundSource::CD_iii, gap_bound_cd(K, M, CdCase::iii, Rational(M + 1, q))});
    } else { // low
        if (M == 1) {
            out.push_back({BoundSource::CD_i, gap_bound_cd(K, M, CdCase::i)});
        } else if (mu <= one_over_M) {
            const Rational mu_t = rmin(one_over_M, Rational(K + M + 1, (M + 1) * (K + M - 1)));
            if (mu <= mu_t) out.push_back({BoundSource::CD_i, gap_bound_cd(K, M, CdCase::i)});
            else out.push_back({BoundSource::CD_ii, gap_bound_cd(K, M, CdCase::ii)});
        }
        const int q = std::min(M, fm + 1);
        if (M >= 2 && q >= 2 && cd_region)
            out.push_back({BoundSource::CD_iii, gap_bound_cd(K, M, CdCase::iii, Rational(M + 1, q))});
    }
    return out;
}

GapReport empirical_gap(const NetworkConfig& cfg)
{
    validate_config(cfg);
    GapReport r;
    r.K = cfg.K;
    r.M = cfg.M;
    r.mu = cfg.mu;
    r.achievable = oneshot_envelope(cfg.K, cfg.M)(cfg.mu);
    r.lower = lower_bound(cfg).value;
    r.ratio = r.achievable / r.lower;

    std::vector<CandidateBound> cands = applicable_bounds(cfg.K, cfg.M, cfg.mu);
    if (r.ratio == Rational(1)) cands.push_back({BoundSource::Optimal, Rational(1)});
    for (const auto& c : cands) {
        if (!r.corollary_bound || c.value < *r.corollary_bound) {
            r.corollary_bound = c.value;
            r.bound_source = c.source;
        }
    }
    r.holds = !r.corollary_bound || r.ratio <= *r.corollary_bound;
    return r;
}

GapSweep gap_sweep(int kmax, int mmax, int grid)
{
    if (kmax < 1 || mmax < 1) throw Error(ErrorKind::InvalidConfig, "kmax", "sweep bounds must be >= 1");
    GapSweep sw;
    bool first = true;
    for (int K = 1; K <= kmax; ++K) {
        for (int M = 1; M <= mmax; ++M) {
            std::set<Rational> mus;
            for (const auto& mu : discrete_cache_grid(M)) mus.insert(mu);
            for (int n = 0; grid > 0 && n <= grid; ++n) mus.insert(Rational(n, grid));
            const Rational floor_mu(static_cast<long long>(Rational(M - 1, 2).ceil()), M);
            for (const auto& mu : mus) {
                GapReport r = empirical_gap(make_config(K, M, mu));
                sw.all_hold = sw.all_hold && r.holds;
                if ((mu * Rational(M)).is_integer() && mu >= floor_mu && (first || r.ratio > sw.high_cache_max)) {
                    first = false;
                    sw.high_cache_max = r.ratio;
                    sw.argmax_K = K;
                    sw.argmax_M = M;
                    sw.argmax_mu = mu;
                }
                sw.rows.push_back(std::move(r));
            }
        }
    }
    return sw;
}

void write_gap_csv(std::ostream& os, const std::vector<GapReport>& rows)
{
    os << "K,M,mu_num,mu_den,achievable,lower,ratio,bound,source\n";
    for (const auto& r : rows) {
        os << r.K << ',' << r.M << ',' << r.mu.num() << ',' << r.mu.den() << ',' << r.achievable.frac() << ','
           << r.lower.frac() << ',' << r.ratio.frac() << ',' << (r.corollary_bound ? r.corollary_bound->frac() : "")
           << ',' << to_string(r.bound_source) << '\n';
    }
}

} // namespace ndt

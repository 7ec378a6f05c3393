#include "ndt/oneshot.hpp"

#include <algorithm>
#include <numeric>

namespace ndt {

namespace {

std::vector<std::vector<int>> combinations(int n, int k)
{
    std::vector<std::vector<int>> out;
    if (k < 0 || k > n) return out;
    std::vector<int> c(k);
    std::iota(c.begin(), c.end(), 1);
    while (true) {
        out.push_back(c);
        int i = k - 1;
        while (i >= 0 && c[i] == n - k + i + 1) --i;
        if (i < 0) break;
        ++c[i];
        for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
    }
    return out;
}

bool subset_of(const std::vector<int>& a, const std::vector<int>& b)
{
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::vector<int> without(const std::vector<int>& v, int x)
{
    std::vector<int> r;
    for (int y : v)
        if (y != x) r.push_back(y);
    return r;
}

int grid_index(const NetworkConfig& cfg)
{
    int x = cfg.cached_count();
    if (x < 0)
        throw Error(ErrorKind::Domain, "mu", "mu*M must be an integer (got mu=" + cfg.mu.str() + ")");
    return x;
}

long to_long(const BigInt& v) { return v.convert_to<long>(); }

std::string join(const std::vector<int>& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(v[i]);
    }
    return s;
}

} // namespace

const char* to_string(Region r)
{
    switch (r) {
    case Region::A: return "A";
    case Region::B: return "B";
    case Region::C: return "C";
    case Region::D: return "D";
    case Region::E: return "E";
    case Region::ZeroCache: return "ZeroCache";
    case Region::FullCache: return "FullCache";
    }
    return "?";
}

std::string SymbolId::label() const
{
    return std::to_string(file) + "|T" + join(rn_subset) + "|U" + join(ue_subset) + "|f" + std::to_string(fragment);
}

Rational delta_man(const Rational& mu, int M)
{
    if (mu < Rational(0) || mu > Rational(1))
        throw Error(ErrorKind::Domain, "mu", "mu outside [0,1]");
    return Rational(M) * (Rational(1) - mu) / (Rational(1) + mu * Rational(M));
}

Rational delta_os(const NetworkConfig& cfg)
{
    validate_config(cfg);
    const int x = grid_index(cfg);
    const Rational dm = delta_man(cfg.mu, cfg.M);
    const Rational num = Rational(cfg.K) + (cfg.K > x ? dm : Rational(0));
    return rmax(dm, num / Rational(std::min(cfg.K, 1 + x)));
}

Region classify_region(const NetworkConfig& cfg)
{
    validate_config(cfg);
    const int x = grid_index(cfg);
    if (x == 0) throw Error(ErrorKind::Domain, "mu", "mu=0 is the ZeroCache corner");
    if (x == cfg.M) throw Error(ErrorKind::Domain, "mu", "mu=1 is the FullCache corner");
    const Rational dm = delta_man(cfg.mu, cfg.M);
    if (cfg.K <= x) {
        if (cfg.mu < Rational(1, 2) && dm >= Rational(1)) return Region::B;
        return Region::A;
    }
    if (cfg.K > cfg.M) return Region::C;
    if (Rational(cfg.K) <= Rational(x) * dm) return Region::E;
    return Region::D;
}

OneShotCounts subpacketize(const NetworkConfig& cfg)
{
    validate_config(cfg);
    const int K = cfg.K, M = cfg.M, x = grid_index(cfg);
    OneShotCounts c;
    if (x == 0) {
        // DeNB unicasts one symbol per requested file
        c.psi = 0;
        c.psi_prime = 1;
        c.gamma = 1;
        c.symbols_per_file = 1;
        c.T1 = M;
        c.N_UE = 0;
        c.T2 = Rational(K);
        c.n_rn_tx = Rational(0);
        c.frag_factor = 1;
        c.total_T = K + M;
        return c;
    }
    if (x == M) {
        // joint ZF from M+1 transmitters; psi' fragments per file make T2 integral
        c.psi = std::min(K, M);
        c.psi_prime = std::min(K, M + 1);
        c.gamma = 1;
        c.symbols_per_file = 1;
        c.T1 = 0;
        c.N_UE = 0;
        c.T2 = Rational(K, c.psi_prime);
        c.n_rn_tx = Rational(0);
        c.frag_factor = c.psi_prime / std::gcd(K, c.psi_prime);
        c.total_T = (c.T2 * Rational(c.frag_factor)).num();
        return c;
    }
    c.psi = std::min(K, x);
    c.psi_prime = std::min(K, 1 + x);
    c.gamma = binomial(K, c.psi);
    c.symbols_per_file = c.gamma * binomial(M, x);
    c.T1 = c.gamma * binomial(M, 1 + x);
    c.N_UE = std::min<BigInt>(binomial(M, x + 1) * binomial(K - 1, c.psi - 1), c.symbols_per_file);
    c.T2 = Rational(BigInt(K) * (c.symbols_per_file - c.N_UE)) / Rational(c.psi_prime);
    const Rational t1_eff = rmin(Rational(c.T1), Rational(c.gamma * K * binomial(M, x), BigInt(c.psi)));
    c.n_rn_tx = t1_eff * Rational(c.psi) / Rational(M);
    // only T2 must be integral; the per-RN load may stay fractional (balanced to +-1)
    const BigInt F = c.T2.den();
    c.frag_factor = to_long(F);
    c.total_T = (Rational(F) * (Rational(c.T1) + c.T2)).num();
    return c;
}

std::map<int, std::vector<SymbolId>> cache_placement(const NetworkConfig& cfg)
{
    const OneShotCounts c = subpacketize(cfg);
    const int x = grid_index(cfg);
    std::map<int, std::vector<SymbolId>> out;
    for (int m = 1; m <= cfg.M; ++m) out[m];
    if (x == 0) return out;
    const auto Ts = combinations(cfg.M, x);
    const auto Us = x == cfg.M ? std::vector<std::vector<int>>{{}} : combinations(cfg.K, c.psi);
    for (int n = 1; n <= cfg.N; ++n)
        for (const auto& T : Ts)
            for (const auto& U : Us)
                for (int f = 1; f <= c.frag_factor; ++f)
                    for (int m : T) out[m].push_back(SymbolId{n, T, U, f});
    return out;
}

namespace {

// Serve every UE its remaining symbols, psi' UEs per step, most-remaining first.
void append_phase2(DeliveryPlan& plan, std::map<int, std::vector<SymbolId>>& left, int psi_prime)
{
    while (true) {
        std::vector<int> order;
        for (auto& [k, v] : left)
            if (!v.empty()) order.push_back(k);
        if (order.empty()) break;
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return left[a].size() > left[b].size(); });
        order.resize(std::min<std::size_t>(order.size(), psi_prime));
        std::sort(order.begin(), order.end());
        ScheduleStep st;
        st.t = static_cast<long>(plan.steps.size()) + 1;
        st.phase = 2;
        st.S_U = order;
        for (int k : order) {
            st.ue_symbols[k] = left[k].front();
            left[k].erase(left[k].begin());
        }
        plan.steps.push_back(std::move(st));
    }
}

} // namespace

DeliveryPlan build_schedule(const NetworkConfig& cfg)
{
    DeliveryPlan plan;
    plan.cfg = validate_config(cfg);
    plan.counts = subpacketize(cfg);
    const auto& c = plan.counts;
    const int K = cfg.K, M = cfg.M, x = grid_index(cfg);
    const int F = static_cast<int>(c.frag_factor);

    std::map<int, std::vector<SymbolId>> left;
    if (x == 0) {
        for (int m = 1; m <= M; ++m) {
            ScheduleStep st;
            st.t = m;
            st.phase = 1;
            st.S_R = {m};
            st.rn_symbols[m] = SymbolId{K + m, {}, {}, 1};
            plan.steps.push_back(std::move(st));
        }
        for (int k = 1; k <= K; ++k) left[k] = {SymbolId{k, {}, {}, 1}};
        append_phase2(plan, left, 1);
        return plan;
    }
    if (x == M) {
        std::vector<int> all(M);
        std::iota(all.begin(), all.end(), 1);
        for (int k = 1; k <= K; ++k)
            for (int f = 1; f <= F; ++f) left[k].push_back(SymbolId{k, all, {}, f});
        append_phase2(plan, left, c.psi_prime);
        return plan;
    }

    const auto Ts = combinations(M, x);
    const auto Us = combinations(K, c.psi);
    for (int k = 1; k <= K; ++k)
        for (const auto& T : Ts)
            for (const auto& U : Us)
                for (int f = 1; f <= F; ++f) left[k].push_back(SymbolId{k, T, U, f});

    // phase 1: one step per (S_U, S_R, fragment); UE symbols go out over S_R'
    const auto prime_subsets = combinations(M, c.psi);
    std::size_t ptr = 0;
    for (const auto& SU : Us) {
        for (const auto& SR : combinations(M, 1 + x)) {
            for (int f = 1; f <= F; ++f) {
                ScheduleStep st;
                st.t = static_cast<long>(plan.steps.size()) + 1;
                st.phase = 1;
                st.S_R = SR;
                for (int m : SR) st.rn_symbols[m] = SymbolId{K + m, without(SR, m), SU, f};

                std::vector<int> active;
                for (int k : SU)
                    if (!left[k].empty()) active.push_back(k);
                if (!active.empty()) {
                    // next subset in round-robin order that every active UE can still use
                    std::size_t pick = prime_subsets.size();
                    for (std::size_t d = 0; d < prime_subsets.size(); ++d) {
                        const auto& S = prime_subsets[(ptr + d) % prime_subsets.size()];
                        bool ok = std::all_of(active.begin(), active.end(), [&](int k) {
                            return std::any_of(left[k].begin(), left[k].end(),
                                               [&](const SymbolId& s) { return subset_of(S, s.rn_subset); });
                        });
                        if (ok) {
                            pick = (ptr + d) % prime_subsets.size();
                            break;
                        }
                    }
                    if (pick < prime_subsets.size()) {
                        ptr = (pick + 1) % prime_subsets.size();
                        st.S_U = SU;
                        st.S_R_prime = prime_subsets[pick];
                        for (int k : active) {
                            auto it = std::find_if(left[k].begin(), left[k].end(), [&](const SymbolId& s) {
                                return subset_of(st.S_R_prime, s.rn_subset);
                            });
                            st.ue_symbols[k] = *it;
                            left[k].erase(it);
                        }
                    }
                }
                st.S_U = SU; // RN symbols are zero-forced at S_U regardless
                plan.steps.push_back(std::move(st));
            }
        }
    }
    append_phase2(plan, left, c.psi_prime);
    return plan;
}

namespace {

void require_rank(int got, int want, const char* what)
{
    if (got < want)
        throw Error(ErrorKind::DegenerateChannel, what,
                    std::string("rank-deficient channel submatrix for ") + what);
}

// unit vector in null(A) maximising |<dir, v>|; A must have full row rank
Eigen::VectorXcd project_unit(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& dir, const char* what)
{
    int r = 0;
    Eigen::MatrixXcd N = nullspace(A, &r);
    require_rank(r, static_cast<int>(A.rows()), what);
    Eigen::VectorXcd v = N * (N.adjoint() * dir);
    const double nv = v.norm();
    if (!(nv > kDegenerateRelTol * dir.norm()))
        throw Error(ErrorKind::DegenerateChannel, what, std::string("desired direction orthogonal to nullspace for ") + what);
    return v / nv;
}

} // namespace

BeamformerSet phase1_beamformers(const ScheduleStep& step, const ChannelState& ch)
{
    BeamformerSet b;
    const int nu_rows = static_cast<int>(step.S_U.size());

    // RN symbols: (DeNB, S_R\{m}) transmit, nulled at every UE in S_U
    for (const auto& [m, sym] : step.rn_symbols) {
        const auto tx = sym.rn_subset;
        Eigen::MatrixXcd A(nu_rows, 1 + tx.size());
        for (int i = 0; i < nu_rows; ++i) {
            const int k = step.S_U[i] - 1;
            A(i, 0) = ch.g(k);
            for (std::size_t j = 0; j < tx.size(); ++j) A(i, 1 + j) = ch.H(k, tx[j] - 1);
        }
        Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(1 + tx.size());
        e1(0) = 1.0; // the target RN only hears the DeNB
        Eigen::VectorXcd v = project_unit(A, e1, "rn_symbol");
        b.denb_coeff[sym] = v(0);
        for (std::size_t j = 0; j < tx.size(); ++j) b.rn_coeffs[{sym, tx[j]}] = v(1 + j);
    }

    // UE symbols: RNs in S_R' only, nulled at the other served UEs
    const auto& SRp = step.S_R_prime;
    const int psi = static_cast<int>(SRp.size());
    for (const auto& [p, sym] : step.ue_symbols) {
        Eigen::VectorXcd v;
        if (psi == 1) {
            v = Eigen::VectorXcd::Ones(1);
        } else {
            Eigen::MatrixXcd A(psi - 1, psi);
            int i = 0;
            for (int k : step.S_U) {
                if (k == p) continue;
                for (int j = 0; j < psi; ++j) A(i, j) = ch.H(k - 1, SRp[j] - 1);
                ++i;
            }
            Eigen::VectorXcd d(psi);
            for (int j = 0; j < psi; ++j) d(j) = std::conj(ch.H(p - 1, SRp[j] - 1));
            v = project_unit(A.topRows(i), d, "ue_symbol");
        }
        for (int j = 0; j < psi; ++j) b.rn_coeffs[{sym, SRp[j]}] = v(j);
    }
    return b;
}

BeamformerSet phase2_beamformers(const ScheduleStep& step, const ChannelState& ch)
{
    BeamformerSet b;
    for (const auto& [k, sym] : step.ue_symbols) {
        const auto& tx = sym.rn_subset;
        const int n = 1 + static_cast<int>(tx.size());
        auto row = [&](int u) {
            Eigen::RowVectorXcd r(n);
            r(0) = ch.g(u - 1);
            for (std::size_t j = 0; j < tx.size(); ++j) r(1 + j) = ch.H(u - 1, tx[j] - 1);
            return r;
        };
        Eigen::MatrixXcd A(static_cast<int>(step.S_U.size()) - 1, n);
        int i = 0;
        for (int u : step.S_U)
            if (u != k) A.row(i++) = row(u);
        Eigen::VectorXcd v = project_unit(A, row(k).adjoint(), "phase2");
        b.denb_coeff[sym] = v(0);
        for (std::size_t j = 0; j < tx.size(); ++j) b.rn_coeffs[{sym, tx[j]}] = v(1 + j);
    }
    return b;
}

BeamformerSet step_beamformers(const ScheduleStep& step, const ChannelState& ch)
{
    return step.phase == 1 ? phase1_beamformers(step, ch) : phase2_beamformers(step, ch);
}

CoefficientFrame to_frame(const BeamformerSet& b, long t)
{
    CoefficientFrame fr;
    fr.t = t;
    for (const auto& [s, v] : b.denb_coeff) fr.nu[s.label()] = v;
    for (const auto& [key, v] : b.rn_coeffs) fr.beta[{key.first.label(), key.second}] = v;
    return fr;
}

} // namespace ndt

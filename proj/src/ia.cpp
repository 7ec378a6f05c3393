#include "ndt/ia.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace ndt {

std::string ia_label(int file, int j)
{
    return std::to_string(file) + "," + std::to_string(j);
}

CoefficientFrame IAPrecoderFrame::coefficients() const
{
    CoefficientFrame fr;
    fr.t = t;
    for (const auto& [s, v] : nu) fr.nu[ia_label(s.first, s.second)] = v;
    for (const auto& [s, v] : beta) fr.beta[{ia_label(std::get<0>(s), std::get<1>(s)), std::get<2>(s)}] = v;
    return fr;
}

namespace {

int wrap(int k, int K) { return ((k - 1) % K + K) % K + 1; }

void require_nonzero(cd v, double scale, const char* what)
{
    if (!(std::abs(v) >= kDegenerateRelTol * scale))
        throw Error(ErrorKind::DegenerateChannel, what, std::string("degenerate channel: ") + what + " vanishes");
}

// a*b - c*d, rejected when it cancels below the relative threshold
cd cross(cd a, cd b, cd c, cd d, const char* what)
{
    const cd v = a * b - c * d;
    require_nonzero(v, std::max(std::abs(a * b), std::abs(c * d)), what);
    return v;
}

void require_entries(const ChannelState& ch)
{
    double scale = 0.0;
    for (Eigen::Index i = 0; i < ch.g.size(); ++i) scale = std::max(scale, std::abs(ch.g(i)));
    for (Eigen::Index i = 0; i < ch.H.size(); ++i) scale = std::max(scale, std::abs(ch.H(i)));
    if (scale == 0.0) throw Error(ErrorKind::DegenerateChannel, "channel", "all-zero channel");
    for (Eigen::Index i = 0; i < ch.g.size(); ++i) require_nonzero(ch.g(i), scale, "g");
    for (Eigen::Index i = 0; i < ch.H.size(); ++i) require_nonzero(ch.H(i), scale, "h");
}

std::vector<std::string> labels(std::initializer_list<std::pair<int, int>> s)
{
    std::vector<std::string> out;
    for (auto [i, j] : s) out.push_back(ia_label(i, j));
    return out;
}

} // namespace

IAPrecoderFrame ia31_precoders(const ChannelState& ch)
{
    if (ch.g.size() != 3 || ch.H.rows() != 3 || ch.H.cols() != 1)
        throw Error(ErrorKind::ShapeMismatch, "channel", "(3,1) scheme needs K=3, M=1");
    require_entries(ch);
    auto G = [&](int k) { return ch.g(wrap(k, 3) - 1); };
    auto H = [&](int k) { return ch.H(wrap(k, 3) - 1, 0); };
    cd J[4];
    for (int r = 1; r <= 3; ++r) J[r] = cross(G(r + 1), H(r + 2), G(r + 2), H(r + 1), "j_k3");
    auto Jr = [&](int r) { return J[wrap(r, 3)]; };

    IAPrecoderFrame fr;
    fr.t = ch.t;
    const cd nu45 = J[1] * J[2] * J[3] * G(1) * G(2) * G(3) * H(1) * H(2) * H(3);
    fr.nu[{4, 5}] = nu45;
    for (int r = 1; r <= 3; ++r) {
        const int r1 = wrap(r + 1, 3), r2 = wrap(r + 2, 3);
        const cd ratio = G(r + 2) / H(r + 2);
        const cd base = nu45 * G(r + 2) * H(r + 1);
        fr.beta[{r, 4, 1}] = nu45 * ratio;

        const cd a = base / Jr(r);
        fr.nu[{r, 2}] = a;
        fr.beta[{r, 2, 1}] = -a * ratio;

        fr.nu[{r2, 5}] = base / (H(r + 2) * G(r + 1));

        const cd b = base * G(r) / (G(r + 1) * Jr(r + 1));
        fr.nu[{r1, 3}] = -b;
        fr.beta[{r1, 3, 1}] = b * ratio;

        const cd c = base * G(r) / (H(r + 2) * Jr(r + 2));
        fr.nu[{r2, 1}] = c * H(r + 1) / G(r + 1);
        fr.beta[{r2, 1, 1}] = -c;
    }
    return fr;
}

IAPrecoderFrame ia22_precoders(const ChannelState& ch, std::uint64_t factor_seed)
{
    if (ch.g.size() != 2 || ch.H.rows() != 2 || ch.H.cols() != 2)
        throw Error(ErrorKind::ShapeMismatch, "channel", "(2,2) scheme needs K=2, M=2");
    require_entries(ch);
    auto g = [&](int k) { return ch.g(k - 1); };
    auto h = [&](int k, int m) { return ch.H(k - 1, m - 1); };
    const cd l13 = cross(g(1), h(2, 1), g(2), h(1, 1), "l13");
    const cd l23 = cross(g(2), h(1, 2), g(1), h(2, 2), "l23");

    IAPrecoderFrame fr;
    fr.t = ch.t;
    std::mt19937_64 rng(factor_seed);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    for (int i = 1; i <= 2; ++i)
        for (int j : {1, 2, 5, 6}) fr.random_factors[{i, j}] = std::polar(1.0, phase(rng));
    for (int i = 1; i <= 2; ++i)
        for (int j : {1, 5})
            require_nonzero(fr.random_factors[{i, j}] - fr.random_factors[{i, j + 1}], 1.0, "random factor");

    // RN1 relays j<=4 of files other than 3, RN2 relays j=5..8 of files other than 4
    auto rn_of = [](int, int j) { return j <= 4 ? 1 : 2; };
    auto set_beta = [&](int i, int j, cd v) { fr.beta[{i, j, rn_of(i, j)}] = v; };

    for (int k = 1; k <= 2; ++k) {
        const int kp = wrap(k + 1, 2);
        fr.nu[{kp, 9}] = l13 * l23 * h(k, 1);
        fr.nu[{kp + 2, 9}] = l13 * l23 * h(k, 1) * h(k, 2) * h(kp, 2);
    }
    for (int k = 1; k <= 2; ++k) {
        const int kp = wrap(k + 1, 2);
        const double sgn = k == 1 ? 1.0 : -1.0;
        for (int j = 1; j <= 2; ++j) {
            const cd c1 = fr.random_factors[{kp, j}];
            fr.nu[{kp, j}] = c1 * h(k, 1);
            set_beta(kp, j, -c1 * g(k));
            const cd c2 = fr.random_factors[{kp, 4 + j}];
            fr.nu[{kp, 4 + j}] = -c2 * h(k, 2);
            set_beta(kp, 4 + j, c2 * g(k));
        }
        set_beta(kp, 3, fr.nu[{kp + 2, 9}] * g(k) / h(k, 1));
        set_beta(kp, 4, fr.nu[{kp, 9}] * g(k) / h(k, 1));
        set_beta(kp, 7, fr.nu[{kp + 2, 9}] * g(k) / h(k, 2));
        set_beta(kp, 8, fr.nu[{k + 2, 9}] * g(k) / h(k, 2));

        // vectors (nu, beta) orthogonal to the interfered UE's channel
        auto pair = [&](int i, int j, cd base, cd l, cd v0, cd v1) {
            const cd a = sgn * base * g(k) / l;
            fr.nu[{i, j}] = a * v0;
            set_beta(i, j, a * v1);
        };
        pair(3, 9 - 2 * k, fr.nu[{kp, 9}], l23, -h(kp, 2), g(kp));
        pair(3, 10 - 2 * k, fr.nu[{k + 2, 9}], l23, -h(kp, 2), g(kp));
        pair(4, 5 - 2 * k, fr.nu[{kp, 9}], l13, h(kp, 1), -g(kp));
        pair(4, 6 - 2 * k, fr.nu[{k + 2, 9}], l13, h(kp, 1), -g(kp));
    }
    return fr;
}

std::vector<std::string> ia31_columns()
{
    std::vector<std::string> c;
    for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 5; ++j) c.push_back(ia_label(i, j));
    c.push_back(ia_label(4, 5));
    return c;
}

std::vector<std::string> ia22_columns()
{
    std::vector<std::string> c;
    for (int i = 1; i <= 2; ++i)
        for (int j = 1; j <= 9; ++j) c.push_back(ia_label(i, j));
    for (int j = 5; j <= 9; ++j) c.push_back(ia_label(3, j));
    for (int j : {1, 2, 3, 4, 9}) c.push_back(ia_label(4, j));
    return c;
}

CacheMap ia31_cache()
{
    CacheMap c;
    for (int i = 1; i <= 4; ++i)
        for (int j = 1; j <= 4; ++j) c[1].insert(ia_label(i, j));
    return c;
}

CacheMap ia22_cache()
{
    CacheMap c;
    for (int i = 1; i <= 4; ++i) {
        for (int j = 1; j <= 4; ++j) c[1].insert(ia_label(i, j));
        for (int j = 5; j <= 8; ++j) c[2].insert(ia_label(i, j));
    }
    return c;
}

std::vector<AlignmentSpec> ia31_specs()
{
    std::vector<AlignmentSpec> out;
    for (int k = 1; k <= 3; ++k) {
        const int k1 = wrap(k + 1, 3), k2 = wrap(k + 2, 3);
        AlignmentSpec s;
        s.receiver = Receiver::ue(k);
        for (int j = 1; j <= 5; ++j) s.desired.push_back(ia_label(k, j));
        s.zero_forced = labels({{k1, 1}, {k1, 2}, {k2, 3}});
        s.groups = {labels({{4, 5}, {k1, 4}}),
                    labels({{k2, 4}, {k2, 2}, {k1, 5}}),
                    labels({{k2, 5}, {k2, 1}, {k1, 3}})};
        out.push_back(s);
    }
    // the RN resolves all four uncached DeNB symbols from the first four uses
    AlignmentSpec rn;
    rn.receiver = Receiver::rn(1);
    rn.desired = labels({{4, 5}, {1, 5}, {2, 5}, {3, 5}});
    rn.rows = 4;
    out.push_back(rn);
    return out;
}

std::vector<AlignmentSpec> ia22_specs()
{
    std::vector<AlignmentSpec> out;
    for (int k = 1; k <= 2; ++k) {
        const int kp = wrap(k + 1, 2);
        AlignmentSpec s;
        s.receiver = Receiver::ue(k);
        for (int j = 1; j <= 9; ++j) s.desired.push_back(ia_label(k, j));
        s.zero_forced = labels({{kp, 1}, {kp, 2}, {kp, 5}, {kp, 6},
                                {3, 2 * (k + 1) + 1}, {3, 2 * (k + 1) + 2},
                                {4, 2 * (k - 1) + 1}, {4, 2 * (k - 1) + 2}});
        s.groups = {labels({{5 - k, 9}, {kp, 3}, {kp, 7}}),
                    labels({{k + 2, 9}, {4, 6 - 2 * k}, {kp, 8}, {3, 10 - 2 * k}}),
                    labels({{kp, 9}, {4, 5 - 2 * k}, {kp, 4}, {3, 9 - 2 * k}})};
        out.push_back(s);
    }
    // each RN sees 12 uncached DeNB symbols: its 5 desired plus 7 interferers
    AlignmentSpec r1;
    r1.receiver = Receiver::rn(1);
    r1.desired = labels({{3, 5}, {3, 6}, {3, 7}, {3, 8}, {3, 9},
                         {1, 5}, {1, 6}, {1, 9}, {2, 5}, {2, 6}, {2, 9}, {4, 9}});
    out.push_back(r1);
    AlignmentSpec r2;
    r2.receiver = Receiver::rn(2);
    r2.desired = labels({{4, 1}, {4, 2}, {4, 3}, {4, 4}, {4, 9},
                         {1, 1}, {1, 2}, {1, 9}, {2, 1}, {2, 2}, {2, 9}, {3, 9}});
    out.push_back(r2);
    return out;
}

namespace {

std::vector<Receiver> receivers(int K, int M)
{
    std::vector<Receiver> r;
    for (int k = 1; k <= K; ++k) r.push_back(Receiver::ue(k));
    for (int m = 1; m <= M; ++m) r.push_back(Receiver::rn(m));
    return r;
}

// Assemble matrices and run every receiver check; fills the trace's certificates.
void certify(SchemeTrace& tr, std::uint64_t seed)
{
    std::vector<EffectiveMatrix> mats;
    for (auto rx : receivers(tr.cfg.K, tr.cfg.M))
        mats.push_back(effective_matrix(tr.frames, tr.channels, tr.cache, rx, tr.columns));
    const ZfReport zf = check_zero_forcing(mats, tr.specs);
    tr.max_zf_residual = zf.max_residual;
    tr.reports.clear();
    tr.max_alignment_error = tr.max_condition_number = tr.max_roundtrip_error = 0.0;
    bool ok = zf.pass;
    for (const auto& spec : tr.specs) {
        const EffectiveMatrix* m = nullptr;
        for (const auto& x : mats)
            if (x.receiver == spec.receiver) m = &x;
        DecodabilityReport rep = certify_receiver(*m, spec, seed ^ (0x9e37u + spec.receiver.index));
        rep.zf_residual_max = zf.max_residual;
        ok = ok && rep.verdict;
        tr.max_alignment_error = std::max(tr.max_alignment_error, rep.alignment_error_max);
        tr.max_condition_number = std::max(tr.max_condition_number, rep.grouped_condition_number);
        tr.max_roundtrip_error = std::max(tr.max_roundtrip_error, rep.roundtrip_error);
        tr.reports.push_back(rep);
    }
    tr.pass = ok;
}

template <class Build>
SchemeTrace run_ia(std::uint64_t seed, SchemeTrace tr, int T, int L, Build build)
{
    ChannelSampler smp(seed);
    for (int attempt = 0;; ++attempt) {
        tr.channels.clear();
        tr.frames.clear();
        for (int t = 1; t <= T; ++t) {
            for (int consecutive = 0;; ++consecutive) {
                if (consecutive >= kMaxRedraws)
                    throw Error(ErrorKind::TooManyRedraws, "channel", "too many consecutive degenerate draws");
                ChannelState ch = smp.next(t, tr.cfg.K, tr.cfg.M);
                try {
                    const std::uint64_t fseed = smp.engine()();
                    tr.frames.push_back(build(ch, fseed).coefficients());
                    tr.channels.push_back(std::move(ch));
                    break;
                } catch (const Error& e) {
                    if (e.kind() != ErrorKind::DegenerateChannel) throw;
                    ++tr.redraws;
                }
            }
        }
        certify(tr, seed);
        if (tr.pass || attempt + 1 >= kMaxRedraws) break;
        ++tr.redraws;
    }
    tr.T = T;
    tr.symbols_per_file = L;
    tr.frag_factor = 1;
    tr.ndt = measure_ndt(T, L, 1);
    return tr;
}

} // namespace

SchemeTrace ia31_run(std::uint64_t seed)
{
    SchemeTrace tr;
    tr.scheme = "IA31";
    tr.cfg = make_config(3, 1, Rational(4, 5));
    tr.columns = ia31_columns();
    tr.cache = ia31_cache();
    tr.specs = ia31_specs();
    return run_ia(seed, std::move(tr), 8, 5,
                  [](const ChannelState& ch, std::uint64_t) { return ia31_precoders(ch); });
}

SchemeTrace ia22_run(std::uint64_t seed)
{
    SchemeTrace tr;
    tr.scheme = "IA22";
    tr.cfg = make_config(2, 2, Rational(4, 9));
    tr.columns = ia22_columns();
    tr.cache = ia22_cache();
    tr.specs = ia22_specs();
    return run_ia(seed, std::move(tr), 12, 9,
                  [](const ChannelState& ch, std::uint64_t fs) { return ia22_precoders(ch, fs); });
}

SchemeTrace corner_trace(const NetworkConfig& cfg, std::uint64_t seed)
{
    SchemeTrace tr;
    tr.scheme = "OneShot";
    tr.cfg = validate_config(cfg);
    const DeliveryPlan plan = build_schedule(cfg);

    std::set<std::string> seen;
    auto note = [&](const SymbolId& s) {
        const std::string l = s.label();
        if (seen.insert(l).second) {
            tr.columns.push_back(l);
            for (int m : s.rn_subset) tr.cache[m].insert(l);
        }
    };
    for (const auto& st : plan.steps) {
        for (const auto& [m, s] : st.rn_symbols) note(s);
        for (const auto& [k, s] : st.ue_symbols) note(s);
    }

    ChannelSampler smp(seed);
    const auto rxs = receivers(cfg.K, cfg.M);
    bool ok = true;
    for (const auto& st : plan.steps) {
        std::map<Receiver, std::string> served;
        std::vector<std::string> cols;
        for (const auto& [m, s] : st.rn_symbols) {
            served[Receiver::rn(m)] = s.label();
            cols.push_back(s.label());
        }
        for (const auto& [k, s] : st.ue_symbols) {
            served[Receiver::ue(k)] = s.label();
            cols.push_back(s.label());
        }
        StepCheck chk;
        for (int consecutive = 0;; ++consecutive) {
            if (consecutive >= kMaxRedraws)
                throw Error(ErrorKind::TooManyRedraws, "channel", "too many consecutive degenerate draws");
            ChannelState ch = smp.next(st.t, cfg.K, cfg.M);
            CoefficientFrame fr;
            try {
                fr = to_frame(step_beamformers(st, ch), st.t);
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::DegenerateChannel) throw;
                ++tr.redraws;
                continue;
            }
            std::vector<EffectiveMatrix> rows;
            for (auto rx : rxs) rows.push_back(effective_matrix({fr}, {ch}, tr.cache, rx, cols));
            chk = check_one_shot_step(rows, served, st.t);
            if (!chk.pass && consecutive + 1 < kMaxRedraws) {
                ++tr.redraws;
                continue;
            }
            tr.channels.push_back(std::move(ch));
            tr.frames.push_back(std::move(fr));
            break;
        }
        ok = ok && chk.pass;
        tr.max_zf_residual = std::max(tr.max_zf_residual, chk.max_interference_rel);
        tr.max_roundtrip_error = std::max(tr.max_roundtrip_error, chk.roundtrip_error);
        tr.step_checks.push_back(chk);
    }
    tr.pass = ok;
    tr.T = static_cast<long>(plan.steps.size());
    tr.symbols_per_file = plan.counts.symbols_per_file;
    tr.frag_factor = plan.counts.frag_factor;
    tr.ndt = measure_ndt(tr.T, tr.symbols_per_file, tr.frag_factor);
    return tr;
}

} // namespace ndt

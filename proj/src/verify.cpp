#include "ndt/verify.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace ndt {

std::string Receiver::str() const
{
    return (kind == Kind::UE ? "UE" : "RN") + std::to_string(index);
}

int EffectiveMatrix::col(const std::string& label) const
{
    auto it = std::find(columns.begin(), columns.end(), label);
    return it == columns.end() ? -1 : static_cast<int>(it - columns.begin());
}

EffectiveMatrix EffectiveMatrix::row_block(Eigen::Index begin, Eigen::Index count) const
{
    EffectiveMatrix r{receiver, columns, data.middleRows(begin, count)};
    return r;
}

cd ChannelSampler::sample()
{
    const double re = n_(rng_);
    const double im = n_(rng_);
    return {re, im};
}

ChannelState ChannelSampler::next(long t, int K, int M)
{
    ChannelState ch;
    ch.t = t;
    ch.f.resize(M);
    ch.g.resize(K);
    ch.H.resize(K, M);
    for (int m = 0; m < M; ++m) ch.f(m) = sample();
    for (int k = 0; k < K; ++k) ch.g(k) = sample();
    for (int k = 0; k < K; ++k)
        for (int m = 0; m < M; ++m) ch.H(k, m) = sample();
    return ch;
}

std::vector<ChannelState> draw_channels(std::uint64_t seed, int T, int K, int M)
{
    if (T < 1 || K < 1 || M < 1)
        throw Error(ErrorKind::Domain, "T", "T, K, M must be >= 1");
    ChannelSampler s(seed);
    std::vector<ChannelState> out;
    out.reserve(T);
    for (int t = 1; t <= T; ++t) out.push_back(s.next(t, K, M));
    return out;
}

EffectiveMatrix effective_matrix(const std::vector<CoefficientFrame>& frames,
                                 const std::vector<ChannelState>& channels,
                                 const CacheMap& cache,
                                 Receiver rx,
                                 const std::vector<std::string>& columns)
{
    if (frames.size() != channels.size())
        throw Error(ErrorKind::ShapeMismatch, "frames", "frame and channel counts differ");
    std::unordered_map<std::string, int> idx;
    for (std::size_t j = 0; j < columns.size(); ++j) idx[columns[j]] = static_cast<int>(j);
    auto lookup = [&](const std::string& s) {
        auto it = idx.find(s);
        if (it == idx.end())
            throw Error(ErrorKind::ShapeMismatch, "columns", "coefficient for unknown symbol " + s);
        return it->second;
    };

    const std::set<std::string>* cached = nullptr;
    if (rx.kind == Receiver::Kind::RN) {
        auto it = cache.find(rx.index);
        if (it != cache.end()) cached = &it->second;
    }

    EffectiveMatrix out{rx, columns, Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(frames.size()),
                                                           static_cast<Eigen::Index>(columns.size()))};
    for (std::size_t t = 0; t < frames.size(); ++t) {
        const auto& ch = channels[t];
        const auto& fr = frames[t];
        const int K = static_cast<int>(ch.g.size()), M = static_cast<int>(ch.f.size());
        if (rx.index < 1 || rx.index > (rx.kind == Receiver::Kind::UE ? K : M))
            throw Error(ErrorKind::ShapeMismatch, "receiver", "receiver index out of range: " + rx.str());
        if (rx.kind == Receiver::Kind::UE) {
            const int k = rx.index - 1;
            for (const auto& [s, v] : fr.nu) out.data(t, lookup(s)) += ch.g(k) * v;
            for (const auto& [key, v] : fr.beta) {
                if (key.second < 1 || key.second > M)
                    throw Error(ErrorKind::ShapeMismatch, "beta", "RN index out of range");
                out.data(t, lookup(key.first)) += ch.H(k, key.second - 1) * v;
            }
        } else {
            const int m = rx.index - 1;
            for (const auto& [s, v] : fr.nu) {
                int j = lookup(s);
                if (cached && cached->count(s)) continue; // cancelled with side information
                out.data(t, j) += ch.f(m) * v;
            }
            for (const auto& [key, v] : fr.beta) lookup(key.first); // shape check only
        }
    }
    return out;
}

namespace {

const EffectiveMatrix* find_rx(const std::vector<EffectiveMatrix>& all, Receiver r)
{
    for (const auto& m : all)
        if (m.receiver == r) return &m;
    return nullptr;
}

} // namespace

ZfReport check_zero_forcing(const std::vector<EffectiveMatrix>& all,
                            const std::vector<AlignmentSpec>& specs,
                            double tol)
{
    ZfReport rep;
    for (const auto& spec : specs) {
        const EffectiveMatrix* m = find_rx(all, spec.receiver);
        if (!m) throw Error(ErrorKind::ShapeMismatch, "receiver", "no matrix for " + spec.receiver.str());
        for (const auto& s : spec.zero_forced) {
            const int j = m->col(s);
            if (j < 0) throw Error(ErrorKind::ShapeMismatch, "zf", "unknown symbol " + s);
            for (Eigen::Index t = 0; t < m->data.rows(); ++t) {
                double scale = 0.0;
                for (const auto& o : all) {
                    const int jo = o.col(s);
                    if (jo >= 0 && t < o.data.rows()) scale = std::max(scale, std::abs(o.data(t, jo)));
                }
                const double r = scale > 0 ? std::abs(m->data(t, j)) / scale : 0.0;
                if (r > rep.max_residual) {
                    rep.max_residual = r;
                    rep.worst_symbol = s + "@" + spec.receiver.str();
                }
            }
        }
    }
    rep.pass = rep.max_residual < tol;
    return rep;
}

AlignmentReport check_alignment(const EffectiveMatrix& m, const AlignmentSpec& spec, double tol)
{
    AlignmentReport rep;
    for (const auto& g : spec.groups) {
        if (g.empty()) throw Error(ErrorKind::Domain, "groups", "empty alignment group");
        std::vector<int> cols;
        for (const auto& s : g) {
            int j = m.col(s);
            if (j < 0) throw Error(ErrorKind::ShapeMismatch, "groups", "unknown symbol " + s);
            cols.push_back(j);
        }
        bool any_nonzero = false;
        for (Eigen::Index t = 0; t < m.data.rows(); ++t) {
            double gmax = 0.0;
            for (int j : cols) gmax = std::max(gmax, std::abs(m.data(t, j)));
            if (gmax == 0.0) continue;
            any_nonzero = true;
            for (int j : cols)
                rep.max_error = std::max(rep.max_error, std::abs(m.data(t, j) - m.data(t, cols[0])) / gmax);
        }
        if (!any_nonzero) rep.vacuous = true;
    }
    rep.pass = !rep.vacuous && rep.max_error < tol;
    return rep;
}

namespace {

Eigen::MatrixXcd grouped(const EffectiveMatrix& m,
                         const std::vector<std::string>& desired,
                         const std::vector<std::vector<std::string>>& groups)
{
    Eigen::MatrixXcd G(m.data.rows(), static_cast<Eigen::Index>(desired.size() + groups.size()));
    Eigen::Index c = 0;
    auto take = [&](const std::string& s) {
        int j = m.col(s);
        if (j < 0) throw Error(ErrorKind::ShapeMismatch, "columns", "unknown symbol " + s);
        G.col(c++) = m.data.col(j);
    };
    for (const auto& s : desired) take(s);
    for (const auto& g : groups) {
        if (g.empty()) throw Error(ErrorKind::Domain, "groups", "empty alignment group");
        take(g.front());
    }
    return G;
}

} // namespace

DecodabilityReport check_decodability(const EffectiveMatrix& m,
                                      const std::vector<std::string>& desired,
                                      const std::vector<std::vector<std::string>>& groups)
{
    for (const auto& g : groups)
        for (const auto& s : g)
            if (std::find(desired.begin(), desired.end(), s) != desired.end())
                throw Error(ErrorKind::Domain, "groups", "symbol both desired and aligned: " + s);

    DecodabilityReport rep;
    rep.receiver = m.receiver;
    Eigen::MatrixXcd G = grouped(m, desired, groups);
    rep.columns = static_cast<int>(G.cols());
    for (Eigen::Index j = 0; j < G.cols(); ++j) {
        const double n = G.col(j).norm();
        if (n > 0) G.col(j) /= n;
    }
    const SvdInfo info = svd_info(G);
    rep.rank = info.rank;
    rep.grouped_condition_number = info.cond;
    rep.desired_rank_ok = rep.rank == rep.columns && info.cond < kCondLimit;
    AlignmentSpec spec{m.receiver, desired, groups, {}, -1};
    const AlignmentReport al = check_alignment(m, spec);
    rep.alignment_ok = al.pass;
    rep.alignment_error_max = al.max_error;
    rep.verdict = rep.desired_rank_ok && rep.alignment_ok;
    return rep;
}

double roundtrip_recovery(const EffectiveMatrix& m,
                          const std::vector<std::string>& desired,
                          const std::vector<std::vector<std::string>>& groups,
                          std::uint64_t seed)
{
    ChannelSampler src(seed);
    Eigen::VectorXcd s(m.data.cols());
    for (Eigen::Index j = 0; j < s.size(); ++j) s(j) = src.sample();
    const Eigen::VectorXcd y = m.data * s;

    const Eigen::MatrixXcd G = grouped(m, desired, groups);
    Eigen::VectorXcd truth(G.cols());
    Eigen::Index c = 0;
    for (const auto& d : desired) truth(c++) = s(m.col(d));
    for (const auto& g : groups) {
        cd sum = 0;
        for (const auto& x : g) sum += s(m.col(x));
        truth(c++) = sum;
    }
    const Eigen::VectorXcd z = G.colPivHouseholderQr().solve(y);
    return (z - truth).norm() / truth.norm();
}

StepCheck check_one_shot_step(const std::vector<EffectiveMatrix>& rows,
                              const std::map<Receiver, std::string>& served,
                              long t)
{
    StepCheck out;
    out.t = t;
    for (const auto& [rx, sym] : served) {
        const EffectiveMatrix* m = find_rx(rows, rx);
        if (!m || m->data.rows() != 1)
            throw Error(ErrorKind::ShapeMismatch, "rows", "need one row per receiver");
        const int d = m->col(sym);
        if (d < 0) throw Error(ErrorKind::ShapeMismatch, "served", "unknown symbol " + sym);
        const double rn = m->data.row(0).norm();
        const double drel = rn > 0 ? std::abs(m->data(0, d)) / rn : 0.0;
        out.min_desired_rel = std::min(out.min_desired_rel, drel);
        for (Eigen::Index j = 0; j < m->data.cols(); ++j) {
            if (j == d) continue;
            double scale = 0.0;
            for (const auto& o : rows) scale = std::max(scale, std::abs(o.data(0, j)));
            if (scale > 0) out.max_interference_rel = std::max(out.max_interference_rel, std::abs(m->data(0, j)) / scale);
        }
        const double rt = roundtrip_recovery(*m, {sym}, {}, static_cast<std::uint64_t>(t) * 7919u + rx.index);
        out.roundtrip_error = std::max(out.roundtrip_error, rt);
    }
    out.pass = out.min_desired_rel > kStepDesiredMin && out.max_interference_rel < kStepInterferenceMax
            && out.roundtrip_error < kRoundTripTol;
    return out;
}

DecodabilityReport certify_receiver(const EffectiveMatrix& full, const AlignmentSpec& spec, std::uint64_t seed)
{
    const EffectiveMatrix m = spec.rows >= 0 ? full.row_block(0, spec.rows) : full;
    DecodabilityReport rep = check_decodability(m, spec.desired, spec.groups);
    if (rep.desired_rank_ok) {
        rep.roundtrip_error = roundtrip_recovery(m, spec.desired, spec.groups, seed);
        rep.verdict = rep.verdict && rep.roundtrip_error < kRoundTripTol;
    }
    return rep;
}

Rational measure_ndt(const BigInt& total_T, const BigInt& symbols_per_file, long frag_factor)
{
    if (total_T <= 0 || symbols_per_file <= 0 || frag_factor <= 0)
        throw Error(ErrorKind::Domain, "T", "measure_ndt inputs must be positive");
    return Rational(total_T, symbols_per_file * frag_factor);
}

} // namespace ndt

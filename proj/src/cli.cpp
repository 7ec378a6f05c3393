#include "ndt/cli.hpp"

#include "ndt/report.hpp"

#include "CLI11.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <memory>
#include <set>
#include <sstream>

namespace ndt {

namespace {

struct RunConfig {
    int K = 1, M = 1, N = 0;
    std::string mu = "0";
    int grid = -1;
    int trials = 100;
    std::uint64_t seed = 1;
    std::string out;
    std::string format;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct AssertionFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string decimal(const Rational& r)
{
    std::ostringstream os;
    os << std::setprecision(6) << r.to_double();
    return os.str();
}

// Writes to --out when given, otherwise to the console stream.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : os_(&fallback)
    {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_) throw IoError("cannot open output file: " + path);
            os_ = file_.get();
        }
    }
    std::ostream& operator*() { return *os_; }
    void close()
    {
        os_->flush();
        if (file_) {
            file_->close();
            if (!*file_) throw IoError("write failed");
        }
    }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* os_;
};

NetworkConfig config_of(const RunConfig& rc)
{
    return make_config(rc.K, rc.M, Rational::parse(rc.mu), rc.N);
}

// IA corner points that the implemented schemes reach beyond one-shot.
std::vector<SchemePoint> ia_points(int K, int M)
{
    if (K == 3 && M == 1) return {{Rational(4, 5), Rational(8, 5), SchemeLabel::IA31}};
    if (K == 2 && M == 2) return {{Rational(4, 9), Rational(4, 3), SchemeLabel::IA22}};
    return {};
}

void cmd_bound(const RunConfig& rc, std::ostream& out, std::ostream& err)
{
    const NetworkConfig cfg = config_of(rc);
    const LowerBound lb = lower_bound(cfg);
    const std::string fmt = rc.format.empty() ? "text" : rc.format;
    Sink sink(rc.out, out);
    const bool small = cfg.K + cfg.M <= 4;
    if (fmt == "json") {
        json j = {{"schema", kSchema}, {"command", "bound"}, {"K", cfg.K}, {"M", cfg.M}, {"N", cfg.N},
                  {"mu", rat(cfg.mu)}, {"lower_bound", rat(lb.value)}};
        j["witness"] = lb.witness ? json{{"ell", lb.witness->ell}, {"s", lb.witness->s}, {"s_bar", lb.witness->s_bar}}
                                  : json(nullptr);
        if (small) {
            j["optimal_closed_form"] = rat(optimal_tradeoff_closed(cfg));
            j["conditional_rule_fired"] = closed_form_conditional_fires(cfg);
        }
        *sink << j.dump(2) << '\n';
    } else if (fmt == "csv") {
        *sink << "mu_num,mu_den,lower_bound,ell,s\n"
              << cfg.mu.num() << ',' << cfg.mu.den() << ',' << lb.value.frac() << ','
              << (lb.witness ? std::to_string(lb.witness->ell) : "") << ','
              << (lb.witness ? std::to_string(lb.witness->s) : "") << '\n';
    } else if (fmt == "text") {
        *sink << lb.value << " (" << decimal(lb.value) << "), witness ";
        if (lb.witness) *sink << "ℓ=" << lb.witness->ell << ",s=" << lb.witness->s << '\n';
        else *sink << "none\n";
        if (small) *sink << "closed form (K+M<=4): " << optimal_tradeoff_closed(cfg) << '\n';
    } else {
        throw Error(ErrorKind::InvalidConfig, "format", "unknown format: " + fmt);
    }
    if (small && closed_form_conditional_fires(cfg))
        err << "note: K=1, so the two s=2 terms of the K+M<=4 closed form are dropped\n";
    sink.close();
}

void cmd_tradeoff(const RunConfig& rc, std::ostream& out, std::ostream& err)
{
    const int grid = rc.grid < 0 ? 100 : rc.grid;
    if (grid < 2) throw Error(ErrorKind::InvalidConfig, "grid", "grid must be >= 2");
    make_config(rc.K, rc.M, Rational(0), rc.N);
    const int K = rc.K, M = rc.M;
    const bool small = K + M <= 4;

    std::set<Rational> mus;
    for (int n = 0; n <= grid; ++n) mus.insert(Rational(n, grid));
    for (const auto& mu : discrete_cache_grid(M)) mus.insert(mu);
    std::vector<SchemePoint> pts;
    for (const auto& mu : discrete_cache_grid(M)) pts.push_back({mu, delta_os(make_config(K, M, mu, rc.N)), SchemeLabel::OneShot});
    const Envelope os_env = lower_convex_envelope(pts);
    for (const auto& p : ia_points(K, M)) {
        pts.push_back(p);
        mus.insert(p.mu);
    }
    const Envelope best = lower_convex_envelope(pts);

    const std::string fmt = rc.format.empty() ? "csv" : rc.format;
    if (fmt != "csv" && fmt != "json") throw Error(ErrorKind::InvalidConfig, "format", "unknown format: " + fmt);
    Sink sink(rc.out, out);
    json rows = json::array();
    bool fired = false;
    if (fmt == "csv") *sink << "mu_num,mu_den,lower_bound,oneshot_envelope,optimal_if_small,dof\n";
    for (const auto& mu : mus) {
        const NetworkConfig cfg = make_config(K, M, mu, rc.N);
        const Rational lb = lower_bound(cfg).value;
        const Rational env = os_env(mu);
        std::optional<Rational> opt;
        if (small) {
            opt = optimal_tradeoff_closed(cfg);
            fired = fired || closed_form_conditional_fires(cfg);
        }
        const Rational dof = achievable_dof(cfg, best(mu));
        if (fmt == "csv") {
            *sink << mu.num() << ',' << mu.den() << ',' << lb.frac() << ',' << env.frac() << ','
                  << (opt ? opt->frac() : "") << ',' << dof.frac() << '\n';
        } else {
            rows.push_back({{"mu", rat(mu)}, {"lower_bound", rat(lb)}, {"oneshot_envelope", rat(env)},
                            {"optimal_if_small", opt ? json(rat(*opt)) : json(nullptr)}, {"dof", rat(dof)}});
        }
    }
    if (fmt == "json") {
        json j = {{"schema", kSchema}, {"command", "tradeoff"}, {"K", K}, {"M", M}, {"grid", grid}, {"rows", rows}};
        if (small) j["conditional_rule_fired"] = fired;
        *sink << j.dump(2) << '\n';
    }
    if (fired) err << "note: K=1, so the two s=2 terms of the K+M<=4 closed form are dropped\n";
    sink.close();
}

void cmd_simulate(const RunConfig& rc, std::ostream& out, std::ostream& err)
{
    const NetworkConfig cfg = config_of(rc);
    if (rc.trials < 1) throw Error(ErrorKind::InvalidConfig, "trials", "trials must be >= 1");
    std::string scheme;
    Rational expected;
    if (cfg.K == 3 && cfg.M == 1 && cfg.mu == Rational(4, 5)) {
        scheme = "IA31";
        expected = Rational(8, 5);
    } else if (cfg.K == 2 && cfg.M == 2 && cfg.mu == Rational(4, 9)) {
        scheme = "IA22";
        expected = Rational(4, 3);
    } else if (cfg.cached_count() >= 0) {
        scheme = "OneShot";
        const OneShotCounts c = subpacketize(cfg);
        if (c.total_T > 20000)
            throw Error(ErrorKind::UnsupportedScheme, "mu", "one-shot plan too large to simulate (T=" + c.total_T.str() + ")");
        expected = delta_os(cfg);
    } else {
        throw Error(ErrorKind::UnsupportedScheme, "mu",
                    "no implemented scheme covers (K,M,mu)=(" + std::to_string(cfg.K) + "," + std::to_string(cfg.M) + "," +
                        cfg.mu.str() + "); the envelope value is available from 'tradeoff'");
    }

    const std::string fmt = rc.format.empty() ? "json" : rc.format;
    if (fmt != "csv" && fmt != "json") throw Error(ErrorKind::InvalidConfig, "format", "unknown format: " + fmt);

    json trials = json::array();
    int passes = 0, redraws = 0;
    std::optional<Rational> ndt;
    bool consistent = true;
    long T = 0;
    for (int i = 0; i < rc.trials; ++i) {
        const std::uint64_t s = rc.seed ^ static_cast<std::uint64_t>(i);
        SchemeTrace tr = scheme == "IA31" ? ia31_run(s) : scheme == "IA22" ? ia22_run(s) : corner_trace(cfg, s);
        T = tr.T;
        redraws += tr.redraws;
        if (tr.pass) {
            ++passes;
            if (ndt && *ndt != tr.ndt) consistent = false;
            ndt = tr.ndt;
        }
        trials.push_back({{"trial", i}, {"seed", s}, {"pass", tr.pass}, {"redraws", tr.redraws},
                          {"ndt", rat(tr.ndt)}, {"max_zf_residual", tr.max_zf_residual},
                          {"max_alignment_error", tr.max_alignment_error},
                          {"max_condition_number", tr.max_condition_number},
                          {"max_roundtrip_error", tr.max_roundtrip_error}});
    }
    const Rational rate(passes, rc.trials);
    if (ndt && *ndt != expected) consistent = false;

    Sink sink(rc.out, out);
    if (fmt == "json") {
        json j = {{"schema", kSchema}, {"command", "simulate"}, {"scheme", scheme}, {"K", cfg.K}, {"M", cfg.M},
                  {"N", cfg.N}, {"mu", rat(cfg.mu)}, {"seed", rc.seed}, {"trials", rc.trials}, {"T", T},
                  {"ndt", ndt ? json(rat(*ndt)) : json(nullptr)}, {"expected_ndt", rat(expected)},
                  {"passes", passes}, {"pass_rate", rat(rate)}, {"redraws", redraws},
                  {"trial_results", trials}};
        *sink << j.dump(2) << '\n';
    } else {
        *sink << "trial,seed,pass,redraws,ndt,max_zf_residual,max_alignment_error,max_condition_number,max_roundtrip_error\n";
        for (const auto& t : trials) {
            *sink << t["trial"].get<int>() << ',' << t["seed"].get<std::uint64_t>() << ','
                  << (t["pass"].get<bool>() ? 1 : 0) << ',' << t["redraws"].get<int>() << ','
                  << t["ndt"].get<std::string>() << ',' << t["max_zf_residual"].dump() << ','
                  << t["max_alignment_error"].dump() << ',' << t["max_condition_number"].dump() << ','
                  << t["max_roundtrip_error"].dump() << '\n';
        }
    }
    sink.close();
    if (!consistent) throw AssertionFailure("measured NDT differs across trials or from the scheme's value");
    if (Rational(passes * 100) < Rational(99LL * rc.trials)) {
        err << "pass rate " << rate << " below 99%\n";
        throw AssertionFailure("pass rate below 99%");
    }
}

void cmd_gap(const RunConfig& rc, std::ostream& out, std::ostream& err)
{
    const int grid = rc.grid < 0 ? 36 : rc.grid;
    const GapSweep sw = gap_sweep(rc.K, rc.M, grid);
    const std::string fmt = rc.format.empty() ? "csv" : rc.format;
    if (fmt != "csv" && fmt != "json") throw Error(ErrorKind::InvalidConfig, "format", "unknown format: " + fmt);
    const bool c5 = sw.high_cache_max <= Rational(8, 3);
    Sink sink(rc.out, out);
    if (fmt == "csv") {
        write_gap_csv(*sink, sw.rows);
    } else {
        json rows = json::array();
        for (const auto& r : sw.rows) rows.push_back(to_json(r));
        *sink << json{{"schema", kSchema}, {"command", "gap"}, {"kmax", rc.K}, {"mmax", rc.M}, {"grid", grid},
                      {"high_cache_max_ratio", rat(sw.high_cache_max)},
                      {"argmax", {{"K", sw.argmax_K}, {"M", sw.argmax_M}, {"mu", rat(sw.argmax_mu)}}},
                      {"all_bounds_hold", sw.all_hold}, {"rows", rows}}
                     .dump(2)
              << '\n';
    }
    sink.close();
    err << "max ratio for mu >= ceil((M-1)/2)/M: " << sw.high_cache_max << " (" << decimal(sw.high_cache_max)
        << ") at K=" << sw.argmax_K << " M=" << sw.argmax_M << " mu=" << sw.argmax_mu << '\n';
    if (!sw.all_hold) throw AssertionFailure("a gap bound is violated");
    if (!c5) throw AssertionFailure("high-cache ratio exceeds 8/3");
}

std::uint64_t default_seed()
{
    const char* s = std::getenv("NDT_SEED");
    if (!s || !*s) return 1;
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(s, &end, 0);
    if (errno || *end || *s == '-') throw Error(ErrorKind::InvalidConfig, "NDT_SEED", std::string("invalid NDT_SEED: ") + s);
    return v;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    RunConfig rc;
    try {
        rc.seed = default_seed();
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }

    CLI::App app{"ndt-lab: NDT bounds, one-shot and alignment schemes for cache-aided relay networks"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    auto common = [&](CLI::App* c, bool mu) {
        c->add_option("--k", rc.K, "number of users K")->check(CLI::PositiveNumber);
        c->add_option("--m", rc.M, "number of relays M")->check(CLI::PositiveNumber);
        c->add_option("--n", rc.N, "library size N (default K+M)");
        if (mu) c->add_option("--mu", rc.mu, "fractional cache size as a/b");
        c->add_option("--out", rc.out, "output file (default stdout)");
        c->add_option("--format", rc.format, "csv | json (bound also: text)");
    };
    auto* bound = app.add_subcommand("bound", "lower bound and its maximising (ell, s)");
    common(bound, true);
    auto* tradeoff = app.add_subcommand("tradeoff", "bound / envelope / DoF curves over a mu grid (CSV)");
    common(tradeoff, false);
    tradeoff->add_option("--grid", rc.grid, "mu grid denominator (default 100)");
    auto* simulate = app.add_subcommand("simulate", "seeded Monte-Carlo certification of a scheme");
    common(simulate, true);
    simulate->add_option("--trials", rc.trials, "number of trials (default 100)");
    simulate->add_option("--seed", rc.seed, "base seed (default $NDT_SEED or 1)");
    auto* gap = app.add_subcommand("gap", "gap sweep over K<=--k, M<=--m");
    common(gap, false);
    gap->add_option("--grid", rc.grid, "extra mu grid denominator (default 36)");
    rc.K = 0;
    rc.M = 0;

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, e2;
        const int code = app.exit(e, o, e2);
        out << o.str();
        err << e2.str();
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (gap->parsed()) {
            if (rc.K == 0) rc.K = 8;
            if (rc.M == 0) rc.M = 8;
        }
        if (rc.K == 0 || rc.M == 0) throw Error(ErrorKind::InvalidConfig, rc.K == 0 ? "K" : "M", "--k and --m are required");
        if (bound->parsed()) cmd_bound(rc, out, err);
        else if (tradeoff->parsed()) cmd_tradeoff(rc, out, err);
        else if (simulate->parsed()) cmd_simulate(rc, out, err);
        else cmd_gap(rc, out, err);
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const AssertionFailure& e) {
        err << "assertion failed: " << e.what() << '\n';
        return kExitAssertion;
    } catch (const Error& e) {
        err << "error: " << to_string(e.kind()) << " (" << e.field() << "): " << e.what() << '\n';
        switch (e.kind()) {
        case ErrorKind::UnsupportedScheme: return kExitUnsupported;
        case ErrorKind::TooManyRedraws:
        case ErrorKind::DegenerateChannel: return kExitAssertion;
        default: return kExitConfig;
        }
    }
    return kExitOk;
}

} // namespace ndt

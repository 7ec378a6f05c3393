#include "ndt/report.hpp"

namespace ndt {

namespace {

json cplx(cd v) { return json::array({v.real(), v.imag()}); }

} // namespace

json to_json(const SymbolId& s)
{
    return json::array({s.file, s.rn_subset, s.ue_subset, s.fragment});
}

json to_json(const OneShotCounts& c)
{
    return {
        {"psi", c.psi},
        {"psi_prime", c.psi_prime},
        {"gamma", c.gamma.str()},
        {"symbols_per_file", c.symbols_per_file.str()},
        {"T1", c.T1.str()},
        {"N_UE", c.N_UE.str()},
        {"T2", rat(c.T2)},
        {"n_rn_tx", rat(c.n_rn_tx)},
        {"frag_factor", c.frag_factor},
        {"total_T", c.total_T.str()},
    };
}

json to_json(const DeliveryPlan& p)
{
    json steps = json::array();
    for (const auto& st : p.steps) {
        json rn = json::object(), ue = json::object();
        for (const auto& [m, s] : st.rn_symbols) rn[std::to_string(m)] = to_json(s);
        for (const auto& [k, s] : st.ue_symbols) ue[std::to_string(k)] = to_json(s);
        steps.push_back({{"t", st.t}, {"phase", st.phase}, {"S_R", st.S_R}, {"S_U", st.S_U},
                         {"S_R_prime", st.S_R_prime}, {"rn_symbols", rn}, {"ue_symbols", ue}});
    }
    return {{"schema", kSchema},
            {"K", p.cfg.K},
            {"M", p.cfg.M},
            {"N", p.cfg.N},
            {"mu", rat(p.cfg.mu)},
            {"counts", to_json(p.counts)},
            {"steps", steps}};
}

json to_json(const DecodabilityReport& r)
{
    return {{"receiver", r.receiver.str()},
            {"columns", r.columns},
            {"rank", r.rank},
            {"desired_rank_ok", r.desired_rank_ok},
            {"alignment_ok", r.alignment_ok},
            {"zf_residual_max", r.zf_residual_max},
            {"alignment_error_max", r.alignment_error_max},
            {"grouped_condition_number", r.grouped_condition_number},
            {"roundtrip_error", r.roundtrip_error},
            {"verdict", r.verdict ? "pass" : "fail"}};
}

json to_json(const StepCheck& s)
{
    return {{"t", s.t},
            {"min_desired_rel", s.min_desired_rel},
            {"max_interference_rel", s.max_interference_rel},
            {"roundtrip_error", s.roundtrip_error},
            {"pass", s.pass}};
}

json to_json(const GapReport& g)
{
    return {{"K", g.K},
            {"M", g.M},
            {"mu", rat(g.mu)},
            {"achievable", rat(g.achievable)},
            {"lower", rat(g.lower)},
            {"ratio", rat(g.ratio)},
            {"bound", g.corollary_bound ? json(rat(*g.corollary_bound)) : json(nullptr)},
            {"source", g.bound_source == BoundSource::None ? json(nullptr) : json(to_string(g.bound_source))},
            {"holds", g.holds}};
}

json to_json(const SchemeTrace& tr, bool include_frames)
{
    json j = {{"schema", kSchema},
              {"scheme", tr.scheme},
              {"K", tr.cfg.K},
              {"M", tr.cfg.M},
              {"mu", rat(tr.cfg.mu)},
              {"T", tr.T},
              {"symbols_per_file", tr.symbols_per_file.str()},
              {"frag_factor", tr.frag_factor},
              {"ndt", rat(tr.ndt)},
              {"redraws", tr.redraws},
              {"pass", tr.pass},
              {"max_zf_residual", tr.max_zf_residual},
              {"max_alignment_error", tr.max_alignment_error},
              {"max_condition_number", tr.max_condition_number},
              {"max_roundtrip_error", tr.max_roundtrip_error}};
    json reps = json::array();
    for (const auto& r : tr.reports) reps.push_back(to_json(r));
    j["receivers"] = reps;
    if (include_frames) {
        json frames = json::array();
        for (const auto& fr : tr.frames) {
            json nu = json::object(), beta = json::array();
            for (const auto& [s, v] : fr.nu) nu[s] = cplx(v);
            for (const auto& [key, v] : fr.beta)
                beta.push_back({{"symbol", key.first}, {"rn", key.second}, {"value", cplx(v)}});
            frames.push_back({{"t", fr.t}, {"nu", nu}, {"beta", beta}});
        }
        j["frames"] = frames;
        json steps = json::array();
        for (const auto& s : tr.step_checks) steps.push_back(to_json(s));
        j["step_checks"] = steps;
    }
    return j;
}

} // namespace ndt

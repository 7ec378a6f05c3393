#include "ndt/bounds.hpp"
#include "ndt/cli.hpp"
#include "ndt/gap.hpp"
#include "ndt/ia.hpp"
#include "ndt/oneshot.hpp"
#include "ndt/report.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace ndt;

namespace {

py::object frac(const Rational& r)
{
    static py::object F = py::module_::import("fractions").attr("Fraction");
    return F(r.frac());
}

py::object big(const BigInt& v) { return py::int_(py::str(v.str())); }

// Accepts int, fractions.Fraction or an "a/b" string; floats are rejected.
Rational to_rational(const py::object& o)
{
    if (py::isinstance<py::float_>(o)) throw Error(ErrorKind::Parse, "mu", "floats are not accepted; use a/b");
    return Rational::parse(py::str(o).cast<std::string>());
}

NetworkConfig config(int K, int M, const py::object& mu, int N) { return make_config(K, M, to_rational(mu), N); }

py::object from_json(const json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

} // namespace

PYBIND11_MODULE(_ndt_lab, m)
{
    m.doc() = "NDT bounds, one-shot schedules and alignment schemes for cache-aided relay networks";
    static py::exception<Error> exc(m, "NdtError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            exc(((std::string(to_string(e.kind())) + ": ") + e.what()).c_str());
        }
    });

    m.attr("SCHEMA") = kSchema;

    m.def("lower_bound",
          [](int K, int M, const py::object& mu, int N) {
              const LowerBound lb = lower_bound(config(K, M, mu, N));
              py::dict d;
              d["value"] = frac(lb.value);
              if (lb.witness) d["witness"] = py::dict(py::arg("ell") = lb.witness->ell, py::arg("s") = lb.witness->s);
              else d["witness"] = py::none();
              return d;
          },
          py::arg("K"), py::arg("M"), py::arg("mu"), py::arg("N") = 0);
    m.def("optimal_tradeoff_closed",
          [](int K, int M, const py::object& mu) { return frac(optimal_tradeoff_closed(config(K, M, mu, 0))); },
          py::arg("K"), py::arg("M"), py::arg("mu"));
    m.def("delta_man", [](const py::object& mu, int M) { return frac(delta_man(to_rational(mu), M)); }, py::arg("mu"),
          py::arg("M"));
    m.def("delta_os", [](int K, int M, const py::object& mu) { return frac(delta_os(config(K, M, mu, 0))); },
          py::arg("K"), py::arg("M"), py::arg("mu"));
    m.def("classify_region",
          [](int K, int M, const py::object& mu) { return std::string(to_string(classify_region(config(K, M, mu, 0)))); },
          py::arg("K"), py::arg("M"), py::arg("mu"));
    m.def("subpacketize",
          [](int K, int M, const py::object& mu) {
              const OneShotCounts c = subpacketize(config(K, M, mu, 0));
              py::dict d;
              d["psi"] = c.psi;
              d["psi_prime"] = c.psi_prime;
              d["gamma"] = big(c.gamma);
              d["symbols_per_file"] = big(c.symbols_per_file);
              d["T1"] = big(c.T1);
              d["N_UE"] = big(c.N_UE);
              d["T2"] = frac(c.T2);
              d["total_T"] = big(c.total_T);
              d["frag_factor"] = c.frag_factor;
              return d;
          },
          py::arg("K"), py::arg("M"), py::arg("mu"));
    m.def("envelope",
          [](const std::vector<std::pair<py::object, py::object>>& points, const py::object& mu) {
              std::vector<SchemePoint> pts;
              for (const auto& [x, y] : points) pts.push_back({to_rational(x), to_rational(y), SchemeLabel::OneShot});
              return frac(lower_convex_envelope(pts)(to_rational(mu)));
          },
          py::arg("points"), py::arg("mu"), "Lower convex envelope of (mu, ndt) points evaluated at mu.");
    m.def("achievable_dof",
          [](int K, int M, const py::object& mu, const py::object& ndt) {
              return frac(achievable_dof(config(K, M, mu, 0), to_rational(ndt)));
          },
          py::arg("K"), py::arg("M"), py::arg("mu"), py::arg("ndt"));
    m.def("simulate",
          [](int K, int M, const py::object& mu, std::uint64_t seed) {
              const NetworkConfig cfg = config(K, M, mu, 0);
              SchemeTrace tr;
              {
                  py::gil_scoped_release nogil;
                  if (K == 3 && M == 1 && cfg.mu == Rational(4, 5)) tr = ia31_run(seed);
                  else if (K == 2 && M == 2 && cfg.mu == Rational(4, 9)) tr = ia22_run(seed);
                  else tr = corner_trace(cfg, seed);
              }
              return from_json(to_json(tr, false));
          },
          py::arg("K"), py::arg("M"), py::arg("mu"), py::arg("seed") = 1,
          "One seeded run of the scheme covering (K, M, mu); returns the certificate report.");
    m.def("empirical_gap",
          [](int K, int M, const py::object& mu) { return from_json(to_json(empirical_gap(config(K, M, mu, 0)))); },
          py::arg("K"), py::arg("M"), py::arg("mu"));
    m.def("gap_sweep",
          [](int kmax, int mmax, int grid) {
              GapSweep sw;
              {
                  py::gil_scoped_release nogil;
                  sw = gap_sweep(kmax, mmax, grid);
              }
              py::dict d;
              d["high_cache_max"] = frac(sw.high_cache_max);
              d["argmax"] = py::make_tuple(sw.argmax_K, sw.argmax_M, frac(sw.argmax_mu));
              d["all_hold"] = sw.all_hold;
              d["rows"] = sw.rows.size();
              return d;
          },
          py::arg("kmax") = 8, py::arg("mmax") = 8, py::arg("grid") = 36);
    m.def("cli",
          [](const std::vector<std::string>& args) {
              std::vector<const char*> argv{"ndt-lab"};
              for (const auto& a : args) argv.push_back(a.c_str());
              std::ostringstream out, err;
              const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
              return py::make_tuple(code, out.str(), err.str());
          },
          py::arg("args"), "Run the command-line tool in-process; returns (exit_code, stdout, stderr).");
}

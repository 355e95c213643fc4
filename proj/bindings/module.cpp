#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "semidecay/json_io.hpp"

namespace py = pybind11;
using namespace semidecay;

namespace {

OperatorModel operator_from_json_str(const std::string& text) {
  return operator_from_json(Json::parse(text));
}

}  // namespace

PYBIND11_MODULE(_semidecay, m) {
  m.doc() = "functional-calculus laboratory for semigroup decay rates";

  py::register_exception<Error>(m, "SemidecayError");

  py::class_<OperatorModel>(m, "OperatorModel")
      .def_static("diagonal", [](const Vector& eigs) { return OperatorModel::diagonal(eigs); })
      .def_static("block_diagonal",
                  [](const std::vector<Matrix>& blocks) {
                    return OperatorModel::block_diagonal(blocks);
                  })
      .def_static("dense", [](const Matrix& d) { return OperatorModel::from_dense(d); })
      .def_static("jordan2",
                  [](Complex lam, Complex g) { return OperatorModel::jordan2(lam, g); })
      .def_static("from_json", &operator_from_json_str)
      .def("to_json", [](const OperatorModel& A) { return dump_json(operator_to_json(A)); })
      .def_property_readonly("dim", &OperatorModel::dim)
      .def_readwrite("injective", &OperatorModel::injective)
      .def("validate", &OperatorModel::validate)
      .def("to_dense", [](const OperatorModel& A) { return A.as_matrix().to_dense(); });

  m.def("spectrum", &spectrum);
  m.def(
      "resolvent_shift",
      [](const OperatorModel& A, Complex lam) { return resolvent_shift(A, lam).to_dense(); },
      py::arg("A"), py::arg("lam"), "(lam I + A)^{-1} as a dense matrix");
  m.def(
      "operator_norm",
      [](const Matrix& M, double p) {
        auto r = operator_norm(OpMatrix::dense(M), NormSpace{p});
        return py::make_tuple(r.value, r.estimated);
      },
      py::arg("M"), py::arg("p") = 2.0, "(value, estimated) for the ell^p operator norm");
  m.def("fourier_r", &fourier_r);

  m.def("catalog_names", [] {
    std::vector<std::string> names;
    for (const auto& e : cbf_catalog()) names.push_back(e.name);
    return names;
  });
  m.def(
      "eval_cbf",
      [](const std::string& name, Complex lam) {
        for (const auto& e : cbf_catalog())
          if (e.name == name) return eval_cbf_scalar(e.rep, lam);
        throw ConfigError("unknown catalog entry: " + name);
      },
      py::arg("name"), py::arg("lam"), "Stieltjes quadrature of a catalog entry");
  m.def(
      "eval_cbf_closed_form",
      [](const std::string& name, Complex lam) {
        for (const auto& e : cbf_catalog())
          if (e.name == name) return e.closed_form(lam);
        throw ConfigError("unknown catalog entry: " + name);
      },
      py::arg("name"), py::arg("lam"));
  m.def(
      "apply_cbf",
      [](const std::string& name, const OperatorModel& A, const Vector& x) {
        for (const auto& e : cbf_catalog())
          if (e.name == name) return apply_cbf_operator(e.rep, A, x);
        throw ConfigError("unknown catalog entry: " + name);
      },
      py::arg("name"), py::arg("A"), py::arg("x"));
  m.def("nollau_log1p",
        [](const OperatorModel& A, const Vector& x) { return nollau_log1p(A, x); });

  m.def(
      "dunford",
      [](const OperatorModel& A, double alpha, double beta, double u1, double u2) {
        HInftyZeroSymbol s{alpha, beta, u1, u2};
        auto r = dunford_apply(s, A, default_contour(A, s));
        auto oracle = matrix_function_oracle([&](Complex z) { return s.eval(z); }, A);
        const double rel =
            (r.value - oracle).frobenius() / (1.0 + oracle.frobenius());
        return py::make_tuple(r.value.to_dense(), oracle.to_dense(), rel, r.tail_bound);
      },
      py::arg("A"), py::arg("alpha"), py::arg("beta"), py::arg("upsilon1") = 0.0,
      py::arg("upsilon2") = 0.0,
      "(matrix, oracle_matrix, rel_err, tail_bound) for the sector-contour calculus");
  m.def("log_operator",
        [](const OperatorModel& A) { return log_operator(A).to_dense(); });
  m.def(
      "frac_power_inv",
      [](const OperatorModel& A, double tau) { return frac_power_inv(A, tau).to_dense(); },
      py::arg("A"), py::arg("tau"));
  m.def(
      "weight_operator",
      [](const OperatorModel& A, const std::string& family, double mu, double nu,
         double upsilon) {
        WeightFamily f;
        if (family == "infinity") f = WeightFamily::Infinity;
        else if (family == "infinity_zero") f = WeightFamily::InfinityZero;
        else if (family == "zero") f = WeightFamily::Zero;
        else throw ConfigError("unknown weight family: " + family);
        auto w = weight_operator(A, f, {mu, nu, upsilon});
        return py::make_tuple(w.matrix.to_dense(), w.description);
      },
      py::arg("A"), py::arg("family"), py::arg("mu") = 0.0, py::arg("nu") = 0.0,
      py::arg("upsilon") = 0.0);

  m.def(
      "evolve",
      [](const OperatorModel& A, double t) { return evolve(A, t).to_dense(); },
      py::arg("A"), py::arg("t"), "T(t) = exp(-tA)");
  m.def(
      "laplace_orbit_infinity",
      [](const OperatorModel& A, double nu, double upsilon, double t, const Vector& y) {
        auto r = laplace_orbit_infinity(A, nu, upsilon, t, y);
        return py::make_tuple(r.value, r.tail_bound);
      },
      py::arg("A"), py::arg("nu"), py::arg("upsilon"), py::arg("t"), py::arg("y"));
  m.def(
      "laplace_orbit_infinity_zero",
      [](const OperatorModel& A, double mu, double nu, double upsilon, double t,
         const Vector& y) {
        auto r = laplace_orbit_infinity_zero(A, mu, nu, upsilon, t, y);
        return py::make_tuple(r.value, r.tail_bound);
      },
      py::arg("A"), py::arg("mu"), py::arg("nu"), py::arg("upsilon"), py::arg("t"),
      py::arg("y"));
  m.def(
      "decay_curve",
      [](const OperatorModel& A, const std::string& family, double mu, double nu,
         double upsilon, double t_min, double t_max, int per_decade, double p) {
        WeightFamily f;
        if (family == "infinity") f = WeightFamily::Infinity;
        else if (family == "infinity_zero") f = WeightFamily::InfinityZero;
        else if (family == "zero") f = WeightFamily::Zero;
        else throw ConfigError("unknown weight family: " + family);
        auto W = weight_operator(A, f, {mu, nu, upsilon});
        auto grid = log_spaced_grid(t_min, t_max, per_decade);
        auto curve = decay_curve(A, W, grid, NormSpace{p});
        return py::make_tuple(curve.t_grid, curve.values);
      },
      py::arg("A"), py::arg("family") = "infinity", py::arg("mu") = 0.0, py::arg("nu") = 0.0,
      py::arg("upsilon") = 0.0, py::arg("t_min") = 1.0, py::arg("t_max") = 1e4,
      py::arg("per_decade") = 25, py::arg("p") = 2.0);

  m.def(
      "resolvent_profile",
      [](const OperatorModel& A, double zero_lo, double zero_hi, double inf_lo,
         double inf_hi, int per_decade, const std::vector<double>& extra) {
        ProfilePlan plan;
        plan.zero_lo = zero_lo;
        plan.zero_hi = zero_hi;
        plan.inf_lo = inf_lo;
        plan.inf_hi = inf_hi;
        plan.per_decade = per_decade;
        plan.extra = extra;
        auto prof = resolvent_profile(A, plan, NormSpace{2.0});
        return py::make_tuple(prof.s, prof.n, prof.M);
      },
      py::arg("A"), py::arg("zero_lo") = 1e-6, py::arg("zero_hi") = 1e-2,
      py::arg("inf_lo") = 1e2, py::arg("inf_hi") = 1e6, py::arg("per_decade") = 64,
      py::arg("extra") = std::vector<double>{});

  m.def(
      "lemma_b1_check",
      [](double nu, double zeta, double mu, const std::vector<double>& ts,
         const std::string& variant) {
        auto v = variant == "log2" ? LemmaB1Variant::Log2 : LemmaB1Variant::TwoPiILog;
        auto rep = lemma_b1_check(nu, zeta, mu, ts, v);
        return py::make_tuple(rep.passed, rep.max_violation);
      },
      py::arg("nu"), py::arg("zeta"), py::arg("mu"), py::arg("ts"),
      py::arg("variant") = "log2");

  // JSON-string interfaces for the structured layers; the python package
  // wraps them with dict-based helpers.
  m.def("predict_decay_json", [](const std::string& theorem, const std::string& params) {
    Json q = Json::parse(params);
    Json wrap;
    wrap["name"] = "tmp";
    wrap["family"] = {{"kind", "DiagInf"}, {"N", 16}};
    wrap["theorem"] = theorem;
    wrap["params"] = q;
    auto spec = experiment_from_json(wrap);
    return dump_json(prediction_to_json(predict_decay(spec.theorem, spec.params)));
  });
  m.def("run_experiment_json", [](const std::string& spec_text) {
    auto spec = experiment_from_json(Json::parse(spec_text));
    return dump_json(report_to_json(run_experiment(spec)));
  });
  m.def("paper_suite_json", [] {
    Json out = Json::array();
    for (const auto& e : paper_suite()) out.push_back(experiment_to_json(e));
    return dump_json(out);
  });
  m.def("build_family_json", [](const std::string& spec_text) {
    Json wrap;
    wrap["name"] = "tmp";
    wrap["family"] = Json::parse(spec_text);
    wrap["theorem"] = "CorHilbertInf";
    auto spec = experiment_from_json(wrap);
    return build_family(spec.family);
  });
}

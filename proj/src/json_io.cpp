#include "semidecay/json_io.hpp"

#include <cstdio>

#include "semidecay/errors.hpp"

namespace semidecay {

namespace {

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw ConfigError("complex numbers are [re, im] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(complex_to_json(m(i, k)));
    rows.push_back(row);
  }
  return rows;
}

Matrix matrix_from_json(const Json& j) {
  const Eigen::Index n = static_cast<Eigen::Index>(j.size());
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (static_cast<Eigen::Index>(j[i].size()) != n)
      throw ConfigError("matrix rows must be square");
    for (Eigen::Index k = 0; k < n; ++k) m(i, k) = complex_from_json(j[i][k]);
  }
  return m;
}

std::string csv_num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

TheoremId theorem_from_name(const std::string& name) {
  for (TheoremId id : {TheoremId::ThmInf, TheoremId::CorHilbertInf, TheoremId::CorInfB0,
                       TheoremId::ThmInfZero, TheoremId::CorInfZeroAB0, TheoremId::ThmZero,
                       TheoremId::CorZeroA0, TheoremId::LogOnlyBanach,
                       TheoremId::LogOnlyHilbert, TheoremId::ThmInfWeighted,
                       TheoremId::ThmInfZeroWeighted})
    if (name == theorem_name(id)) return id;
  throw ConfigError("unknown theorem id: " + name);
}

FamilyKind family_from_name(const std::string& name) {
  for (FamilyKind k : {FamilyKind::DiagInf, FamilyKind::DiagZero, FamilyKind::DiagTwoSided,
                       FamilyKind::JordanUnboundedInf, FamilyKind::LogOnly})
    if (name == family_name(k)) return k;
  throw ConfigError("unknown family kind: " + name);
}

}  // namespace

Json operator_to_json(const OperatorModel& A) {
  Json j;
  switch (A.kind) {
    case OperatorModel::Kind::Diagonal: {
      j["kind"] = "diagonal";
      Json data = Json::array();
      for (Eigen::Index i = 0; i < A.eigen_data.size(); ++i)
        data.push_back(complex_to_json(A.eigen_data(i)));
      j["data"] = data;
      break;
    }
    case OperatorModel::Kind::BlockDiagonal: {
      j["kind"] = "block_diagonal";
      Json data = Json::array();
      for (const auto& b : A.blocks) data.push_back(matrix_to_json(b));
      j["data"] = data;
      break;
    }
    case OperatorModel::Kind::Dense:
      j["kind"] = "dense";
      j["data"] = matrix_to_json(A.dense);
      break;
  }
  j["dim"] = A.dim();
  j["injective"] = A.injective;
  Json tags = Json::array();
  if (A.left_half_plane_resolvent) tags.push_back("leftHalfPlaneResolvent");
  for (const auto& t : A.tags)
    if (t != "leftHalfPlaneResolvent") tags.push_back(t);
  j["tags"] = tags;
  return j;
}

OperatorModel operator_from_json(const Json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  OperatorModel A;
  if (kind == "diagonal") {
    const auto& data = j.at("data");
    Vector v(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) v(i) = complex_from_json(data[i]);
    A = OperatorModel::diagonal(std::move(v));
  } else if (kind == "block_diagonal") {
    std::vector<Matrix> blocks;
    for (const auto& b : j.at("data")) blocks.push_back(matrix_from_json(b));
    A = OperatorModel::block_diagonal(std::move(blocks));
  } else if (kind == "dense") {
    A = OperatorModel::from_dense(matrix_from_json(j.at("data")));
  } else {
    throw ConfigError("unknown operator kind: " + kind);
  }
  if (j.contains("injective")) A.injective = j["injective"].get<bool>();
  if (j.contains("tags")) {
    for (const auto& t : j["tags"]) {
      const std::string tag = t.get<std::string>();
      if (tag == "leftHalfPlaneResolvent") A.left_half_plane_resolvent = true;
      A.tags.push_back(tag);
    }
  }
  if (j.contains("dim") && j["dim"].get<Eigen::Index>() != A.dim())
    throw ConfigError("declared dim does not match the data");
  A.validate();
  return A;
}

Json experiment_to_json(const ExperimentSpec& spec) {
  Json j;
  j["name"] = spec.name;
  j["family"] = {{"kind", family_name(spec.family.kind)}, {"alpha", spec.family.alpha},
                 {"a", spec.family.a},                    {"beta", spec.family.beta},
                 {"b", spec.family.b},                    {"g", spec.family.g},
                 {"N", spec.family.N},                    {"seed", spec.family.seed}};
  j["theorem"] = theorem_name(spec.theorem);
  j["params"] = {{"alpha", spec.params.alpha}, {"a", spec.params.a},
                 {"beta", spec.params.beta},   {"b", spec.params.b},
                 {"sigma", spec.params.sigma}, {"tau", spec.params.tau},
                 {"rho", spec.params.rho},     {"delta", spec.params.delta},
                 {"epsilon", spec.params.epsilon}, {"p", spec.params.p}};
  j["t_grid"] = {{"t_min", spec.t_grid.t_min},
                 {"t_max", spec.t_grid.t_max},
                 {"per_decade", spec.t_grid.per_decade}};
  j["p"] = spec.p;
  j["tolerances"] = {{"fit_tol_poly", spec.tol.fit_tol_poly},
                     {"bound_margin", spec.tol.bound_margin},
                     {"stability_max_growth", spec.tol.stability_max_growth},
                     {"stretch_slope_factor", spec.tol.stretch_slope_factor}};
  return j;
}

ExperimentSpec experiment_from_json(const Json& j) {
  ExperimentSpec spec;
  spec.name = j.at("name").get<std::string>();
  const auto& f = j.at("family");
  spec.family.kind = family_from_name(f.at("kind").get<std::string>());
  if (f.contains("alpha")) spec.family.alpha = f["alpha"].get<double>();
  if (f.contains("a")) spec.family.a = f["a"].get<double>();
  if (f.contains("beta")) spec.family.beta = f["beta"].get<double>();
  if (f.contains("b")) spec.family.b = f["b"].get<double>();
  if (f.contains("g")) spec.family.g = f["g"].get<double>();
  if (f.contains("N")) spec.family.N = f["N"].get<int>();
  if (f.contains("seed")) spec.family.seed = f["seed"].get<std::uint64_t>();
  spec.theorem = theorem_from_name(j.at("theorem").get<std::string>());
  if (j.contains("params")) {
    const auto& q = j["params"];
    auto rd = [&](const char* k, double& out) {
      if (q.contains(k)) out = q[k].get<double>();
    };
    rd("alpha", spec.params.alpha);
    rd("a", spec.params.a);
    rd("beta", spec.params.beta);
    rd("b", spec.params.b);
    rd("sigma", spec.params.sigma);
    rd("tau", spec.params.tau);
    rd("rho", spec.params.rho);
    rd("delta", spec.params.delta);
    rd("epsilon", spec.params.epsilon);
    rd("p", spec.params.p);
  }
  if (j.contains("t_grid")) {
    const auto& g = j["t_grid"];
    if (g.contains("t_min")) spec.t_grid.t_min = g["t_min"].get<double>();
    if (g.contains("t_max")) spec.t_grid.t_max = g["t_max"].get<double>();
    if (g.contains("per_decade")) spec.t_grid.per_decade = g["per_decade"].get<int>();
  }
  if (j.contains("p")) spec.p = j["p"].get<double>();
  if (j.contains("tolerances")) {
    const auto& t = j["tolerances"];
    if (t.contains("fit_tol_poly")) spec.tol.fit_tol_poly = t["fit_tol_poly"].get<double>();
    if (t.contains("bound_margin")) spec.tol.bound_margin = t["bound_margin"].get<double>();
    if (t.contains("stability_max_growth"))
      spec.tol.stability_max_growth = t["stability_max_growth"].get<double>();
    if (t.contains("stretch_slope_factor"))
      spec.tol.stretch_slope_factor = t["stretch_slope_factor"].get<double>();
  }
  return spec;
}

Json prediction_to_json(const DecayPrediction& pred) {
  Json j;
  j["theorem"] = theorem_name(pred.id);
  j["form"] = pred.stretched ? "stretched" : "poly_log";
  j["poly"] = pred.poly_exponent;
  j["logexp"] = pred.log_exponent;
  if (pred.stretched) {
    j["stretch_rate"] = pred.stretch_rate;
    j["stretch_power"] = pred.stretch_power;
  }
  j["formula"] = pred.formula;
  return j;
}

Json report_to_json(const DecayReport& rep) {
  Json j;
  j["experiment"] = experiment_to_json(rep.spec);
  j["prediction"] = prediction_to_json(rep.prediction);
  j["fitted_C"] = rep.fitted_C;
  j["fitted_poly_exponent"] = rep.fitted_poly_exponent;
  j["fit_stderr"] = rep.fit_stderr;
  j["max_ratio_tail"] = rep.max_ratio_tail;
  j["ratio_tail_growth"] = rep.ratio_tail_growth;
  j["grid_shortened"] = rep.grid_shortened;
  j["verdict"] = verdict_name(rep.verdict);
  j["reasons"] = rep.reasons;
  Json curve;
  curve["t"] = rep.curve.t_grid;
  curve["norm"] = rep.curve.values;
  curve["weight"] = rep.curve.weight_desc;
  curve["p"] = rep.curve.norm_p;
  j["curve"] = curve;
  j["bound_ratio"] = rep.bound_ratio;
  return j;
}

Json profile_to_json(const GrowthProfile& prof) {
  Json j;
  j["p"] = prof.norm_p;
  j["s"] = prof.s;
  j["n"] = prof.n;
  j["M"] = prof.M;
  if (prof.fit_inf) {
    j["fit_inf"] = {{"beta", prof.fit_inf->beta},       {"b", prof.fit_inf->b},
                    {"C", prof.fit_inf->C},             {"r2", prof.fit_inf->r2},
                    {"b_dropped", prof.fit_inf->b_dropped}, {"clamped", prof.fit_inf->clamped}};
  }
  if (prof.fit_zero) {
    j["fit_zero"] = {{"alpha", prof.fit_zero->alpha},   {"a", prof.fit_zero->a},
                     {"C", prof.fit_zero->C},           {"r2", prof.fit_zero->r2},
                     {"a_dropped", prof.fit_zero->a_dropped},
                     {"clamped", prof.fit_zero->clamped}};
  }
  return j;
}

Json check_to_json(const CheckReport& rep) {
  Json j;
  j["passed"] = rep.passed;
  j["points_checked"] = rep.points_checked;
  j["max_violation"] = rep.max_violation;
  Json v = Json::array();
  for (const auto& viol : rep.violations)
    v.push_back({{"where", viol.where}, {"amount", viol.amount}});
  j["violations"] = v;
  j["skipped"] = rep.skipped;
  j["notes"] = rep.notes;
  return j;
}

std::string curve_to_csv(const DecayCurve& curve) {
  std::string out = "t,norm\n";
  for (std::size_t i = 0; i < curve.t_grid.size(); ++i)
    out += csv_num(curve.t_grid[i]) + "," + csv_num(curve.values[i]) + "\n";
  return out;
}

std::string profile_to_csv(const GrowthProfile& prof) {
  std::string out = "s,n,M\n";
  for (std::size_t i = 0; i < prof.s.size(); ++i)
    out += csv_num(prof.s[i]) + "," + csv_num(prof.n[i]) + "," + csv_num(prof.M[i]) + "\n";
  return out;
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace semidecay

// semidecay command-line surface: catalog, calc, profile, decay, verify.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "semidecay/json_io.hpp"

namespace fs = std::filesystem;
using namespace semidecay;

namespace {

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open input file: " + path);
  Json j;
  in >> j;
  return j;
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write output file: " + path.string());
  out << content;
}

std::pair<double, double> parse_window(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw ConfigError("window must be lo:hi, got '" + text + "'");
  return {std::stod(text.substr(0, colon)), std::stod(text.substr(colon + 1))};
}

int cmd_catalog(const fs::path& outdir, bool probe, const Config& cfg) {
  Json out = Json::array();
  for (const auto& entry : cbf_catalog()) {
    Json e;
    e["name"] = entry.name;
    e["a"] = entry.rep.a;
    e["b"] = entry.rep.b;
    e["density_formula"] = entry.rep.density_formula;
    e["support"] = {entry.rep.s_lo,
                    std::isinf(entry.rep.s_hi) ? Json("inf") : Json(entry.rep.s_hi)};
    if (probe) {
      Json table = Json::array();
      for (int k = -3; k <= 3; ++k) {
        const Complex lam(std::pow(10.0, k), 0.0);
        const Complex q = eval_cbf_scalar(entry.rep, lam, cfg);
        const Complex cf = entry.closed_form(lam);
        Json row;
        row["lambda"] = {lam.real(), lam.imag()};
        row["quadrature"] = {q.real(), q.imag()};
        row["closed_form"] = {cf.real(), cf.imag()};
        row["rel_err"] = std::abs(q - cf) / std::max(1e-300, std::abs(cf));
        table.push_back(row);
      }
      e["probe_table"] = table;
    }
    out.push_back(e);
  }
  write_file(outdir / "catalog.json", dump_json(out));
  std::cout << "wrote " << (outdir / "catalog.json").string() << "\n";
  return 0;
}

int cmd_calc(const std::string& input, const fs::path& outdir, const Config& cfg) {
  const Json j = read_json_file(input);
  const OperatorModel A = operator_from_json(j.at("operator"));
  Json out;
  OpMatrix value, oracle;
  double tail = 0.0;
  if (j.contains("symbol")) {
    const auto& s = j["symbol"];
    HInftyZeroSymbol sym;
    sym.alpha = s.value("alpha", 1.0);
    sym.beta = s.value("beta", 1.0);
    sym.upsilon1 = s.value("upsilon1", 0.0);
    sym.upsilon2 = s.value("upsilon2", 0.0);
    SectorContour contour = default_contour(A, sym, cfg);
    if (j.contains("contour")) {
      const auto& c = j["contour"];
      if (c.contains("omega_prime")) contour.omega_prime = c["omega_prime"].get<double>();
      if (c.contains("r_min")) contour.r_min = c["r_min"].get<double>();
      if (c.contains("r_max")) contour.r_max = c["r_max"].get<double>();
      if (c.contains("nodes_per_decade"))
        contour.nodes_per_decade = c["nodes_per_decade"].get<int>();
    }
    auto res = dunford_apply(sym, A, contour, cfg);
    value = res.value;
    tail = res.tail_bound;
    oracle = matrix_function_oracle([&](Complex z) { return sym.eval(z); }, A, cfg);
  } else if (j.contains("function")) {
    const std::string name = j["function"].get<std::string>();
    if (name == "log") {
      value = log_operator(A, cfg);
      oracle = matrix_function_oracle([](Complex z) { return std::log(z); }, A, cfg);
    } else if (name == "sqrt") {
      value = matrix_function_oracle([](Complex z) { return std::sqrt(z); }, A, cfg);
      oracle = value;
    } else if (name == "exp") {
      value = evolve(A, 1.0);  // exp(-A)
      oracle = matrix_function_oracle([](Complex z) { return std::exp(-z); }, A, cfg);
    } else {
      throw ConfigError("unknown function name: " + name + " (expected log|sqrt|exp)");
    }
  } else {
    throw ConfigError("calc input needs 'symbol' or 'function'");
  }
  const double rel =
      (value - oracle).frobenius() / std::max(1e-300, 1.0 + oracle.frobenius());
  auto matrix_json = [](const OpMatrix& m) {
    Json rows = Json::array();
    const Matrix d = m.to_dense();
    for (Eigen::Index i = 0; i < d.rows(); ++i) {
      Json row = Json::array();
      for (Eigen::Index k = 0; k < d.cols(); ++k)
        row.push_back({d(i, k).real(), d(i, k).imag()});
      rows.push_back(row);
    }
    return rows;
  };
  out["matrix"] = matrix_json(value);
  out["oracle_matrix"] = matrix_json(oracle);
  out["rel_err"] = rel;
  out["tail_bound"] = tail;
  write_file(outdir / "calc.json", dump_json(out));
  std::cout << "wrote " << (outdir / "calc.json").string() << " (rel_err " << rel << ")\n";
  return 0;
}

int cmd_profile(const std::string& input, const fs::path& outdir,
                const std::string& window_inf, const std::string& window_zero,
                int per_decade, const Config& cfg, const WorkerPool& pool) {
  (void)cfg;
  const Json j = read_json_file(input);
  const OperatorModel A =
      j.contains("operator") ? operator_from_json(j["operator"]) : operator_from_json(j);
  ProfilePlan plan;
  auto [ilo, ihi] = parse_window(window_inf);
  auto [zlo, zhi] = parse_window(window_zero);
  plan.inf_lo = ilo;
  plan.inf_hi = ihi;
  plan.zero_lo = zlo;
  plan.zero_hi = zhi;
  plan.per_decade = per_decade;
  if (j.contains("extra_radii"))
    for (const auto& r : j["extra_radii"]) plan.extra.push_back(r.get<double>());
  GrowthProfile prof = resolvent_profile(A, plan, NormSpace{2.0}, pool);
  try {
    prof.fit_inf = fit_growth_infinity(prof, plan.inf_lo, plan.inf_hi);
  } catch (const InsufficientSamples&) {
  }
  try {
    prof.fit_zero = fit_growth_zero(prof, plan.zero_lo, plan.zero_hi);
  } catch (const InsufficientSamples&) {
  }
  write_file(outdir / "profile.csv", profile_to_csv(prof));
  write_file(outdir / "profile_fits.json", dump_json(profile_to_json(prof)));
  std::cout << "wrote " << (outdir / "profile.csv").string() << " and profile_fits.json\n";
  return 0;
}

int cmd_decay(const std::string& input, const fs::path& outdir, const Config& cfg,
              const WorkerPool& pool) {
  const Json j = read_json_file(input);
  OperatorModel A;
  if (j.contains("operator")) {
    A = operator_from_json(j["operator"]);
  } else if (j.contains("family")) {
    Json wrap;
    wrap["name"] = "decay";
    wrap["family"] = j["family"];
    wrap["theorem"] = "CorHilbertInf";
    A = build_family(experiment_from_json(wrap).family);
  } else {
    throw ConfigError("decay input needs 'operator' or 'family'");
  }
  WeightFamily family = WeightFamily::Infinity;
  WeightParams params;
  std::string family_name_str = "infinity";
  if (j.contains("weight")) {
    const auto& w = j["weight"];
    family_name_str = w.value("family", "infinity");
    if (family_name_str == "infinity") family = WeightFamily::Infinity;
    else if (family_name_str == "infinity_zero") family = WeightFamily::InfinityZero;
    else if (family_name_str == "zero") family = WeightFamily::Zero;
    else throw ConfigError("unknown weight family: " + family_name_str);
    params.mu = w.value("mu", 0.0);
    params.nu = w.value("nu", 0.0);
    params.upsilon = w.value("upsilon", 0.0);
  }
  TGridSpec grid;
  if (j.contains("t_grid")) {
    const auto& g = j["t_grid"];
    grid.t_min = g.value("t_min", 1.0);
    grid.t_max = g.value("t_max", 1e4);
    grid.per_decade = g.value("per_decade", 25);
  }
  const double p = j.value("p", 2.0);
  const WeightOperator W = weight_operator(A, family, params, cfg);
  const DecayCurve curve = decay_curve(
      A, W, log_spaced_grid(grid.t_min, grid.t_max, grid.per_decade), NormSpace{p}, pool,
      cfg);
  write_file(outdir / "decay.csv", curve_to_csv(curve));
  Json side;
  side["weight"] = {{"family", family_name_str},
                    {"mu", params.mu},
                    {"nu", params.nu},
                    {"upsilon", params.upsilon},
                    {"description", W.description}};
  side["p"] = p;
  side["tail_bounds"] = Json::array();  // exact matrix arithmetic, no truncation
  Json floored = Json::array();
  for (auto i : curve.floored) floored.push_back(i);
  side["floored_indices"] = floored;
  write_file(outdir / "decay_meta.json", dump_json(side));
  std::cout << "wrote " << (outdir / "decay.csv").string() << " and decay_meta.json\n";
  return 0;
}

int cmd_verify(const std::string& input, const std::string& preset, bool predict_only,
               const fs::path& outdir, const Config& cfg, const WorkerPool& pool) {
  std::vector<ExperimentSpec> suite;
  if (!preset.empty()) {
    if (preset != "paper-suite") throw ConfigError("unknown preset: " + preset);
    suite = paper_suite();
  } else if (!input.empty()) {
    const Json j = read_json_file(input);
    if (!j.is_array()) throw ConfigError("suite file must be a JSON list of experiments");
    for (const auto& e : j) suite.push_back(experiment_from_json(e));
  } else {
    throw ConfigError("verify needs -i suite.json or --preset paper-suite");
  }

  if (predict_only) {
    Json out = Json::array();
    for (const auto& e : suite) {
      auto pred = predict_decay(e.theorem, e.params, cfg);
      Json p;
      p["experiment"] = e.name;
      p["poly"] = pred.poly_exponent;
      p["logexp"] = pred.log_exponent;
      p["form"] = pred.stretched ? "stretched" : "poly_log";
      p["formula"] = pred.formula;
      out.push_back(p);
    }
    std::cout << dump_json(out);
    return 0;
  }

  std::string summary =
      "experiment,theorem,poly_pred,poly_fit,log_pred,max_ratio_tail,verdict\n";
  bool any_fail = false;
  std::vector<DecayReport> reports(suite.size());
  // experiments are independent jobs; the t-grid parallelism is inside
  pool.parallel_for(suite.size(), [&](std::size_t i) {
    reports[i] = run_experiment(suite[i], cfg, serial_pool());
  });
  for (std::size_t i = 0; i < suite.size(); ++i) {
    const DecayReport& rep = reports[i];
    write_file(outdir / (suite[i].name + ".json"), dump_json(report_to_json(rep)));
    char row[256];
    std::snprintf(row, sizeof(row), "%s,%s,%.17g,%.17g,%.17g,%.17g,%s\n",
                  suite[i].name.c_str(), theorem_name(suite[i].theorem),
                  rep.prediction.poly_exponent, rep.fitted_poly_exponent,
                  rep.prediction.log_exponent, rep.max_ratio_tail,
                  verdict_name(rep.verdict));
    summary += row;
    std::cout << suite[i].name << ": " << verdict_name(rep.verdict) << "\n";
    if (rep.verdict != Verdict::PASS) any_fail = true;
  }
  write_file(outdir / "summary.csv", summary);
  std::cout << "wrote " << (outdir / "summary.csv").string() << "\n";
  return any_fail ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "semidecay: functional-calculus laboratory for semigroup decay rates\n"
      "on finite-dimensional model operators"};
  app.require_subcommand(0, 1);

  Config cfg = Config::from_env();
  std::string outdir = "out";
  double tol_quad = 0.0;
  int workers = 0;
  std::uint64_t seed = 0;
  app.add_option("-o,--output", outdir, "Output directory")->envname("SEMIDECAY_OUTPUT");
  auto* tolopt =
      app.add_option("--tol-quad", tol_quad, "Quadrature relative tolerance (abs = rel/10)");
  auto* wopt = app.add_option("--workers", workers, "Worker count (>= 1)");
  auto* sopt = app.add_option("--seed", seed, "Seed for randomized estimators");

  auto* catalog = app.add_subcommand("catalog", "Dump the CBF catalog");
  catalog->fallthrough();
  bool probe = false;
  catalog->add_flag("--probe", probe, "Include quadrature-vs-closed-form probe tables");

  auto* calc = app.add_subcommand("calc", "Sector-contour calculus run");
  calc->fallthrough();
  std::string calc_input;
  calc->add_option("-i,--input", calc_input, "Input JSON")->required();

  auto* profile = app.add_subcommand("profile", "Resolvent growth profile along iR");
  profile->fallthrough();
  std::string profile_input, window_inf = "1e2:1e6", window_zero = "1e-6:1e-2";
  int per_decade = 64;
  profile->add_option("-i,--input", profile_input, "Operator JSON")->required();
  profile->add_option("--window-inf", window_inf, "Infinity-side window lo:hi");
  profile->add_option("--window-zero", window_zero, "Zero-side window lo:hi");
  profile->add_option("--per-decade", per_decade, "Samples per decade");

  auto* decay = app.add_subcommand("decay", "Measure ||T(t) W|| on a t-grid");
  decay->fallthrough();
  std::string decay_input;
  decay->add_option("-i,--input", decay_input, "Input JSON")->required();

  auto* verify = app.add_subcommand("verify", "Run decay-bound experiments");
  verify->fallthrough();
  std::string verify_input, verify_preset;
  bool verify_predict = false;
  verify->add_option("-i,--input", verify_input, "Suite JSON (list of experiments)");
  verify->add_option("--preset", verify_preset, "Named preset (paper-suite)");
  verify->add_flag("--predict", verify_predict,
                   "Print the envelope predictions only, without running");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return 2;
  }

  if (*tolopt) {
    cfg.tol_quad_rel = tol_quad;
    cfg.tol_quad_abs = tol_quad / 10.0;
  }
  if (*wopt) cfg.workers = workers;
  if (*sopt) cfg.seed = seed;
  if (cfg.workers < 1) {
    std::cerr << "worker count must be >= 1\n";
    return 2;
  }
  WorkerPool pool(cfg.workers);

  try {
    if (*catalog) return cmd_catalog(outdir, probe, cfg);
    if (*calc) return cmd_calc(calc_input, outdir, cfg);
    if (*profile)
      return cmd_profile(profile_input, outdir, window_inf, window_zero, per_decade, cfg,
                         pool);
    if (*decay) return cmd_decay(decay_input, outdir, cfg, pool);
    if (*verify)
      return cmd_verify(verify_input, verify_preset, verify_predict, outdir, cfg, pool);
    std::cout << app.help();
    return 2;
  } catch (const ConfigError& ex) {
    std::cerr << "configuration error: " << ex.what() << "\n";
    return 2;
  } catch (const Error& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
}

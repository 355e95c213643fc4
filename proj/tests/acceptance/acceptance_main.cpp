// Acceptance suite: one pass/fail line per criterion, exit 0 iff all pass.

#include <chrono>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "semidecay/json_io.hpp"
#include "semidecay/verify.hpp"

using namespace semidecay;

namespace {

int failures = 0;

class Criterion {
 public:
  Criterion(int number, std::string what)
      : number_(number), what_(std::move(what)), start_(std::chrono::steady_clock::now()) {}

  void finish(bool ok, const std::string& detail = "") {
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    std::printf("criterion %d: %s — %s (%.1f s)%s%s\n", number_, ok ? "PASS" : "FAIL",
                what_.c_str(), secs, detail.empty() ? "" : " — ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }

  template <class Fn>
  void run(Fn&& fn) {
    try {
      auto [ok, detail] = fn();
      finish(ok, detail);
    } catch (const std::exception& ex) {
      finish(false, std::string("exception: ") + ex.what());
    }
  }

 private:
  int number_;
  std::string what_;
  std::chrono::steady_clock::time_point start_;
};

using Outcome = std::pair<bool, std::string>;

Outcome criterion1_catalog() {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> re(0.1, 40.0), im(-25.0, 25.0);
  double worst = 0.0;
  for (const auto& entry : cbf_catalog()) {
    for (int k = -3; k <= 3; ++k) {
      const Complex lam(std::pow(10.0, k), 0.0);
      worst = std::max(worst, oracles::rel_err(eval_cbf_scalar(entry.rep, lam),
                                               entry.closed_form(lam)));
    }
    for (int j = 0; j < 20; ++j) {
      const Complex lam(re(rng), im(rng));
      worst = std::max(worst, oracles::rel_err(eval_cbf_scalar(entry.rep, lam),
                                               entry.closed_form(lam)));
    }
  }
  return {worst <= 1e-6, "max rel err " + std::to_string(worst)};
}

Outcome criterion2_calculus() {
  std::vector<OperatorModel> ops;
  for (std::uint64_t s : {11u, 12u, 13u, 14u}) ops.push_back(oracles::random_diag(3, s, 0.4, 6.0));
  for (double x : {0.5, 1.0, 20.0})
    ops.push_back(OperatorModel::diagonal(Vector::Constant(1, Complex(x, 0.1 * x))));
  ops.push_back(OperatorModel::diagonal(Vector::Constant(2, Complex(2.0, -0.7))));
  ops.push_back(OperatorModel::jordan2(Complex(1.0, 0.2), Complex(1.0)));
  ops.push_back(OperatorModel::jordan2(Complex(0.6, -0.1), Complex(0.5)));
  ops.push_back(OperatorModel::jordan2(Complex(5.0, 1.0), Complex(2.0)));
  ops.push_back(OperatorModel::jordan2(Complex(0.2, 0.05), Complex(0.3)));
  const std::vector<HInftyZeroSymbol> symbols = {
      {1.0, 1.0, 0.0, 0.0}, {1.0, 2.0, 0.0, 0.0}, {2.0, 1.0, 1.0, 0.0},
      {1.0, 1.0, 0.0, 1.0}, {0.5, 1.5, 1.0, 1.0}, {1.0, 1.0, 2.0, 1.0}};
  double worst = 0.0;
  for (const auto& A : ops) {
    for (const auto& s : symbols) {
      auto got = dunford_apply(s, A, default_contour(A, s));
      auto want = matrix_function_oracle([&](Complex z) { return s.eval(z); }, A);
      worst = std::max(worst, (got.value - want).frobenius() / (1.0 + want.frobenius()));
    }
  }
  return {worst <= 1e-6,
          "12 operators x 6 symbols, max rel err " + std::to_string(worst)};
}

Outcome criterion3_logarithm() {
  Vector eigs(9);
  for (int k = 0; k < 9; ++k)
    eigs(k) = Complex(std::pow(10.0, -3.0 + 6.0 * k / 8.0), 0.05 * (k - 4));
  auto A = OperatorModel::diagonal(eigs);
  const auto got = log_operator(A);
  const auto want = matrix_function_oracle([](Complex z) { return std::log(z); }, A);
  const double err = (got - want).frobenius() / (1.0 + want.frobenius());
  if (err > 1e-8) return {false, "Okazawa vs spectral err " + std::to_string(err)};
  for (double sigma : {0.0, 0.25, 0.5, 1.0}) {
    auto rep = log_scaling_check(A, sigma);
    if (!rep.passed)
      return {false, "log scaling failed at sigma = " + std::to_string(sigma)};
  }
  return {true, "Okazawa route err " + std::to_string(err) + ", scaling ok"};
}

Outcome criterion4_laplace() {
  double worst = 0.0;
  const std::vector<double> ts = {0.0, 0.5, 1.0, 5.0};
  {
    FamilySpec fam{FamilyKind::DiagInf, 1.0, 0.0, 1.0, 0.0, 1.0, 64, 1};
    auto F = build_family(fam);
    Vector y = Vector::Ones(64) / 8.0;
    auto W = weight_operator(F, WeightFamily::Infinity, {0.0, 2.5, 1.0});
    for (double t : ts) {
      auto got = laplace_orbit_infinity(F, 2.5, 1.0, t, y);
      Vector want = (evolve(F, t) * W.matrix).apply(y);
      worst = std::max(worst, static_cast<double>((got.value - want).cwiseAbs().maxCoeff() /
                                                  (1.0 + want.cwiseAbs().maxCoeff())));
    }
  }
  {
    FamilySpec fam{FamilyKind::DiagInf, 1.0, 0.0, 2.0, 1.0, 1.0, 48, 1};
    auto F = build_family(fam);
    Vector y = Vector::Ones(48) / 7.0;
    auto W = weight_operator(F, WeightFamily::Infinity, {0.0, 3.5, 0.0});
    for (double t : ts) {
      auto got = laplace_orbit_infinity(F, 3.5, 0.0, t, y);
      Vector want = (evolve(F, t) * W.matrix).apply(y);
      worst = std::max(worst, static_cast<double>((got.value - want).cwiseAbs().maxCoeff() /
                                                  (1.0 + want.cwiseAbs().maxCoeff())));
    }
  }
  {
    FamilySpec fam{FamilyKind::DiagZero, 1.0, 0.0, 1.0, 0.0, 1.0, 64, 1};
    auto F = build_family(fam);
    Vector y = Vector::Ones(64) / 8.0;
    auto W = weight_operator(F, WeightFamily::InfinityZero, {1.0, 2.5, 1.0});
    for (double t : ts) {
      auto got = laplace_orbit_infinity_zero(F, 1.0, 2.5, 1.0, t, y);
      Vector want = (evolve(F, t) * W.matrix).apply(y);
      worst = std::max(worst, static_cast<double>((got.value - want).cwiseAbs().maxCoeff() /
                                                  (1.0 + want.cwiseAbs().maxCoeff())));
    }
  }
  {
    FamilySpec fam{FamilyKind::DiagZero, 2.0, 1.0, 1.0, 0.0, 1.0, 48, 1};
    auto F = build_family(fam);
    Vector y = Vector::Ones(48) / 7.0;
    auto W = weight_operator(F, WeightFamily::InfinityZero, {1.5, 2.5, 0.0});
    for (double t : ts) {
      auto got = laplace_orbit_infinity_zero(F, 1.5, 2.5, 0.0, t, y);
      Vector want = (evolve(F, t) * W.matrix).apply(y);
      worst = std::max(worst, static_cast<double>((got.value - want).cwiseAbs().maxCoeff() /
                                                  (1.0 + want.cwiseAbs().maxCoeff())));
    }
  }
  return {worst <= 1e-4, "max rel err " + std::to_string(worst)};
}

Outcome criterion5_appendix_b() {
  for (auto [nu, zeta] : std::vector<std::pair<double, double>>{{2, 0}, {2, 1}, {3, 2}}) {
    auto r1 = lemma_b1_check(nu, zeta, 0.0, {0.0, 1.0, 5.0}, LemmaB1Variant::Log2);
    if (!r1.passed)
      return {false, "B.1 log2 variant failed at nu=" + std::to_string(nu)};
    auto r2 = lemma_b1_check(nu, zeta, 1.0, {0.0, 1.0, 5.0}, LemmaB1Variant::TwoPiILog);
    if (!r2.passed)
      return {false, "B.1 2pi-ilog variant failed at nu=" + std::to_string(nu)};
  }
  struct B2Case {
    double alpha, beta, zeta, eta;
    Complex lambda;
    LemmaB2Variant variant;
  };
  const std::vector<B2Case> cases = {
      {0.0, 1.0, 0.0, 1.0, Complex(0.0, 1.0), LemmaB2Variant::A},
      {0.0, 2.0, 1.0, 1.0, Complex(0.0, 2.0), LemmaB2Variant::A},
      {0.0, 1.5, 2.0, 0.5, Complex(0.2, -1.0), LemmaB2Variant::A},
      {1.0, 1.0, 1.0, 1.0, Complex(0.0, 1.0), LemmaB2Variant::B},
      {0.5, 1.5, 0.0, 1.0, Complex(0.3, 1.5), LemmaB2Variant::B},
      {2.0, 1.0, 2.0, 1.0, Complex(0.0, -2.0), LemmaB2Variant::B},
  };
  double worst = 0.0;
  for (const auto& c : cases) {
    auto rep = lemma_b2_check(c.alpha, c.beta, c.zeta, c.eta, c.lambda, c.variant);
    worst = std::max(worst, rep.max_violation);
    if (!rep.passed) return {false, "B.2 mismatch " + std::to_string(rep.max_violation)};
  }
  return {true, "B.1 zero to 1e-6; B.2 max rel err " + std::to_string(worst)};
}

Outcome criterion6_calibration() {
  for (auto [beta, b] : std::vector<std::pair<double, double>>{
           {1.0, 0.0}, {2.0, 0.0}, {1.0, 1.0}, {2.0, 1.0}}) {
    FamilySpec f{FamilyKind::DiagInf, 1.0, 0.0, beta, b, 1.0, 2048, 0};
    auto prof = family_profile_calibration(f);  // throws CalibrationFailed on miss
    (void)prof;
  }
  for (auto [alpha, a] : std::vector<std::pair<double, double>>{{1.0, 0.0}, {2.0, 1.0}}) {
    FamilySpec f{FamilyKind::DiagZero, alpha, a, 1.0, 0.0, 1.0, 2048, 0};
    auto prof = family_profile_calibration(f);
    (void)prof;
  }
  return {true, "6 families refit within (0.05, 0.3)"};
}

Outcome criterion7_suite(const WorkerPool& pool) {
  auto suite = paper_suite();
  std::string detail;
  bool ok = true;
  for (const auto& e : suite) {
    auto rep = run_experiment(e, default_config(), pool);
    const bool stable = rep.ratio_tail_growth <= e.tol.stability_max_growth;
    std::printf("  %-36s poly_pred %+6.2f poly_fit %+6.2f max_ratio_tail %9.3e "
                "growth/decade %5.2f verdict %s\n",
                e.name.c_str(), rep.prediction.poly_exponent, rep.fitted_poly_exponent,
                rep.max_ratio_tail, rep.ratio_tail_growth, verdict_name(rep.verdict));
    if (rep.verdict != Verdict::PASS || !stable) {
      ok = false;
      detail += e.name + " ";
      for (const auto& r : rep.reasons) detail += "[" + r + "] ";
    }
  }
  // the Jordan family must witness an unbounded semigroup at this scale
  {
    FamilySpec fam{FamilyKind::JordanUnboundedInf, 1.0, 0.0, 1.0, 0.0, 1.0, 512, 1};
    auto F = build_family(fam);
    auto I = weight_operator(F, WeightFamily::Infinity, {0.0, 0.0, 0.0});
    auto curve = decay_curve(F, I, log_spaced_grid(1.0, 1e4, 25), NormSpace{2.0}, pool);
    double sup = 0.0;
    for (double v : curve.values) sup = std::max(sup, v);
    std::printf("  jordan sup_t ||T(t)|| = %.2f (must be >= 5)\n", sup);
    if (sup < 5.0) {
      ok = false;
      detail += "jordan sup ||T|| below 5 ";
    }
  }
  return {ok, detail.empty() ? "all presets PASS with stable tails" : detail};
}

Outcome criterion8_gate() {
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  auto draw = [&](double lo, double hi) { return lo + (hi - lo) * u01(rng); };
  auto oracle_ok = [](TheoremId id, const TheoremParams& q) -> bool {
    const double ir = 2.0 / q.p - 1.0;
    switch (id) {
      case TheoremId::ThmInf:
        return q.tau > q.beta + ir && q.delta > 0.0;
      case TheoremId::CorHilbertInf:
        return q.p == 2.0 && q.tau > q.beta;
      case TheoremId::CorInfB0:
        return q.b == 0.0 && q.tau > q.beta + ir && q.delta > 0.0 && q.rho >= 0.0 &&
               q.rho <= (q.tau - ir) / q.beta - 1.0;
      case TheoremId::ThmInfZero:
        return q.alpha >= 1.0 && q.sigma > q.alpha - 1.0 && q.tau > q.beta + ir &&
               q.delta > 1.0 - ir && q.rho >= 0.0 &&
               q.rho <= std::min((q.sigma + 1.0) / q.alpha - 1.0, (q.tau - ir) / q.beta - 1.0);
      case TheoremId::ThmZero:
        return q.alpha >= 1.0 && q.sigma > q.alpha - 1.0 && q.delta > 0.0;
      case TheoremId::LogOnlyHilbert:
        return q.p == 2.0 && q.delta > 0.0 && q.delta < 0.5 && q.tau > q.delta &&
               q.epsilon > 0.0;
      default:
        return false;
    }
  };
  const TheoremId ids[] = {TheoremId::ThmInf, TheoremId::CorHilbertInf, TheoremId::CorInfB0,
                           TheoremId::ThmInfZero, TheoremId::ThmZero,
                           TheoremId::LogOnlyHilbert};
  int accepted = 0, rejected = 0, wrong = 0, total = 0;
  while ((accepted < 200 || rejected < 200) && total < 100000) {
    TheoremParams q;
    const TheoremId id = ids[static_cast<int>(draw(0.0, 6.0)) % 6];
    q.alpha = draw(0.5, 3.0);
    q.beta = draw(0.2, 3.0);
    q.b = (id == TheoremId::CorInfB0) ? 0.0 : draw(0.0, 2.0);
    q.sigma = draw(0.0, 4.0);
    q.tau = draw(0.1, 6.0);
    q.rho = draw(0.0, 3.0);
    q.delta = draw(0.0, 2.0);
    q.epsilon = draw(0.0, 1.0);
    q.p = (id == TheoremId::CorHilbertInf || id == TheoremId::LogOnlyHilbert)
              ? 2.0
              : (u01(rng) < 0.5 ? 2.0 : draw(1.0, 2.0));
    const bool want = oracle_ok(id, q);
    bool got = true;
    try {
      predict_decay(id, q);
    } catch (const HypothesisViolated&) {
      got = false;
    }
    ++total;
    if (got != want) ++wrong;
    if (want) ++accepted;
    else ++rejected;
  }
  return {wrong == 0 && accepted >= 200 && rejected >= 200,
          std::to_string(accepted) + " accepted / " + std::to_string(rejected) +
              " rejected, " + std::to_string(wrong) + " disagreements"};
}

Outcome criterion9_determinism() {
  auto suite = paper_suite();
  WorkerPool one(1), eight(8);
  std::string all1, all8;
  for (const auto& e : suite) {
    all1 += dump_json(report_to_json(run_experiment(e, default_config(), one)));
    all8 += dump_json(report_to_json(run_experiment(e, default_config(), eight)));
  }
  const bool same = all1 == all8;
  // a second single-worker rerun must be byte-identical as well
  std::string rerun;
  for (const auto& e : suite)
    rerun += dump_json(report_to_json(run_experiment(e, default_config(), one)));
  return {same && rerun == all1,
          same ? "byte-identical across workers {1,8} and reruns"
               : "outputs differ between worker counts"};
}

}  // namespace

int main() {
  std::printf("semidecay acceptance suite\n");

  {
    Criterion c(1, "CBF catalog fidelity (quadrature vs closed forms, 1e-6)");
    c.run([] { return criterion1_catalog(); });
  }
  {
    Criterion c(2, "operator-calculus consistency (Dunford vs oracle, 1e-6)");
    c.run([] { return criterion2_calculus(); });
  }
  {
    Criterion c(3, "logarithm coherence (Okazawa route + scaling, 1e-8)");
    c.run([] { return criterion3_logarithm(); });
  }
  {
    Criterion c(4, "inverse-Laplace orbit oracle (g(t) = T(t) Phi y, 1e-4)");
    c.run([] { return criterion4_laplace(); });
  }
  {
    Criterion c(5, "appendix-B quadrature identities (1e-6)");
    c.run([] { return criterion5_appendix_b(); });
  }
  {
    Criterion c(6, "family profile calibration at N = 2048");
    c.run([] { return criterion6_calibration(); });
  }
  {
    WorkerPool pool(2);
    Criterion c(7, "decay-bound paper suite (all PASS, stable tails)");
    c.run([&] { return criterion7_suite(pool); });
  }
  {
    Criterion c(8, "hypothesis gate (200 accepts / 200 rejects)");
    c.run([] { return criterion8_gate(); });
  }
  {
    Criterion c(9, "determinism (fixed seed, workers {1,8})");
    c.run([] { return criterion9_determinism(); });
  }

  if (failures == 0) {
    std::printf("acceptance: all criteria PASS\n");
    return 0;
  }
  std::printf("acceptance: %d criterion(s) FAILED\n", failures);
  return 1;
}

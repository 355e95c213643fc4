#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "semidecay/errors.hpp"
#include "semidecay/json_io.hpp"
#include "semidecay/verify.hpp"

using namespace semidecay;

TEST_CASE("build_family: formula instantiation") {
  FamilySpec f{FamilyKind::DiagInf, 1.0, 0.0, 1.0, 0.0, 1.0, 16, 0};
  auto A = build_family(f);
  CHECK(std::abs(A.eigen_data(0) - Complex(1.0, 1.0)) < 1e-12);
  CHECK(std::abs(A.eigen_data(1) - Complex(0.5, 2.0)) < 1e-12);
  CHECK(std::abs(A.eigen_data(3) - Complex(0.25, 4.0)) < 1e-12);

  FamilySpec z{FamilyKind::DiagZero, 1.0, 0.0, 1.0, 0.0, 1.0, 16, 0};
  auto Z = build_family(z);
  CHECK(std::abs(Z.eigen_data(1) - Complex(0.5, 0.5)) < 1e-12);
  CHECK(std::abs(Z.eigen_data(3) - Complex(0.25, 0.25)) < 1e-12);

  FamilySpec j{FamilyKind::JordanUnboundedInf, 1.0, 0.0, 1.0, 0.0, 1.0, 16, 0};
  auto J = build_family(j);
  CHECK(J.blocks.size() == 16);
  CHECK(std::abs(J.blocks[0](0, 0) - Complex(1.0, 1.0)) < 1e-12);
  CHECK(std::abs(J.blocks[0](0, 1) - Complex(1.0)) < 1e-12);
  CHECK(std::abs(J.blocks[1](0, 0) - Complex(0.5, 2.0)) < 1e-12);

  CHECK_THROWS_AS(build_family(FamilySpec{FamilyKind::DiagInf, 1, 0, 1, 0, 1, 4, 0}),
                  ParameterDomain);
}

TEST_CASE("family_profile_calibration: refits recover the nominal parameters") {
  // N = 512 keeps this test quick; the acceptance suite runs N = 2048
  for (auto [beta, b] : std::vector<std::pair<double, double>>{{1.0, 0.0}, {2.0, 1.0}}) {
    FamilySpec f{FamilyKind::DiagInf, 1.0, 0.0, beta, b, 1.0, 512, 0};
    auto prof = family_profile_calibration(f);
    REQUIRE(prof.fit_inf.has_value());
    CHECK(std::abs(prof.fit_inf->beta - beta) <= 0.05);
    CHECK(std::abs(prof.fit_inf->b - b) <= 0.3);
  }
  FamilySpec z{FamilyKind::DiagZero, 1.0, 0.0, 1.0, 0.0, 1.0, 512, 0};
  auto prof = family_profile_calibration(z);
  REQUIRE(prof.fit_zero.has_value());
  CHECK(std::abs(prof.fit_zero->alpha - 1.0) <= 0.05);

  CHECK_THROWS_AS(
      family_profile_calibration(FamilySpec{FamilyKind::DiagInf, 1, 0, 1, 0, 1, 64, 0}),
      ParameterDomain);
}

TEST_CASE("fit_exponents: synthetic curves") {
  DecayCurve c;
  c.t_grid = log_spaced_grid(1.0, 1e6, 10);
  // exact t^{-2}
  c.values.clear();
  for (double t : c.t_grid) c.values.push_back(std::pow(t, -2.0));
  auto f = fit_exponents(c, FitModel::Poly, 0.0, 10.0);
  CHECK(f.slope == doctest::Approx(-2.0).epsilon(1e-12));

  // t^{-1} log^2(1+t) with the log factor divided out
  c.values.clear();
  for (double t : c.t_grid) c.values.push_back(std::pow(t, -1.0) * std::pow(std::log1p(t), 2.0));
  auto f2 = fit_exponents(c, FitModel::PolyLog, 2.0, 1e2);
  CHECK(f2.slope == doctest::Approx(-1.0).epsilon(1e-6));

  // e^{-sqrt(t)} under the stretched model with b = 1
  DecayCurve cs;
  cs.t_grid = log_spaced_grid(1.0, 1e4, 10);
  for (double t : cs.t_grid) cs.values.push_back(std::exp(-std::sqrt(t)));
  auto f3 = fit_exponents(cs, FitModel::Stretched, 1.0, 1.0);
  CHECK(f3.slope == doctest::Approx(-1.0).epsilon(1e-6));

  DecayCurve tiny;
  tiny.t_grid = {1.0, 2.0};
  tiny.values = {1.0, 0.5};
  CHECK_THROWS_AS(fit_exponents(tiny, FitModel::Poly, 0.0, 0.5), InsufficientSamples);
}

TEST_CASE("run_experiment: normal family beats the Hilbert envelope") {
  ExperimentSpec e;
  e.name = "test-corhilbert";
  e.family = {FamilyKind::DiagInf, 1.0, 0.0, 1.0, 0.0, 1.0, 256, 1};
  e.theorem = TheoremId::CorHilbertInf;
  e.params.beta = 1.0;
  e.params.b = 0.0;
  e.params.tau = 2.0;
  e.t_grid = {1.0, 1e3, 25};
  auto rep = run_experiment(e);
  CHECK(rep.verdict == Verdict::PASS);
  // normal-operator surplus: fitted decay is about t^{-2}
  CHECK(rep.fitted_poly_exponent < -1.7);
  CHECK(rep.fitted_poly_exponent <= rep.prediction.poly_exponent + 0.15);
  CHECK(rep.ratio_tail_growth <= 1.2);

  // truncation monotonicity: larger N dominates pointwise
  ExperimentSpec e2 = e;
  e2.family.N = 512;
  auto rep2 = run_experiment(e2);
  for (std::size_t i = 0; i < rep.curve.values.size(); ++i)
    CHECK(rep2.curve.values[i] >= rep.curve.values[i] - 1e-15);
}

TEST_CASE("run_experiment: inconsistent family/theorem parameters rejected") {
  ExperimentSpec e;
  e.name = "mismatch";
  e.family = {FamilyKind::DiagInf, 1.0, 0.0, 1.0, 0.0, 1.0, 256, 1};
  e.theorem = TheoremId::CorHilbertInf;
  e.params.beta = 2.0;  // family has beta = 1
  e.params.tau = 3.0;
  CHECK_THROWS_AS(run_experiment(e), ParameterDomain);
}

TEST_CASE("run_experiment: report determinism and worker independence") {
  ExperimentSpec e;
  e.name = "determinism";
  e.family = {FamilyKind::DiagInf, 1.0, 0.0, 1.0, 1.0, 1.0, 128, 7};
  e.theorem = TheoremId::CorHilbertInf;
  e.params.beta = 1.0;
  e.params.b = 1.0;
  e.params.tau = 2.0;
  e.t_grid = {1.0, 1e3, 10};
  WorkerPool one(1), eight(8);
  const std::string r1 = dump_json(report_to_json(run_experiment(e, default_config(), one)));
  const std::string r2 = dump_json(report_to_json(run_experiment(e, default_config(), eight)));
  const std::string r3 = dump_json(report_to_json(run_experiment(e, default_config(), one)));
  CHECK(r1 == r2);
  CHECK(r1 == r3);
}

TEST_CASE("paper_suite: every preset is consistent and parses back") {
  auto suite = paper_suite();
  CHECK(suite.size() == 7);
  for (const auto& e : suite) {
    CAPTURE(e.name);
    CHECK_NOTHROW(predict_decay(e.theorem, e.params));
    const Json j = experiment_to_json(e);
    auto back = experiment_from_json(j);
    CHECK(back.name == e.name);
    CHECK(back.family.N == e.family.N);
    CHECK(back.theorem == e.theorem);
  }
}

TEST_CASE("operator JSON round trip") {
  auto A = build_family(FamilySpec{FamilyKind::DiagInf, 1, 0, 1, 0, 1, 32, 0});
  auto back = operator_from_json(operator_to_json(A));
  CHECK(back.kind == OperatorModel::Kind::Diagonal);
  CHECK((back.eigen_data - A.eigen_data).cwiseAbs().maxCoeff() == 0.0);
  CHECK(back.left_half_plane_resolvent);

  auto J = build_family(FamilySpec{FamilyKind::JordanUnboundedInf, 1, 0, 1, 0, 1, 16, 0});
  auto jb = operator_from_json(operator_to_json(J));
  CHECK(jb.kind == OperatorModel::Kind::BlockDiagonal);
  CHECK(jb.blocks.size() == 16);
  CHECK((jb.blocks[3] - J.blocks[3]).norm() == 0.0);

  auto D = oracles::random_dense(4, 2);
  auto db = operator_from_json(operator_to_json(D));
  CHECK((db.dense - D.dense).norm() == 0.0);
}

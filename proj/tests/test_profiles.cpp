#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "semidecay/errors.hpp"
#include "semidecay/profiles.hpp"
#include "semidecay/verify.hpp"

using namespace semidecay;

namespace {

GrowthProfile synthetic_profile(const std::function<double(double)>& n, double lo,
                                double hi, int per_decade = 32) {
  GrowthProfile p;
  const int N = static_cast<int>(std::log10(hi / lo) * per_decade);
  for (int i = 0; i <= N; ++i) {
    const double s = lo * std::pow(hi / lo, double(i) / N);
    p.s.push_back(s);
    p.n.push_back(n(s));
  }
  double run = 0.0;
  for (double v : p.n) {
    run = std::max(run, v);
    p.M.push_back(run);
  }
  return p;
}

}  // namespace

TEST_CASE("resolvent_profile: diagonal distance oracle") {
  auto A = OperatorModel::diagonal(Vector::Constant(1, Complex(1.0, 0.0)));
  ProfilePlan plan;
  plan.per_decade = 8;
  auto prof = resolvent_profile(A, plan, NormSpace{2.0});
  for (std::size_t i = 0; i < prof.s.size(); ++i) {
    const double want = 1.0 / std::hypot(1.0, prof.s[i]);  // 1/sqrt(1+s^2)
    CHECK(oracles::rel_err(prof.n[i], want) < 1e-12);
  }
  // M is nondecreasing by construction
  for (std::size_t i = 1; i < prof.M.size(); ++i) CHECK(prof.M[i] >= prof.M[i - 1]);
}

TEST_CASE("resolvent_profile: resonance samples realize k^beta peaks") {
  FamilySpec fam{FamilyKind::DiagInf, 1.0, 0.0, 1.0, 0.0, 1.0, 64, 1};
  auto A = build_family(fam);
  ProfilePlan plan;
  plan.include_zero_cluster = false;
  plan.inf_lo = 1.0;
  plan.inf_hi = 64.0;
  plan.per_decade = 4;
  plan.extra = family_resonances(fam);
  auto prof = resolvent_profile(A, plan, NormSpace{2.0});
  for (std::size_t i = 0; i < prof.s.size(); ++i) {
    const double want = oracles::diag_resolvent_norm(A.eigen_data, prof.s[i]);
    CHECK(oracles::rel_err(prof.n[i], want) < 1e-12);
    if (prof.s[i] == 16.0) CHECK(prof.n[i] >= 15.0);  // n(k) ~ k at resonances
  }
}

TEST_CASE("fit_growth_infinity: synthetic regression oracle") {
  auto p1 = synthetic_profile([](double s) { return s * s; }, 1e2, 1e6);
  auto f1 = fit_growth_infinity(p1, 1e2, 1e6);
  CHECK(f1.beta == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(f1.b == 0.0);

  auto p2 = synthetic_profile([](double s) { return s * std::log(s); }, 1e2, 1e6);
  auto f2 = fit_growth_infinity(p2, 1e2, 1e6);
  CHECK(std::abs(f2.beta - 1.0) < 0.05);
  CHECK(std::abs(f2.b - 1.0) < 0.3);

  auto p3 = synthetic_profile([](double) { return 3.0; }, 1e2, 1e6);
  auto f3 = fit_growth_infinity(p3, 1e2, 1e6);
  CHECK(std::abs(f3.beta) < 1e-9);
  CHECK(f3.b == 0.0);
  CHECK(f3.C == doctest::Approx(3.0).epsilon(1e-6));

  CHECK_THROWS_AS(fit_growth_infinity(p1, 1e5, 2e5), InsufficientSamples);
}

TEST_CASE("fit_growth_zero: synthetic regression oracle") {
  auto p1 = synthetic_profile([](double s) { return 1.0 / s; }, 1e-6, 1e-2);
  auto f1 = fit_growth_zero(p1, 1e-6, 1e-2);
  CHECK(f1.alpha == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(f1.a == 0.0);

  auto p2 = synthetic_profile(
      [](double s) { return std::pow(s, -2.0) * std::log(1.0 / s); }, 1e-6, 1e-2);
  auto f2 = fit_growth_zero(p2, 1e-6, 1e-2);
  CHECK(std::abs(f2.alpha - 2.0) < 0.05);
  CHECK(std::abs(f2.a - 1.0) < 0.3);

  // alpha below 1 is clamped and flagged
  auto p3 = synthetic_profile([](double s) { return std::pow(s, -0.5); }, 1e-6, 1e-2);
  auto f3 = fit_growth_zero(p3, 1e-6, 1e-2);
  CHECK(f3.alpha == 1.0);
  CHECK(f3.clamped);
}

TEST_CASE("fit round-trip over >= 3 decades recovers the parameters") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> ub(0.5, 2.5), ubb(0.0, 1.5);
  for (int trial = 0; trial < 6; ++trial) {
    const double beta = ub(rng), b = ubb(rng);
    auto p = synthetic_profile(
        [&](double s) { return 2.0 * std::pow(s, beta) * std::pow(std::log(s), b); }, 1e2,
        1e6);
    auto f = fit_growth_infinity(p, 1e2, 1e6);
    CHECK(std::abs(f.beta - beta) < 0.05);
    CHECK(std::abs(f.b - b) < 0.3);
  }
}

TEST_CASE("m_log: formula values") {
  FunctionTable M = {{1.0, 1.0}};
  auto out = m_log(M);
  CHECK(out[0].second == doctest::Approx(2.0 * std::log(2.0)));  // M(s)=s at s=1

  FunctionTable M2 = {{1e-9, 1.0}};
  CHECK(m_log(M2)[0].second == doctest::Approx(std::log(2.0)).epsilon(1e-6));

  FunctionTable M3 = {{10.0, 100.0}};
  CHECK(m_log(M3)[0].second ==
        doctest::Approx(100.0 * (std::log(101.0) + std::log(11.0))));
}

TEST_CASE("m_log_right_inverse") {
  FunctionTable M;
  for (double s = 0.01; s <= 100.0; s *= 1.05) M.emplace_back(s, s);
  auto ml = m_log(M);
  // M(s) = s: M_log(1) = 2 log 2, so the right inverse of 2 log 2 is 1
  auto r = m_log_right_inverse(ml, 2.0 * std::log(2.0));
  CHECK_FALSE(r.below_range);
  CHECK(r.s == doctest::Approx(1.0).epsilon(1e-3));  // grid resolution
  // right inverse up to grid resolution: the bracketing grid value stays
  // below t and the next grid point overshoots
  for (double t : {0.5, 3.0, 40.0}) {
    auto ri = m_log_right_inverse(ml, t);
    if (ri.below_range) continue;
    std::size_t lo = 0;
    while (lo + 1 < ml.size() && ml[lo + 1].first <= ri.s * (1.0 + 1e-12)) ++lo;
    CHECK(ml[lo].second <= t * (1.0 + 1e-9));
    if (lo + 1 < ml.size()) CHECK(ml[lo + 1].second > t * (1.0 - 1e-9));
    // and the exact function exceeds t only within interpolation slack
    const double exact = m_log({{ri.s, ri.s}})[0].second;
    CHECK(exact <= t * (1.0 + 1e-3));
  }
  auto low = m_log_right_inverse(ml, 1e-9);
  CHECK(low.below_range);
  CHECK(low.s == ml.front().first);
  CHECK_THROWS_AS(m_log_right_inverse(ml, 1e12), RangeExceeded);
}

TEST_CASE("positive_increase_check") {
  FunctionTable sq, lin, lg;
  for (double s = 1.0; s <= 1e6; s *= 1.2) {
    sq.emplace_back(s, s * s);
    lin.emplace_back(s, s);
    lg.emplace_back(s, std::log(1.0 + s));
  }
  CHECK(positive_increase_check(sq, 1.0, 1.0, 1.0).passed);
  CHECK(positive_increase_check(lin, 1.0, 1.0, 1.0).passed);
  CHECK_FALSE(positive_increase_check(lg, 0.5, 1.0, 1.0).passed);
}

TEST_CASE("slowly_varying_bound_check") {
  std::vector<double> grid;
  for (double s = 1e2; s <= 1e6; s *= 2.0) grid.push_back(s);
  auto logrep = slowly_varying_bound_check([](double s) { return std::log(1.0 + s); }, 0.5,
                                           grid);
  CHECK(logrep.check.passed);
  CHECK(logrep.C_emp <= 2.0);

  auto cst = slowly_varying_bound_check([](double) { return 2.0; }, 0.5, grid);
  CHECK(cst.check.passed);
  CHECK(cst.c_emp <= 1.0 + 1e-12);
  CHECK(cst.C_emp >= 1.0 - 1e-12);

  auto ident = slowly_varying_bound_check([](double s) { return s; }, 0.5, grid);
  CHECK_FALSE(ident.check.passed);  // upper bound scales like (t/s)^{1/2}
}

TEST_CASE("predict_decay: frozen exponent arithmetic") {
  // Hilbert, beta=1, b=0, tau=2: envelope t^{-1}
  {
    TheoremParams q;
    q.beta = 1.0;
    q.b = 0.0;
    q.tau = 2.0;
    auto p = predict_decay(TheoremId::CorHilbertInf, q);
    CHECK(p.poly_exponent == doctest::Approx(-1.0));
    CHECK(p.log_exponent == doctest::Approx(0.0));
  }
  // Hilbert, b=1: t^{-1} log^2(1+t)
  {
    TheoremParams q;
    q.beta = 1.0;
    q.b = 1.0;
    q.tau = 2.0;
    auto p = predict_decay(TheoremId::CorHilbertInf, q);
    CHECK(p.poly_exponent == doctest::Approx(-1.0));
    CHECK(p.log_exponent == doctest::Approx(2.0));
  }
  // plug-in oracle for the two-sided theorem (Hilbert, delta must exceed 1)
  {
    TheoremParams q;
    q.alpha = 1.0;
    q.a = 0.0;
    q.beta = 1.0;
    q.b = 0.0;
    q.sigma = 1.0;
    q.tau = 2.0;
    q.rho = 1.0;
    q.delta = 1.1;
    auto p = predict_decay(TheoremId::ThmInfZero, q);
    CHECK(p.poly_exponent == doctest::Approx(-1.0));
    // c = max{a,b} = 0, so logexp = 0*(ceil(1)+1) + 0 + delta
    CHECK(p.log_exponent == doctest::Approx(1.1));

    // the same parameters with delta = 0.1 violate delta > 1 - 1/r
    q.delta = 0.1;
    CHECK_THROWS_AS(predict_decay(TheoremId::ThmInfZero, q), HypothesisViolated);
  }
  // Banach ThmInf with p = 1.5 (r = 3)
  {
    TheoremParams q;
    q.beta = 1.0;
    q.b = 0.5;
    q.tau = 2.0;
    q.delta = 0.2;
    q.p = 1.5;
    auto p = predict_decay(TheoremId::ThmInf, q);
    CHECK(p.poly_exponent == doctest::Approx(1.0 - (2.0 - 1.0 / 3.0)));
    CHECK(p.log_exponent ==
          doctest::Approx(0.5 * (2.0 - 1.0 / 3.0) + 1.2 / 3.0));
  }
  // stretched forms
  {
    TheoremParams q;
    q.b = 1.0;
    q.tau = 1.0;
    q.delta = 0.25;
    q.epsilon = 0.1;
    auto p = predict_decay(TheoremId::LogOnlyHilbert, q);
    CHECK(p.stretched);
    CHECK(p.stretch_rate == doctest::Approx(1.0));
    CHECK(p.stretch_power == doctest::Approx(0.5));
    CHECK(p.poly_exponent == doctest::Approx(1.0 * 1.0 * 1.1 / (0.25 * 2.0)));
  }
}

TEST_CASE("predict_decay: hypothesis gate accepts/rejects correctly (200+200)") {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  auto draw = [&](double lo, double hi) { return lo + (hi - lo) * u01(rng); };

  // independent oracle for the inequalities
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
               q.delta > 1.0 - ir &&
               q.rho >= 0.0 &&
               q.rho <= std::min((q.sigma + 1.0) / q.alpha - 1.0,
                                 (q.tau - ir) / q.beta - 1.0);
      case TheoremId::ThmZero:
        return q.alpha >= 1.0 && q.sigma > q.alpha - 1.0 && q.delta > 0.0;
      case TheoremId::LogOnlyHilbert:
        return q.p == 2.0 && q.delta > 0.0 && q.delta < 0.5 && q.tau > q.delta &&
               q.epsilon > 0.0;
      default:
        return false;
    }
  };

  const TheoremId ids[] = {TheoremId::ThmInf, TheoremId::CorHilbertInf,
                           TheoremId::CorInfB0, TheoremId::ThmInfZero, TheoremId::ThmZero,
                           TheoremId::LogOnlyHilbert};
  int accepted = 0, rejected = 0;
  int agree = 0, total = 0;
  while (accepted < 200 || rejected < 200) {
    TheoremParams q;
    const TheoremId id = ids[static_cast<int>(draw(0.0, 6.0)) % 6];
    q.alpha = draw(0.5, 3.0);
    q.a = 0.0;
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
    if (got == want) ++agree;
    if (want && accepted < 200) ++accepted;
    if (!want && rejected < 200) ++rejected;
    REQUIRE(got == want);
    if (total > 100000) break;
  }
  CHECK(accepted >= 200);
  CHECK(rejected >= 200);
  CHECK(agree == total);
}

TEST_CASE("growth bound omega_0 fitted from ||T(t)||") {
  // diagonal family: ||T(t)|| = exp(-min_k Re(lambda_k) t)
  auto A = oracles::random_diag(6, 3, 0.4, 2.0);
  double amin = 1e9;
  for (int i = 0; i < 6; ++i) amin = std::min(amin, A.eigen_data(i).real());
  std::vector<double> ts, ns;
  for (double t = 1.0; t <= 30.0; t += 1.0) {
    ts.push_back(t);
    ns.push_back(operator_norm(evolve(A, t), NormSpace{2.0}).value);
  }
  CHECK(growth_bound(ts, ns) == doctest::Approx(-amin).epsilon(1e-6));
}

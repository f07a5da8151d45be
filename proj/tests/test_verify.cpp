#include <doctest.h>

#include <cmath>

#include "morreyheat/error.hpp"
#include "morreyheat/verify.hpp"
#include "oracles.hpp"

using namespace morreyheat;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no exception");
  return ErrorCode::invalid_argument;
}

SpaceParams homogeneous_params() {
  SpaceParams P;
  P.n = 3;
  P.p = 3;
  P.q = 2;
  P.s = 6;
  P.gamma = 1;
  return P;
}

const std::vector<double> kTimes{0.25, 0.5, 1, 2, 4};

}  // namespace

TEST_CASE("property: fit_decay recovers synthetic power laws") {
  oracle::Gen g(31);
  for (int i = 0; i < 200; ++i) {
    const double E = g.uniform(-4, 1), c = std::exp(g.uniform(-5, 5));
    std::vector<double> t, y;
    double tt = g.uniform(0.01, 1);
    const int m = g.integer(3, 12);
    for (int k = 0; k < m; ++k) {
      t.push_back(tt);
      y.push_back(c * std::pow(tt, E));
      tt *= g.uniform(1.1, 3);
    }
    const DecayFit fit = fit_decay(t, y, E);
    CHECK(std::abs(fit.slope - E) <= 1e-10);
    CHECK(std::abs(fit.intercept - std::log(c)) <= 1e-9);
    CHECK(fit.residual >= 0.0);
    CHECK(fit.residual <= 1e-10);
  }
  CHECK(code_of([] { fit_decay({1, 2}, {1, 1}, 0); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { fit_decay({1, 1, 2}, {1, 1, 1}, 0); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { fit_decay({1, 2, 3}, {1, 0, 1}, 0); }) == ErrorCode::invalid_argument);
}

TEST_CASE("thresholds and verdict strings") {
  Thresholds t = thresholds_from_json(nlohmann::json::parse(R"({"slope_exact": 0.5, "weak_exact": "inf"})"));
  CHECK(t.slope_exact == 0.5);
  CHECK(std::isinf(t.weak_exact));
  CHECK(t.ratio_constancy == 0.01);
  CHECK(thresholds_from_json(to_json(Thresholds{})).embedding_spread == 0.10);
  CHECK(code_of([] { thresholds_from_json(nlohmann::json::parse(R"({"slope": 1})")); }) == ErrorCode::invalid_argument);
  for (Verdict v : {Verdict::pass, Verdict::fail, Verdict::inconclusive}) CHECK(verdict_from_string(to_string(v)) == v);
  CHECK(code_of([] { verdict_from_string("maybe"); }) == ErrorCode::invalid_argument);
}

TEST_CASE("homogeneous decay experiment") {
  const auto f = FunctionRep::radial_power(3, 1.0);
  const Report rep = run_decay_experiment(f, homogeneous_params(), kTimes);
  CHECK(rep.verdict == Verdict::pass);
  REQUIRE(rep.fit);
  CHECK(std::abs(rep.fit->slope + 0.75) <= 0.02);
  CHECK(rep.fit->theoretical == -0.75);
  CHECK(rep.samples.size() == kTimes.size());
  CHECK(rep.details.at("homogeneous").get<bool>());

  SUBCASE("constant tracking: c f shifts the intercept by log |c|") {
    const Report scaled = run_decay_experiment(f.scaled(-2.5), homogeneous_params(), kTimes);
    CHECK(scaled.fit->intercept - rep.fit->intercept == doctest::Approx(std::log(2.5)).epsilon(1e-9));
    CHECK(scaled.fit->slope == doctest::Approx(rep.fit->slope).epsilon(1e-12));
  }
  SUBCASE("determinism") {
    CHECK(to_json(run_decay_experiment(f, homogeneous_params(), kTimes)) == to_json(rep));
  }
  SUBCASE("loosening thresholds keeps the pass") {
    ExperimentOptions loose;
    loose.thresholds.ratio_constancy *= 3;
    loose.thresholds.slope_exact *= 3;
    loose.thresholds.slope_upper *= 3;
    CHECK(run_decay_experiment(f, homogeneous_params(), kTimes, DecayTarget::lebesgue, loose).verdict == Verdict::pass);
  }
}

TEST_CASE("decay experiment for a compact source and the admissibility gate") {
  const auto ball = FunctionRep::indicator({{{0.0, 0.0, 0.0}, 1.0}});
  const Report rep = run_decay_experiment(ball, homogeneous_params(), default_t_grid());
  CHECK(rep.verdict == Verdict::pass);
  CHECK(rep.details.at("large_t_slope").get<double>() <= -0.75 + 0.05);
  CHECK_FALSE(rep.details.at("homogeneous").get<bool>());

  SpaceParams bad = homogeneous_params();
  bad.gamma = 2.5;
  CHECK(code_of([&] { run_decay_experiment(ball, bad, kTimes); }) == ErrorCode::inadmissible);
}

TEST_CASE("weak and Lorentz targets decay at the same rate") {
  const auto f = FunctionRep::radial_power(3, 1.0);
  for (DecayTarget target : {DecayTarget::weak, DecayTarget::lorentz}) {
    SpaceParams P = homogeneous_params();
    P.r = FineIndex(2.0);
    const Report rep = run_decay_experiment(f, P, {0.5, 1, 2}, target);
    CHECK(rep.verdict == Verdict::pass);
    CHECK(std::abs(rep.fit->slope + 0.75) <= 0.02);
  }
}

TEST_CASE("identity check") {
  const auto disk = FunctionRep::indicator({{{0.0, 0.0}, 1.0}});
  Report rep = check_identity_lemma(disk, 2);
  CHECK(rep.verdict == Verdict::pass);
  CHECK(rep.details.at("morrey_side").get<double>() == doctest::Approx(2 * oracle::pi).epsilon(1e-12));
  CHECK(rep.details.at("relative_difference").get<double>() <= 1e-10);

  // both sides equal v_n p / (n - n/p) for the unit ball
  for (int n = 1; n <= 3; ++n) {
    const double p = 1.5 + n;
    rep = check_identity_lemma(FunctionRep::indicator({{Point(n, 0.0), 1.0}}), p);
    CHECK(rep.details.at("weighted_side").get<double>() ==
          doctest::Approx(oracle::unit_ball_volume(n) * p / (n - n / p)).epsilon(1e-12));
    CHECK(rep.verdict == Verdict::pass);
  }

  rep = check_identity_lemma(FunctionRep::zero(2), 2);
  CHECK(rep.verdict == Verdict::pass);
  CHECK(rep.details.at("morrey_side").get<double>() == 0.0);

  // |x|^{-n/p} is outside LM^p_{1,1}
  CHECK(code_of([] { check_identity_lemma(FunctionRep::radial_power(2, 1.0), 2); }) == ErrorCode::divergent);
}

TEST_CASE("identity check: two quadrature routes for a Gaussian") {
  IdentityOptions io;
  io.force_quadrature = true;
  const Report rep = check_identity_lemma(FunctionRep::gaussian({0.0, 0.0, 0.0}, 1.0), 2, io);
  CHECK(rep.verdict == Verdict::pass);
  CHECK(rep.details.at("morrey_method") == "quadrature");
  CHECK(rep.details.at("weighted_method") == "quadrature");
  CHECK(rep.details.at("relative_difference").get<double>() <= 1e-6);
  // int exp(-|x|^2/4) |x|^{-3/2} dx / (3/2) = 4 pi int r^{1/2} exp(-r^2/4) dr / 1.5 = 4 pi 2^{1/2} Gamma(3/4) / 1.5
  const double exact = 4 * oracle::pi * std::sqrt(2.0) * std::tgamma(0.75) / 1.5;
  CHECK(rep.details.at("weighted_side").get<double>() == doctest::Approx(exact).epsilon(1e-9));
}

TEST_CASE("counterexample") {
  const Report rep = run_counterexample({2, 3, 4, 5, 6}, 2, 1, 1);
  CHECK(rep.verdict == Verdict::pass);
  const auto& rows = rep.details.at("rows");
  REQUIRE(rows.size() == 5);
  double prev_weak = 0.0, prev_diff = 0.0, prev_m = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const int J = rows[i].at("J");
    const double weak = rows[i].at("weak");
    const double m = rows[i].at("morrey");
    CHECK(weak == doctest::Approx(std::sqrt(2.0 * (2 * J + 1))).epsilon(1e-10));
    CHECK(weak > prev_weak);
    CHECK(m < rows[i].at("bound").get<double>());
    if (i > 0) {
      const double diff = m - prev_m;
      CHECK(diff > 0.0);
      // successive differences shrink roughly like 10^{n/p - n/q}
      if (i > 1) CHECK(diff / prev_diff == doctest::Approx(std::pow(10.0, -0.5)).epsilon(0.35));
      prev_diff = diff;
    }
    prev_weak = weak;
    prev_m = m;
  }
  CHECK(counterexample_bound(6, 2, 1, 1) > counterexample_bound(5, 2, 1, 1));
  CHECK(counterexample_bound(0, 2, 1, 1) == doctest::Approx(8.0));

  const Report single = run_counterexample({0}, 2, 1, 1);
  CHECK(single.details.at("rows")[0].at("weak").get<double>() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(single.verdict == Verdict::inconclusive);
  CHECK(code_of([] { run_counterexample({2, 3}, 2, 2, 1); }) == ErrorCode::invalid_argument);
}

TEST_CASE("embedding") {
  const std::vector<FunctionRep> corpus{FunctionRep::indicator({{{0.0, 0.0}, 1.0}}), FunctionRep::gaussian({0.0, 0.0}, 1.0),
                                        FunctionRep::radial_power(2, 1.0, std::nullopt, 1.0)};
  const Report rep = check_embedding(corpus, 2, 1, FineIndex::infinity());
  CHECK(rep.verdict == Verdict::pass);
  for (const auto& row : rep.details.at("rows"))
    CHECK(row.at("morrey").get<double>() <= rep.details.at("c_fit").get<double>() * row.at("lorentz").get<double>() * (1 + 1e-12));
  const Report r1 = check_embedding(corpus[0], 2, 1, FineIndex(1.0));
  CHECK(r1.verdict == Verdict::pass);
  CHECK(check_embedding(FunctionRep::zero(2), 2, 1, FineIndex(1.0)).verdict == Verdict::pass);

  // spaced balls: the Lorentz side grows with J while the Morrey side stays bounded
  const double l2 = lorentz_norm(FunctionRep::spaced_balls(1, 2), 2, FineIndex(1)).value;
  const double l6 = lorentz_norm(FunctionRep::spaced_balls(1, 6), 2, FineIndex(1)).value;
  CHECK(l6 / l2 == doctest::Approx(std::sqrt(13.0 / 5.0)).epsilon(1e-10));
}

TEST_CASE("scan region") {
  const Report rep = scan_region(3, 3, 2, 6, {0.25, 0.5, 1, 1.9, 2, 2.5});
  CHECK(rep.verdict == Verdict::pass);
  std::vector<double> admitted;
  for (const auto& row : rep.details.at("rows")) {
    if (!row.at("admissible").get<bool>()) continue;
    admitted.push_back(row.at("gamma"));
    CHECK(std::abs(row.at("slope").get<double>() - row.at("theoretical").get<double>()) <= 0.02);
  }
  CHECK(admitted == std::vector<double>{1, 1.9});
  const Report empty = scan_region(3, 3, 2, 6, {});
  CHECK(empty.details.at("rows").empty());
  CHECK(empty.samples.empty());
}

TEST_CASE("report serialisation round trip") {
  const Report rep = run_decay_experiment(FunctionRep::radial_power(3, 1.0), homogeneous_params(), kTimes);
  const auto j = to_json(rep);
  validate_report(j);
  const Report back = report_from_json(nlohmann::json::parse(j.dump()));
  CHECK(to_json(back) == j);
  CHECK(to_csv(back) == to_csv(rep));
  CHECK(to_csv(rep).rfind("t,norm,error\n", 0) == 0);
  CHECK(j.at("settings").at("tool") == kToolVersion);

  auto broken = j;
  broken.erase("verdict");
  CHECK(code_of([&] { validate_report(broken); }) == ErrorCode::invalid_argument);
  broken = j;
  broken["samples"][0]["norm"] = "many";
  CHECK(code_of([&] { validate_report(broken); }) == ErrorCode::invalid_argument);

  // non-finite numbers survive as strings
  Report inf_rep;
  inf_rep.experiment = "x";
  inf_rep.samples.push_back({1.0, std::numeric_limits<double>::infinity(), 0.0});
  const Report inf_back = report_from_json(to_json(inf_rep));
  CHECK(std::isinf(inf_back.samples[0].norm));
}

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "obf/analytic.hpp"
#include "obf/sim.hpp"
#include "obf/units.hpp"
#include "support/stats.hpp"

using Catch::Approx;

namespace {

obf::SystemParams at_power(double pt_dbm, double ph_dbm) {
  obf::SystemParams p;
  p.pt_dbm = {pt_dbm};
  p.ph_dbm = {ph_dbm};
  return p;
}

obf::SimMode mode_of(obf::Scheme s,
                     obf::Combiner q = obf::Combiner::dc,
                     obf::Coupling c = obf::Coupling::decoupled) {
  obf::SimMode m;
  m.scheme = s;
  m.combiner = q;
  m.coupling = c;
  return m;
}

double combined_se(const obf::OutageEstimate& a, const obf::OutageEstimate& b) {
  return std::sqrt(testsupport::binomial_se(a.p_hat, a.trials) *
                       testsupport::binomial_se(a.p_hat, a.trials) +
                   testsupport::binomial_se(b.p_hat, b.trials) *
                       testsupport::binomial_se(b.p_hat, b.trials));
}

}  // namespace

TEST_CASE("empty field is always in outage") {
  obf::SystemParams params = at_power(50.0, 50.0);
  params.lambda_per_m2 = 0.0;
  for (obf::Scheme s : {obf::Scheme::one_bit, obf::Scheme::random_assignment,
                        obf::Scheme::full_feedback}) {
    obf::RandomSource rng(7);
    const obf::TrialRecord rec = obf::run_trial(params, mode_of(s), rng);
    REQUIRE(rec.beam_outage.size() == 2);
    for (int l = 0; l < 2; ++l) {
      CHECK(rec.beam_outage[l] == 1);
      CHECK(rec.total_count[l] == 0);
      CHECK(rec.active_count[l] == 0);
      CHECK(rec.silent_count[l] == 0);
    }
    const obf::OutageEstimate est =
        obf::estimate_outage(params, mode_of(s), 100, 1);
    CHECK(est.p_hat == 1.0);
    CHECK(est.ci_halfwidth == 0.0);
    CHECK_FALSE(est.rare_event());
  }
}

TEST_CASE("vanishing threshold reduces outage to the void probability") {
  obf::SystemParams params = at_power(50.0, 100.0);
  params.lambda_per_m2 = 0.01;
  params.delta_db = -300.0;  // any drawn SINR clears this
  const double void_prob =
      std::exp(-params.lambda_per_m2 / 2.0 * 96.0 * std::numbers::pi);

  for (obf::Coupling c : {obf::Coupling::decoupled, obf::Coupling::coupled}) {
    const obf::TrialContext ctx =
        make_trial_context(params, mode_of(obf::Scheme::one_bit, obf::Combiner::dc, c));
    const int n = 20000;
    int outages = 0;
    for (int t = 0; t < n; ++t) {
      obf::RandomSource rng = obf::substream(11, t);
      const obf::TrialRecord rec = obf::run_trial(ctx, rng);
      for (int l = 0; l < 2; ++l) {
        REQUIRE((rec.total_count[l] == 0) == (rec.beam_outage[l] == 1));
      }
      outages += rec.beam_outage[0];
    }
    const double got = static_cast<double>(outages) / n;
    CHECK(std::abs(got - void_prob) <=
          3.0 * testsupport::binomial_se(void_prob, n));
  }
}

TEST_CASE("saturated harvesting matches an independent genie simulation") {
  // with the beacon at 100 dBm every terminal feeds back, so the one-bit
  // protocol degenerates to max-SINR selection among the beam's members
  obf::SystemParams params = at_power(50.0, 100.0);
  const long long n = 100000;
  const obf::OutageEstimate lib = obf::estimate_outage(
      params, mode_of(obf::Scheme::one_bit, obf::Combiner::dc, obf::Coupling::coupled),
      n, 21);

  testsupport::TestRng rng(22);
  const double beam_mean = 0.1 / 2.0 * 96.0 * std::numbers::pi;
  long long outages = 0;
  for (long long t = 0; t < n; ++t) {
    const int k = rng.poisson(beam_mean);
    bool served = false;
    for (int i = 0; i < k && !served; ++i) {
      const double d = std::sqrt(4.0 + 96.0 * rng.uniform());
      const double w = d * d * d / 100.0;
      for (int j = 0; j < 2; ++j) {
        if (rng.exponential(1.0) / (w + rng.exponential(1.0)) >= 10.0) {
          served = true;
          break;
        }
      }
    }
    outages += served ? 0 : 1;
  }
  obf::OutageEstimate genie;
  genie.p_hat = static_cast<double>(outages) / static_cast<double>(n);
  genie.trials = n;

  CHECK(std::abs(lib.p_hat - genie.p_hat) <= 3.0 * combined_se(lib, genie));
  const double want = 0.96657660364075682;
  CHECK(std::abs(lib.p_hat - want) <= 3.0 * testsupport::binomial_se(want, n));
  CHECK(std::abs(genie.p_hat - want) <= 3.0 * testsupport::binomial_se(want, n));
}

TEST_CASE("rare event estimation and flag") {
  obf::SystemParams params = at_power(30.0, 30.0);
  params.delta_db = -100.0;
  const long long n = 10000000;
  const obf::OutageEstimate est =
      obf::estimate_outage(params, mode_of(obf::Scheme::one_bit), n, 5, 1);
  const double want = 2.8248377059511769e-7;  // void probability again
  CHECK(std::abs(est.p_hat - want) <= 3.0 * testsupport::binomial_se(want, n));
  CHECK(est.rare_event());

  const obf::OutageEstimate common =
      obf::estimate_outage(at_power(50.0, 50.0), mode_of(obf::Scheme::one_bit),
                           1000, 5, 1);
  CHECK_FALSE(common.rare_event());
}

TEST_CASE("beams are exchangeable") {
  obf::SystemParams params = at_power(50.0, 50.0);
  const obf::TrialContext ctx = make_trial_context(
      params,
      mode_of(obf::Scheme::one_bit, obf::Combiner::dc, obf::Coupling::coupled));
  const int n = 100000;
  int out0 = 0;
  int out1 = 0;
  for (int t = 0; t < n; ++t) {
    obf::RandomSource rng = obf::substream(31, t);
    const obf::TrialRecord rec = obf::run_trial(ctx, rng);
    out0 += rec.beam_outage[0];
    out1 += rec.beam_outage[1];
  }
  const double p0 = static_cast<double>(out0) / n;
  const double p1 = static_cast<double>(out1) / n;
  const double se = std::sqrt(testsupport::binomial_se(p0, n) * testsupport::binomial_se(p0, n) +
                              testsupport::binomial_se(p1, n) * testsupport::binomial_se(p1, n));
  CHECK(std::abs(p0 - p1) <= 3.0 * se);
}

TEST_CASE("outage falls as power rises") {
  for (obf::Coupling c : {obf::Coupling::decoupled, obf::Coupling::coupled}) {
    obf::OutageEstimate prev;
    bool have_prev = false;
    for (double p : {30.0, 40.0, 50.0}) {
      const obf::OutageEstimate est = obf::estimate_outage(
          at_power(p, p), mode_of(obf::Scheme::one_bit, obf::Combiner::dc, c),
          20000, 41);
      if (have_prev) {
        CHECK(est.p_hat <= prev.p_hat + 2.0 * combined_se(prev, est));
      }
      prev = est;
      have_prev = true;
    }
  }
}

TEST_CASE("scheme ordering") {
  for (double p : {40.0, 50.0}) {
    const obf::SystemParams params = at_power(p, p);
    const long long n = 20000;
    const obf::OutageEstimate ff = obf::estimate_outage(
        params, mode_of(obf::Scheme::full_feedback), n, 51);
    const obf::OutageEstimate ob = obf::estimate_outage(
        params, mode_of(obf::Scheme::one_bit), n, 52);
    const obf::OutageEstimate ra = obf::estimate_outage(
        params, mode_of(obf::Scheme::random_assignment), n, 53);
    CHECK(ff.p_hat <= ob.p_hat + 2.0 * combined_se(ff, ob));
    CHECK(ob.p_hat <= ra.p_hat + 2.0 * combined_se(ob, ra));
  }
}

TEST_CASE("constructive sampler reproduces the closed form") {
  obf::SystemParams params = at_power(50.0, 50.0);
  params.sampler = obf::SinrSampler::constructive;
  const long long n = 4000;
  const obf::OutageEstimate est =
      obf::estimate_outage(params, mode_of(obf::Scheme::one_bit), n, 61);
  const double want = 0.96750353755874076;
  CHECK(std::abs(est.p_hat - want) <= 3.0 * testsupport::binomial_se(want, n));
}

TEST_CASE("record counts are consistent") {
  obf::SystemParams params = at_power(40.0, 40.0);
  for (obf::Scheme s : {obf::Scheme::one_bit, obf::Scheme::random_assignment,
                        obf::Scheme::full_feedback}) {
    const obf::TrialContext ctx = make_trial_context(params, mode_of(s));
    for (int t = 0; t < 3000; ++t) {
      obf::RandomSource rng = obf::substream(71, t);
      const obf::TrialRecord rec = obf::run_trial(ctx, rng);
      for (int l = 0; l < 2; ++l) {
        REQUIRE(rec.active_count[l] >= 0);
        REQUIRE(rec.silent_count[l] >= 0);
        REQUIRE(rec.active_count[l] + rec.silent_count[l] == rec.total_count[l]);
        if (s == obf::Scheme::random_assignment) {
          REQUIRE(rec.active_count[l] == 0);
        }
        if (s == obf::Scheme::full_feedback) {
          REQUIRE(rec.silent_count[l] == 0);
        }
      }
    }
  }
}

TEST_CASE("estimates are deterministic in the worker count") {
  const obf::SystemParams params = at_power(50.0, 50.0);
  const obf::SimMode mode = mode_of(obf::Scheme::one_bit);
  const obf::OutageEstimate w1 = obf::estimate_outage(params, mode, 30000, 81, 1);
  const obf::OutageEstimate w3 = obf::estimate_outage(params, mode, 30000, 81, 3);
  const obf::OutageEstimate w7 = obf::estimate_outage(params, mode, 30000, 81, 7);
  CHECK(w1.p_hat == w3.p_hat);
  CHECK(w1.p_hat == w7.p_hat);
  CHECK(w1.ci_halfwidth == w7.ci_halfwidth);
  CHECK(w1.seed == 81);
  CHECK(w1.trials == 30000);

  // replaying one trial from the same substream gives the same record
  const obf::TrialContext ctx = make_trial_context(params, mode);
  obf::RandomSource a = obf::substream(81, 5);
  obf::RandomSource b = obf::substream(81, 5);
  const obf::TrialRecord ra = obf::run_trial(ctx, a);
  const obf::TrialRecord rb = obf::run_trial(ctx, b);
  CHECK(ra.beam_outage == rb.beam_outage);
  CHECK(ra.active_count == rb.active_count);
  CHECK(ra.silent_count == rb.silent_count);
  CHECK(ra.total_count == rb.total_count);
}

TEST_CASE("narrowing and argument guards") {
  obf::SystemParams two;
  two.pt_dbm = {30.0, 50.0};
  CHECK_THROWS_AS(obf::make_trial_context(two, mode_of(obf::Scheme::one_bit)),
                  std::invalid_argument);
  const obf::SystemParams one = at_power(30.0, 30.0);
  CHECK_THROWS_AS(
      obf::estimate_outage(one, mode_of(obf::Scheme::one_bit), 0, 1),
      std::invalid_argument);
}

#pragma once

// Per-slot Monte-Carlo engine. One trial walks the protocol in a fixed
// order so that a (seed, trial index) pair always replays the exact same
// slot:
//   1. sample the terminal field;
//   2. assign each terminal a uniform beam;
//   3. run the harvest-and-activity test per terminal (one_bit only);
//   4. draw every terminal's selection-combined SINR;
//   5. resolve each beam: a positive feedback wins, otherwise a uniformly
//      chosen silent terminal is assigned blindly, otherwise outage.
//
// Trials are embarrassingly parallel. Each trial seeds its own generator
// from (seed, trial index), and the estimator reduces exact integer outage
// counts, so any partition of the trial range over workers produces the
// same result bit for bit.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <stdexcept>
#include <thread>
#include <vector>

#include "obf/channel.hpp"
#include "obf/config.hpp"
#include "obf/energy.hpp"
#include "obf/geometry.hpp"
#include "obf/modes.hpp"
#include "obf/rng.hpp"

namespace obf {

struct TrialContext {
  AnnulusRegion region;
  SimMode mode;
  SinrSampler sampler = SinrSampler::direct;
  int m = 1;
  int n = 1;
  int l = 1;
  double alpha = 3.0;
  double lambda_per_m2 = 0.0;
  double delta_linear = 1.0;
  double p_t_watts = 1.0;
  double sigma2_watts = 1.0;
  HarvestParams harvest{};
};

inline TrialContext make_trial_context(const SystemParams& params, const SimMode& mode) {
  const auto pts = params.sweep_points();
  if (pts.size() != 1) {
    throw std::invalid_argument(
        "make_trial_context: params must be narrowed to a single sweep point "
        "(use at_point)");
  }
  TrialContext c{params.region(), mode};
  c.sampler = params.sampler;
  c.m = params.m;
  c.n = params.n;
  c.l = params.l;
  c.alpha = params.alpha;
  c.lambda_per_m2 = params.lambda_per_m2;
  c.delta_linear = params.delta_linear();
  c.p_t_watts = dbm_to_watts(pts.front().first);
  c.sigma2_watts = params.sigma2_watts();
  c.harvest = params.harvest_params(dbm_to_watts(pts.front().second));
  return c;
}

struct TrialRecord {
  std::vector<char> beam_outage;   // one flag per beam
  std::vector<int> active_count;   // feedback-capable terminals per beam
  std::vector<int> silent_count;
  std::vector<int> total_count;
};

inline TrialRecord run_trial(const TrialContext& c, RandomSource& rng) {
  TrialRecord rec;
  rec.beam_outage.assign(c.m, 1);
  rec.active_count.assign(c.m, 0);
  rec.silent_count.assign(c.m, 0);
  rec.total_count.assign(c.m, 0);

  const TerminalField field = sample_ppp(c.region, c.lambda_per_m2, rng);
  const int nt = static_cast<int>(field.count());

  std::vector<int> beam_of(nt);
  for (int i = 0; i < nt; ++i) {
    beam_of[i] = static_cast<int>(rng.uniform_index(static_cast<std::size_t>(c.m)));
    ++rec.total_count[beam_of[i]];
  }

  // Activity test. random_assignment never learns who could feed back, so
  // everyone counts as silent; full_feedback is the genie case where
  // everyone reports.
  std::vector<char> active(nt, 0);
  if (c.mode.scheme == Scheme::one_bit) {
    for (int i = 0; i < nt; ++i) {
      const WptDraw draw = draw_wpt(c.l, rng);
      const double d = field.distances[i];
      const double p = c.mode.combiner == Combiner::dc
                           ? harvest_dc(draw, d, c.harvest, c.alpha)
                           : harvest_rf(draw, d, c.harvest, c.alpha);
      active[i] = is_active(p, d, c.sigma2_watts, c.alpha) ? 1 : 0;
    }
  } else if (c.mode.scheme == Scheme::full_feedback) {
    std::fill(active.begin(), active.end(), 1);
  }
  for (int i = 0; i < nt; ++i) {
    if (active[i]) {
      ++rec.active_count[beam_of[i]];
    } else {
      ++rec.silent_count[beam_of[i]];
    }
  }

  // SINR draws. In decoupled one_bit mode the SINR sees an independently
  // resampled distance instead of the terminal's true one, removing the
  // correlation between activity and SINR that runs through d. The genie
  // scheme needs every beam's SINR per terminal; the others only need the
  // assigned beam's.
  const bool resample =
      c.mode.scheme == Scheme::one_bit && c.mode.coupling == Coupling::decoupled;
  const bool all_beams = c.mode.scheme == Scheme::full_feedback;
  std::vector<double> sinr(all_beams ? 0 : nt, 0.0);
  std::vector<double> sinr_all(all_beams ? static_cast<std::size_t>(nt) * c.m : 0, 0.0);
  BeamSet beams;
  if (c.sampler == SinrSampler::constructive && nt > 0) {
    beams = draw_beams(c.m, rng);
  }
  std::vector<double> per_beam;
  for (int i = 0; i < nt; ++i) {
    const double d_eff =
        resample ? c.region.radius_from_uniform(rng.uniform01()) : field.distances[i];
    if (c.sampler == SinrSampler::constructive) {
      const DownlinkDraw h = draw_downlink(c.n, c.m, rng);
      if (all_beams) {
        for (int l = 0; l < c.m; ++l) {
          sinr_all[static_cast<std::size_t>(i) * c.m + l] =
              sc_sinr(h, beams, l, d_eff, c.alpha, c.p_t_watts);
        }
      } else {
        sinr[i] = sc_sinr(h, beams, beam_of[i], d_eff, c.alpha, c.p_t_watts);
      }
    } else {
      if (all_beams) {
        sinr_direct_sample_all(c.m, c.n, d_eff, c.alpha, c.p_t_watts, rng, per_beam);
        std::copy(per_beam.begin(), per_beam.end(),
                  sinr_all.begin() + static_cast<std::size_t>(i) * c.m);
      } else {
        sinr[i] = sinr_direct_sample(c.m, c.n, d_eff, c.alpha, c.p_t_watts, rng);
      }
    }
  }

  if (c.mode.scheme == Scheme::full_feedback) {
    for (int l = 0; l < c.m; ++l) {
      double best = 0.0;
      for (int i = 0; i < nt; ++i) {
        best = std::max(best, sinr_all[static_cast<std::size_t>(i) * c.m + l]);
      }
      rec.beam_outage[l] = (nt > 0 && best >= c.delta_linear) ? 0 : 1;
    }
    return rec;
  }

  std::vector<std::vector<int>> members(c.m);
  for (int i = 0; i < nt; ++i) members[beam_of[i]].push_back(i);

  if (c.mode.scheme == Scheme::random_assignment) {
    for (int l = 0; l < c.m; ++l) {
      if (members[l].empty()) continue;  // stays in outage
      const int pick = members[l][rng.uniform_index(members[l].size())];
      rec.beam_outage[l] = sinr[pick] < c.delta_linear ? 1 : 0;
    }
    return rec;
  }

  for (int l = 0; l < c.m; ++l) {
    bool served = false;
    for (int i : members[l]) {
      if (active[i] && sinr[i] >= c.delta_linear) {
        served = true;
        break;
      }
    }
    if (served) {
      rec.beam_outage[l] = 0;
      continue;
    }
    std::vector<int> silent;
    for (int i : members[l]) {
      if (!active[i]) silent.push_back(i);
    }
    if (silent.empty()) continue;  // nobody usable: outage
    const int pick = silent[rng.uniform_index(silent.size())];
    rec.beam_outage[l] = sinr[pick] < c.delta_linear ? 1 : 0;
  }
  return rec;
}

inline TrialRecord run_trial(const SystemParams& params, const SimMode& mode,
                             RandomSource& rng) {
  return run_trial(make_trial_context(params, mode), rng);
}

struct OutageEstimate {
  double p_hat = 0.0;
  long long trials = 0;
  double ci_halfwidth = 0.0;  // normal-approximation 99% half-width
  std::uint64_t seed = 0;

  // Too few expected events for the normal approximation to mean much.
  bool rare_event() const {
    return p_hat < 10.0 / static_cast<double>(trials);
  }
};

// Outage frequency of the first beam (all beams are exchangeable) over
// independent trials. Identical output for any worker count.
inline OutageEstimate estimate_outage(const SystemParams& params, const SimMode& mode,
                                      long long trials, std::uint64_t seed,
                                      int workers = 1) {
  if (trials < 1) throw std::invalid_argument("estimate_outage: trials must be >= 1");
  const TrialContext ctx = make_trial_context(params, mode);
  const int nw = static_cast<int>(
      std::max<long long>(1, std::min<long long>(workers, trials)));

  std::vector<long long> counts(nw, 0);
  auto block = [&](int w, long long lo, long long hi) {
    long long local = 0;
    for (long long t = lo; t < hi; ++t) {
      RandomSource rs = substream(seed, static_cast<std::uint64_t>(t));
      const TrialRecord rec = run_trial(ctx, rs);
      local += rec.beam_outage[0] ? 1 : 0;
    }
    counts[w] = local;
  };

  if (nw == 1) {
    block(0, 0, trials);
  } else {
    const long long base = trials / nw;
    const long long rem = trials % nw;
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(nw);
    pool.reserve(nw);
    long long lo = 0;
    for (int w = 0; w < nw; ++w) {
      const long long hi = lo + base + (w < rem ? 1 : 0);
      pool.emplace_back([&, w, lo, hi] {
        try {
          block(w, lo, hi);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
      lo = hi;
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  long long outages = 0;
  for (long long c : counts) outages += c;

  OutageEstimate est;
  est.p_hat = static_cast<double>(outages) / static_cast<double>(trials);
  est.trials = trials;
  est.ci_halfwidth =
      2.576 * std::sqrt(est.p_hat * (1.0 - est.p_hat) / static_cast<double>(trials));
  est.seed = seed;
  return est;
}

}  // namespace obf

#pragma once

// Sweep orchestration and CSV emission.
//
// Each (power point, mode) pair becomes one row. A row's estimator seed is
// derived from the config seed and the row index, so every row is
// independently reproducible and the emitted bytes depend only on (config,
// seed), never on the worker count. The seed column records the derived
// per-row seed.

#include <cstdint>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "obf/analytic.hpp"
#include "obf/config.hpp"
#include "obf/sim.hpp"

namespace obf {

struct SweepRow {
  double pt_dbm = 0.0;
  double ph_dbm = 0.0;
  SimMode mode;
  OutageEstimate estimate;
  bool has_analytic = false;  // analytic columns apply to one_bit rows only
  double outage_analytic = 0.0;
  double outage_asymptotic = 0.0;
};

inline AnalyticInputs make_analytic_inputs(const SystemParams& params, double pt_dbm,
                                           double ph_dbm) {
  return AnalyticInputs{
      params.region(),
      params.m,
      params.n,
      params.l,
      params.alpha,
      params.lambda_per_m2,
      params.delta_linear(),
      dbm_to_watts(pt_dbm),
      make_derived(params.harvest_params(dbm_to_watts(ph_dbm)), params.sigma2_watts())};
}

namespace detail {

inline std::string fmt_real(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace detail

// Rows appear in deterministic order: outer loop over power points, inner
// loop over modes, in config order. Workers parallelize the trials inside
// each row's estimator, which leaves the output untouched by construction.
inline std::vector<SweepRow> run_sweep(const SystemParams& params, int workers = 1) {
  validate_params(params);
  const auto pts = params.sweep_points();
  std::vector<SweepRow> rows;
  rows.reserve(pts.size() * params.modes.size());
  std::uint64_t row_index = 0;
  for (std::size_t p = 0; p < pts.size(); ++p) {
    const SystemParams point = params.at_point(p);
    for (const SimMode& mode : params.modes) {
      SweepRow row;
      row.pt_dbm = pts[p].first;
      row.ph_dbm = pts[p].second;
      row.mode = mode;
      try {
        row.estimate = estimate_outage(point, mode, params.trials,
                                       derive_stream_seed(params.seed, row_index),
                                       workers);
        if (mode.scheme == Scheme::one_bit) {
          const AnalyticInputs in =
              make_analytic_inputs(params, pts[p].first, pts[p].second);
          row.has_analytic = true;
          row.outage_analytic = beam_outage(in, mode.combiner);
          row.outage_asymptotic = beam_outage_asymptotic(in);
        }
      } catch (const std::exception& e) {
        throw std::runtime_error("sweep point pt_dbm=" + detail::fmt_real(pts[p].first) +
                                 " ph_dbm=" + detail::fmt_real(pts[p].second) +
                                 " scheme=" + scheme_token(mode.scheme) + ": " + e.what());
      }
      rows.push_back(row);
      ++row_index;
    }
  }
  return rows;
}

inline constexpr const char* kCsvHeader =
    "pt_dbm,ph_dbm,scheme,combiner,coupling,outage_sim,ci_halfwidth,"
    "outage_analytic,outage_asymptotic,trials,seed,rare_event_flag";

inline void emit_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << kCsvHeader << '\n';
  if (!out) throw std::runtime_error("csv write failure at header");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const SweepRow& r = rows[i];
    std::string line;
    line += detail::fmt_real(r.pt_dbm);
    line += ',';
    line += detail::fmt_real(r.ph_dbm);
    line += ',';
    line += scheme_token(r.mode.scheme);
    line += ',';
    line += combiner_token(r.mode.combiner);
    line += ',';
    line += coupling_token(r.mode.coupling);
    line += ',';
    line += detail::fmt_real(r.estimate.p_hat);
    line += ',';
    line += detail::fmt_real(r.estimate.ci_halfwidth);
    line += ',';
    if (r.has_analytic) line += detail::fmt_real(r.outage_analytic);
    line += ',';
    if (r.has_analytic) line += detail::fmt_real(r.outage_asymptotic);
    line += ',';
    line += std::to_string(r.estimate.trials);
    line += ',';
    line += std::to_string(r.estimate.seed);
    line += ',';
    line += r.estimate.rare_event() ? '1' : '0';
    out << line << '\n';
    if (!out) throw std::runtime_error("csv write failure at row " + std::to_string(i));
  }
  out.flush();
  if (!out) throw std::runtime_error("csv write failure at flush");
}

}  // namespace obf

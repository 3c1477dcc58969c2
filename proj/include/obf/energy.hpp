#pragma once

// Rectenna-array harvesting models and the feedback-activity test.
//
// Each terminal carries L rectenna elements fed by i.i.d. unit-variance
// complex Gaussian channels from the power beacon. Two combiner topologies:
//
//   dc: one rectifier per element, DC outputs added. Harvested power scales
//       with the sum of squared element magnitudes (chi-square with 2L
//       degrees of freedom), immune to phase misalignment.
//   rf: the element signals are added passively before a single rectifier.
//       Harvested power scales with the squared magnitude of the coherent
//       sum, an exponential with mean L, so destructive phases can null it.
//
// The diode's square-law term makes both expressions quadratic in the
// channel magnitudes; powers are watts throughout.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "obf/rng.hpp"

namespace obf {

enum class Combiner { dc, rf };

struct HarvestParams {
  double i_s_amps;    // diode reverse saturation current
  double mu;          // diode ideality factor
  double v_t_volts;   // thermal voltage
  double zeta_dc;     // conversion efficiency, dc topology
  double zeta_rf;     // conversion efficiency, rf topology
  double e_dc;        // combining-circuit efficiency, dc topology
  double e_rf;        // combining-circuit efficiency, rf topology
  double p_h_watts;   // power beacon transmit power
  int l_elements;     // rectenna elements per terminal
};

struct WptDraw {
  std::vector<std::complex<double>> g;  // beacon-to-element channels
};

inline WptDraw draw_wpt(int l, RandomSource& rng) {
  WptDraw draw;
  draw.g.resize(l);
  for (auto& c : draw.g) c = rng.cn01();
  return draw;
}

// Normalized harvesting thresholds. A terminal's activity test reduces to
// comparing its channel statistic against these times d^(2*alpha):
//   dc: sum |g_j|^2  >= g_dc * d^(2 alpha)
//   rf: |sum g_j|^2  >= y_rf * d^(2 alpha)
struct DerivedConstants {
  double g_dc;
  double y_rf;
};

inline DerivedConstants make_derived(const HarvestParams& p, double sigma2_watts) {
  if (!(p.p_h_watts > 0.0)) throw std::invalid_argument("make_derived: beacon power must be positive");
  const double mv2 = (p.mu * p.v_t_volts) * (p.mu * p.v_t_volts);
  return {mv2 * sigma2_watts / (p.zeta_dc * p.e_dc * p.i_s_amps * p.p_h_watts),
          mv2 * sigma2_watts / (p.zeta_rf * p.e_rf * p.i_s_amps * p.p_h_watts)};
}

// Total harvested DC power of the dc topology at distance d.
inline double harvest_dc(const WptDraw& draw, double d, const HarvestParams& p,
                         double alpha) {
  double sum_sq = 0.0;
  for (const auto& c : draw.g) sum_sq += std::norm(c);
  const double mv2 = (p.mu * p.v_t_volts) * (p.mu * p.v_t_volts);
  return p.zeta_dc * p.e_dc * p.i_s_amps * p.p_h_watts * sum_sq /
         (mv2 * std::pow(d, alpha));
}

// Harvested DC power of the rf topology at distance d.
inline double harvest_rf(const WptDraw& draw, double d, const HarvestParams& p,
                         double alpha) {
  std::complex<double> coherent = 0.0;
  for (const auto& c : draw.g) coherent += c;
  const double mv2 = (p.mu * p.v_t_volts) * (p.mu * p.v_t_volts);
  return p.zeta_rf * p.e_rf * p.i_s_amps * p.p_h_watts * std::norm(coherent) /
         (mv2 * std::pow(d, alpha));
}

// A terminal can return its feedback bit when the harvested power supports
// one bit per channel use on the unfaded uplink, i.e. when
// log2(1 + P / (d^alpha sigma2)) >= 1. The boundary counts as active.
inline bool is_active(double p_harvest, double d, double sigma2_watts, double alpha) {
  return p_harvest >= std::pow(d, alpha) * sigma2_watts;
}

}  // namespace obf

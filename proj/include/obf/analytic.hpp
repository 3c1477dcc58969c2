#pragma once

// Closed-form outage analysis.
//
// Chain of results, all under the annulus field with per-beam assignment:
//   - idle probability of a terminal: the chance its harvested power cannot
//     fund the one-bit feedback uplink, averaged over the radial law;
//   - intensity of feedback-capable terminals on one beam, by independent
//     location-dependent thinning;
//   - selection-combined SINR distribution, conditional on distance and
//     averaged over the annulus (binomial expansion in incomplete gammas);
//   - beam outage probability, composing the two thinned populations;
//   - the interference-limited asymptote reached as both powers grow.
//
// Probabilities are clamped to [0,1] only for sub-1e-12 floating excursions;
// anything larger throws, because it would mean a genuinely broken formula
// rather than rounding dust.

#include <cmath>
#include <stdexcept>
#include <string>

#include "obf/energy.hpp"
#include "obf/geometry.hpp"
#include "obf/quadrature.hpp"
#include "obf/specfun.hpp"

namespace obf {

struct AnalyticInputs {
  AnnulusRegion region;
  int m_beams;
  int n_antennas;
  int l_elements;
  double alpha;
  double lambda_per_m2;
  double delta_linear;
  double p_t_watts;
  DerivedConstants constants;
};

namespace detail {

inline double clamp_probability(double p, const char* what) {
  if (p >= 0.0 && p <= 1.0) return p;
  if (p >= -1e-12 && p < 0.0) return 0.0;
  if (p > 1.0 && p <= 1.0 + 1e-12) return 1.0;
  throw std::logic_error(std::string(what) +
                         ": probability escaped [0,1] beyond rounding slack");
}

}  // namespace detail

// Probability that a dc-combining terminal cannot feed back, averaged over
// its position. The radial average of the regularized chi-square CDF
// collapses into a sum of upper incomplete gamma differences.
inline double idle_prob_dc(const AnalyticInputs& in) {
  const double g = in.constants.g_dc;
  if (!(g > 0.0)) throw std::domain_error("idle_prob_dc: scale G must be positive");
  const double inv_alpha = 1.0 / in.alpha;
  const double area2 = in.region.rho_m * in.region.rho_m - in.region.xi_m * in.region.xi_m;
  const double lo = g * std::pow(in.region.xi_m, 2.0 * in.alpha);
  const double hi = g * std::pow(in.region.rho_m, 2.0 * in.alpha);
  double sum = 0.0;
  for (int m = 0; m < in.l_elements; ++m) {
    sum += upper_gamma_diff(m + inv_alpha, lo, hi) / gamma_fn(m + 1.0);
  }
  const double denom = in.alpha * area2 * std::pow(g, inv_alpha);
  return detail::clamp_probability(1.0 - sum / denom, "idle_prob_dc");
}

// Same average for the rf topology, whose harvested power is exponential
// with mean L, so only the first gamma term survives with a rescaled
// threshold.
inline double idle_prob_rf(const AnalyticInputs& in) {
  const double y = in.constants.y_rf;
  if (!(y > 0.0)) throw std::domain_error("idle_prob_rf: scale Y must be positive");
  const double inv_alpha = 1.0 / in.alpha;
  const double area2 = in.region.rho_m * in.region.rho_m - in.region.xi_m * in.region.xi_m;
  const double scaled = y / in.l_elements;
  const double lo = scaled * std::pow(in.region.xi_m, 2.0 * in.alpha);
  const double hi = scaled * std::pow(in.region.rho_m, 2.0 * in.alpha);
  const double denom = in.alpha * area2 * std::pow(y, inv_alpha);
  const double s = std::pow(static_cast<double>(in.l_elements), inv_alpha) *
                   upper_gamma_diff(inv_alpha, lo, hi) / denom;
  return detail::clamp_probability(1.0 - s, "idle_prob_rf");
}

inline double idle_prob(const AnalyticInputs& in, Combiner combiner) {
  return combiner == Combiner::dc ? idle_prob_dc(in) : idle_prob_rf(in);
}

// Intensity of feedback-capable terminals on one beam: per-beam assignment
// thins the field to lambda/M, and the activity test thins it again by the
// feedback-success probability.
inline double active_intensity(const AnalyticInputs& in, Combiner combiner) {
  return in.lambda_per_m2 / in.m_beams * (1.0 - idle_prob(in, combiner));
}

namespace detail {

// Direct transcription of the thinned-intensity closed form, with the
// feedback-success average assembled inline. Retained as an independent
// code path so the identity against active_intensity can be asserted.
inline double active_intensity_direct(const AnalyticInputs& in, Combiner combiner) {
  const double inv_alpha = 1.0 / in.alpha;
  const double area2 = in.region.rho_m * in.region.rho_m - in.region.xi_m * in.region.xi_m;
  if (combiner == Combiner::dc) {
    const double g = in.constants.g_dc;
    if (!(g > 0.0)) throw std::domain_error("active_intensity_direct: scale G must be positive");
    const double lo = g * std::pow(in.region.xi_m, 2.0 * in.alpha);
    const double hi = g * std::pow(in.region.rho_m, 2.0 * in.alpha);
    double sum = 0.0;
    for (int m = 0; m < in.l_elements; ++m) {
      sum += upper_gamma_diff(m + inv_alpha, lo, hi) / gamma_fn(m + 1.0);
    }
    return in.lambda_per_m2 /
           (in.m_beams * in.alpha * area2 * std::pow(g, inv_alpha)) * sum;
  }
  const double y = in.constants.y_rf;
  if (!(y > 0.0)) throw std::domain_error("active_intensity_direct: scale Y must be positive");
  const double scaled = y / in.l_elements;
  const double lo = scaled * std::pow(in.region.xi_m, 2.0 * in.alpha);
  const double hi = scaled * std::pow(in.region.rho_m, 2.0 * in.alpha);
  return in.lambda_per_m2 * std::pow(static_cast<double>(in.l_elements), inv_alpha) /
         (in.m_beams * in.alpha * area2 * std::pow(y, inv_alpha)) *
         upper_gamma_diff(inv_alpha, lo, hi);
}

}  // namespace detail

// CDF of the selection-combined SINR at distance d: one antenna's success
// probability raised to the antenna count.
inline double sinr_cdf_conditional(double x, double d, const AnalyticInputs& in) {
  if (!(x >= 0.0)) throw std::domain_error("sinr_cdf_conditional: x must be nonnegative");
  const double slack = 1e-9 * in.region.rho_m;
  if (d < in.region.xi_m - slack || d > in.region.rho_m + slack) {
    throw std::domain_error("sinr_cdf_conditional: distance outside the annulus");
  }
  const double one_antenna =
      1.0 - std::exp(-x * std::pow(d, in.alpha) / in.p_t_watts) /
                std::pow(x + 1.0, in.m_beams - 1.0);
  return std::pow(one_antenna, static_cast<double>(in.n_antennas));
}

namespace detail {

inline double sinr_cdf_quadrature(double x, const AnalyticInputs& in) {
  const double area2 = in.region.rho_m * in.region.rho_m - in.region.xi_m * in.region.xi_m;
  const auto f = [&](double r) {
    return sinr_cdf_conditional(x, r, in) * 2.0 * r / area2;
  };
  const double v = quadrature::integrate(f, in.region.xi_m, in.region.rho_m, 1e-13, 1e-12);
  return clamp_probability(v, "sinr_cdf (quadrature)");
}

}  // namespace detail

// Distance-averaged SINR CDF. The binomial expansion of the conditional CDF
// turns the radial average into incomplete gamma differences; the expansion
// alternates in sign, so for small arguments or ill-conditioned sums the
// function falls back to direct quadrature of the defining integral.
inline double sinr_cdf(double x, const AnalyticInputs& in) {
  if (!(x >= 0.0)) throw std::domain_error("sinr_cdf: x must be nonnegative");
  if (x == 0.0) return 0.0;
  if (x < 1e-3 || in.n_antennas > 40) return detail::sinr_cdf_quadrature(x, in);
  const double two_over_alpha = 2.0 / in.alpha;
  const double area2 = in.region.rho_m * in.region.rho_m - in.region.xi_m * in.region.xi_m;
  const double xi_a = std::pow(in.region.xi_m, in.alpha);
  const double rho_a = std::pow(in.region.rho_m, in.alpha);
  const double pref = 2.0 / (in.alpha * area2) * std::pow(in.p_t_watts / x, two_over_alpha);
  double acc = 0.0;
  double acc_abs = 0.0;
  double binom = 1.0;
  for (int m = 1; m <= in.n_antennas; ++m) {
    binom *= static_cast<double>(in.n_antennas - m + 1) / m;
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    const double diff = upper_gamma_diff(two_over_alpha, x * m * xi_a / in.p_t_watts,
                                         x * m * rho_a / in.p_t_watts);
    const double term = binom * sign * std::pow(static_cast<double>(m), -two_over_alpha) *
                        std::pow(x + 1.0, -static_cast<double>(m) * (in.m_beams - 1)) * diff;
    acc += term;
    acc_abs += std::abs(term);
  }
  const double value = 1.0 + pref * acc;
  const double kappa = (1.0 + pref * acc_abs) / std::max(std::abs(value), 1e-300);
  if (!std::isfinite(value) || kappa > 1e8) return detail::sinr_cdf_quadrature(x, in);
  return detail::clamp_probability(value, "sinr_cdf");
}

// Interference-limited limit of the SINR CDF: the noise term vanishes and
// only the beam count and antenna count remain.
inline double sinr_cdf_asymptotic(double x, int m_beams, int n_antennas) {
  if (!(x >= 0.0)) throw std::domain_error("sinr_cdf_asymptotic: x must be nonnegative");
  const double one_antenna = 1.0 - std::pow(x + 1.0, -(m_beams - 1.0));
  return std::pow(one_antenna, static_cast<double>(n_antennas));
}

// Beam outage probability. First factor: no feedback-capable terminal on the
// beam clears the threshold. Second factor: the fallback assignment, which
// prefers silent terminals, either has none to pick (certain outage only if
// the first factor already failed everyone) or picks one that misses the
// threshold.
inline double beam_outage(const AnalyticInputs& in, Combiner combiner) {
  const double area = in.region.area();
  const double lam_active = active_intensity(in, combiner);
  const double lam_silent = in.lambda_per_m2 / in.m_beams - lam_active;
  const double fg = sinr_cdf(in.delta_linear, in);
  const double no_active_hit = std::exp(-lam_active * area * (1.0 - fg));
  const double silent_factor =
      std::exp(-lam_silent * area) + (1.0 - std::exp(-lam_silent * area)) * fg;
  return detail::clamp_probability(no_active_hit * silent_factor, "beam_outage");
}

// High-power limit of the beam outage: every terminal feeds back and the
// SINR law loses its noise term.
inline double beam_outage_asymptotic(const AnalyticInputs& in) {
  const double fg = sinr_cdf_asymptotic(in.delta_linear, in.m_beams, in.n_antennas);
  return detail::clamp_probability(
      std::exp(-in.lambda_per_m2 / in.m_beams * in.region.area() * (1.0 - fg)),
      "beam_outage_asymptotic");
}

}  // namespace obf

#pragma once

// Downlink physical layer: random orthonormal beams, per-beam SINR, and
// selection combining across receive antennas.
//
// Two equivalent SINR samplers ship. The constructive one draws a Haar
// beam basis and a Gaussian channel matrix, then projects. The direct one
// exploits that projections of an i.i.d. complex Gaussian vector onto any
// orthonormal basis are again i.i.d., so the M projection powers per antenna
// are independent unit exponentials. The simulator defaults to the direct
// sampler; the constructive path stays available as an audit switch and the
// tests pin the two distributions against each other.
//
// Beam indices are zero-based throughout the API.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "obf/rng.hpp"

namespace obf {

struct BeamSet {
  int m = 0;
  // column-major, columns are the beam vectors: cols[l * m + row]
  std::vector<std::complex<double>> cols;

  std::span<const std::complex<double>> column(int l) const {
    return {cols.data() + static_cast<std::size_t>(l) * m, static_cast<std::size_t>(m)};
  }
};

// Haar-distributed orthonormal basis: orthonormalize an i.i.d. complex
// Gaussian matrix by modified Gram-Schmidt with one reorthogonalization
// pass. The normalization constants are real and positive, which is exactly
// the triangular-factor sign convention that makes the result Haar rather
// than merely orthonormal.
inline BeamSet draw_beams(int m, RandomSource& rng) {
  assert(m >= 1);
  BeamSet beams;
  beams.m = m;
  beams.cols.resize(static_cast<std::size_t>(m) * m);
  for (auto& c : beams.cols) c = rng.cn01();
  auto col = [&](int l) { return beams.cols.data() + static_cast<std::size_t>(l) * m; };
  for (int l = 0; l < m; ++l) {
    std::complex<double>* v = col(l);
    for (int pass = 0; pass < 2; ++pass) {
      for (int k = 0; k < l; ++k) {
        const std::complex<double>* q = col(k);
        std::complex<double> proj = 0.0;
        for (int r = 0; r < m; ++r) proj += std::conj(q[r]) * v[r];
        for (int r = 0; r < m; ++r) v[r] -= proj * q[r];
      }
    }
    double norm2 = 0.0;
    for (int r = 0; r < m; ++r) norm2 += std::norm(v[r]);
    const double inv = 1.0 / std::sqrt(norm2);
    for (int r = 0; r < m; ++r) v[r] *= inv;
  }
  return beams;
}

struct DownlinkDraw {
  int n_rows = 0;  // receive antennas
  int m_cols = 0;  // transmit antennas
  // row-major: h[row * m_cols + col]
  std::vector<std::complex<double>> h;

  std::span<const std::complex<double>> row(int j) const {
    return {h.data() + static_cast<std::size_t>(j) * m_cols, static_cast<std::size_t>(m_cols)};
  }
};

inline DownlinkDraw draw_downlink(int n, int m, RandomSource& rng) {
  DownlinkDraw d;
  d.n_rows = n;
  d.m_cols = m;
  d.h.resize(static_cast<std::size_t>(n) * m);
  for (auto& c : d.h) c = rng.cn01();
  return d;
}

namespace detail {

// Transpose product h^T u (no conjugation; the channel row is already the
// transposed vector and circular symmetry makes the convention immaterial).
inline double projection_power(std::span<const std::complex<double>> h_row,
                               std::span<const std::complex<double>> u) {
  std::complex<double> acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) acc += h_row[i] * u[i];
  return std::norm(acc);
}

}  // namespace detail

// SINR of beam l seen through one antenna row: desired projection power over
// path-loss-scaled noise plus the other beams' projection powers.
inline double beam_sinr(std::span<const std::complex<double>> h_row,
                        const BeamSet& beams, int l, double d, double alpha,
                        double p_t) {
  assert(l >= 0 && l < beams.m);
  assert(d > 0.0 && p_t > 0.0);
  const double noise = std::pow(d, alpha) / p_t;
  double desired = 0.0;
  double interference = 0.0;
  for (int k = 0; k < beams.m; ++k) {
    const double p = detail::projection_power(h_row, beams.column(k));
    if (k == l) {
      desired = p;
    } else {
      interference += p;
    }
  }
  return desired / (noise + interference);
}

// Selection combining: the receiver keeps the antenna with the best SINR.
inline double sc_sinr(const DownlinkDraw& h, const BeamSet& beams, int l,
                      double d, double alpha, double p_t) {
  double best = 0.0;
  for (int j = 0; j < h.n_rows; ++j) {
    best = std::max(best, beam_sinr(h.row(j), beams, l, d, alpha, p_t));
  }
  return best;
}

// Direct sampler for the selection-combined SINR of one beam: per antenna,
// signal power X ~ Exp(1) against the sum of M-1 independent Exp(1)
// interferers. Distributionally identical to sc_sinr on a fresh Haar basis.
inline double sinr_direct_sample(int m, int n, double d, double alpha,
                                 double p_t, RandomSource& rng) {
  assert(m >= 1 && n >= 1);
  const double noise = std::pow(d, alpha) / p_t;
  double best = 0.0;
  for (int j = 0; j < n; ++j) {
    const double x = rng.exponential();
    double interference = 0.0;
    for (int k = 1; k < m; ++k) interference += rng.exponential();
    best = std::max(best, x / (noise + interference));
  }
  return best;
}

// Direct sampler for all beams of one terminal at once, sharing the per-row
// projection draws the way a single channel realization would.
inline void sinr_direct_sample_all(int m, int n, double d, double alpha,
                                   double p_t, RandomSource& rng,
                                   std::vector<double>& per_beam) {
  const double noise = std::pow(d, alpha) / p_t;
  per_beam.assign(m, 0.0);
  thread_local std::vector<double> e;
  e.resize(m);
  for (int j = 0; j < n; ++j) {
    double total = 0.0;
    for (int k = 0; k < m; ++k) {
      e[k] = rng.exponential();
      total += e[k];
    }
    for (int k = 0; k < m; ++k) {
      per_beam[k] = std::max(per_beam[k], e[k] / (noise + (total - e[k])));
    }
  }
}

}  // namespace obf

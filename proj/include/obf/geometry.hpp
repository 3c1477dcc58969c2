#pragma once

// Spatial model: a homogeneous Poisson field of terminals on an annulus
// around the access point. Every downstream quantity depends on a terminal's
// position only through its distance, so fields store radial distances and
// never materialize angles.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "obf/rng.hpp"

namespace obf {

struct AnnulusRegion {
  double xi_m;   // inner exclusion radius
  double rho_m;  // outer radius

  AnnulusRegion(double xi, double rho) : xi_m(xi), rho_m(rho) {
    if (!(xi >= 0.0) || !(xi < rho)) {
      throw std::invalid_argument("AnnulusRegion: need 0 <= xi < rho");
    }
  }

  double area() const {
    return std::numbers::pi * (rho_m * rho_m - xi_m * xi_m);
  }

  // Inverse of the radial CDF (r^2 - xi^2) / (rho^2 - xi^2); exact, no
  // rejection step.
  double radius_from_uniform(double u) const {
    return std::sqrt(xi_m * xi_m + u * (rho_m * rho_m - xi_m * xi_m));
  }

  double radial_cdf(double r) const {
    if (r <= xi_m) return 0.0;
    if (r >= rho_m) return 1.0;
    return (r * r - xi_m * xi_m) / (rho_m * rho_m - xi_m * xi_m);
  }
};

inline double annulus_area(const AnnulusRegion& region) { return region.area(); }

struct TerminalField {
  std::vector<double> distances;

  std::size_t count() const { return distances.size(); }
};

// Samples one slot's terminal positions: Poisson count with mean
// lambda * area, distances i.i.d. from the annulus radial law.
inline TerminalField sample_ppp(const AnnulusRegion& region, double lambda,
                                RandomSource& rng) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("sample_ppp: lambda must be >= 0");
  const std::uint64_t n = rng.poisson(lambda * region.area());
  TerminalField field;
  field.distances.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    field.distances.push_back(region.radius_from_uniform(rng.uniform01()));
  }
  return field;
}

// Partitions a field by a per-terminal predicate keep(distance, rng).
// Independent coin predicates realize Poisson thinning.
template <class KeepFn>
std::pair<TerminalField, TerminalField> thin(const TerminalField& field,
                                             KeepFn&& keep, RandomSource& rng) {
  std::pair<TerminalField, TerminalField> out;
  for (double d : field.distances) {
    if (keep(d, rng)) {
      out.first.distances.push_back(d);
    } else {
      out.second.distances.push_back(d);
    }
  }
  return out;
}

}  // namespace obf

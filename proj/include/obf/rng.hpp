#pragma once

// Deterministic random source with per-stream seed derivation.
//
// Monte Carlo runs partition trials across workers, so every trial seeds its
// own generator from (seed, trial index) through a splitmix64 scramble. The
// draw sequence of a trial then never depends on which worker executed it or
// on how many workers exist. All samplers are written out by hand rather than
// taken from <random> distributions because the standard leaves distribution
// algorithms implementation-defined, and the CSV output promises bit-identical
// results for a fixed seed.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace obf {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

// Mixes a master seed with a stream index (trial number or sweep row) into a
// well-separated generator seed.
inline std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t h = detail::splitmix64(seed);
  h ^= detail::splitmix64(index + 0x632be59bd9b4e019ULL);
  return detail::splitmix64(h);
}

class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : gen_(seed) {}

  // Uniform on (0,1): 53-bit mantissa offset by half an ulp. Never returns
  // 0 or 1, so logs of it are always finite.
  double uniform01() {
    const std::uint64_t x = gen_();
    return (static_cast<double>(x >> 11) + 0.5) * 0x1p-53;
  }

  double exponential() { return -std::log(uniform01()); }

  // floor(u*n) carries a selection bias of at most n*2^-53, far below
  // anything the estimators here can resolve.
  std::size_t uniform_index(std::size_t n) {
    const auto k = static_cast<std::size_t>(uniform01() * static_cast<double>(n));
    return k < n ? k : n - 1;
  }

  // Marsaglia polar method: two standard normals per accepted point.
  void normal_pair(double& a, double& b) {
    double u, v, s;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    a = u * f;
    b = v * f;
  }

  // Circularly symmetric complex Gaussian with unit total variance; real and
  // imaginary parts are N(0, 1/2).
  std::complex<double> cn01() {
    double a, b;
    normal_pair(a, b);
    constexpr double root_half = 0.70710678118654752440;
    return {a * root_half, b * root_half};
  }

  // Poisson by inversion (sequential search on the pmf recurrence). Exact in
  // distribution for mean <= 600; larger means are split into chunks, which
  // is exact by additivity of independent Poisson counts.
  std::uint64_t poisson(double mean) {
    std::uint64_t total = 0;
    while (mean > 600.0) {
      total += poisson_small(300.0);
      mean -= 300.0;
    }
    return total + poisson_small(mean);
  }

  std::uint64_t operator()() { return gen_(); }

 private:
  std::uint64_t poisson_small(double mean) {
    if (mean <= 0.0) return 0;
    const double u = uniform01();
    double p = std::exp(-mean);
    double cum = p;
    std::uint64_t k = 0;
    // The cap is unreachable in practice (tail mass below 1e-250); it only
    // guards against a stuck loop if cum saturates under u in float.
    const auto cap = static_cast<std::uint64_t>(mean + 60.0 * std::sqrt(mean) + 30.0);
    while (u > cum && k < cap) {
      ++k;
      p *= mean / static_cast<double>(k);
      cum += p;
    }
    return k;
  }

  std::mt19937_64 gen_;
};

inline RandomSource substream(std::uint64_t seed, std::uint64_t index) {
  return RandomSource(derive_stream_seed(seed, index));
}

}  // namespace obf

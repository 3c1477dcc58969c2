#pragma once

// Flat key-value configuration. Lines look like
//
//   key = value [value ...]    # trailing comment
//
// Multi-value keys (pt_dbm, ph_dbm, modes) accept whitespace or commas
// between entries. Unknown keys and duplicate keys are errors, so typos
// cannot silently fall back to defaults.
//
// Defaults reproduce the reference operating point used throughout the
// tests: a 2-beam, 2-antenna downlink over an annulus from 2 m to 10 m,
// path-loss exponent 3, terminal density 0.1 per square meter, a 10 dB SINR
// threshold, and a 4-element rectenna with 0.9 conversion efficiency.
// Only pt_dbm has no default, since it is the sweep axis.

#include <cctype>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "obf/energy.hpp"
#include "obf/geometry.hpp"
#include "obf/modes.hpp"
#include "obf/units.hpp"

namespace obf {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SystemParams {
  int m = 2;
  int n = 2;
  int l = 4;
  double alpha = 3.0;
  double rho_m = 10.0;
  double xi_m = 2.0;
  double lambda_per_m2 = 0.1;
  double delta_db = 10.0;
  std::vector<double> pt_dbm;  // required; the sweep axis
  std::vector<double> ph_dbm;  // empty locks the beacon power to pt_dbm
  double sigma2_dbm = -10.0;
  double i_s_amps = 1e-3;
  double mu = 2.0;
  double v_t_volts = 0.02885;
  double zeta_dc = 0.9;
  double zeta_rf = 0.9;
  double e_dc = 1.0;
  double e_rf = 1.0;
  long long trials = 100000;
  std::uint64_t seed = 1;
  std::vector<SimMode> modes = {SimMode{}};
  SinrSampler sampler = SinrSampler::direct;

  double delta_linear() const { return db_to_linear(delta_db); }
  double sigma2_watts() const { return dbm_to_watts(sigma2_dbm); }
  AnnulusRegion region() const { return AnnulusRegion(xi_m, rho_m); }

  HarvestParams harvest_params(double ph_watts) const {
    return HarvestParams{i_s_amps, mu,   v_t_volts, zeta_dc, zeta_rf,
                         e_dc,     e_rf, ph_watts,  l};
  }

  // The (pt, ph) pairs the sweep visits, both in dBm. A missing ph_dbm
  // locks the beacon to the transmitter; a single ph_dbm broadcasts; equal
  // lengths zip.
  std::vector<std::pair<double, double>> sweep_points() const {
    if (pt_dbm.empty()) throw ConfigError("pt_dbm: at least one value is required");
    std::vector<std::pair<double, double>> pts;
    pts.reserve(pt_dbm.size());
    if (ph_dbm.empty()) {
      for (double pt : pt_dbm) pts.emplace_back(pt, pt);
    } else if (ph_dbm.size() == 1) {
      for (double pt : pt_dbm) pts.emplace_back(pt, ph_dbm.front());
    } else if (ph_dbm.size() == pt_dbm.size()) {
      for (std::size_t i = 0; i < pt_dbm.size(); ++i) {
        pts.emplace_back(pt_dbm[i], ph_dbm[i]);
      }
    } else {
      throw ConfigError(
          "ph_dbm: length must be 1 or match pt_dbm (" +
          std::to_string(ph_dbm.size()) + " vs " + std::to_string(pt_dbm.size()) + ")");
    }
    return pts;
  }

  // Copy of the parameters narrowed to the i-th sweep point.
  SystemParams at_point(std::size_t i) const {
    const auto pts = sweep_points();
    if (i >= pts.size()) throw std::out_of_range("at_point: sweep index out of range");
    SystemParams p = *this;
    p.pt_dbm = {pts[i].first};
    p.ph_dbm = {pts[i].second};
    return p;
  }
};

namespace detail {

inline void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

inline double parse_real(const std::string& tok, const std::string& key) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    throw ConfigError(key + ": not a number: '" + tok + "'");
  }
  require(used == tok.size(), key + ": trailing junk in '" + tok + "'");
  return v;
}

inline long long parse_int(const std::string& tok, const std::string& key) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(tok, &used);
  } catch (const std::exception&) {
    throw ConfigError(key + ": not an integer: '" + tok + "'");
  }
  require(used == tok.size(), key + ": trailing junk in '" + tok + "'");
  return v;
}

inline std::uint64_t parse_seed(const std::string& tok, const std::string& key) {
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(tok, &used);
  } catch (const std::exception&) {
    throw ConfigError(key + ": not an unsigned integer: '" + tok + "'");
  }
  require(used == tok.size(), key + ": trailing junk in '" + tok + "'");
  return v;
}

inline std::vector<std::string> split_values(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    if (std::isspace(static_cast<unsigned char>(ch)) || ch == ',') {
      if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

inline SimMode parse_mode(const std::string& tok) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : tok) {
    if (ch == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  parts.push_back(cur);
  SimMode mode;
  try {
    mode.scheme = scheme_from_token(parts[0]);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("modes: ") + e.what());
  }
  if (mode.scheme != Scheme::one_bit) {
    require(parts.size() == 1,
            "modes: scheme '" + parts[0] + "' takes no combiner or coupling");
    mode.combiner = Combiner::dc;
    mode.coupling = Coupling::decoupled;
    return mode;
  }
  require(parts.size() <= 3, "modes: too many ':' parts in '" + tok + "'");
  try {
    if (parts.size() >= 2) mode.combiner = combiner_from_token(parts[1]);
    if (parts.size() >= 3) mode.coupling = coupling_from_token(parts[2]);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("modes: ") + e.what());
  }
  return mode;
}

}  // namespace detail

inline void validate_params(const SystemParams& p) {
  using detail::require;
  require(p.alpha > 2.0, "alpha: must exceed 2, got " + std::to_string(p.alpha));
  require(p.xi_m >= 0.0, "xi_m: must be nonnegative");
  require(p.xi_m < p.rho_m, "xi_m: must be smaller than rho_m");
  require(p.m >= 1, "m: must be at least 1");
  require(p.n >= 1, "n: must be at least 1");
  require(p.l >= 1, "l: must be at least 1");
  require(p.trials >= 1, "trials: must be at least 1");
  require(p.lambda_per_m2 >= 0.0, "lambda_per_m2: must be nonnegative");
  require(p.i_s_amps > 0.0, "i_s_amps: must be positive");
  require(p.mu > 0.0, "mu: must be positive");
  require(p.v_t_volts > 0.0, "v_t_volts: must be positive");
  require(p.zeta_dc > 0.0 && p.zeta_dc <= 1.0, "zeta_dc: must be in (0, 1]");
  require(p.zeta_rf > 0.0 && p.zeta_rf <= 1.0, "zeta_rf: must be in (0, 1]");
  require(p.e_dc > 0.0 && p.e_dc <= 1.0, "e_dc: must be in (0, 1]");
  require(p.e_rf > 0.0 && p.e_rf <= 1.0, "e_rf: must be in (0, 1]");
  require(!p.pt_dbm.empty(), "pt_dbm: required key is missing");
  require(!p.modes.empty(), "modes: at least one mode is required");
  p.sweep_points();  // validates the pt/ph length contract
}

inline SystemParams parse_config(const std::string& text) {
  SystemParams p;
  std::vector<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    detail::require(eq != std::string::npos,
                    "line " + std::to_string(line_no) + ": expected 'key = value'");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    detail::require(!key.empty(), "line " + std::to_string(line_no) + ": empty key");
    detail::require(!value.empty(), key + ": empty value");
    for (const auto& s : seen) {
      detail::require(s != key, key + ": duplicate key");
    }
    seen.push_back(key);

    const auto vals = detail::split_values(value);
    auto single = [&]() -> const std::string& {
      detail::require(vals.size() == 1, key + ": expected a single value");
      return vals.front();
    };
    if (key == "m") {
      p.m = static_cast<int>(detail::parse_int(single(), key));
    } else if (key == "n") {
      p.n = static_cast<int>(detail::parse_int(single(), key));
    } else if (key == "l") {
      p.l = static_cast<int>(detail::parse_int(single(), key));
    } else if (key == "alpha") {
      p.alpha = detail::parse_real(single(), key);
    } else if (key == "rho_m") {
      p.rho_m = detail::parse_real(single(), key);
    } else if (key == "xi_m") {
      p.xi_m = detail::parse_real(single(), key);
    } else if (key == "lambda_per_m2") {
      p.lambda_per_m2 = detail::parse_real(single(), key);
    } else if (key == "delta_db") {
      p.delta_db = detail::parse_real(single(), key);
    } else if (key == "pt_dbm") {
      p.pt_dbm.clear();
      for (const auto& t : vals) p.pt_dbm.push_back(detail::parse_real(t, key));
    } else if (key == "ph_dbm") {
      p.ph_dbm.clear();
      for (const auto& t : vals) p.ph_dbm.push_back(detail::parse_real(t, key));
    } else if (key == "sigma2_dbm") {
      p.sigma2_dbm = detail::parse_real(single(), key);
    } else if (key == "i_s_amps") {
      p.i_s_amps = detail::parse_real(single(), key);
    } else if (key == "mu") {
      p.mu = detail::parse_real(single(), key);
    } else if (key == "v_t_volts") {
      p.v_t_volts = detail::parse_real(single(), key);
    } else if (key == "zeta_dc") {
      p.zeta_dc = detail::parse_real(single(), key);
    } else if (key == "zeta_rf") {
      p.zeta_rf = detail::parse_real(single(), key);
    } else if (key == "e_dc") {
      p.e_dc = detail::parse_real(single(), key);
    } else if (key == "e_rf") {
      p.e_rf = detail::parse_real(single(), key);
    } else if (key == "trials") {
      p.trials = detail::parse_int(single(), key);
    } else if (key == "seed") {
      p.seed = detail::parse_seed(single(), key);
    } else if (key == "modes") {
      p.modes.clear();
      for (const auto& t : vals) p.modes.push_back(detail::parse_mode(t));
    } else if (key == "sinr_sampler") {
      try {
        p.sampler = sampler_from_token(single());
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("sinr_sampler: ") + e.what());
      }
    } else {
      throw ConfigError("unknown key: " + key);
    }
  }
  validate_params(p);
  return p;
}

}  // namespace obf

#pragma once

// Mode vocabulary shared by the config parser, the simulator, and the CSV
// writer. Kept in one place so the token spellings cannot drift apart.

#include <stdexcept>
#include <string>
#include <string_view>

#include "obf/energy.hpp"

namespace obf {

// How beams learn about candidate terminals.
//   one_bit: terminals that can afford the uplink send a single
//            above-threshold flag; the beam falls back to a silent terminal
//            when nobody flags.
//   random_assignment: the beam picks a uniform member with no feedback.
//   full_feedback: every terminal reports its SINR regardless of harvested
//                  power; a genie benchmark.
enum class Scheme { one_bit, random_assignment, full_feedback };

// Whether one physical channel draw serves both the activity test and the
// data SINR (coupled), or the data SINR is redrawn from its marginal
// (decoupled, the variant the closed forms describe).
enum class Coupling { coupled, decoupled };

// How per-trial SINRs are produced: constructive draws beams and channel
// vectors and projects, direct samples the equivalent projection powers.
enum class SinrSampler { constructive, direct };

struct SimMode {
  Scheme scheme = Scheme::one_bit;
  Combiner combiner = Combiner::dc;
  Coupling coupling = Coupling::decoupled;
};

inline std::string scheme_token(Scheme s) {
  switch (s) {
    case Scheme::one_bit: return "one_bit";
    case Scheme::random_assignment: return "random_assignment";
    case Scheme::full_feedback: return "full_feedback";
  }
  throw std::logic_error("scheme_token: unknown scheme");
}

inline Scheme scheme_from_token(std::string_view t) {
  if (t == "one_bit") return Scheme::one_bit;
  if (t == "random_assignment") return Scheme::random_assignment;
  if (t == "full_feedback") return Scheme::full_feedback;
  throw std::invalid_argument("unknown scheme token: " + std::string(t));
}

inline std::string combiner_token(Combiner c) {
  switch (c) {
    case Combiner::dc: return "dc";
    case Combiner::rf: return "rf";
  }
  throw std::logic_error("combiner_token: unknown combiner");
}

inline Combiner combiner_from_token(std::string_view t) {
  if (t == "dc") return Combiner::dc;
  if (t == "rf") return Combiner::rf;
  throw std::invalid_argument("unknown combiner token: " + std::string(t));
}

inline std::string coupling_token(Coupling c) {
  switch (c) {
    case Coupling::coupled: return "coupled";
    case Coupling::decoupled: return "decoupled";
  }
  throw std::logic_error("coupling_token: unknown coupling");
}

inline Coupling coupling_from_token(std::string_view t) {
  if (t == "coupled") return Coupling::coupled;
  if (t == "decoupled") return Coupling::decoupled;
  throw std::invalid_argument("unknown coupling token: " + std::string(t));
}

inline std::string sampler_token(SinrSampler s) {
  switch (s) {
    case SinrSampler::constructive: return "constructive";
    case SinrSampler::direct: return "direct";
  }
  throw std::logic_error("sampler_token: unknown sampler");
}

inline SinrSampler sampler_from_token(std::string_view t) {
  if (t == "constructive") return SinrSampler::constructive;
  if (t == "direct") return SinrSampler::direct;
  throw std::invalid_argument("unknown sinr_sampler token: " + std::string(t));
}

}  // namespace obf

#pragma once

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "vortex/core.hpp"
#include "vortex/errors.hpp"

namespace testutil {

#define CHECK_ERROR_CODE(expr, ecode)                     \
  do {                                                    \
    bool caught_ = false;                                 \
    try {                                                 \
      (void)(expr);                                       \
    } catch (const vortex::Error& e_) {                   \
      caught_ = true;                                     \
      CHECK_MESSAGE(e_.code() == (ecode), e_.what());     \
    }                                                     \
    CHECK_MESSAGE(caught_, "expected error " #ecode);     \
  } while (0)

inline vortex::VortexState random_state(std::mt19937_64& rng, std::vector<double> g, double spread = 2.0) {
  std::uniform_real_distribution<double> u(-spread, spread);
  vortex::VortexState s;
  s.circulations = std::move(g);
  for (;;) {
    s.positions.clear();
    for (std::size_t i = 0; i < s.circulations.size(); ++i) s.positions.push_back({u(rng), u(rng)});
    if (vortex::core::min_pair_distance(s) > 0.2) return s;
  }
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace testutil

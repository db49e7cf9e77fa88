#pragma once

#include <random>

#include "switchquad/presets.hpp"
#include "switchquad/simulation.hpp"

namespace fixtures {

using namespace switchquad;

inline dynamics::SubsystemParams sigma1() { return presets::paper_s5().subsystems[0]; }
inline dynamics::SubsystemParams sigma3() { return presets::paper_s5().subsystems[2]; }

// The bundled scenario cut to `horizon` seconds (switches at or after the end are dropped).
inline sim::Scenario short_s5(double horizon) {
  sim::Scenario sc = presets::paper_s5();
  auto& ev = sc.schedule.events;
  while (ev.size() > 1 && ev.back().time >= horizon) ev.pop_back();
  sc.horizon = horizon;
  sc.schedule.horizon_end = horizon;
  return sc;
}

// A random state inside the valid attitude region.
inline dynamics::PlantState random_state(std::mt19937_64& rng, double angle_limit = 1.2) {
  std::uniform_real_distribution<double> ang(-angle_limit, angle_limit);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  dynamics::PlantState s;
  s.q << u(rng), ang(rng), ang(rng), u(rng);
  s.q_dot << u(rng), u(rng), u(rng), u(rng);
  s.q_u << u(rng), u(rng);
  s.q_u_dot << u(rng), u(rng);
  return s;
}

}  // namespace fixtures

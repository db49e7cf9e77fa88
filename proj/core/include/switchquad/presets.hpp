#pragma once

#include <string_view>
#include <vector>

#include "switchquad/simulation.hpp"

namespace switchquad::presets {

/// Three-payload vertical-operation scenario: subsystem parameters, gains, initial gains,
/// trajectory z_d = 2 + sin(0.1 t), sinusoidal thrust disturbance and pulsed yaw disturbance,
/// and a certified burst-then-slow switching signal over 100 s.
sim::Scenario paper_s5();

/// Names accepted by by_name().
std::vector<std::string_view> names();

/// Throws std::invalid_argument for unknown names.
sim::Scenario by_name(std::string_view name);

}  // namespace switchquad::presets

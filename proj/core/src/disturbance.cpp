#include "switchquad/disturbance.hpp"

#include <cmath>
#include <string>
#include <type_traits>

#include "switchquad/error.hpp"

namespace switchquad {
namespace {

double pulse_value(const PulseTrain& p, double t) {
  if (t < p.start) return 0.0;
  double offset = t - p.start;
  if (p.count != 1 && p.period > 0.0) {
    const double k = std::floor(offset / p.period);
    if (p.count > 0 && k >= p.count) return 0.0;
    offset -= k * p.period;
  }
  return offset < p.width ? p.amplitude : 0.0;
}

template <typename Visitor>
Vec4 accumulate(const DisturbanceSpec& spec, Visitor&& visit) {
  Vec4 d = Vec4::Zero();
  for (int ch = 0; ch < 4; ++ch) {
    for (const auto& term : spec.channels[ch]) d[ch] += std::visit(visit, term);
  }
  return d;
}

}  // namespace

Vec4 DisturbanceSpec::evaluate(double t) const {
  return evaluate_smooth(t) + evaluate_pulses(t);
}

Vec4 DisturbanceSpec::evaluate_smooth(double t) const {
  return accumulate(*this, [t](const auto& term) -> double {
    using T = std::decay_t<decltype(term)>;
    if constexpr (std::is_same_v<T, Sinusoid>) {
      return term.amplitude * std::sin(term.frequency * t + term.phase);
    } else {
      return 0.0;
    }
  });
}

Vec4 DisturbanceSpec::evaluate_pulses(double t) const {
  return accumulate(*this, [t](const auto& term) -> double {
    using T = std::decay_t<decltype(term)>;
    if constexpr (std::is_same_v<T, PulseTrain>) {
      return pulse_value(term, t);
    } else {
      return 0.0;
    }
  });
}

Vec4 DisturbanceSpec::channel_bounds() const {
  return accumulate(*this, [](const auto& term) { return std::abs(term.amplitude); });
}

double DisturbanceSpec::norm_bound() const { return channel_bounds().norm(); }

bool DisturbanceSpec::empty() const {
  for (const auto& ch : channels) {
    if (!ch.empty()) return false;
  }
  return true;
}

void validate(const DisturbanceSpec& spec) {
  for (int ch = 0; ch < 4; ++ch) {
    for (std::size_t i = 0; i < spec.channels[ch].size(); ++i) {
      const std::string path =
          "disturbance[" + std::to_string(ch) + "][" + std::to_string(i) + "]";
      std::visit(
          [&](const auto& term) {
            using T = std::decay_t<decltype(term)>;
            if (!std::isfinite(term.amplitude)) throw ConfigError(path, "amplitude must be finite");
            if constexpr (std::is_same_v<T, Sinusoid>) {
              if (!std::isfinite(term.frequency) || !std::isfinite(term.phase))
                throw ConfigError(path, "sinusoid parameters must be finite");
            } else {
              if (!(term.width > 0.0)) throw ConfigError(path, "pulse width must be positive");
              if (!(term.start >= 0.0)) throw ConfigError(path, "pulse start must be >= 0");
              if (term.count < 0) throw ConfigError(path, "pulse count must be >= 0");
              if (term.count != 1 && !(term.period >= term.width))
                throw ConfigError(path, "pulse period must be >= width for repeated pulses");
            }
          },
          spec.channels[ch][i]);
    }
  }
}

}  // namespace switchquad

#include "dgh/presets.hpp"

#include <cmath>

#include "dgh/fourier.hpp"

namespace dgh {

PresetKind preset_kind(std::string_view name) {
  if (name == "gaussian_bump") return PresetKind::gaussian_bump;
  if (name == "gaussian_derivative") return PresetKind::gaussian_derivative;
  if (name == "peakon_shifted") return PresetKind::peakon_shifted;
  if (name == "sech_bump") return PresetKind::sech_bump;
  if (name == "from_samples") return PresetKind::from_samples;
  throw InvalidArgument("unknown initial-condition preset '" + std::string(name) + "'");
}

std::string_view preset_name(PresetKind kind) noexcept {
  switch (kind) {
    case PresetKind::gaussian_bump: return "gaussian_bump";
    case PresetKind::gaussian_derivative: return "gaussian_derivative";
    case PresetKind::peakon_shifted: return "peakon_shifted";
    case PresetKind::sech_bump: return "sech_bump";
    case PresetKind::from_samples: return "from_samples";
  }
  return "unknown";
}

PresetSpec PresetSpec::named(std::string_view name, double amplitude) {
  PresetSpec spec;
  spec.kind = preset_kind(name);
  spec.amplitude = amplitude;
  return spec;
}

double preset_value(const PresetSpec& spec, double x, const Parameters& params) {
  const double a = spec.amplitude;
  const double w = spec.width;
  const double s = x - spec.center;
  switch (spec.kind) {
    case PresetKind::gaussian_bump: return a * std::exp(-s * s / (2.0 * w * w));
    case PresetKind::gaussian_derivative: return -a * s * std::exp(-s * s / (2.0 * w * w));
    case PresetKind::peakon_shifted:
      return a * std::exp(-std::abs(s) / params.alpha()) - spec.offset;
    case PresetKind::sech_bump: return a / std::cosh(s / w);
    case PresetKind::from_samples: break;
  }
  throw InvalidArgument("from_samples has no closed form");
}

double preset_slope(const PresetSpec& spec, double x, const Parameters& params) {
  const double a = spec.amplitude;
  const double w = spec.width;
  const double s = x - spec.center;
  switch (spec.kind) {
    case PresetKind::gaussian_bump: return -a * s / (w * w) * std::exp(-s * s / (2.0 * w * w));
    case PresetKind::gaussian_derivative:
      return -a * (1.0 - s * s / (w * w)) * std::exp(-s * s / (2.0 * w * w));
    case PresetKind::peakon_shifted: {
      const double sign = s >= 0.0 ? 1.0 : -1.0;
      return -sign * a / params.alpha() * std::exp(-std::abs(s) / params.alpha());
    }
    case PresetKind::sech_bump: {
      const double z = s / w;
      return -a / w * std::tanh(z) / std::cosh(z);
    }
    case PresetKind::from_samples: break;
  }
  throw InvalidArgument("from_samples has no closed form");
}

Field ic_preset(const PresetSpec& spec, const Grid& grid, const Parameters& params) {
  if (spec.kind == PresetKind::from_samples) {
    if (spec.samples.size() != grid.size()) {
      throw InvalidArgument("from_samples: got " + std::to_string(spec.samples.size()) +
                            " samples for a grid of " + std::to_string(grid.size()));
    }
    return Field(grid, spec.samples);
  }
  std::vector<double> v(grid.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = preset_value(spec, grid.node(j), params);
  return Field(grid, std::move(v));
}

Field ic_preset_derivative(const PresetSpec& spec, const Grid& grid, const Parameters& params) {
  if (spec.kind == PresetKind::from_samples) return derivative(ic_preset(spec, grid, params));
  std::vector<double> v(grid.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = preset_slope(spec, grid.node(j), params);
  return Field(grid, std::move(v));
}

}  // namespace dgh

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dgh/grid.hpp"
#include "dgh/parameters.hpp"

namespace dgh {

enum class PresetKind { gaussian_bump, gaussian_derivative, peakon_shifted, sech_bump, from_samples };

PresetKind preset_kind(std::string_view name);
std::string_view preset_name(PresetKind kind) noexcept;

/// Initial-condition recipe.
///
///   gaussian_bump        A exp(-(x-c)^2 / (2 w^2))
///   gaussian_derivative  -A (x-c) exp(-(x-c)^2 / (2 w^2))
///   peakon_shifted       A exp(-|x-c| / alpha) - offset
///   sech_bump            A sech((x-c) / w)
///   from_samples         the given samples, verbatim
struct PresetSpec {
  PresetKind kind = PresetKind::gaussian_bump;
  double amplitude = 1.0;
  double width = 1.0;
  double center = 0.0;
  double offset = 0.0;
  std::vector<double> samples;

  static PresetSpec named(std::string_view name, double amplitude = 1.0);
};

/// Samples the preset on the grid.
Field ic_preset(const PresetSpec& spec, const Grid& grid, const Parameters& params);

/// Exact x-derivative of the preset on the grid (spectral for from_samples).
/// The peakon kink uses the right derivative; only its square enters the
/// inequality tests, which is continuous there.
Field ic_preset_derivative(const PresetSpec& spec, const Grid& grid, const Parameters& params);

/// Pointwise closed forms; not defined for from_samples.
double preset_value(const PresetSpec& spec, double x, const Parameters& params);
double preset_slope(const PresetSpec& spec, double x, const Parameters& params);

}  // namespace dgh

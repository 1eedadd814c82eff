#pragma once

#include <string>
#include <vector>

#include "omnimod/simulator.hpp"

namespace omnimod
{

/// XY panel (reference dashed, actual solid; the only two <path> elements) and
/// one error-versus-time subplot per axis drawn with <polyline>.
std::string render_trace_svg(const ScenarioTrace& trace);

struct EnergySeries
{
  std::string name;
  std::vector<double> t;
  std::vector<double> cumulative;
  int rank{0};  ///< 1 is the lowest energy
};

/// Cumulative energy against time, one polyline per series, rank 1 annotated.
std::string render_energy_svg(const std::vector<EnergySeries>& series);

}  // namespace omnimod

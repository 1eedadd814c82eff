#pragma once

#include <cstdint>

#include "omnimod/kinematics.hpp"
#include "omnimod/types.hpp"

namespace omnimod
{

struct OptimizerOptions
{
  int n_starts{16};            ///< random starts, in addition to the tangential start
  int max_iterations{60};      ///< coordinate sweeps per start
  double objective_tolerance{1e-10};  ///< relative improvement that ends a start
  double angle_tolerance{1e-7};       ///< golden-section bracket width, rad
  std::uint64_t rng_seed{1};

  void validate() const;

  friend bool operator==(const OptimizerOptions&, const OptimizerOptions&) = default;
};

struct OptimizationResult
{
  HeadingConfiguration headings;
  double objective_value{0.0};
  MapperMetrics metrics;
  int starts_converged{0};
};

/// cond(M) + sigma_max(M)^2, or +inf when M is rank deficient.
double objective(const FormationConfiguration& formation,
                 const HeadingConfiguration& headings,
                 double wheel_radius);

/// Same objective from precomputed metrics.
double objective_from_metrics(const MapperMetrics& metrics);

/// (sigma_max(M) |V|)^2, an upper bound on the wheel-speed energy |M V|^2.
double energy_upper_bound(const VelocityMapper& mapper, const StructureTwist& twist);

/// Each wheel perpendicular to the module's radius from the centroid.
HeadingConfiguration tangential_headings(const FormationConfiguration& formation);

/// Multi-start coordinate-wise search (coarse ring sampling followed by
/// golden-section refinement per angle). The tangential configuration is
/// always start 0; random starts follow from a stream seeded by rng_seed, so
/// a run with more starts evaluates a superset of the starts of a run with fewer.
/// Throws ErrorKind::optimizer if no start reaches a full-rank mapper.
OptimizationResult optimize_headings(const FormationConfiguration& formation,
                                     double wheel_radius,
                                     const OptimizerOptions& options = {});

/// Exhaustive search on a uniform angle grid. Used as an independent check on
/// optimize_headings: it ranks candidates by the eigenvalues of M^T M
/// (closed-form 3x3 symmetric eigensolver) rather than by an SVD of M.
/// Throws ErrorKind::cost_bound for n > 4.
OptimizationResult grid_search_headings(const FormationConfiguration& formation,
                                        double wheel_radius,
                                        double resolution);

}  // namespace omnimod

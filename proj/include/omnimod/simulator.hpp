#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "omnimod/controllers.hpp"
#include "omnimod/docking.hpp"
#include "omnimod/heading_optimizer.hpp"
#include "omnimod/kinematics.hpp"
#include "omnimod/trajectory.hpp"
#include "omnimod/types.hpp"

namespace omnimod
{

enum class ScenarioKind
{
  single_track,     ///< one module tracks the reference with the module controller
  structure_track,  ///< a pre-docked structure reorients its wheels, then tracks
  transport,        ///< navigate, dock, reorient, then transport the caged object
  payload,          ///< structure_track with a payload drag on the realised twist
};

const char* to_string(ScenarioKind kind);
ScenarioKind scenario_kind_from_string(const std::string& name);

/// Trace stage codes. The last two together form the reorient-and-drive stage.
enum class Stage : int
{
  navigate = 1,
  dock = 2,
  reorient = 3,
  transport = 4,
};

struct PayloadSpec
{
  double mass{0.0};                  // kg
  double friction_coefficient{1.0};  // scales the drag constant
  double drag_per_kg{0.3};           // 1/kg

  /// Multiplier applied to the realised twist: 1 / (1 + drag_per_kg * mu * mass).
  double drag_factor() const;

  friend bool operator==(const PayloadSpec&, const PayloadSpec&) = default;
};

/// Approach planning before docking: straight lines, departures staggered by module index.
struct NavigationParams
{
  double speed{0.04};         ///< m/s, stage-1 cruise speed
  double dock_speed{0.02};    ///< m/s, stage-2 approach speed
  double standoff{0.05};      ///< m, stage-1 goal lies this far outward from the docking pose
  double arrive_tolerance{0.005};  ///< m, stage-1 goal capture radius
  double stagger{1.0};        ///< s between departures
  double start_radius{0.5};   ///< m, radius of generated start positions about the structure origin
  double stage_timeout{180.0};  ///< s allowed for each of stages 1 and 2

  friend bool operator==(const NavigationParams&, const NavigationParams&) = default;
};

struct ScenarioConfig
{
  std::string name{"scenario"};
  ScenarioKind kind{ScenarioKind::single_track};
  ModuleSpec module;
  double magnet_tensile_force{1.29};  // N
  double align_range{0.010};          // m
  double magnet_inset{0.001};         // m
  FormationConfiguration formation;   ///< structure frame; ignored for single_track
  std::optional<HeadingConfiguration> headings;  ///< explicit, else optimised
  OptimizerOptions optimizer;
  TrajectoryParams trajectory;
  ModuleGains module_gains;
  StructureGains structure_gains;
  double dt{0.01};              // s
  double duration{60.0};        // s of tracking / transport
  double command_delay{0.02};   // s, integer multiple of dt
  double settle_time{20.0};     // s into tracking after which errors count as steady state
  std::optional<PayloadSpec> payload;
  std::uint64_t rng_seed{1};
  Pose2D initial_offset;        ///< start pose minus reference start pose (tracking kinds)
  std::vector<Pose2D> module_starts;  ///< transport start poses; generated when empty
  NavigationParams navigation;

  /// Throws ErrorKind::configuration on invalid timing or parameters.
  void validate() const;
  DockingSpec docking_spec() const;
  int delay_steps() const;
  std::size_t step_count() const;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

struct TraceRow
{
  double t{0.0};
  Stage stage{Stage::transport};
  Pose2D pose;       ///< structure (or single module) pose; module centroid before docking
  Pose2D reference;
  TrackingError error;  ///< world frame, reference minus pose
  std::vector<Pose2D> modules;  ///< module positions and world wheel headings
  std::vector<double> omegas;     ///< wheel speeds applied over [t, t + dt)
  std::vector<double> commanded;  ///< wheel speeds computed at t, before the delay line
  double power{0.0};              ///< sum of squared applied wheel speeds
};

struct StageTimings
{
  double navigate{0.0};
  double dock{0.0};
  double reorient{0.0};
  double transport{0.0};
};

struct ScenarioTrace
{
  std::string name;
  ScenarioKind kind{ScenarioKind::single_track};
  std::size_t n_modules{0};
  double dt{0.0};
  double omega_max{0.0};
  TrajectoryParams trajectory;
  HeadingConfiguration headings;  ///< structure-frame headings used (empty for single_track)
  std::optional<MapperMetrics> mapper;
  std::vector<TraceRow> rows;
  StageTimings timings;
  double max_tensile_utilization{0.0};  ///< peak module inertial force / magnet tensile force
  double max_shear_utilization{0.0};    ///< peak module inertial torque / shear torque
};

struct ModuleWheelCommand
{
  double omega_wheel{0.0};  ///< rad/s
  double theta_d{0.0};      ///< rad, world frame
};

/// One explicit-Euler step of a free module: position moves along the current
/// heading with the saturated wheel speed, then the heading slews toward theta_d
/// at no more than spec.max_steering_rate.
Pose2D step_module(const Pose2D& pose, const ModuleWheelCommand& cmd, const ModuleSpec& spec,
                   double dt);

/// Integrates a structure-frame twist over dt (explicit Euler, heading wrapped).
Pose2D advance_structure(const Pose2D& pose, const StructureTwist& body_twist, double dt);

/// Realised motion of a rigid structure driven with `omegas`: least-squares
/// twist through the mapper, rotated to the world frame and integrated.
/// Wheel speeds are saturated to omega_max first.
/// Throws ErrorKind::degenerate_mapper when rank(M) < 3.
Pose2D step_structure(const Pose2D& pose, const WheelSpeeds& omegas, const VelocityMapper& mapper,
                      double dt, double omega_max = std::numeric_limits<double>::infinity());

/// Velocity-opposing kinematic drag from a caged payload.
StructureTwist payload_drag(const StructureTwist& twist, const PayloadSpec& payload);

/// Runs the staged pipeline for the configured scenario kind. Deterministic for
/// a fixed config. Failures are reported as ScenarioError with the stage.
ScenarioTrace run_scenario(const ScenarioConfig& config);

/// Sum over transport-stage rows of power * dt. Throws ErrorKind::empty_trace.
double energy_of_trace(const ScenarioTrace& trace);

struct ScenarioMetrics
{
  double energy{0.0};
  double final_position_error{0.0};
  double final_heading_error{0.0};
  double rms_position_error{0.0};
  double steady_max_position_error{0.0};
  double steady_max_heading_error{0.0};
  double steady_max_radial_error{0.0};  ///< circle references only
  double max_wheel_speed{0.0};
  StageTimings timings;
  double max_tensile_utilization{0.0};
  double max_shear_utilization{0.0};
};

/// Error statistics over the transport stage; "steady" counts rows at least
/// settle_time after the transport stage starts.
ScenarioMetrics summarize(const ScenarioTrace& trace, double settle_time);

}  // namespace omnimod

#include "omnimod/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>

#include "omnimod/error.hpp"
#include "omnimod/frames.hpp"

namespace omnimod
{

const char* to_string(ScenarioKind kind)
{
  switch (kind)
  {
    case ScenarioKind::single_track: return "single_track";
    case ScenarioKind::structure_track: return "structure_track";
    case ScenarioKind::transport: return "transport";
    case ScenarioKind::payload: return "payload";
  }
  return "single_track";
}

ScenarioKind scenario_kind_from_string(const std::string& name)
{
  for (auto k : {ScenarioKind::single_track, ScenarioKind::structure_track, ScenarioKind::transport,
                 ScenarioKind::payload})
    if (name == to_string(k))
      return k;
  throw Error(ErrorKind::configuration, "unknown scenario kind '" + name + "'");
}

double PayloadSpec::drag_factor() const
{
  return 1.0 / (1.0 + drag_per_kg * friction_coefficient * mass);
}

void ScenarioConfig::validate() const
{
  module.validate();
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw Error(ErrorKind::configuration, "dt must be positive");
  if (!(duration > 0.0) || !std::isfinite(duration))
    throw Error(ErrorKind::empty_trace, "duration must be positive (the trace would be empty)");
  if (!(command_delay >= 0.0))
    throw Error(ErrorKind::configuration, "command_delay must be non-negative");
  const double ratio = command_delay / dt;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio))
    throw Error(ErrorKind::configuration, "command_delay must be an integer multiple of dt");
  if (!(settle_time >= 0.0))
    throw Error(ErrorKind::configuration, "settle_time must be non-negative");
  trajectory.validate();
  module_gains.validate();
  structure_gains.validate();
  optimizer.validate();
  docking_spec().validate();
  if (payload)
  {
    if (!(payload->mass >= 0.0) || !(payload->friction_coefficient >= 0.0) ||
        !(payload->drag_per_kg >= 0.0))
      throw Error(ErrorKind::configuration, "payload parameters must be non-negative");
  }
  if (kind == ScenarioKind::payload && !payload)
    throw Error(ErrorKind::configuration, "payload scenario needs a payload table");
  if (headings && headings->size() != formation.size())
    throw Error(ErrorKind::configuration, "explicit headings must match the formation size");
  if (!module_starts.empty() && module_starts.size() != formation.size())
    throw Error(ErrorKind::configuration, "module_starts must match the formation size");
  const auto& nav = navigation;
  if (!(nav.speed > 0.0) || !(nav.dock_speed > 0.0) || !(nav.standoff >= 0.0) ||
      !(nav.arrive_tolerance > 0.0) || !(nav.stagger >= 0.0) || !(nav.start_radius > 0.0) ||
      !(nav.stage_timeout > 0.0))
    throw Error(ErrorKind::configuration, "navigation parameters out of range");
}

DockingSpec ScenarioConfig::docking_spec() const
{
  DockingSpec spec;
  spec.n_faces = module.n_faces;
  spec.circumradius = module.contour_circumradius;
  spec.magnet_tensile_force = magnet_tensile_force;
  spec.align_range = align_range;
  spec.magnet_inset = magnet_inset;
  return spec;
}

int ScenarioConfig::delay_steps() const
{
  return static_cast<int>(std::lround(command_delay / dt));
}

std::size_t ScenarioConfig::step_count() const
{
  return static_cast<std::size_t>(std::llround(duration / dt));
}

Pose2D step_module(const Pose2D& pose, const ModuleWheelCommand& cmd, const ModuleSpec& spec,
                   double dt)
{
  const double omega = std::clamp(cmd.omega_wheel, -spec.max_wheel_speed, spec.max_wheel_speed);
  const double v = omega * spec.wheel_radius;
  const double x = pose.x + v * std::cos(pose.theta) * dt;
  const double y = pose.y + v * std::sin(pose.theta) * dt;

  const double max_turn = spec.max_steering_rate * dt;
  const double diff = wrap_to_pi(cmd.theta_d - pose.theta);
  const double theta = std::abs(diff) <= max_turn ? cmd.theta_d
                                                  : pose.theta + std::copysign(max_turn, diff);
  return {x, y, theta};
}

Pose2D advance_structure(const Pose2D& pose, const StructureTwist& body_twist, double dt)
{
  const StructureTwist w = world_from_body(body_twist, pose.theta);
  return {pose.x + w.vx * dt, pose.y + w.vy * dt, pose.theta + w.omega * dt};
}

Pose2D step_structure(const Pose2D& pose, const WheelSpeeds& omegas, const VelocityMapper& mapper,
                      double dt, double omega_max)
{
  WheelSpeeds applied = omegas;
  if (std::isfinite(omega_max))
    applied = saturate_wheels(omegas, omega_max);
  return advance_structure(pose, twist_from_wheels(mapper, applied), dt);
}

StructureTwist payload_drag(const StructureTwist& twist, const PayloadSpec& payload)
{
  const double f = payload.drag_factor();
  return {twist.vx * f, twist.vy * f, twist.omega * f};
}

namespace
{

/// Fixed-length FIFO: the value pushed at step j comes out at step j + delay.
template <typename T>
class DelayLine
{
public:
  DelayLine(int delay, T idle) : queue_(static_cast<std::size_t>(delay), std::move(idle)) {}

  T push(T value)
  {
    if (queue_.empty())
      return value;
    queue_.push_back(std::move(value));
    T out = std::move(queue_.front());
    queue_.pop_front();
    return out;
  }

private:
  std::deque<T> queue_;
};

/// What travels through a module's delay line. Tracking commands carry a
/// steering rate that is integrated from the heading at arrival; alignment
/// commands carry an absolute heading.
struct DelayedModuleCommand
{
  double omega_wheel{0.0};
  double theta_d{0.0};
  double theta_dot{0.0};
  bool rate{false};

  ModuleWheelCommand resolve(const Pose2D& pose, double dt) const
  {
    return {omega_wheel, rate ? wrap_to_2pi(pose.theta + theta_dot * dt) : theta_d};
  }
};

double uniform01(std::mt19937_64& rng)
{
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double squared_norm(const std::vector<double>& v)
{
  double s = 0.0;
  for (double x : v)
    s += x * x;
  return s;
}

/// Straight-line leg followed by a free module. Before driving the wheel is
/// steered in place to the leg direction.
struct Leg
{
  Vec2 start;
  Vec2 goal;
  double heading{0.0};
  double length{0.0};
  double depart_time{0.0};
  double drive_start{-1.0};  ///< < 0 while aligning
  bool done{false};
};

Leg make_leg(const Vec2& from, const Vec2& to, double depart_time)
{
  Leg leg;
  leg.start = from;
  leg.goal = to;
  leg.length = std::hypot(to.x - from.x, to.y - from.y);
  leg.heading = leg.length > 0.0 ? std::atan2(to.y - from.y, to.x - from.x) : 0.0;
  leg.depart_time = depart_time;
  return leg;
}

class Simulation
{
public:
  explicit Simulation(const ScenarioConfig& config) : cfg_(config)
  {
    trace_.name = cfg_.name;
    trace_.kind = cfg_.kind;
    trace_.dt = cfg_.dt;
    trace_.omega_max = cfg_.module.max_wheel_speed;
    trace_.trajectory = cfg_.trajectory;
  }

  ScenarioTrace run()
  {
    switch (cfg_.kind)
    {
      case ScenarioKind::single_track: run_single(); break;
      case ScenarioKind::structure_track:
      case ScenarioKind::payload:
      {
        prepare_structure();
        const ReferenceSample ref0 = reference_trajectory(cfg_.trajectory, 0.0);
        const Pose2D start{ref0.pose.x + cfg_.initial_offset.x, ref0.pose.y + cfg_.initial_offset.y,
                           ref0.pose.theta + cfg_.initial_offset.theta};
        // docked with every wheel along the structure x axis
        std::vector<Pose2D> modules;
        for (const auto& r : formation_.positions)
        {
          const Vec2 p = world_from_structure(start, r);
          modules.push_back({p.x, p.y, start.theta});
        }
        reorient(start, modules);
        transport(start);
        break;
      }
      case ScenarioKind::transport:
      {
        prepare_structure();
        const Pose2D origin = reference_trajectory(cfg_.trajectory, 0.0).pose;
        std::vector<Pose2D> modules = navigate(origin);
        dock(origin, modules);
        reorient(origin, modules);
        transport(origin);
        break;
      }
    }
    return std::move(trace_);
  }

private:
  double now() const { return static_cast<double>(step_) * cfg_.dt; }

  void record(Stage stage, const Pose2D& pose, const Pose2D& reference,
              std::vector<Pose2D> modules, std::vector<double> applied,
              std::vector<double> commanded)
  {
    TraceRow row;
    row.t = now();
    row.stage = stage;
    row.pose = pose;
    row.reference = reference;
    row.error = world_tracking_error(pose, reference);
    row.modules = std::move(modules);
    row.power = squared_norm(applied);
    row.omegas = std::move(applied);
    row.commanded = std::move(commanded);
    trace_.rows.push_back(std::move(row));
    ++step_;
  }

  void run_single()
  {
    trace_.n_modules = 1;
    const auto& spec = cfg_.module;
    const ReferenceSample ref0 = reference_trajectory(cfg_.trajectory, 0.0);
    Pose2D pose{ref0.pose.x + cfg_.initial_offset.x, ref0.pose.y + cfg_.initial_offset.y,
                ref0.pose.theta + cfg_.initial_offset.theta};

    DelayLine<DelayedModuleCommand> delay(cfg_.delay_steps(), {0.0, pose.theta, 0.0, false});
    const std::size_t steps = cfg_.step_count();
    for (std::size_t k = 0; k < steps; ++k)
    {
      const double t = static_cast<double>(k) * cfg_.dt;
      const ReferenceSample ref = reference_trajectory(cfg_.trajectory, t);
      const double v_r = ref.velocity.vx * std::cos(ref.pose.theta) +
                         ref.velocity.vy * std::sin(ref.pose.theta);
      const ModuleCommand cmd =
        module_control_step(pose, ref.pose, {v_r, ref.velocity.omega}, cfg_.module_gains, cfg_.dt);
      const DelayedModuleCommand computed{
        std::clamp(cmd.v_d / spec.wheel_radius, -spec.max_wheel_speed, spec.max_wheel_speed),
        cmd.theta_d, cmd.theta_dot_d, true};
      const DelayedModuleCommand applied = delay.push(computed);
      record(Stage::transport, pose, ref.pose, {pose}, {applied.omega_wheel},
             {computed.omega_wheel});
      pose = step_module(pose, applied.resolve(pose, cfg_.dt), spec, cfg_.dt);
    }
    trace_.timings.transport = static_cast<double>(steps) * cfg_.dt;
  }

  /// Validates the formation and resolves the heading configuration.
  void prepare_structure()
  {
    if (cfg_.formation.size() < 3)
      throw ScenarioError(2, ErrorKind::formation_size,
                          "a structure needs at least 3 modules, got " +
                            std::to_string(cfg_.formation.size()));
    formation_ = recentre_formation(cfg_.formation);
    trace_.n_modules = formation_.size();

    const FeasibilityReport report = check_formation_feasible(formation_, cfg_.docking_spec());
    if (!report.feasible())
    {
      std::string why;
      for (const auto& f : report.failures)
        why += (why.empty() ? "" : "; ") + f;
      throw ScenarioError(2, ErrorKind::infeasible, "formation is not feasible: " + why);
    }

    if (cfg_.headings)
    {
      headings_ = *cfg_.headings;
      for (auto& a : headings_.angles)
        a = wrap_to_2pi(a);
    }
    else
    {
      try
      {
        OptimizerOptions opts = cfg_.optimizer;
        opts.rng_seed = cfg_.rng_seed;
        headings_ = optimize_headings(formation_, cfg_.module.wheel_radius, opts).headings;
      }
      catch (const Error& e)
      {
        throw ScenarioError(3, e.kind(), e.what());
      }
    }
    trace_.headings = headings_;
  }

  /// Stage 1: staggered straight-line navigation to a standoff point outside each docking pose.
  std::vector<Pose2D> navigate(const Pose2D& origin)
  {
    const std::size_t n = formation_.size();
    const auto& nav = cfg_.navigation;

    std::vector<Pose2D> modules = cfg_.module_starts;
    std::mt19937_64 rng(cfg_.rng_seed);
    if (modules.empty())
    {
      for (std::size_t i = 0; i < n; ++i)
      {
        const Vec2 r = formation_.positions[i];
        const double bearing = origin.theta + std::atan2(r.y, r.x) + (uniform01(rng) - 0.5) * 0.6;
        const double dist = nav.start_radius * (0.9 + 0.2 * uniform01(rng));
        modules.push_back({origin.x + dist * std::cos(bearing), origin.y + dist * std::sin(bearing),
                           kTwoPi * uniform01(rng)});
      }
    }

    std::vector<Leg> legs;
    for (std::size_t i = 0; i < n; ++i)
    {
      const Vec2 target = world_from_structure(origin, formation_.positions[i]);
      Vec2 out{target.x - origin.x, target.y - origin.y};
      const double norm = std::hypot(out.x, out.y);
      out = norm > 0.0 ? Vec2{out.x / norm, out.y / norm} : Vec2{1.0, 0.0};
      const Vec2 standoff{target.x + nav.standoff * out.x, target.y + nav.standoff * out.y};
      legs.push_back(make_leg(modules[i].position(), standoff, nav.stagger * static_cast<double>(i)));
    }

    const double start = now();
    drive_legs(Stage::navigate, origin, modules, legs, nav.speed, nav.arrive_tolerance, false);
    trace_.timings.navigate = now() - start;
    return modules;
  }

  /// Stage 2: simultaneous approach from the standoff points; a module within
  /// align_range of its docking pose is captured and snapped into place.
  void dock(const Pose2D& origin, std::vector<Pose2D>& modules)
  {
    std::vector<Leg> legs;
    for (std::size_t i = 0; i < modules.size(); ++i)
      legs.push_back(make_leg(modules[i].position(),
                              world_from_structure(origin, formation_.positions[i]), now()));
    const double start = now();
    drive_legs(Stage::dock, origin, modules, legs, cfg_.navigation.dock_speed, cfg_.align_range,
               true);
    trace_.timings.dock = now() - start;
  }

  void drive_legs(Stage stage, const Pose2D& origin, std::vector<Pose2D>& modules,
                  std::vector<Leg>& legs, double speed, double capture_radius, bool snap)
  {
    const std::size_t n = modules.size();
    const auto& spec = cfg_.module;
    std::vector<DelayLine<DelayedModuleCommand>> delays;
    for (const auto& m : modules)
      delays.emplace_back(cfg_.delay_steps(), DelayedModuleCommand{0.0, m.theta, 0.0, false});

    const double stage_start = now();
    const int code = static_cast<int>(stage);
    while (true)
    {
      if (std::all_of(legs.begin(), legs.end(), [](const Leg& l) { return l.done; }))
        return;
      if (now() - stage_start > cfg_.navigation.stage_timeout)
      {
        std::string pending;
        for (std::size_t i = 0; i < n; ++i)
          if (!legs[i].done)
            pending += (pending.empty() ? "" : ", ") + std::to_string(i);
        throw ScenarioError(code, ErrorKind::scenario,
                            std::string(stage == Stage::navigate ? "navigation" : "docking") +
                              " timed out; modules not in place: " + pending);
      }

      const double t = now();
      std::vector<DelayedModuleCommand> applied(n);
      std::vector<double> commanded(n, 0.0);
      for (std::size_t i = 0; i < n; ++i)
      {
        Leg& leg = legs[i];
        DelayedModuleCommand cmd{0.0, modules[i].theta, 0.0, true};
        if (!leg.done && t >= leg.depart_time)
        {
          if (leg.drive_start < 0.0)
          {
            cmd.theta_d = wrap_to_2pi(leg.heading);
            cmd.rate = false;
            if (std::abs(wrap_to_pi(modules[i].theta - leg.heading)) < 1e-9)
              leg.drive_start = t;
          }
          if (leg.drive_start >= 0.0)
          {
            const double tau = t - leg.drive_start;
            const double s = std::min(speed * tau, leg.length);
            const double v_r = speed * tau < leg.length ? speed : 0.0;
            const Pose2D ref{leg.start.x + s * std::cos(leg.heading),
                             leg.start.y + s * std::sin(leg.heading), leg.heading};
            const ModuleCommand mc =
              module_control_step(modules[i], ref, {v_r, 0.0}, cfg_.module_gains, cfg_.dt);
            cmd = {std::clamp(mc.v_d / spec.wheel_radius, -spec.max_wheel_speed,
                              spec.max_wheel_speed),
                   mc.theta_d, mc.theta_dot_d, true};
          }
        }
        commanded[i] = cmd.omega_wheel;
        applied[i] = delays[i].push(cmd);
      }

      std::vector<double> omegas(n);
      for (std::size_t i = 0; i < n; ++i)
        omegas[i] = legs[i].done ? 0.0 : applied[i].omega_wheel;
      record(stage, centroid_pose(modules, origin.theta), origin, modules, omegas, commanded);

      for (std::size_t i = 0; i < n; ++i)
      {
        Leg& leg = legs[i];
        if (leg.done)
          continue;
        modules[i] = step_module(modules[i], applied[i].resolve(modules[i], cfg_.dt), spec, cfg_.dt);
        const double miss = std::hypot(modules[i].x - leg.goal.x, modules[i].y - leg.goal.y);
        const bool reference_finished =
          leg.drive_start >= 0.0 && speed * (now() - leg.drive_start) >= leg.length;
        if (miss <= capture_radius && (snap || reference_finished))
        {
          leg.done = true;
          if (snap)
            modules[i] = {leg.goal.x, leg.goal.y, modules[i].theta};
        }
      }
    }
  }

  static Pose2D centroid_pose(const std::vector<Pose2D>& modules, double theta)
  {
    double x = 0.0;
    double y = 0.0;
    for (const auto& m : modules)
    {
      x += m.x;
      y += m.y;
    }
    const auto n = static_cast<double>(modules.size());
    return {x / n, y / n, theta};
  }

  /// Stage 3a: steer every wheel in place to its structure-frame heading.
  void reorient(const Pose2D& pose, std::vector<Pose2D>& modules)
  {
    try
    {
      mapper_ = build_velocity_mapper(formation_, headings_, cfg_.module.wheel_radius);
    }
    catch (const Error& e)
    {
      throw ScenarioError(3, e.kind(), e.what());
    }
    const MapperMetrics metrics = mapper_metrics(*mapper_);
    trace_.mapper = metrics;
    if (metrics.rank < 3)
      throw ScenarioError(3, ErrorKind::degenerate_mapper,
                          "heading configuration gives a rank-" + std::to_string(metrics.rank) +
                            " velocity mapper; the structure cannot move omnidirectionally");

    const std::size_t n = modules.size();
    std::vector<double> targets(n);
    for (std::size_t i = 0; i < n; ++i)
      targets[i] = wrap_to_2pi(pose.theta + headings_.angles[i]);

    std::vector<DelayLine<ModuleWheelCommand>> delays;
    for (const auto& m : modules)
      delays.emplace_back(cfg_.delay_steps(), ModuleWheelCommand{0.0, m.theta});

    const double start = now();
    auto aligned = [&] {
      for (std::size_t i = 0; i < n; ++i)
        if (modules[i].theta != targets[i])
          return false;
      return true;
    };
    while (!aligned())
    {
      std::vector<ModuleWheelCommand> applied(n);
      for (std::size_t i = 0; i < n; ++i)
        applied[i] = delays[i].push({0.0, targets[i]});
      record(Stage::reorient, pose, pose, modules, std::vector<double>(n, 0.0),
             std::vector<double>(n, 0.0));
      for (std::size_t i = 0; i < n; ++i)
        modules[i] = step_module(modules[i], applied[i], cfg_.module, cfg_.dt);
    }
    trace_.timings.reorient = now() - start;
  }

  /// Stage 3b: structure tracking with the PI controller and the fixed mapper.
  void transport(const Pose2D& start_pose)
  {
    const std::size_t n = formation_.size();
    const VelocityMapper& mapper = *mapper_;
    const double omega_max = cfg_.module.max_wheel_speed;
    const double t0 = now();

    Pose2D pose = start_pose;
    IntegratorState integrator;
    DelayLine<std::vector<double>> delay(cfg_.delay_steps(), std::vector<double>(n, 0.0));

    const double mass = cfg_.module.mass;
    const double inertia = 0.5 * mass * cfg_.module.contour_circumradius *
                           cfg_.module.contour_circumradius;
    const DockingSpec dspec = cfg_.docking_spec();
    const double shear = shear_torque(dspec.magnet_tensile_force, dspec.edge_length());
    StructureTwist previous_body{};
    std::vector<Vec2> previous_velocity(n, Vec2{});

    const std::size_t steps = cfg_.step_count();
    for (std::size_t k = 0; k < steps; ++k)
    {
      const double tau = static_cast<double>(k) * cfg_.dt;
      const ReferenceSample ref = reference_trajectory(cfg_.trajectory, tau);
      const StructureCommand sc = structure_control_step(pose, ref.pose, ref.velocity,
                                                         cfg_.structure_gains, integrator, cfg_.dt);
      integrator = sc.integrator;
      const StructureTwist body = body_from_world(sc.twist, pose.theta);
      const WheelSpeeds computed = saturate_wheels(wheels_from_twist(mapper, body), omega_max);
      std::vector<double> applied = delay.push(computed.omegas);

      std::vector<Pose2D> modules;
      modules.reserve(n);
      for (std::size_t i = 0; i < n; ++i)
      {
        const Vec2 p = world_from_structure(pose, formation_.positions[i]);
        modules.push_back({p.x, p.y, pose.theta + headings_.angles[i]});
      }
      record(Stage::transport, pose, ref.pose, std::move(modules), applied, computed.omegas);

      StructureTwist realised = twist_from_wheels(mapper, WheelSpeeds{std::move(applied)});
      if (cfg_.payload)
        realised = payload_drag(realised, *cfg_.payload);

      // static strength budget: inertial load each module puts on its docking joints
      const double alpha = (realised.omega - previous_body.omega) / cfg_.dt;
      for (std::size_t i = 0; i < n; ++i)
      {
        const Vec2& r = formation_.positions[i];
        const StructureTwist local{realised.vx - realised.omega * r.y,
                                   realised.vy + realised.omega * r.x, 0.0};
        const StructureTwist world = world_from_body(local, pose.theta);
        if (k > 0)
        {
          const double ax = (world.vx - previous_velocity[i].x) / cfg_.dt;
          const double ay = (world.vy - previous_velocity[i].y) / cfg_.dt;
          trace_.max_tensile_utilization = std::max(
            trace_.max_tensile_utilization, mass * std::hypot(ax, ay) / dspec.magnet_tensile_force);
        }
        previous_velocity[i] = {world.vx, world.vy};
      }
      if (k > 0)
        trace_.max_shear_utilization =
          std::max(trace_.max_shear_utilization, inertia * std::abs(alpha) / shear);
      previous_body = realised;

      pose = advance_structure(pose, realised, cfg_.dt);
    }
    trace_.timings.transport = now() - t0;
  }

  const ScenarioConfig& cfg_;
  ScenarioTrace trace_;
  std::size_t step_{0};
  FormationConfiguration formation_;
  HeadingConfiguration headings_;
  std::optional<VelocityMapper> mapper_;
};

}  // namespace

ScenarioTrace run_scenario(const ScenarioConfig& config)
{
  config.validate();
  return Simulation(config).run();
}

double energy_of_trace(const ScenarioTrace& trace)
{
  if (trace.rows.empty())
    throw Error(ErrorKind::empty_trace, "energy of an empty trace");
  double energy = 0.0;
  for (const auto& row : trace.rows)
    if (row.stage == Stage::transport)
      energy += row.power * trace.dt;
  return energy;
}

ScenarioMetrics summarize(const ScenarioTrace& trace, double settle_time)
{
  ScenarioMetrics m;
  m.energy = energy_of_trace(trace);
  m.timings = trace.timings;
  m.max_tensile_utilization = trace.max_tensile_utilization;
  m.max_shear_utilization = trace.max_shear_utilization;

  double t_start = -1.0;
  double sum_sq = 0.0;
  std::size_t count = 0;
  const bool circle = trace.trajectory.path == PathKind::circle;
  for (const auto& row : trace.rows)
  {
    for (double w : row.omegas)
      m.max_wheel_speed = std::max(m.max_wheel_speed, std::abs(w));
    if (row.stage != Stage::transport)
      continue;
    if (t_start < 0.0)
      t_start = row.t;
    const double pos_err = std::hypot(row.error.e_x, row.error.e_y);
    sum_sq += pos_err * pos_err;
    ++count;
    if (row.t - t_start >= settle_time)
    {
      m.steady_max_position_error = std::max(m.steady_max_position_error, pos_err);
      m.steady_max_heading_error = std::max(m.steady_max_heading_error, std::abs(row.error.e_theta));
      if (circle)
      {
        const double radial = std::hypot(row.pose.x - trace.trajectory.origin.x,
                                         row.pose.y - trace.trajectory.origin.y) -
                              trace.trajectory.radius;
        m.steady_max_radial_error = std::max(m.steady_max_radial_error, std::abs(radial));
      }
    }
  }
  if (count > 0)
    m.rms_position_error = std::sqrt(sum_sq / static_cast<double>(count));
  const TraceRow& last = trace.rows.back();
  m.final_position_error = std::hypot(last.error.e_x, last.error.e_y);
  m.final_heading_error = std::abs(last.error.e_theta);
  return m;
}

}  // namespace omnimod

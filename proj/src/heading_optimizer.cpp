#include "omnimod/heading_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <span>
#include <string>

#include "omnimod/error.hpp"

namespace omnimod
{

namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kCoarseSamples = 36;
const double kInvPhi = (std::sqrt(5.0) - 1.0) / 2.0;

/// Objective evaluator for a fixed formation; reuses its matrix buffer.
class ObjectiveEvaluator
{
public:
  ObjectiveEvaluator(const FormationConfiguration& formation, double wheel_radius)
    : positions_(formation.positions)
    , inv_r_(1.0 / wheel_radius)
    , m_(static_cast<Eigen::Index>(formation.size()), 3)
  {
  }

  double operator()(std::span<const double> angles)
  {
    for (std::size_t i = 0; i < positions_.size(); ++i)
    {
      const auto row = static_cast<Eigen::Index>(i);
      const double c = std::cos(angles[i]);
      const double s = std::sin(angles[i]);
      m_(row, 0) = c * inv_r_;
      m_(row, 1) = s * inv_r_;
      m_(row, 2) = (positions_[i].x * s - positions_[i].y * c) * inv_r_;
    }
    MapperMetrics metrics;
    metrics.singular_values = singular_values(m_);
    metrics.rank = numerical_rank(metrics.singular_values, positions_.size());
    metrics.sigma_max = metrics.singular_values[0];
    metrics.condition_number =
      metrics.rank < 3 ? kInf : metrics.singular_values[0] / metrics.singular_values[2];
    return objective_from_metrics(metrics);
  }

private:
  std::vector<Vec2> positions_;
  double inv_r_;
  Eigen::MatrixX3d m_;
};

/// Lexicographic comparison used to break exact objective ties.
bool better(double f_a, const std::vector<double>& a, double f_b, const std::vector<double>& b)
{
  if (f_a != f_b)
    return f_a < f_b;
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

double uniform_angle(std::mt19937_64& rng)
{
  // top 53 bits -> [0, 1); independent of the standard library's distributions
  return static_cast<double>(rng() >> 11) * 0x1.0p-53 * kTwoPi;
}

struct StartOutcome
{
  std::vector<double> angles;
  double value{kInf};
  bool converged{false};
};

/// Minimises over angles[i] with the other angles fixed. Returns the new value.
double line_search(ObjectiveEvaluator& eval,
                   std::vector<double>& angles,
                   std::size_t i,
                   double current,
                   double angle_tolerance)
{
  const double base = angles[i];
  const double step = kTwoPi / kCoarseSamples;

  auto at = [&](double t) {
    angles[i] = t;
    return eval(angles);
  };

  // k = 0 is the current point, so the coarse pass never makes things worse.
  double best_t = base;
  double best_f = current;
  for (int k = 1; k < kCoarseSamples; ++k)
  {
    const double t = base + step * k;
    const double f = at(t);
    if (f < best_f)
    {
      best_f = f;
      best_t = t;
    }
  }

  if (std::isfinite(best_f))
  {
    double lo = best_t - step;
    double hi = best_t + step;
    double x1 = hi - kInvPhi * (hi - lo);
    double x2 = lo + kInvPhi * (hi - lo);
    double f1 = at(x1);
    double f2 = at(x2);
    while (hi - lo > angle_tolerance)
    {
      if (f1 < f2)
      {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - kInvPhi * (hi - lo);
        f1 = at(x1);
      }
      else
      {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + kInvPhi * (hi - lo);
        f2 = at(x2);
      }
    }
    const double t = f1 < f2 ? x1 : x2;
    const double f = std::min(f1, f2);
    if (f < best_f)
    {
      best_f = f;
      best_t = t;
    }
  }

  angles[i] = wrap_to_2pi(best_t);
  // re-evaluate at the wrapped angle so the stored value matches the stored point
  const double wrapped_f = eval(angles);
  if (wrapped_f <= best_f || !std::isfinite(best_f))
    return wrapped_f;
  // wrapping perturbed the value upward by rounding; keep the unwrapped point
  angles[i] = best_t;
  return best_f;
}

StartOutcome run_start(ObjectiveEvaluator& eval,
                       std::vector<double> angles,
                       const OptimizerOptions& options)
{
  StartOutcome out;
  double f = eval(angles);
  for (int sweep = 0; sweep < options.max_iterations; ++sweep)
  {
    const double previous = f;
    for (std::size_t i = 0; i < angles.size(); ++i)
      f = line_search(eval, angles, i, f, options.angle_tolerance);
    if (std::isfinite(f) && previous - f <= options.objective_tolerance * std::max(1.0, std::abs(f)))
    {
      out.converged = true;
      break;
    }
  }
  for (auto& a : angles)
    a = wrap_to_2pi(a);
  out.value = eval(angles);
  out.angles = std::move(angles);
  return out;
}

/// Eigenvalues of a symmetric 3x3 matrix (closed-form trigonometric solution), descending.
std::array<double, 3> symmetric_eigenvalues(double a00, double a01, double a02,
                                            double a11, double a12, double a22)
{
  const double p1 = a01 * a01 + a02 * a02 + a12 * a12;
  const double q = (a00 + a11 + a22) / 3.0;
  const double d0 = a00 - q;
  const double d1 = a11 - q;
  const double d2 = a22 - q;
  const double p2 = d0 * d0 + d1 * d1 + d2 * d2 + 2.0 * p1;
  if (p2 <= 0.0)
    return {q, q, q};
  const double p = std::sqrt(p2 / 6.0);
  const double b00 = d0 / p, b11 = d1 / p, b22 = d2 / p;
  const double b01 = a01 / p, b02 = a02 / p, b12 = a12 / p;
  const double det = b00 * (b11 * b22 - b12 * b12) - b01 * (b01 * b22 - b12 * b02) +
                     b02 * (b01 * b12 - b11 * b02);
  const double r = std::clamp(det / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  const double l1 = q + 2.0 * p * std::cos(phi);
  const double l3 = q + 2.0 * p * std::cos(phi + kTwoPi / 3.0);
  const double l2 = 3.0 * q - l1 - l3;
  return {l1, l2, l3};
}

}  // namespace

void OptimizerOptions::validate() const
{
  if (n_starts < 1)
    throw Error(ErrorKind::configuration, "optimizer: n_starts must be at least 1");
  if (max_iterations < 1)
    throw Error(ErrorKind::configuration, "optimizer: max_iterations must be at least 1");
  if (!(objective_tolerance > 0.0) || !(angle_tolerance > 0.0))
    throw Error(ErrorKind::configuration, "optimizer: tolerances must be positive");
}

double objective_from_metrics(const MapperMetrics& metrics)
{
  if (metrics.rank < 3)
    return kInf;
  return metrics.condition_number + metrics.sigma_max * metrics.sigma_max;
}

double objective(const FormationConfiguration& formation,
                 const HeadingConfiguration& headings,
                 double wheel_radius)
{
  return objective_from_metrics(
    mapper_metrics(build_velocity_mapper(formation, headings, wheel_radius)));
}

double energy_upper_bound(const VelocityMapper& mapper, const StructureTwist& twist)
{
  const double sigma = singular_values(mapper.matrix())[0];
  const double norm = std::sqrt(twist.vx * twist.vx + twist.vy * twist.vy + twist.omega * twist.omega);
  const double b = sigma * norm;
  return b * b;
}

HeadingConfiguration tangential_headings(const FormationConfiguration& formation)
{
  HeadingConfiguration out;
  out.angles.reserve(formation.size());
  for (const auto& p : formation.positions)
    out.angles.push_back(wrap_to_2pi(std::atan2(p.y, p.x) + std::numbers::pi / 2.0));
  return out;
}

OptimizationResult optimize_headings(const FormationConfiguration& formation,
                                     double wheel_radius,
                                     const OptimizerOptions& options)
{
  options.validate();
  if (formation.size() < 3)
    throw Error(ErrorKind::formation_size,
                "a structure needs at least 3 modules, got " + std::to_string(formation.size()));
  if (!(wheel_radius > 0.0))
    throw Error(ErrorKind::parameter, "wheel radius must be positive");

  ObjectiveEvaluator eval(formation, wheel_radius);
  std::mt19937_64 rng(options.rng_seed);

  StartOutcome best;
  best.value = kInf;
  int converged = 0;

  for (int start = 0; start <= options.n_starts; ++start)
  {
    std::vector<double> seed;
    if (start == 0)
    {
      seed = tangential_headings(formation).angles;
    }
    else
    {
      seed.resize(formation.size());
      for (auto& a : seed)
        a = uniform_angle(rng);
    }
    StartOutcome outcome = run_start(eval, std::move(seed), options);
    if (outcome.converged)
      ++converged;
    if (best.angles.empty() || better(outcome.value, outcome.angles, best.value, best.angles))
      best = std::move(outcome);
  }

  if (!std::isfinite(best.value))
    throw Error(ErrorKind::optimizer, "no full-rank heading configuration found across " +
                                        std::to_string(options.n_starts + 1) + " starts");

  OptimizationResult result;
  result.headings.angles = std::move(best.angles);
  result.metrics = mapper_metrics(build_velocity_mapper(formation, result.headings, wheel_radius));
  result.objective_value = objective_from_metrics(result.metrics);
  result.starts_converged = converged;
  return result;
}

OptimizationResult grid_search_headings(const FormationConfiguration& formation,
                                        double wheel_radius,
                                        double resolution)
{
  const std::size_t n = formation.size();
  if (n > 4)
    throw Error(ErrorKind::cost_bound,
                "grid search is limited to 4 modules (cost grows as (2pi/resolution)^n), got " +
                  std::to_string(n));
  if (n == 0)
    throw Error(ErrorKind::formation_size, "empty formation");
  if (!(resolution > 0.0))
    throw Error(ErrorKind::parameter, "grid resolution must be positive");
  if (!(wheel_radius > 0.0))
    throw Error(ErrorKind::parameter, "wheel radius must be positive");

  const auto points = static_cast<std::size_t>(std::ceil(kTwoPi / resolution - 1e-9));
  // Negating a row leaves M^T M unchanged, so when the grid contains theta + pi
  // for every theta only the first half of the ring needs visiting.
  const bool half_turn_symmetric =
    points % 2 == 0 && std::abs(static_cast<double>(points) * resolution - kTwoPi) < 1e-9;
  const std::size_t visited = half_turn_symmetric ? points / 2 : points;

  // Per module, per grid angle: the six distinct entries of row^T row.
  using Outer = std::array<double, 6>;
  std::vector<std::vector<Outer>> outer(n, std::vector<Outer>(visited));
  const double inv_r2 = 1.0 / (wheel_radius * wheel_radius);
  for (std::size_t i = 0; i < n; ++i)
  {
    const auto& r = formation.positions[i];
    for (std::size_t k = 0; k < visited; ++k)
    {
      const double t = resolution * static_cast<double>(k);
      const double c = std::cos(t);
      const double s = std::sin(t);
      const double l = r.x * s - r.y * c;
      outer[i][k] = {c * c * inv_r2, c * s * inv_r2, c * l * inv_r2,
                     s * s * inv_r2, s * l * inv_r2, l * l * inv_r2};
    }
  }

  std::vector<std::size_t> index(n, 0);
  std::vector<Outer> partial(n + 1, Outer{});
  for (std::size_t i = 0; i < n; ++i)
    for (int e = 0; e < 6; ++e)
      partial[i + 1][e] = partial[i][e] + outer[i][0][e];

  double best_value = kInf;
  std::vector<std::size_t> best_index(n, 0);

  // Odometer enumeration in lexicographic order; strict '<' keeps the
  // lexicographically smallest minimiser.
  while (true)
  {
    const Outer& g = partial[n];
    const auto lambda = symmetric_eigenvalues(g[0], g[1], g[2], g[3], g[4], g[5]);
    if (lambda[2] > 0.0 && std::isfinite(lambda[0]))
    {
      const double value = std::sqrt(lambda[0] / lambda[2]) + lambda[0];
      if (value < best_value)
      {
        best_value = value;
        best_index = index;
      }
    }

    std::size_t level = n;
    while (level > 0)
    {
      --level;
      if (++index[level] < visited)
        break;
      index[level] = 0;
    }
    if (level == 0 && index[0] == 0)
      break;
    for (std::size_t i = level; i < n; ++i)
      for (int e = 0; e < 6; ++e)
        partial[i + 1][e] = partial[i][e] + outer[i][index[i]][e];
  }

  OptimizationResult result;
  result.headings.angles.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    result.headings.angles[i] = wrap_to_2pi(resolution * static_cast<double>(best_index[i]));
  result.metrics = mapper_metrics(build_velocity_mapper(formation, result.headings, wheel_radius));
  result.objective_value = objective_from_metrics(result.metrics);
  result.starts_converged = 0;
  return result;
}

}  // namespace omnimod

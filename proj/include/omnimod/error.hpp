#pragma once

#include <stdexcept>
#include <string>

namespace omnimod
{

/// Failure categories. The CLI maps these onto its exit codes.
enum class ErrorKind
{
  parameter,          ///< a physical parameter is out of range (e.g. R <= 0)
  configuration,      ///< inconsistent inputs (length mismatch, unknown kind, ...)
  formation_size,     ///< fewer than three modules
  degenerate_mapper,  ///< velocity mapper has rank < 3
  infeasible,         ///< formation fails the docking-geometry checks
  optimizer,          ///< no full-rank heading configuration was found
  cost_bound,         ///< brute-force search refused because it is too large
  scenario,           ///< a simulation stage failed
  parse,              ///< malformed input file
  empty_trace,        ///< trace has no rows
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error
{
public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

/// A failure inside run_scenario, tagged with the pipeline stage it happened in.
/// `cause` keeps the kind of the underlying error (degenerate mapper, infeasible, ...).
class ScenarioError : public Error
{
public:
  ScenarioError(int stage, ErrorKind cause, const std::string& what)
    : Error(ErrorKind::scenario, "stage " + std::to_string(stage) + ": " + what)
    , stage_(stage)
    , cause_(cause)
  {
  }

  int stage() const noexcept { return stage_; }
  ErrorKind cause() const noexcept { return cause_; }

private:
  int stage_;
  ErrorKind cause_;
};

}  // namespace omnimod

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace adiabatica {

/// Base class for every error raised by the library. `kind()` is a stable,
/// machine-readable tag that ends up in summary.json error records.
class Error : public std::runtime_error {
public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

private:
  std::string kind_;
};

class InvalidArgument : public Error {
public:
  explicit InvalidArgument(const std::string& message) : Error("invalid_argument", message) {}
};

/// A field was handed to an operation bound to a grid of a different size.
class BindingMismatch : public Error {
public:
  explicit BindingMismatch(const std::string& message) : Error("binding_mismatch", message) {}
};

class ParseError : public Error {
public:
  ParseError(const std::string& message, std::size_t position)
      : Error("parse_error", message + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

private:
  std::size_t position_;
};

class EvalError : public Error {
public:
  explicit EvalError(const std::string& message) : Error("eval_error", message) {}
};

class SolverFailure : public Error {
public:
  explicit SolverFailure(const std::string& message) : Error("solver_failure", message) {}
};

/// Level tracking lost the followed branch (max overlap below 0.5).
class TrackingLoss : public Error {
public:
  TrackingLoss(std::size_t sample, double overlap)
      : Error("tracking_loss", "level tracking lost at path sample " + std::to_string(sample) +
                                   " (max overlap " + std::to_string(overlap) + " < 0.5)"),
        sample_(sample), overlap_(overlap) {}

  std::size_t sample() const noexcept { return sample_; }
  double overlap() const noexcept { return overlap_; }

private:
  std::size_t sample_;
  double overlap_;
};

/// The tracked level came closer to another level than the configured gap threshold.
class GapAlarm : public Error {
public:
  GapAlarm(std::size_t sample, double gap, double threshold)
      : Error("gap_alarm", "spectral gap " + std::to_string(gap) + " below threshold " +
                               std::to_string(threshold) + " at path sample " +
                               std::to_string(sample)),
        sample_(sample), gap_(gap) {}

  std::size_t sample() const noexcept { return sample_; }
  double gap() const noexcept { return gap_; }

private:
  std::size_t sample_;
  double gap_;
};

class UnwrapAmbiguity : public Error {
public:
  UnwrapAmbiguity(std::size_t sample, double increment)
      : Error("unwrap_ambiguity", "phase increment " + std::to_string(increment) +
                                      " rad exceeds pi/2 before sample " +
                                      std::to_string(sample) + "; sample the path more densely"),
        sample_(sample) {}

  std::size_t sample() const noexcept { return sample_; }

private:
  std::size_t sample_;
};

/// Node structure of an eigenfunction changed between neighbouring parameter samples.
class RunAlignmentError : public Error {
public:
  explicit RunAlignmentError(const std::string& message) : Error("run_alignment", message) {}
};

class NormViolation : public Error {
public:
  explicit NormViolation(const std::string& message) : Error("norm_violation", message) {}
};

/// Scenario file problems. `field()` names the offending key (dotted path), `line()` is
/// 1-based or 0 when unknown.
class ConfigError : public Error {
public:
  ConfigError(const std::string& field, const std::string& message, int line = 0)
      : Error("config_error", format(field, message, line)), field_(field), line_(line) {}

  const std::string& field() const noexcept { return field_; }
  int line() const noexcept { return line_; }

private:
  static std::string format(const std::string& field, const std::string& message, int line) {
    std::string out = field.empty() ? message : field + ": " + message;
    if (line > 0) out += " (line " + std::to_string(line) + ")";
    return out;
  }

  std::string field_;
  int line_;
};

}  // namespace adiabatica

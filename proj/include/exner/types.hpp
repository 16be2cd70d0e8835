#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace exner {

template <typename Scalar>
using ArrayX = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

using Index = Eigen::Index;

/// Depth below which a cell is treated as dry and its velocity as zero.
template <typename Scalar>
inline constexpr Scalar dry_depth = Scalar(1e-10);

/// Raised when a configuration value or combination is rejected.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised by time integrators when the discrete solution breaks down.
class SolverError : public std::runtime_error {
 public:
  enum class Kind { Positivity, Divergence, NonTermination };

  SolverError(Kind kind, const std::string& what, Index cell = -1,
              std::int64_t step = -1)
      : std::runtime_error(what), kind_(kind), cell_(cell), step_(step) {}

  Kind kind() const { return kind_; }
  Index cell() const { return cell_; }
  std::int64_t step() const { return step_; }

 private:
  Kind kind_;
  Index cell_;
  std::int64_t step_;
};

}  // namespace exner

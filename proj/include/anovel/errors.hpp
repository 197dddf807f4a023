#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace anovel {

/// A precondition on a physical input was violated (R <= 0, T <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Invalid structured input. `path()` names the offending field, e.g.
/// `system.nuclei[1].a_mhz`.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string path, const std::string& message)
      : std::invalid_argument(path.empty() ? message : path + ": " + message),
        path_(std::move(path)) {}

  [[nodiscard]] const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// Step-doubling failed to reach the requested tolerance. Carries the last
/// two iterates of the sampled observables (flattened sample-major) so the
/// caller can inspect how far apart they were.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& message, std::vector<double> previous,
                   std::vector<double> last, std::size_t steps, double change)
      : std::runtime_error(message),
        previous_(std::move(previous)),
        last_(std::move(last)),
        steps_(steps),
        change_(change) {}

  [[nodiscard]] const std::vector<double>& previous_iterate() const noexcept { return previous_; }
  [[nodiscard]] const std::vector<double>& last_iterate() const noexcept { return last_; }
  [[nodiscard]] std::size_t steps() const noexcept { return steps_; }
  [[nodiscard]] double change() const noexcept { return change_; }

 private:
  std::vector<double> previous_;
  std::vector<double> last_;
  std::size_t steps_;
  double change_;
};

}  // namespace anovel

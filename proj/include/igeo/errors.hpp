#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace igeo {

/// Integration hit a manifold-boundary or stiffness event: the sigma floor was
/// crossed or the adaptive step size underflowed. Carries the last state that
/// was still accepted.
class SingularityError : public std::runtime_error {
  public:
    SingularityError(const std::string& what, double tau_reached,
                     std::vector<double> last_state)
        : std::runtime_error(what), tau_reached_(tau_reached),
          last_state_(std::move(last_state)) {}

    double tau_reached() const { return tau_reached_; }
    const std::vector<double>& last_state() const { return last_state_; }

  private:
    double tau_reached_;
    std::vector<double> last_state_;
};

/// A numerical routine could not reach its accuracy target (e.g. the adaptive
/// quadrature exhausted its subdivision budget). Carries the achieved error
/// estimate.
class AccuracyError : public std::runtime_error {
  public:
    AccuracyError(const std::string& what, double achieved, double requested)
        : std::runtime_error(what), achieved_(achieved), requested_(requested) {}

    double achieved() const { return achieved_; }
    double requested() const { return requested_; }

  private:
    double achieved_;
    double requested_;
};

} // namespace igeo

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "pinion/model.hpp"

namespace pinion {

// Step control and sampling parameters for the adaptive integrator.
struct IntegratorConfig {
    double rel_tol = 1e-9;
    double abs_tol = 1e-11;
    double max_step = 0.1;                      // keeps steps below the drive period scale
    double sample_interval = two_pi / 256.0;    // uniform output grid spacing

    void validate() const;
};

// Uniformly sampled solution u(s). Samples sit at k*sample_interval for
// k = 0, 1, ..., plus one final partial sample at the horizon when the horizon
// is not a multiple of the spacing.
struct Trajectory {
    std::vector<double> s;
    std::vector<double> u;
    DrivePoint point;
    IntegratorConfig config;

    std::size_t size() const { return s.size(); }
    double horizon() const { return s.empty() ? 0.0 : s.back(); }
};

// Raised when adaptive step control collapses instead of silently stalling.
class IntegrationError : public std::runtime_error {
  public:
    explicit IntegrationError(const std::string& what) : std::runtime_error(what) {}
};

// Integrates du/ds = rhs(u, s; point) over [0, horizon] from u(0) = u0 with a
// Dormand-Prince 5(4) pair; samples are read off the dense-output interpolant,
// never by restarting steps. Deterministic: identical inputs give bit-identical
// trajectories. Throws IntegrationError if the step size falls below 1e-14.
Trajectory integrate(const DrivePoint& point, double u0, double horizon,
                     const IntegratorConfig& config = {});

// Samples the closed-form symmetric solution on a uniform grid (n_samples
// intervals, endpoints included). No ODE stepping is involved, so this serves
// as an independent reference for the numerical path.
Trajectory integrate_symmetric_oracle(const SymmetricCase& c, double horizon,
                                      std::size_t n_samples);

}  // namespace pinion

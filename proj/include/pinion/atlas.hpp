#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pinion/analysis.hpp"
#include "pinion/integrate.hpp"
#include "pinion/model.hpp"

namespace pinion {

// Inclusive uniform grid over one parameter. count == 1 denotes a degenerate
// axis pinned at min (max must equal min in that case).
struct AxisRange {
    double min;
    double max;
    std::size_t count;
};

// Rectangular sweep over (phi1, nu). phi2 follows one of two rules:
// phi2 = phi1 + grip_offset (the default, tracks the diagonal of the grip
// plane) or phi2 = *phi2_fixed when set.
struct SweepSpec {
    AxisRange phi1{0.5, 3.0, 60};
    AxisRange nu{0.5, 1.5, 60};
    double grip_offset = 0.0;
    std::optional<double> phi2_fixed;
    double u0 = 0.0;
    bool trace_boundary = false;  // refine the II0 line per phi1 column
    ClassifyTolerances tolerances{};
    IntegratorConfig integrator{};

    void validate() const;
    double phi1_at(std::size_t i) const;
    double nu_at(std::size_t j) const;
    double phi2_for(double phi1) const;
};

struct PhaseCell {
    PhaseKind kind;
    double mean_velocity;
    double slip_rate_1;
    double slip_rate_2;
    bool converged;
};

struct BoundaryPoint {
    double phi1;
    double nu_star;
    double residual;  // measured mean velocity at nu_star
};

// Classified grid, row-major with nu varying fastest.
struct PhaseMap {
    SweepSpec spec;
    std::vector<PhaseCell> cells;
    std::vector<BoundaryPoint> boundary;

    const PhaseCell& at(std::size_t i, std::size_t j) const {
        return cells[i * spec.nu.count + j];
    }
    std::size_t unconverged_count() const;
};

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

// Classifies every grid cell. Work is distributed over `workers` threads by
// cell index; each cell is a pure function of the spec, so the assembled map
// is identical for any worker count. The progress callback, if given, is
// invoked under a lock.
PhaseMap sweep(const SweepSpec& spec, unsigned workers = 1,
               const ProgressFn& progress = nullptr);

class BracketError : public std::runtime_error {
  public:
    explicit BracketError(const std::string& what) : std::runtime_error(what) {}
};

struct BoundaryResult {
    double nu_star;
    double residual;
};

// Locates the zero of the measured mean velocity in nu at fixed grips
// (phi1, phi1 + grip_offset) by bisection on the sign, shrinking the caller's
// bracket to bracket_width. Bisection is used deliberately: the measured
// velocity carries eps_conv-level noise near the zero line, which secant-type
// updates amplify. Throws BracketError if the velocity does not change sign
// over the bracket or the converged residual is not below eps_zero.
BoundaryResult find_ii0_boundary(double phi1, double grip_offset, double nu_lo,
                                 double nu_hi, const ClassifyTolerances& tol = {},
                                 const IntegratorConfig& config = {}, double u0 = 0.0,
                                 double bracket_width = 1e-4);

// Smallest grip of the tested rack at which the pinion locks to it, with the
// other rack's grip and the speed ratio held fixed. The bracket is grown
// automatically from the bare single-rack threshold (1 for rack 1, nu for
// rack 2) and then bisected to `resolution` in the grip.
double find_skipping_threshold(int rack, double other_grip, double nu,
                               double resolution = 1e-3,
                               const ClassifyTolerances& tol = {},
                               const IntegratorConfig& config = {});

}  // namespace pinion

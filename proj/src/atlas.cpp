#include "pinion/atlas.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

namespace pinion {

namespace {

double axis_value(const AxisRange& r, std::size_t i) {
    if (r.count == 1) return r.min;
    return r.min + (r.max - r.min) * static_cast<double>(i) /
                       static_cast<double>(r.count - 1);
}

void validate_axis(const AxisRange& r, const char* name) {
    if (r.count == 0)
        throw std::invalid_argument(std::string("SweepSpec: ") + name +
                                    " axis needs at least one point");
    if (r.count == 1) {
        if (r.min != r.max)
            throw std::invalid_argument(std::string("SweepSpec: degenerate ") + name +
                                        " axis requires min == max");
    } else if (!(r.min < r.max)) {
        throw std::invalid_argument(std::string("SweepSpec: ") + name +
                                    " axis range must be ordered (min < max)");
    }
    if (!(std::isfinite(r.min) && std::isfinite(r.max)))
        throw std::invalid_argument(std::string("SweepSpec: ") + name +
                                    " axis bounds must be finite");
}

// Mean velocity at one nu for fixed grips; the scalar the boundary search roots.
double velocity_at(double phi1, double phi2, double nu, double u0,
                   const ClassifyTolerances& tol, const IntegratorConfig& config) {
    const Trajectory traj = integrate(DrivePoint(phi1, phi2, nu), u0, tol.horizon, config);
    return mean_velocity(traj, tol.discard_fraction, tol.eps_conv).value;
}

}  // namespace

void SweepSpec::validate() const {
    validate_axis(phi1, "phi1");
    validate_axis(nu, "nu");
    if (phi1.min < 0.0)
        throw std::invalid_argument("SweepSpec: phi1 range must be nonnegative");
    if (nu.min <= 0.0)
        throw std::invalid_argument("SweepSpec: nu range must be positive");
    if (phi2_fixed) {
        if (*phi2_fixed < 0.0)
            throw std::invalid_argument("SweepSpec: fixed phi2 must be nonnegative");
    } else if (phi1.min + grip_offset < 0.0) {
        throw std::invalid_argument(
            "SweepSpec: grip_offset drives phi2 negative at the low phi1 edge");
    }
    if (!std::isfinite(u0))
        throw std::invalid_argument("SweepSpec: u0 must be finite");
    tolerances.validate();
    integrator.validate();
}

double SweepSpec::phi1_at(std::size_t i) const { return axis_value(phi1, i); }
double SweepSpec::nu_at(std::size_t j) const { return axis_value(nu, j); }
double SweepSpec::phi2_for(double p1) const {
    return phi2_fixed ? *phi2_fixed : p1 + grip_offset;
}

std::size_t PhaseMap::unconverged_count() const {
    std::size_t n = 0;
    for (const auto& c : cells)
        if (!c.converged) ++n;
    return n;
}

PhaseMap sweep(const SweepSpec& spec, unsigned workers, const ProgressFn& progress) {
    spec.validate();
    const std::size_t n1 = spec.phi1.count;
    const std::size_t n2 = spec.nu.count;
    const std::size_t total = n1 * n2;

    PhaseMap map{spec, std::vector<PhaseCell>(total), {}};

    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> done{0};
    std::mutex progress_mutex;
    std::exception_ptr failure;
    std::mutex failure_mutex;

    const auto run_cell = [&](std::size_t idx) {
        const std::size_t i = idx / n2;
        const std::size_t j = idx % n2;
        const double p1 = spec.phi1_at(i);
        const DrivePoint point(p1, spec.phi2_for(p1), spec.nu_at(j));
        const PhaseLabel label =
            classify(point, spec.u0, spec.tolerances, spec.integrator);
        map.cells[idx] = PhaseCell{label.kind, label.mean_velocity, label.slip_rate_1,
                                   label.slip_rate_2, label.converged};
    };

    const auto worker = [&] {
        for (;;) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= total) return;
            try {
                run_cell(idx);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
            if (progress) {
                std::lock_guard<std::mutex> lock(progress_mutex);
                progress(done.fetch_add(1) + 1, total);
            } else {
                done.fetch_add(1);
            }
        }
    };

    const unsigned n_threads = std::max(1u, workers);
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    if (spec.trace_boundary && !spec.phi2_fixed) {
        // One II0 point per phi1 column, bisected between the cells where the
        // measured velocity changes sign. Columns without a sign change are
        // skipped; the line simply does not cross them.
        for (std::size_t i = 0; i < n1; ++i) {
            for (std::size_t j = 0; j + 1 < n2; ++j) {
                const double va = map.at(i, j).mean_velocity;
                const double vb = map.at(i, j + 1).mean_velocity;
                const double p1 = spec.phi1_at(i);
                if (va == 0.0) {
                    map.boundary.push_back(BoundaryPoint{p1, spec.nu_at(j), 0.0});
                    break;
                }
                if ((va < 0.0) == (vb < 0.0)) continue;
                try {
                    const BoundaryResult res = find_ii0_boundary(
                        p1, spec.grip_offset, spec.nu_at(j), spec.nu_at(j + 1),
                        spec.tolerances, spec.integrator, spec.u0);
                    map.boundary.push_back(BoundaryPoint{p1, res.nu_star, res.residual});
                } catch (const BracketError&) {
                    // noisy sign flip away from the true line; leave the column out
                }
                break;
            }
        }
    }
    return map;
}

BoundaryResult find_ii0_boundary(double phi1, double grip_offset, double nu_lo,
                                 double nu_hi, const ClassifyTolerances& tol,
                                 const IntegratorConfig& config, double u0,
                                 double bracket_width) {
    tol.validate();
    config.validate();
    if (!(nu_lo > 0.0 && nu_hi > nu_lo))
        throw std::invalid_argument("find_ii0_boundary: bracket must satisfy 0 < lo < hi");
    if (!(bracket_width > 0.0))
        throw std::invalid_argument("find_ii0_boundary: bracket_width must be positive");
    const double phi2 = phi1 + grip_offset;
    if (phi1 < 0.0 || phi2 < 0.0)
        throw std::invalid_argument("find_ii0_boundary: grips must be nonnegative");

    const auto v = [&](double nu) {
        return velocity_at(phi1, phi2, nu, u0, tol, config);
    };

    double lo = nu_lo, hi = nu_hi;
    double v_lo = v(lo);
    if (v_lo == 0.0) return BoundaryResult{lo, 0.0};
    double v_hi = v(hi);
    if (v_hi == 0.0) return BoundaryResult{hi, 0.0};
    if ((v_lo < 0.0) == (v_hi < 0.0))
        throw BracketError(
            "find_ii0_boundary: mean velocity does not change sign over [" +
            std::to_string(nu_lo) + ", " + std::to_string(nu_hi) + "]");

    while (hi - lo > bracket_width) {
        const double mid = 0.5 * (lo + hi);
        const double v_mid = v(mid);
        if (v_mid == 0.0) return BoundaryResult{mid, 0.0};
        if ((v_mid < 0.0) == (v_lo < 0.0)) {
            lo = mid;
            v_lo = v_mid;
        } else {
            hi = mid;
            v_hi = v_mid;
        }
    }

    const double nu_star = 0.5 * (lo + hi);
    const double residual = v(nu_star);
    if (!(std::fabs(residual) < tol.eps_zero))
        throw BracketError(
            "find_ii0_boundary: converged point has |mean velocity| = " +
            std::to_string(std::fabs(residual)) + ", not below eps_zero");
    return BoundaryResult{nu_star, residual};
}

double find_skipping_threshold(int rack, double other_grip, double nu,
                               double resolution, const ClassifyTolerances& tol,
                               const IntegratorConfig& config) {
    if (rack != 1 && rack != 2)
        throw std::invalid_argument("find_skipping_threshold: rack must be 1 or 2");
    if (!(other_grip >= 0.0))
        throw std::invalid_argument("find_skipping_threshold: other_grip must be >= 0");
    if (!(nu > 0.0))
        throw std::invalid_argument("find_skipping_threshold: nu must be positive");
    if (!(resolution > 0.0))
        throw std::invalid_argument("find_skipping_threshold: resolution must be positive");
    tol.validate();
    config.validate();

    const double bare = rack == 1 ? 1.0 : nu;  // single-rack locking threshold
    const PhaseKind locked_kind = rack == 1 ? PhaseKind::I1 : PhaseKind::I2;
    const auto locked = [&](double grip) {
        const DrivePoint point = rack == 1 ? DrivePoint(grip, other_grip, nu)
                                           : DrivePoint(other_grip, grip, nu);
        return classify(point, 0.0, tol, config).kind == locked_kind;
    };

    double lo = 0.9 * bare;
    for (int i = 0; locked(lo); ++i) {
        if (i >= 40 || lo < 1e-12)
            throw BracketError("find_skipping_threshold: no skipping state below grip " +
                               std::to_string(lo));
        lo *= 0.5;
    }
    double hi = 1.25 * bare + other_grip + 0.25;
    for (int i = 0; !locked(hi); ++i) {
        if (i >= 40 || hi > 1e6)
            throw BracketError("find_skipping_threshold: no locked state up to grip " +
                               std::to_string(hi));
        hi *= 1.5;
    }

    while (hi - lo > resolution) {
        const double mid = 0.5 * (lo + hi);
        (locked(mid) ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace pinion

#pragma once

#include <span>
#include <vector>

#include "hyperlap/evolution.hpp"
#include "hyperlap/hypergraph.hpp"
#include "hyperlap/signal.hpp"

namespace hyperlap {

struct CompatibilityReport {
    std::vector<double> residuals;  // integral over [0, T] of the component mean of h
    double tolerance = 0.0;
    bool ok = true;
};

/// Default tolerance 1e-10 T sup|h|. An exactly zero signal passes without
/// quadrature.
CompatibilityReport check_compatibility(const Signal& h, double T, const ComponentPartition& partition,
                                        double tol_compat = -1.0);

struct PeriodicOptions {
    double tol_periodic = 1e-9;  // |x(T) - x(0)| on the returned orbit
    double tol_uni = 1e-6;       // stop the eps schedule once orbits stop moving
    double tol_compat = -1.0;    // negative: default from check_compatibility
    int max_iterations = 2000;   // period-map evaluations per eps
    int anderson_depth = 5;      // 0 gives plain fixed-point iteration
    StepOptions step;            // eps field is ignored
};

/// Phi_eps(v): x(T) of the implicit scheme for x' + eps x + L(x) ∋ h, x(0) = v.
Vec period_map(const Hypergraph& graph, const Signal& h, double T, double eps, double dt, double p,
               std::span<const double> v, const StepOptions& step = {});

struct PeriodicEpsResult {
    Trajectory orbit;
    int iterations = 0;   // period-map evaluations
    double defect = 0.0;  // |x(T) - x(0)|
};

/// Fixed point of Phi_eps. Component means are decoupled and linear, so they
/// are set to their exact fixed values up front; the rest is iterated with
/// safeguarded Anderson mixing. `warm` is the starting guess (zero if empty).
PeriodicEpsResult solve_periodic_eps(const Hypergraph& graph, const Signal& h, double T, double eps, double dt,
                                     double p, const PeriodicOptions& options = {},
                                     std::span<const double> warm = {});

struct PeriodicSolveReport {
    Trajectory orbit;  // orbit for the last eps used
    std::vector<double> eps_used;
    std::vector<int> iterations;
    std::vector<double> defects;
    /// Sup distance between the orbits of consecutive eps values.
    std::vector<double> cauchy;
    CompatibilityReport compatibility;
    bool settled = false;  // last Cauchy distance below tol_uni
};

std::vector<double> default_eps_schedule();

/// Runs solve_periodic_eps down the schedule with warm starts. Throws
/// IncompatibleForcing before any time stepping when the forcing fails the
/// compatibility condition.
PeriodicSolveReport solve_periodic(const Hypergraph& graph, const Signal& h, double T, double dt, double p,
                                   std::span<const double> eps_schedule, const PeriodicOptions& options = {},
                                   std::span<const double> warm = {});

struct OrbitOffset {
    Vec gamma;               // time average of x1 - x2
    double deviation = 0.0;  // max_t |x1(t) - x2(t) - gamma|
};

/// Throws GridMismatch unless both orbits share the time grid.
OrbitOffset orbit_offset(const Trajectory& x1, const Trajectory& x2);

/// Sup over grid nodes of |a(t) - b(t)|_inf. Throws GridMismatch.
double orbit_distance(const Trajectory& a, const Trajectory& b);

}  // namespace hyperlap

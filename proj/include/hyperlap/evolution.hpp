#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "hyperlap/hypergraph.hpp"
#include "hyperlap/signal.hpp"

namespace hyperlap {

enum class Scheme { Implicit, Explicit };

std::string_view to_string(Scheme scheme);
/// "implicit" or "explicit"; anything else is InvalidArgument.
Scheme parse_scheme(std::string_view text);

struct StepOptions {
    double tol_opt = 1e-10;
    double tol_active = -1.0;  // negative: default_active_tolerance(x)
    /// Strong-monotonicity shift: steps the flow of eps I + L_{G,p}.
    double eps = 0.0;
};

struct StepResult {
    Vec x;
    double residual = 0.0;  // prox residual (implicit) or projection gap (explicit)
};

/// x_{k+1} with (1 + dt eps) x_{k+1} + dt L(x_{k+1}) containing x_k + dt h_avg,
/// where h_avg is the force averaged over the step.
StepResult step_implicit(const Hypergraph& graph, std::span<const double> x, std::span<const double> h_avg,
                         double dt, double p, const StepOptions& options = {});

/// x_{k+1} = x_k + dt (h - eps x_k - L(x_k))°, the minimal section of the
/// translated face.
StepResult step_explicit(const Hypergraph& graph, std::span<const double> x, std::span<const double> h,
                         double dt, double p, const StepOptions& options = {});

struct Trajectory {
    std::vector<double> times;
    std::vector<Vec> states;
    std::vector<double> energy;
    std::vector<std::vector<double>> means;  // per node, per component
    std::vector<double> residual;            // 0 at the initial node
    Scheme scheme = Scheme::Implicit;
    double p = 2.0;

    std::size_t steps() const noexcept { return times.empty() ? 0 : times.size() - 1; }
};

/// Number of uniform steps used for [0, T] with requested step dt: the
/// smallest N with T / N <= dt (up to a relative slack of 1e-9).
int step_count(double T, double dt);

/// Uniform grid t_k = k T / N with N = step_count(T, dt).
Trajectory solve_cauchy(const Hypergraph& graph, std::span<const double> x0, const Signal& h, double T,
                        double dt, Scheme scheme, double p, const StepOptions& options = {});

/// Upper bound on X(t) = |x(t) - avg(x0)|^2 for the unforced flow, given the
/// Poincare constant C:
///   p < 2: (X0^((2-p)/2) - (2-p) t / C)_+^(2/(2-p))
///   p = 2: X0 exp(-2t/C)
///   p > 2: (X0^(-(p-2)/2) + (p-2) t / C)^(-2/(p-2))
double decay_envelope(double X0, double p, double C, double t);

/// Lower bound on X(t): the same shapes with C replaced by
/// 1 / (p #E n^(p/2) max_w), from f_e(x) <= sqrt(n) |x - avg(x0)|.
double lower_envelope(double X0, double p, double t, int n, std::size_t num_edges, double max_w);

/// Time at which decay_envelope reaches zero (p < 2), +inf otherwise.
double extinction_time(double X0, double p, double C);

/// Exact solution on the four-vertex edge with x0 = (2, 1, -1, -2), w = 1,
/// p = 2, h = 0. Vertices 1 and 2 merge at t = ln(2)/2.
Vec reference_solution_4vertex(double t);

}  // namespace hyperlap

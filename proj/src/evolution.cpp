#include "hyperlap/evolution.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "hyperlap/energy.hpp"
#include "hyperlap/error.hpp"
#include "hyperlap/projection.hpp"
#include "hyperlap/resolvent.hpp"

namespace hyperlap {

std::string_view to_string(Scheme scheme) {
    return scheme == Scheme::Implicit ? "implicit" : "explicit";
}

Scheme parse_scheme(std::string_view text) {
    if (text == "implicit") return Scheme::Implicit;
    if (text == "explicit") return Scheme::Explicit;
    throw Error(ErrorKind::InvalidArgument, "unknown scheme '" + std::string(text) + "' (implicit|explicit)");
}

namespace {

void check_step(const Hypergraph& graph, std::span<const double> x, std::span<const double> h, double dt,
                double p) {
    if (!(dt > 0.0)) throw Error(ErrorKind::InvalidArgument, "dt must be > 0");
    if (!(p >= 1.0)) throw Error(ErrorKind::InvalidArgument, "p must be >= 1");
    const auto n = static_cast<std::size_t>(graph.num_vertices());
    if (x.size() != n || h.size() != n) {
        throw Error(ErrorKind::InvalidArgument, "state or force length does not match vertex count");
    }
}

}  // namespace

StepResult step_implicit(const Hypergraph& graph, std::span<const double> x, std::span<const double> h_avg,
                         double dt, double p, const StepOptions& options) {
    check_step(graph, x, h_avg, dt, p);
    Vec y(x.size());
    for (std::size_t v = 0; v < x.size(); ++v) y[v] = x[v] + dt * h_avg[v];
    ProxOptions prox_options;
    prox_options.tol_opt = options.tol_opt;
    prox_options.tol_active = options.tol_active;
    ProxResult r = shifted_prox(graph, y, dt, dt * options.eps, p, prox_options);
    return {std::move(r.x), r.residual};
}

StepResult step_explicit(const Hypergraph& graph, std::span<const double> x, std::span<const double> h,
                         double dt, double p, const StepOptions& options) {
    check_step(graph, x, h, dt, p);
    const double tol_active = options.tol_active >= 0.0 ? options.tol_active : default_active_tolerance(x);
    const FaceProduct face = face_product(graph, x, p, tol_active);
    Vec drive(x.size());
    for (std::size_t v = 0; v < x.size(); ++v) drive[v] = h[v] - options.eps * x[v];
    // (drive - L(x))° = drive - (nearest point of L(x) to drive).
    const ProjectionResult nearest = nearest_point(face, drive, ProjectionOptions{options.tol_opt, 10000});
    StepResult out{Vec(x.size()), nearest.gap};
    for (std::size_t v = 0; v < x.size(); ++v) out.x[v] = x[v] + dt * (drive[v] - nearest.point[v]);
    return out;
}

int step_count(double T, double dt) {
    if (!(T > 0.0) || !std::isfinite(T)) throw Error(ErrorKind::InvalidArgument, "T must be > 0");
    if (!(dt > 0.0)) throw Error(ErrorKind::InvalidArgument, "dt must be > 0");
    const double ratio = T / dt;
    if (ratio > 1e9) throw Error(ErrorKind::InvalidArgument, "T / dt is too large");
    return std::max(1, static_cast<int>(std::ceil(ratio * (1.0 - 1e-9))));
}

Trajectory solve_cauchy(const Hypergraph& graph, std::span<const double> x0, const Signal& h, double T,
                        double dt, Scheme scheme, double p, const StepOptions& options) {
    if (h.dimension() != graph.num_vertices()) {
        throw Error(ErrorKind::InvalidArgument, "signal dimension does not match vertex count");
    }
    if (x0.size() != static_cast<std::size_t>(graph.num_vertices())) {
        throw Error(ErrorKind::InvalidArgument, "initial datum length does not match vertex count");
    }
    const int steps = step_count(T, dt);
    const ComponentPartition partition = connected_components(graph);
    const bool unforced = h.is_zero();
    const Vec none(x0.size(), 0.0);

    Trajectory traj;
    traj.scheme = scheme;
    traj.p = p;
    traj.times.reserve(steps + 1);
    traj.states.reserve(steps + 1);
    auto record = [&](double t, Vec x, double residual) {
        traj.times.push_back(t);
        traj.energy.push_back(energy(graph, x, p));
        traj.means.push_back(component_means(x, partition));
        traj.residual.push_back(residual);
        traj.states.push_back(std::move(x));
    };

    record(0.0, Vec(x0.begin(), x0.end()), 0.0);
    const double h_step = T / steps;
    for (int k = 0; k < steps; ++k) {
        const double t0 = k * h_step;
        const double t1 = k + 1 == steps ? T : (k + 1) * h_step;
        const Vec& x = traj.states.back();
        StepResult next;
        if (scheme == Scheme::Implicit) {
            next = step_implicit(graph, x, unforced ? none : h.average(t0, t1), t1 - t0, p, options);
        } else {
            next = step_explicit(graph, x, unforced ? none : h.value(t0), t1 - t0, p, options);
        }
        record(t1, std::move(next.x), next.residual);
    }
    return traj;
}

double decay_envelope(double X0, double p, double C, double t) {
    if (!(X0 >= 0.0) || !(C > 0.0) || !(t >= 0.0) || !(p >= 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "decay_envelope needs X0 >= 0, C > 0, t >= 0, p >= 1");
    }
    if (t == 0.0 || X0 == 0.0) return X0;
    if (p == 2.0) return X0 * std::exp(-2.0 * t / C);
    if (p < 2.0) {
        const double base = std::pow(X0, 0.5 * (2.0 - p)) - (2.0 - p) * t / C;
        return base <= 0.0 ? 0.0 : std::pow(base, 2.0 / (2.0 - p));
    }
    return std::pow(std::pow(X0, -0.5 * (p - 2.0)) + (p - 2.0) * t / C, -2.0 / (p - 2.0));
}

double lower_envelope(double X0, double p, double t, int n, std::size_t num_edges, double max_w) {
    if (n <= 0 || num_edges == 0 || !(max_w > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "lower_envelope needs n > 0, edges and max_w > 0");
    }
    const double rate = p * static_cast<double>(num_edges) * std::pow(static_cast<double>(n), 0.5 * p) * max_w;
    return decay_envelope(X0, p, 1.0 / rate, t);
}

double extinction_time(double X0, double p, double C) {
    if (p >= 2.0) return std::numeric_limits<double>::infinity();
    return C * std::pow(X0, 0.5 * (2.0 - p)) / (2.0 - p);
}

Vec reference_solution_4vertex(double t) {
    if (!(t >= 0.0)) throw Error(ErrorKind::InvalidArgument, "t must be >= 0");
    const double merge = 0.5 * std::log(2.0);
    if (t <= merge) {
        const double outer = 2.0 * std::exp(-2.0 * t);
        return {outer, 1.0, -1.0, -outer};
    }
    const double v = std::sqrt(2.0) * std::exp(-t);
    return {v, v, -v, -v};
}

}  // namespace hyperlap

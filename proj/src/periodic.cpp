#include "hyperlap/periodic.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "hyperlap/error.hpp"

namespace hyperlap {

namespace {

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

// The implicit scheme of solve_cauchy with the step forces cached, so that
// repeated period-map evaluations reproduce its arithmetic exactly.
class PeriodStepper {
public:
    PeriodStepper(const Hypergraph& graph, const Signal& h, double T, double eps, double dt, double p,
                  const StepOptions& step)
        : graph_(graph), p_(p), options_(step) {
        if (!(eps > 0.0)) throw Error(ErrorKind::InvalidArgument, "eps must be > 0");
        if (h.dimension() != graph.num_vertices()) {
            throw Error(ErrorKind::InvalidArgument, "signal dimension does not match vertex count");
        }
        options_.eps = eps;
        const int steps = step_count(T, dt);
        const double h_step = T / steps;
        const bool unforced = h.is_zero();
        const Vec none(static_cast<std::size_t>(graph.num_vertices()), 0.0);
        for (int k = 0; k < steps; ++k) {
            const double t0 = k * h_step;
            const double t1 = k + 1 == steps ? T : (k + 1) * h_step;
            widths_.push_back(t1 - t0);
            forces_.push_back(unforced ? none : h.average(t0, t1));
        }
    }

    Vec run(std::span<const double> v) const {
        Vec x(v.begin(), v.end());
        for (std::size_t k = 0; k < widths_.size(); ++k) {
            x = step_implicit(graph_, x, forces_[k], widths_[k], p_, options_).x;
        }
        return x;
    }

    // Component means after one period from zero means, and the per-period
    // decay factor; both follow the scheme's own recursion.
    std::pair<std::vector<double>, double> mean_recursion(const ComponentPartition& partition) const {
        std::vector<double> drift(partition.size(), 0.0);
        double decay = 1.0;
        for (std::size_t k = 0; k < widths_.size(); ++k) {
            const std::vector<double> force = component_means(forces_[k], partition);
            const double shrink = 1.0 + widths_[k] * options_.eps;
            for (std::size_t c = 0; c < drift.size(); ++c) drift[c] = (drift[c] + widths_[k] * force[c]) / shrink;
            decay /= shrink;
        }
        return {drift, decay};
    }

    const StepOptions& options() const { return options_; }

private:
    const Hypergraph& graph_;
    double p_;
    StepOptions options_;
    std::vector<double> widths_;
    std::vector<Vec> forces_;
};

void set_means(Vec& v, const ComponentPartition& partition, const std::vector<double>& target) {
    const std::vector<double> current = component_means(v, partition);
    for (std::size_t i = 0; i < v.size(); ++i) {
        const int c = partition.component_of[i];
        v[i] += target[c] - current[c];
    }
}

}  // namespace

CompatibilityReport check_compatibility(const Signal& h, double T, const ComponentPartition& partition,
                                        double tol_compat) {
    if (!(T > 0.0)) throw Error(ErrorKind::InvalidArgument, "T must be > 0");
    if (h.dimension() != static_cast<int>(partition.component_of.size())) {
        throw Error(ErrorKind::InvalidArgument, "signal dimension does not match vertex count");
    }
    CompatibilityReport report;
    report.tolerance = tol_compat >= 0.0 ? tol_compat : 1e-10 * T * h.sup_norm(T);
    if (h.is_zero()) {
        report.residuals.assign(partition.size(), 0.0);
        return report;
    }
    report.residuals = component_means(h.integral(0.0, T), partition);
    for (double r : report.residuals) report.ok = report.ok && std::abs(r) <= report.tolerance;
    return report;
}

Vec period_map(const Hypergraph& graph, const Signal& h, double T, double eps, double dt, double p,
               std::span<const double> v, const StepOptions& step) {
    return PeriodStepper(graph, h, T, eps, dt, p, step).run(v);
}

PeriodicEpsResult solve_periodic_eps(const Hypergraph& graph, const Signal& h, double T, double eps, double dt,
                                     double p, const PeriodicOptions& options, std::span<const double> warm) {
    const auto n = static_cast<std::size_t>(graph.num_vertices());
    if (!warm.empty() && warm.size() != n) {
        throw Error(ErrorKind::InvalidArgument, "warm start length does not match vertex count");
    }
    if (!(options.tol_periodic > 0.0)) throw Error(ErrorKind::InvalidArgument, "tol_periodic must be > 0");
    const PeriodStepper stepper(graph, h, T, eps, dt, p, options.step);
    const ComponentPartition partition = connected_components(graph);

    // Means: m -> decay m + drift, fixed at drift / (1 - decay).
    auto [fixed_means, decay] = stepper.mean_recursion(partition);
    for (double& m : fixed_means) m /= (1.0 - decay);

    Vec v = warm.empty() ? Vec(n, 0.0) : Vec(warm.begin(), warm.end());
    set_means(v, partition, fixed_means);

    std::vector<Vec> g_hist;
    std::vector<Vec> f_hist;
    Vec best_g;
    double best = std::numeric_limits<double>::infinity();
    const int depth = std::max(options.anderson_depth, 0);

    for (int it = 1; it <= options.max_iterations; ++it) {
        Vec g = stepper.run(v);
        Vec f(n);
        for (std::size_t i = 0; i < n; ++i) f[i] = g[i] - v[i];
        const double residual = norm2(f);
        if (residual <= options.tol_periodic) {
            PeriodicEpsResult result;
            StepOptions step = stepper.options();
            result.orbit = solve_cauchy(graph, v, h, T, dt, Scheme::Implicit, p, step);
            result.iterations = it;
            result.defect = norm2([&] {
                Vec d(n);
                for (std::size_t i = 0; i < n; ++i) d[i] = result.orbit.states.back()[i] - v[i];
                return d;
            }());
            return result;
        }
        if (!(residual < best)) {
            // Mixing stalled: restart from the plain iterate of the best point,
            // which the contraction is guaranteed to improve on.
            g_hist.clear();
            f_hist.clear();
            v = best_g;
            set_means(v, partition, fixed_means);
            continue;
        }
        best = residual;
        best_g = g;
        g_hist.push_back(std::move(g));
        f_hist.push_back(std::move(f));
        if (g_hist.size() > static_cast<std::size_t>(depth) + 1) {
            g_hist.erase(g_hist.begin());
            f_hist.erase(f_hist.begin());
        }

        v = g_hist.back();
        const std::size_t m = g_hist.size() - 1;
        if (m > 0) {
            Eigen::MatrixXd dF(n, m);
            Eigen::MatrixXd dG(n, m);
            for (std::size_t j = 0; j < m; ++j) {
                for (std::size_t i = 0; i < n; ++i) {
                    dF(i, j) = f_hist[j + 1][i] - f_hist[j][i];
                    dG(i, j) = g_hist[j + 1][i] - g_hist[j][i];
                }
            }
            const Eigen::VectorXd last = Eigen::Map<const Eigen::VectorXd>(f_hist.back().data(), n);
            const Eigen::VectorXd gamma = dF.colPivHouseholderQr().solve(last);
            if (gamma.allFinite()) {
                const Eigen::VectorXd shift = dG * gamma;
                for (std::size_t i = 0; i < n; ++i) v[i] -= shift[i];
            }
        }
        set_means(v, partition, fixed_means);
    }
    throw NonConvergence("period map did not reach |x(T) - x(0)| <= " + sci(options.tol_periodic) + " at eps " +
                             sci(eps) + " (best " + sci(best) + ")",
                         best);
}

std::vector<double> default_eps_schedule() { return {1e-1, 1e-2, 1e-3, 1e-4}; }

PeriodicSolveReport solve_periodic(const Hypergraph& graph, const Signal& h, double T, double dt, double p,
                                   std::span<const double> eps_schedule, const PeriodicOptions& options,
                                   std::span<const double> warm) {
    if (eps_schedule.empty()) throw Error(ErrorKind::InvalidArgument, "eps schedule is empty");
    for (std::size_t i = 0; i < eps_schedule.size(); ++i) {
        if (!(eps_schedule[i] > 0.0)) throw Error(ErrorKind::InvalidArgument, "eps values must be > 0");
        if (i > 0 && !(eps_schedule[i] < eps_schedule[i - 1])) {
            throw Error(ErrorKind::InvalidArgument, "eps schedule must be strictly decreasing");
        }
    }
    const ComponentPartition partition = connected_components(graph);
    PeriodicSolveReport report;
    report.compatibility = check_compatibility(h, T, partition, options.tol_compat);
    if (!report.compatibility.ok) {
        std::string detail;
        for (std::size_t c = 0; c < report.compatibility.residuals.size(); ++c) {
            const double r = report.compatibility.residuals[c];
            if (std::abs(r) > report.compatibility.tolerance) {
                detail += " component " + std::to_string(c + 1) + ": " + sci(r) + ";";
            }
        }
        throw IncompatibleForcing(
            "forcing violates the periodic compatibility condition (the integral over one period of the "
            "component mean of h must vanish on every component; tolerance " +
                sci(report.compatibility.tolerance) + "):" + detail,
            report.compatibility.residuals);
    }

    Vec start(warm.begin(), warm.end());
    for (double eps : eps_schedule) {
        PeriodicEpsResult r = solve_periodic_eps(graph, h, T, eps, dt, p, options, start);
        report.eps_used.push_back(eps);
        report.iterations.push_back(r.iterations);
        report.defects.push_back(r.defect);
        start = r.orbit.states.front();
        if (!report.orbit.times.empty()) {
            report.cauchy.push_back(orbit_distance(report.orbit, r.orbit));
        }
        report.orbit = std::move(r.orbit);
        if (!report.cauchy.empty() && report.cauchy.back() < options.tol_uni) {
            report.settled = true;
            break;
        }
    }
    return report;
}

namespace {

void check_grid(const Trajectory& a, const Trajectory& b) {
    if (a.times.size() != b.times.size() || a.times.empty()) {
        throw Error(ErrorKind::GridMismatch, "orbits have different numbers of grid nodes");
    }
    for (std::size_t k = 0; k < a.times.size(); ++k) {
        if (std::abs(a.times[k] - b.times[k]) > 1e-12 * (1.0 + std::abs(a.times[k]))) {
            throw Error(ErrorKind::GridMismatch, "orbits differ at grid node " + std::to_string(k));
        }
        if (a.states[k].size() != b.states[k].size()) {
            throw Error(ErrorKind::GridMismatch, "orbits have different vertex counts");
        }
    }
}

}  // namespace

OrbitOffset orbit_offset(const Trajectory& x1, const Trajectory& x2) {
    check_grid(x1, x2);
    const std::size_t n = x1.states.front().size();
    const std::size_t nodes = x1.times.size();
    OrbitOffset out;
    out.gamma.assign(n, 0.0);
    const double span = x1.times.back() - x1.times.front();
    if (nodes == 1 || span == 0.0) {
        for (std::size_t i = 0; i < n; ++i) out.gamma[i] = x1.states[0][i] - x2.states[0][i];
    } else {
        for (std::size_t k = 1; k < nodes; ++k) {
            const double h = x1.times[k] - x1.times[k - 1];
            for (std::size_t i = 0; i < n; ++i) {
                out.gamma[i] += 0.5 * h *
                                ((x1.states[k - 1][i] - x2.states[k - 1][i]) + (x1.states[k][i] - x2.states[k][i]));
            }
        }
        for (double& g : out.gamma) g /= span;
    }
    for (std::size_t k = 0; k < nodes; ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = x1.states[k][i] - x2.states[k][i] - out.gamma[i];
            s += d * d;
        }
        out.deviation = std::max(out.deviation, std::sqrt(s));
    }
    return out;
}

double orbit_distance(const Trajectory& a, const Trajectory& b) {
    check_grid(a, b);
    double d = 0.0;
    for (std::size_t k = 0; k < a.times.size(); ++k) {
        for (std::size_t i = 0; i < a.states[k].size(); ++i) {
            d = std::max(d, std::abs(a.states[k][i] - b.states[k][i]));
        }
    }
    return d;
}

}  // namespace hyperlap

#include "hyperlap/check.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <thread>

#include "hyperlap/energy.hpp"
#include "hyperlap/error.hpp"
#include "hyperlap/io.hpp"
#include "hyperlap/oracles.hpp"
#include "hyperlap/periodic.hpp"
#include "hyperlap/projection.hpp"
#include "hyperlap/resolvent.hpp"

namespace hyperlap::check {

namespace {

using oracle::Rng;

double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

Vec minus(const Vec& a, const Vec& b) {
    Vec d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
    return d;
}

double norm2(const Vec& v) { return std::sqrt(dot(v, v)); }

double sup_norm(const Vec& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double max_abs_diff(const Vec& a, const Vec& b) { return sup_norm(minus(a, b)); }

Vec negated(const Vec& x) {
    Vec out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = -x[i];
    return out;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

double pick_p(int trial) {
    static constexpr double ps[] = {1.0, 1.5, 2.0, 3.0};
    return ps[trial % 4];
}

class Tally {
public:
    explicit Tally(std::string_view name) { result_.name = name; }

    // A positive excess is a violation of that size.
    void record(double excess, const std::function<std::string()>& what) {
        ++result_.checks;
        if (excess > 0.0 || std::isnan(excess)) {
            ++result_.violations;
            if (std::isnan(excess) || excess > result_.worst) result_.worst = excess;
            if (result_.first_failure.empty()) result_.first_failure = what();
        }
    }

    void exact(bool ok, const std::function<std::string()>& what) { record(ok ? 0.0 : 1.0, what); }

    PropertyResult done() { return std::move(result_); }

private:
    PropertyResult result_;
};

PropertyResult components_reachability(Rng& rng) {
    Tally tally("components-reachability");
    for (int trial = 0; trial < 50; ++trial) {
        const Hypergraph g = oracle::random_hypergraph(rng);
        const ComponentPartition P = connected_components(g);
        const auto reach = oracle::reachability(g);
        bool ok = true;
        for (int u = 0; u < g.num_vertices(); ++u) {
            for (int v = 0; v < g.num_vertices(); ++v) {
                ok = ok && (P.component_of[u] == P.component_of[v]) == reach[u][v];
            }
        }
        tally.exact(ok, [&] { return "trial " + std::to_string(trial); });
    }
    return tally.done();
}

PropertyResult average_idempotent(Rng& rng) {
    Tally tally("average-idempotent");
    for (int trial = 0; trial < 100; ++trial) {
        const Hypergraph g = oracle::random_hypergraph(rng);
        const ComponentPartition P = connected_components(g);
        const Vec once = component_average(oracle::random_vector(rng, g.num_vertices(), 5.0), P);
        tally.exact(component_average(once, P) == once, [&] { return "trial " + std::to_string(trial); });
    }
    return tally.done();
}

PropertyResult subgradient_inequality(Rng& rng) {
    Tally tally("subgradient-inequality");
    for (int trial = 0; trial < 200; ++trial) {
        const Hypergraph g = oracle::random_hypergraph(rng);
        const double p = pick_p(trial);
        const Vec x = oracle::random_vector(rng, g.num_vertices(), 2.0);
        const Vec xi = oracle::random_vector(rng, g.num_vertices(), 2.0);
        const Vec y = canonical_subgradient(g, x, p).vector;
        const double fx = energy(g, x, p);
        const double fxi = energy(g, xi, p);
        tally.record(dot(y, minus(xi, x)) - (fxi - fx) - 1e-12 * (1.0 + fx + fxi),
                     [&] { return "trial " + std::to_string(trial) + " p " + num(p); });
    }
    return tally.done();
}

PropertyResult canonical_oddness(Rng& rng) {
    Tally tally("canonical-oddness");
    for (int trial = 0; trial < 200; ++trial) {
        const Hypergraph g = oracle::random_hypergraph(rng);
        const double p = pick_p(trial);
        const int n = g.num_vertices();
        const Vec x = trial % 2 ? oracle::random_integer_vector(rng, n, 2) : oracle::random_vector(rng, n, 2.0);
        const Vec y = canonical_subgradient(g, x, p).vector;
        const Vec y_neg = canonical_subgradient(g, negated(x), p).vector;
        tally.exact(y_neg == negated(y), [&] { return "trial " + std::to_string(trial); });
    }
    return tally.done();
}

PropertyResult min_norm_oddness(Rng& rng) {
    Tally tally("min-norm-oddness");
    for (int trial = 0; trial < 100; ++trial) {
        const Hypergraph g = oracle::random_hypergraph(rng);
        const double p = pick_p(trial);
        const Vec x = oracle::random_integer_vector(rng, g.num_vertices(), 2);
        const Vec z = min_norm_point(face_product(g, x, p, default_active_tolerance(x))).point;
        const Vec z_neg = min_norm_point(face_product(g, negated(x), p, default_active_tolerance(x))).point;
        tally.record(max_abs_diff(z_neg, negated(z)) - 1e-12 * (1.0 + sup_norm(z)),
                     [&] { return "trial " + std::to_string(trial); });
    }
    return tally.done();
}

PropertyResult monotonicity_lower_bound(Rng& rng) {
    Tally tally("monotonicity-lower-bound");
    for (int trial = 0; trial < 200; ++trial) {
        const Hypergraph g = oracle::random_hypergraph(rng);
        const double p = pick_p(trial);
        const Vec x1 = oracle::random_vector(rng, g.num_vertices(), 2.0);
        const Vec x2 = oracle::random_vector(rng, g.num_vertices(), 2.0);
        // Two different selections: uniform coefficients and the minimal section.
        const Vec y1 = canonical_subgradient(g, x1, p).vector;
        const Vec y2 = min_norm_point(face_product(g, x2, p, default_active_tolerance(x2))).point;
        double bound = 0.0;
        for (const Edge& e : g.edges()) {
            const double f1 = edge_spread(e, x1);
            const double f2 = edge_spread(e, x2);
            bound += e.weight * (energy_slope(f1, p) - energy_slope(f2, p)) * (f1 - f2);
        }
        const double lhs = dot(minus(y1, y2), minus(x1, x2));
        const auto what = [&] { return "trial " + std::to_string(trial) + " p " + num(p); };
        tally.record(bound - lhs - 1e-9 * (1.0 + std::abs(bound)), what);
        tally.record(-bound - 1e-12, what);
    }
    return tally.done();
}

PropertyResult translation_invariance(Rng& rng) {
    Tally tally("translation-invariance");
    for (int trial = 0; trial < 100; ++trial) {
        const Hypergraph g = oracle::random_hypergraph(rng);
        const double p = pick_p(trial);
        const int n = g.num_vertices();
        const ComponentPartition P = connected_components(g);
        const Vec x = oracle::random_vector(rng, n, 2.0);
        const Vec c = oracle::random_vector(rng, static_cast<int>(P.size()), 3.0);
        Vec shifted = x;
        for (int v = 0; v < n; ++v) shifted[v] += c[P.component_of[v]];
        const double e0 = energy(g, x, p);
        const auto what = [&] { return "trial " + std::to_string(trial); };
        tally.record(std::abs(energy(g, shifted, p) - e0) - 1e-12 * (1.0 + e0), what);
        const auto f0 = edge_faces(g, x, 1e-9);
        const auto f1 = edge_faces(g, shifted, 1e-9);
        bool same = true;
        for (std::size_t e = 0; e < f0.size(); ++e) {
            same = same && f0[e].argmax == f1[e].argmax && f0[e].argmin == f1[e].argmin;
        }
        tally.exact(same, what);
    }
    return tally.done();
}

PropertyResult poincare_wirtinger(Rng& rng) {
    Tally tally("poincare-wirtinger");
    for (int trial = 0; trial < 200; ++trial) {
        const Hypergraph g = oracle::random_hypergraph(rng);
        const ComponentPartition P = connected_components(g);
        const double p = pick_p(trial);
        const Vec x = oracle::random_vector(rng, g.num_vertices(), 3.0);
        const Vec d = minus(x, component_average(x, P));
        const double rhs = p * poincare_constant(g, P, p) * energy(g, x, p);
        double l1 = 0.0;
        for (double v : d) l1 += std::abs(v);
        for (double norm : {l1, norm2(d), sup_norm(d)}) {
            tally.record(std::pow(norm, p) - rhs * (1.0 + 1e-9),
                         [&] { return "trial " + std::to_string(trial) + " p " + num(p); });
        }
    }
    return tally.done();
}

PropertyResult projection_oracle(Rng& rng) {
    Tally tally("projection-oracle");
    for (int trial = 0; trial < 40; ++trial) {
        const FaceProduct face = oracle::random_face(rng);
        const Vec target = oracle::random_vector(rng, face.dimension, 2.0);
        const Vec point = nearest_point(face, target).point;
        tally.record(max_abs_diff(point, oracle::brute_force_nearest(face, target)) - 1e-6,
                     [&] { return "trial " + std::to_string(trial); });
    }
    return tally.done();
}

PropertyResult projection_variational(Rng& rng) {
    Tally tally("projection-variational");
    for (int trial = 0; trial < 60; ++trial) {
        const FaceProduct face = oracle::random_face(rng);
        const Vec z = min_norm_point(face).point;
        double worst = -1.0;
        for (const Vec& w : oracle::extreme_points(face)) worst = std::max(worst, dot(z, minus(z, w)));
        tally.record(worst - 1e-10, [&] { return "trial " + std::to_string(trial); });
    }
    return tally.done();
}

PropertyResult prox_nonexpansive(Rng& rng) {
    Tally tally("prox-nonexpansive");
    std::uniform_real_distribution<double> step(0.05, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const Hypergraph g = oracle::random_hypergraph(rng);
        const double p = pick_p(trial);
        const double lambda = step(rng);
        const Vec y1 = oracle::random_vector(rng, g.num_vertices(), 2.0);
        const Vec y2 = oracle::random_vector(rng, g.num_vertices(), 2.0);
        const ProxResult r1 = prox(g, y1, lambda, p);
        const ProxResult r2 = prox(g, y2, lambda, p);
        tally.record(norm2(minus(r1.x, r2.x)) - norm2(minus(y1, y2)) - 2e-10,
                     [&] { return "trial " + std::to_string(trial) + " p " + num(p); });
    }
    return tally.done();
}

PropertyResult prox_translation(Rng& rng) {
    Tally tally("prox-translation");
    for (int trial = 0; trial < 100; ++trial) {
        const Hypergraph g = oracle::random_hypergraph(rng);
        const double p = pick_p(trial);
        const int n = g.num_vertices();
        const ComponentPartition P = connected_components(g);
        const Vec y = oracle::random_vector(rng, n, 2.0);
        const Vec c = oracle::random_vector(rng, static_cast<int>(P.size()), 3.0);
        Vec shift(n);
        for (int v = 0; v < n; ++v) shift[v] = c[P.component_of[v]];
        Vec moved = y;
        for (int v = 0; v < n; ++v) moved[v] += shift[v];
        const Vec a = prox(g, moved, 0.4, p).x;
        Vec b = prox(g, y, 0.4, p).x;
        for (int v = 0; v < n; ++v) b[v] += shift[v];
        tally.record(max_abs_diff(a, b) - 1e-8, [&] { return "trial " + std::to_string(trial) + " p " + num(p); });
    }
    return tally.done();
}

PropertyResult prox_means(Rng& rng) {
    Tally tally("prox-means");
    for (int trial = 0; trial < 100; ++trial) {
        const Hypergraph g = oracle::random_hypergraph(rng);
        const double p = pick_p(trial);
        const ComponentPartition P = connected_components(g);
        const Vec y = oracle::random_vector(rng, g.num_vertices(), 2.0);
        const Vec x = prox(g, y, 0.7, p).x;
        tally.record(max_abs_diff(component_means(x, P), component_means(y, P)) - 1e-12,
                     [&] { return "trial " + std::to_string(trial) + " p " + num(p); });
    }
    return tally.done();
}

PropertyResult graph_laplacian(Rng& rng) {
    Tally tally("graph-laplacian");
    for (int trial = 0; trial < 100; ++trial) {
        const Hypergraph g = oracle::random_integer_graph(rng, 8, 12);
        const Vec x = oracle::random_integer_vector(rng, g.num_vertices(), 6);
        tally.exact(graph_laplacian_check(g, x) == canonical_subgradient(g, x, 2.0).vector,
                    [&] { return "trial " + std::to_string(trial); });
    }
    return tally.done();
}

PropertyResult mass_conservation(Rng& rng) {
    Tally tally("mass-conservation");
    for (int trial = 0; trial < 8; ++trial) {
        const Hypergraph g = oracle::random_hypergraph(rng);
        const int n = g.num_vertices();
        const ComponentPartition P = connected_components(g);
        const Signal h = Signal::piecewise_linear(
            {0.0, 0.3, 1.0},
            {oracle::random_vector(rng, n, 1.0), oracle::random_vector(rng, n, 1.0), oracle::random_vector(rng, n, 1.0)});
        const Vec x0 = oracle::random_vector(rng, n, 2.0);
        const Trajectory tr = solve_cauchy(g, x0, h, 1.0, 0.05, Scheme::Implicit, pick_p(trial));
        const auto m0 = component_means(x0, P);
        double worst = 0.0;
        for (std::size_t k = 0; k < tr.times.size(); ++k) {
            const auto pushed = component_means(h.integral(0.0, tr.times[k]), P);
            for (std::size_t c = 0; c < P.size(); ++c) {
                worst = std::max(worst, std::abs(tr.means[k][c] - m0[c] - pushed[c]));
            }
        }
        tally.record(worst - static_cast<double>(tr.steps()) * 1e-10,
                     [&] { return "trial " + std::to_string(trial); });
    }
    return tally.done();
}

PropertyResult energy_dissipation(Rng& rng) {
    Tally tally("energy-dissipation");
    for (int trial = 0; trial < 8; ++trial) {
        const Hypergraph g = oracle::random_hypergraph(rng);
        const int n = g.num_vertices();
        const Trajectory tr = solve_cauchy(g, oracle::random_vector(rng, n, 2.0), Signal::zero(n), 1.0, 0.05,
                                           Scheme::Implicit, pick_p(trial));
        double worst = -1.0;
        for (std::size_t k = 1; k < tr.energy.size(); ++k) worst = std::max(worst, tr.energy[k] - tr.energy[k - 1]);
        tally.record(worst - 1e-12, [&] { return "trial " + std::to_string(trial); });
    }
    return tally.done();
}

PropertyResult period_map_contraction(Rng& rng) {
    Tally tally("period-map-contraction");
    // eps = dt keeps the discrete factor (1 + dt eps)^(-T/dt) within 1e-6 of e^(-eps T).
    const double eps = 1e-2;
    const double dt = 1e-2;
    const double T = 1.0;
    for (int trial = 0; trial < 4; ++trial) {
        const Hypergraph g = oracle::random_hypergraph(rng);
        const int n = g.num_vertices();
        const double p = pick_p(trial);
        const Signal h = Signal::sine(oracle::random_vector(rng, n, 1.0), T);
        const Vec v1 = oracle::random_vector(rng, n, 2.0);
        const Vec v2 = oracle::random_vector(rng, n, 2.0);
        const double ratio = norm2(minus(period_map(g, h, T, eps, dt, p, v1), period_map(g, h, T, eps, dt, p, v2))) /
                             norm2(minus(v1, v2));
        tally.record(ratio - std::exp(-eps * T) * (1.0 + 1e-6),
                     [&] { return "trial " + std::to_string(trial) + " ratio " + num(ratio); });
    }
    return tally.done();
}

struct Suite {
    std::string_view name;
    PropertyResult (*run)(Rng&);
};

constexpr Suite kSuites[] = {
    {"components-reachability", components_reachability},
    {"average-idempotent", average_idempotent},
    {"subgradient-inequality", subgradient_inequality},
    {"canonical-oddness", canonical_oddness},
    {"min-norm-oddness", min_norm_oddness},
    {"monotonicity-lower-bound", monotonicity_lower_bound},
    {"translation-invariance", translation_invariance},
    {"poincare-wirtinger", poincare_wirtinger},
    {"projection-oracle", projection_oracle},
    {"projection-variational", projection_variational},
    {"prox-nonexpansive", prox_nonexpansive},
    {"prox-translation", prox_translation},
    {"prox-means", prox_means},
    {"graph-laplacian", graph_laplacian},
    {"mass-conservation", mass_conservation},
    {"energy-dissipation", energy_dissipation},
    {"period-map-contraction", period_map_contraction},
};

// ---- reproduce ---------------------------------------------------------

Hypergraph four_vertex_graph() { return validate({4, {{{1, 2, 3, 4}, 1.0}}}); }

std::string flag(bool b) { return b ? "true" : "false"; }

std::string join(const Vec& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ' ';
        s += io::format_double(v[i]);
    }
    return s;
}

CaseReport cauchy_4vertex() {
    CaseReport r{"cauchy-4vertex", false, {}, std::nullopt};
    const Hypergraph g = four_vertex_graph();
    const Vec x0{2, 1, -1, -2};
    auto error_of = [](const Trajectory& tr) {
        double e = 0.0;
        for (std::size_t k = 0; k < tr.times.size(); ++k) {
            e = std::max(e, max_abs_diff(tr.states[k], reference_solution_4vertex(tr.times[k])));
        }
        return e;
    };
    const double dt = 1e-3;
    Trajectory coarse = solve_cauchy(g, x0, Signal::zero(4), 2.0, dt, Scheme::Implicit, 2.0);
    const Trajectory fine = solve_cauchy(g, x0, Signal::zero(4), 2.0, dt / 2, Scheme::Implicit, 2.0);
    const double e_coarse = error_of(coarse);
    const double e_fine = error_of(fine);
    double merge = -1.0;
    for (std::size_t k = 0; k < coarse.times.size(); ++k) {
        const Vec& x = coarse.states[k];
        if (edge_face(g, x, 0, default_active_tolerance(x)).argmax.size() == 2) {
            merge = coarse.times[k];
            break;
        }
    }
    const double merge_exact = 0.5 * std::log(2.0);
    const bool error_ok = e_coarse <= 5e-3;
    const bool ratio_ok = e_coarse / e_fine >= 1.7 && e_coarse / e_fine <= 2.3;
    const bool merge_ok = merge >= 0.0 && std::abs(merge - merge_exact) <= 2 * dt;
    r.values = {{"dt", io::format_double(dt)},
                {"max_error", io::format_double(e_coarse)},
                {"max_error_half_dt", io::format_double(e_fine)},
                {"error_ratio", io::format_double(e_coarse / e_fine)},
                {"merge_time", io::format_double(merge)},
                {"merge_time_exact", io::format_double(merge_exact)},
                {"error_ok", flag(error_ok)},
                {"ratio_ok", flag(ratio_ok)},
                {"merge_ok", flag(merge_ok)}};
    r.ok = error_ok && ratio_ok && merge_ok;
    r.trajectory = std::move(coarse);
    return r;
}

CaseReport minimal_section() {
    CaseReport r{"minimal-section", false, {}, std::nullopt};
    const Hypergraph g = four_vertex_graph();
    const Vec x{1, 1, -1, -1};
    const ProjectionResult z = min_norm_point(face_product(g, x, 2.0, default_active_tolerance(x)));
    double spread = 0.0;
    for (double c : z.coefficients[0].lambda) spread = std::max(spread, std::abs(c - 0.5));
    for (double c : z.coefficients[0].mu) spread = std::max(spread, std::abs(c - 0.5));
    const double error = max_abs_diff(z.point, Vec{1, 1, -1, -1});
    r.values = {{"min_norm_point", join(z.point)},
                {"error", io::format_double(error)},
                {"coefficient_deviation", io::format_double(spread)}};
    r.ok = error <= 1e-8 && spread <= 1e-6;
    return r;
}

CaseReport monotonicity_degeneracy() {
    CaseReport r{"monotonicity-degeneracy", true, {}, std::nullopt};
    const Hypergraph g = four_vertex_graph();
    const ComponentPartition P = connected_components(g);
    // The first pair is the commonly quoted fixture; its means are not equal.
    // The second pair has a + b equal (and zero) on both vectors.
    const std::pair<Vec, Vec> pairs[] = {{{1, 0.3, -0.7, -1}, {1, -0.5, 0.2, -1}},
                                         {{1, 0.3, -0.3, -1}, {1, -0.5, 0.5, -1}}};
    const char* labels[] = {"fixture", "balanced"};
    for (int k = 0; k < 2; ++k) {
        const auto& [x1, x2] = pairs[k];
        const std::string tag = labels[k];
        for (double p : {1.0, 2.0, 3.0}) {
            const double top = std::pow(2.0, p - 1.0);
            const Vec expected{top, 0.0, 0.0, -top};
            const Vec y1 = canonical_subgradient(g, x1, p).vector;
            const Vec y2 = canonical_subgradient(g, x2, p).vector;
            const double inner = dot(minus(y1, y2), minus(x1, x2));
            const bool ok = y1 == expected && y2 == expected && std::abs(inner) <= 1e-12;
            r.values.emplace_back(tag + "_p" + num(p) + "_subgradient", join(y1));
            r.values.emplace_back(tag + "_p" + num(p) + "_inner_product", io::format_double(inner));
            r.ok = r.ok && ok;
        }
        const double m1 = component_means(x1, P)[0];
        const double m2 = component_means(x2, P)[0];
        r.values.emplace_back(tag + "_means", io::format_double(m1) + " " + io::format_double(m2));
        r.values.emplace_back(tag + "_means_zero", flag(std::abs(m1) <= 1e-12 && std::abs(m2) <= 1e-12));
        if (k == 1) r.ok = r.ok && std::abs(m1) <= 1e-12 && std::abs(m2) <= 1e-12;
    }
    return r;
}

CaseReport graph_laplacian_case() {
    CaseReport r{"graph-laplacian", true, {}, std::nullopt};
    const Hypergraph path = validate({2, {{{1, 2}, 1.0}}});
    const Hypergraph triangle = validate({3, {{{1, 2}, 1.0}, {{2, 3}, 1.0}, {{1, 3}, 1.0}}});
    const Vec a = graph_laplacian_check(path, Vec{1, 0});
    const Vec b = graph_laplacian_check(triangle, Vec{1, 0, 0});
    const bool fixed = a == Vec{1, -1} && b == Vec{2, -1, -1} &&
                       canonical_subgradient(path, Vec{1, 0}, 2.0).vector == a &&
                       canonical_subgradient(triangle, Vec{1, 0, 0}, 2.0).vector == b;
    Rng rng(2024);
    int mismatches = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const Hypergraph g = oracle::random_integer_graph(rng, 8, 12);
        const Vec x = oracle::random_integer_vector(rng, g.num_vertices(), 6);
        if (graph_laplacian_check(g, x) != canonical_subgradient(g, x, 2.0).vector) ++mismatches;
    }
    r.values = {{"path", join(a)},
                {"triangle", join(b)},
                {"random_graphs", "100"},
                {"random_mismatches", std::to_string(mismatches)}};
    r.ok = fixed && mismatches == 0;
    return r;
}

CaseReport cosh_periodic() {
    CaseReport r{"cosh-periodic", false, {}, std::nullopt};
    const Hypergraph g = four_vertex_graph();
    const double T = 1.0;
    const double dt = 1e-3;
    const Signal h = Signal::cosh_example(1.0, 0.0, T);
    const std::vector<double> schedule = default_eps_schedule();
    PeriodicSolveReport report = solve_periodic(g, h, T, dt, 2.0, schedule);
    Trajectory reference = report.orbit;
    double spread_error = 0.0;
    for (std::size_t k = 0; k < reference.times.size(); ++k) {
        const double c = std::cosh(2.0 * (reference.times[k] - 0.5 * T));
        reference.states[k] = {c, 0.0, 0.0, -c};
        spread_error = std::max(spread_error, std::abs(edge_spread(g.edge(0), report.orbit.states[k]) - 2.0 * c));
    }
    const OrbitOffset off = orbit_offset(report.orbit, reference);
    const bool deviation_ok = off.deviation <= 1e-2;
    const bool spread_ok = spread_error <= 1e-2;
    const bool outer_ok = std::abs(off.gamma[0]) <= 1e-2 && std::abs(off.gamma[3]) <= 1e-2;
    std::string eps;
    for (double e : report.eps_used) eps += (eps.empty() ? "" : " ") + io::format_double(e);
    std::string cauchy;
    for (double c : report.cauchy) cauchy += (cauchy.empty() ? "" : " ") + io::format_double(c);
    r.values = {{"eps_used", eps},
                {"eps_cauchy_distances", cauchy},
                {"periodicity_defect", io::format_double(report.defects.back())},
                {"offset", join(off.gamma)},
                {"deviation", io::format_double(off.deviation)},
                {"spread_error", io::format_double(spread_error)},
                {"deviation_ok", flag(deviation_ok)},
                {"spread_ok", flag(spread_ok)},
                {"outer_offset_ok", flag(outer_ok)}};
    r.ok = deviation_ok && spread_ok && outer_ok;
    r.trajectory = std::move(report.orbit);
    return r;
}

struct Case {
    std::string_view name;
    CaseReport (*run)();
};

constexpr Case kCases[] = {
    {"cauchy-4vertex", cauchy_4vertex},
    {"minimal-section", minimal_section},
    {"monotonicity-degeneracy", monotonicity_degeneracy},
    {"graph-laplacian", graph_laplacian_case},
    {"cosh-periodic", cosh_periodic},
};

}  // namespace

bool VerifyReport::ok() const {
    return std::all_of(properties.begin(), properties.end(), [](const PropertyResult& p) { return p.violations == 0; });
}

std::vector<std::string_view> property_names() {
    std::vector<std::string_view> names;
    for (const Suite& s : kSuites) names.push_back(s.name);
    return names;
}

VerifyReport verify(std::uint64_t seed, unsigned threads) {
    constexpr std::size_t count = std::size(kSuites);
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, count);

    std::vector<PropertyResult> results(count);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                              static_cast<std::uint32_t>(i)};
            Rng rng(seq);
            try {
                results[i] = kSuites[i].run(rng);
            } catch (const Error& e) {
                // A solver failure inside a suite counts against that suite.
                results[i].name = kSuites[i].name;
                results[i].violations += 1;
                results[i].first_failure = std::string(to_string(e.kind())) + ": " + e.what();
            }
        }
    };
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    pool.clear();
    return VerifyReport{seed, std::move(results)};
}

std::vector<std::string_view> case_names() {
    std::vector<std::string_view> names;
    for (const Case& c : kCases) names.push_back(c.name);
    return names;
}

CaseReport reproduce(std::string_view name) {
    for (const Case& c : kCases) {
        if (c.name == name) return c.run();
    }
    std::string known;
    for (const Case& c : kCases) known += (known.empty() ? "" : ", ") + std::string(c.name);
    throw Error(ErrorKind::InvalidArgument, "unknown case '" + std::string(name) + "' (" + known + ")");
}

}  // namespace hyperlap::check

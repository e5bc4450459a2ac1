#include "doctest.h"

#include <cmath>
#include <numeric>

#include "hyperlap/error.hpp"
#include "hyperlap/oracles.hpp"
#include "hyperlap/projection.hpp"
#include "hyperlap/resolvent.hpp"

using namespace hyperlap;

namespace {

Hypergraph four_vertex_graph() { return validate({4, {{{1, 2, 3, 4}, 1.0}}}); }

double distance(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

double max_abs_diff(const Vec& a, const Vec& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// J(x) = 1/2 |x - y|^2 + lambda phi(x)
double objective(const Hypergraph& g, const Vec& x, const Vec& y, double lambda, double p) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += 0.5 * (x[i] - y[i]) * (x[i] - y[i]);
    return s + lambda * energy(g, x, p);
}

}  // namespace

TEST_CASE("single-edge prox closed forms") {
    // Two vertices, p = 2: x = r - c (r1 - r2)(1, -1)/(1 + 2c).
    const std::vector<double> two = single_edge_prox(std::vector<double>{1.0, -1.0}, 0.25, 2.0);
    CHECK(two[0] == doctest::Approx(1.0 - 0.25 * 2.0 / 1.5).epsilon(1e-15));
    CHECK(two[1] == doctest::Approx(-1.0 + 0.25 * 2.0 / 1.5).epsilon(1e-15));

    // p = 1 removes mass c from the top and bottom.
    const std::vector<double> flat = single_edge_prox(std::vector<double>{3.0, 0.0, -3.0}, 1.0, 1.0);
    CHECK(flat == std::vector<double>{2.0, 0.0, -2.0});

    // p = 1 with large c collapses to the mean.
    const std::vector<double> collapsed = single_edge_prox(std::vector<double>{3.0, 1.0, -1.0}, 10.0, 1.0);
    CHECK(collapsed == std::vector<double>{1.0, 1.0, 1.0});

    // Ties come out bit-equal.
    const std::vector<double> merged = single_edge_prox(std::vector<double>{2.0, 1.0, -1.0, -2.0}, 1.0, 2.0);
    CHECK(merged[0] == merged[1]);
    CHECK(merged[2] == merged[3]);
    CHECK(merged[0] == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("single-edge prox minimizes its objective") {
    oracle::Rng rng(8);
    for (int trial = 0; trial < 300; ++trial) {
        const int k = std::uniform_int_distribution<int>(2, 6)(rng);
        const Vec r = oracle::random_vector(rng, k, 3.0);
        const double c = std::uniform_real_distribution<double>(0.01, 3.0)(rng);
        const double p = std::array{1.0, 1.3, 2.0, 2.5, 4.0}[trial % 5];
        const Hypergraph g(k, {Edge{[&] { std::vector<int> v(k); for (int i = 0; i < k; ++i) v[i] = i; return v; }(), 1.0}});
        const Vec x = single_edge_prox(r, c, p);
        const double best = objective(g, x, r, c, p);
        // Random perturbations never improve the objective.
        for (int probe = 0; probe < 20; ++probe) {
            Vec trial_x = x;
            const Vec d = oracle::random_vector(rng, k, 1e-3);
            for (int i = 0; i < k; ++i) trial_x[i] += d[i];
            CHECK(objective(g, trial_x, r, c, p) >= best - 1e-12);
        }
    }
}

TEST_CASE("prox closed form on the four-vertex edge while the ordering persists") {
    const Hypergraph g = four_vertex_graph();
    const Vec y{2, 1, -1, -2};
    for (double lambda : {0.05, 0.2, 0.5}) {
        const ProxResult r = prox(g, y, lambda, 2.0);
        const double shift = 4.0 * lambda / (1.0 + 2.0 * lambda);
        CHECK(max_abs_diff(r.x, Vec{2 - shift, 1, -1, -2 + shift}) <= 1e-14);
        CHECK(r.residual <= 1e-12);
    }
}

TEST_CASE("prox fixes constants and recovers forward-constructed points") {
    const Hypergraph g = four_vertex_graph();
    for (double lambda : {0.01, 1.0, 100.0}) {
        const ProxResult r = prox(g, Vec{1.5, 1.5, 1.5, 1.5}, lambda, 2.0);
        CHECK(r.x == Vec{1.5, 1.5, 1.5, 1.5});
    }

    oracle::Rng rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        const Hypergraph h = oracle::random_hypergraph(rng);
        const int n = h.num_vertices();
        const double p = std::array{1.0, 1.5, 2.0, 3.0}[trial % 4];
        const double lambda = std::uniform_real_distribution<double>(0.05, 1.0)(rng);
        // Distinct values give singleton active sets, so L(x*) is a single point.
        Vec star = oracle::random_vector(rng, n, 2.0);
        const Vec g_star = canonical_subgradient(h, star, p).vector;
        Vec y(n);
        for (int v = 0; v < n; ++v) y[v] = star[v] + lambda * g_star[v];
        const ProxResult r = prox(h, y, lambda, p);
        CHECK(max_abs_diff(r.x, star) <= 1e-8);
    }
}

TEST_CASE("prox invariants on random hypergraphs") {
    oracle::Rng rng(4096);
    for (int trial = 0; trial < 120; ++trial) {
        const Hypergraph g = oracle::random_hypergraph(rng);
        const int n = g.num_vertices();
        const ComponentPartition P = connected_components(g);
        const double p = std::array{1.0, 1.5, 2.0, 3.0}[trial % 4];
        const double lambda = std::uniform_real_distribution<double>(0.01, 2.0)(rng);
        const Vec y1 = oracle::random_vector(rng, n, 2.0);
        const Vec y2 = oracle::random_vector(rng, n, 2.0);

        const ProxResult r1 = prox(g, y1, lambda, p);
        const ProxResult r2 = prox(g, y2, lambda, p);
        CHECK(r1.residual <= 1e-10);

        // Certificate reconstructs (y - x)/lambda within the residual.
        Vec implied(n);
        for (int v = 0; v < n; ++v) implied[v] = (y1[v] - r1.x[v]) / lambda;
        CHECK(distance(implied, r1.certificate.vector) <= r1.residual + 1e-12);
        CHECK(distance(assemble_subgradient(g, r1.certificate.faces, r1.certificate.coefficients, p),
                       r1.certificate.vector) <= 1e-12);

        // Norm bound and nonexpansiveness.
        CHECK(distance(r1.x, Vec(n, 0.0)) <= distance(y1, Vec(n, 0.0)) + 1e-12);
        CHECK(distance(r1.x, r2.x) <= distance(y1, y2) + 2e-10);

        // Component means are preserved.
        const auto m_y = component_means(y1, P);
        const auto m_x = component_means(r1.x, P);
        for (std::size_t k = 0; k < m_y.size(); ++k) CHECK(m_x[k] == doctest::Approx(m_y[k]).epsilon(1e-13));

        // Equivariance under component-constant shifts.
        Vec shifted = y1;
        for (int v = 0; v < n; ++v) shifted[v] += 1.25 * (P.component_of[v] + 1);
        const ProxResult rs = prox(g, shifted, lambda, p);
        for (int v = 0; v < n; ++v) CHECK(rs.x[v] == doctest::Approx(r1.x[v] + 1.25 * (P.component_of[v] + 1)).epsilon(1e-10));

        // Minimizes J: no random perturbation does better.
        const double best = objective(g, r1.x, y1, lambda, p);
        for (int probe = 0; probe < 10; ++probe) {
            Vec probe_x = r1.x;
            const Vec d = oracle::random_vector(rng, n, 1e-4);
            for (int v = 0; v < n; ++v) probe_x[v] += d[v];
            CHECK(objective(g, probe_x, y1, lambda, p) >= best - 1e-12);
        }
    }
}

TEST_CASE("shifted prox solves (1 + s) x + lambda L(x) ∋ y") {
    const Hypergraph g = four_vertex_graph();
    const Vec y{2, 1, -1, -2};
    const double lambda = 0.1;
    const double shift = 0.05;
    const ProxResult r = shifted_prox(g, y, lambda, shift, 2.0);
    // While the ordering persists: (1 + s) x1 + lambda (x1 - x4) = 2, x4 = -x1.
    const double x1 = 2.0 / (1.0 + shift + 2.0 * lambda);
    CHECK(max_abs_diff(r.x, Vec{x1, 1 / (1 + shift), -1 / (1 + shift), -x1}) <= 1e-14);
    CHECK(r.residual <= 1e-12);
}

TEST_CASE("prox argument validation") {
    const Hypergraph g = four_vertex_graph();
    CHECK_THROWS_AS(prox(g, Vec{1, 2, 3, 4}, 0.0, 2.0), Error);
    CHECK_THROWS_AS(prox(g, Vec{1, 2, 3, 4}, 1.0, 0.5), Error);
    CHECK_THROWS_AS(prox(g, Vec{1, 2, 3}, 1.0, 2.0), Error);
}

TEST_CASE("near-collapsed data with exact ties") {
    // A late implicit step of an unforced p = 1.5 flow: spread 1.6e-7 around -0.69.
    const Hypergraph g = validate({6,
                                   {{{3, 5}, 2.2791397834630609},
                                    {{2, 1, 4, 6}, 1.3849416919446187},
                                    {{1, 5, 2, 4}, 3.9980561336651927},
                                    {{5, 2, 6, 4}, 0.44548922725294476},
                                    {{3, 5}, 0.8414038485796298},
                                    {{5, 6, 2, 3}, 2.9610829117308715}}});
    const Vec y{-0.69297954394193595, -0.69297939609464965, -0.69297938439236662,
                -0.69297954394193595, -0.69297939609464965, -0.69297939609464965};
    const ProxResult r = prox(g, y, 0.05, 1.5);
    CHECK(r.residual <= 1e-10);
    CHECK(r.x[0] == r.x[3]);
    CHECK(r.x[1] == r.x[4]);
    CHECK(r.x[1] == r.x[5]);
}

TEST_CASE("a vertex leaves a tie it shares with the data") {
    // y1 = y2 = y4 exactly, yet the solution orders 4 > {1, 2, 3} > 5.
    const Hypergraph g = validate({5,
                                   {{{5, 3, 1}, 3.2800812992684558},
                                    {{4, 3}, 1.7170908072182336},
                                    {{5, 1, 2}, 3.5122806088938248},
                                    {{2, 1, 4, 3}, 3.1741897023432069},
                                    {{2, 4, 5, 1}, 0.46673869896632192}}});
    const Vec y{-0.6752374023332065, -0.6752374023332065, -0.67523740233661256, -0.6752374023332065,
                -0.67523740236080176};
    for (double c : {1.0, 1e10}) {
        Vec centered = y;
        const double mean = std::accumulate(y.begin(), y.end(), 0.0) / 5.0;
        for (double& v : centered) v = c * (v - mean);
        const ProxResult r = prox(g, centered, 0.05 * std::sqrt(c), 1.5, {1e-10 * std::sqrt(c)});
        CHECK(r.x[3] > r.x[0]);
        CHECK(r.x[0] == r.x[1]);
        CHECK(r.x[1] == r.x[2]);
        CHECK(r.x[4] < r.x[2]);
    }
}

TEST_CASE("prox is homogeneous: prox(c y, lambda) = c prox(y, lambda c^(p-2))") {
    oracle::Rng rng(4242);
    for (int trial = 0; trial < 24; ++trial) {
        const Hypergraph g = oracle::random_hypergraph(rng);
        const int n = g.num_vertices();
        const double p = std::array{1.0, 1.5, 2.0, 3.0}[trial % 4];
        const Vec y = oracle::random_vector(rng, n, 2.0);
        const double lambda = 0.3;
        for (double c : {1e-4, 1e3}) {
            Vec cy = y;
            for (double& v : cy) v *= c;
            const Vec scaled = prox(g, cy, lambda, p).x;
            const Vec unit = prox(g, y, lambda * std::pow(c, p - 2.0), p).x;
            for (int v = 0; v < n; ++v) CHECK(scaled[v] == doctest::Approx(c * unit[v]).epsilon(1e-7).scale(c));
        }
    }
}

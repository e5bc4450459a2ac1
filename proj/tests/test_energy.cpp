#include "doctest.h"

#include <cmath>

#include "hyperlap/energy.hpp"
#include "hyperlap/error.hpp"
#include "hyperlap/oracles.hpp"

using namespace hyperlap;

namespace {

Hypergraph four_vertex_graph() { return validate({4, {{{1, 2, 3, 4}, 1.0}}}); }

double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

Vec minus(const Vec& a, const Vec& b) {
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

}  // namespace

TEST_CASE("edge face on the four-vertex edge") {
    const Hypergraph g = four_vertex_graph();
    const EdgeFace face = edge_face(g, Vec{1, 0.3, -0.7, -1}, 0, 1e-9);
    CHECK(face.spread == 2.0);
    CHECK(face.argmax == std::vector<int>{0});
    CHECK(face.argmin == std::vector<int>{3});

    const EdgeFace flat = edge_face(g, Vec{0.25, 0.25, 0.25, 0.25}, 0, 1e-9);
    CHECK(flat.spread == 0.0);
    CHECK(flat.argmax == std::vector<int>{0, 1, 2, 3});
    CHECK(flat.argmin == std::vector<int>{0, 1, 2, 3});

    const EdgeFace initial = edge_face(g, Vec{2, 1, -1, -2}, 0, 1e-9);
    CHECK(initial.spread == 4.0);
    CHECK(initial.argmax == std::vector<int>{0});
    CHECK(initial.argmin == std::vector<int>{3});

    const EdgeFace tied = edge_face(g, Vec{1, 1 - 1e-12, -1, -1}, 0, 1e-9);
    CHECK(tied.argmax == std::vector<int>{0, 1});
    CHECK(tied.argmin == std::vector<int>{2, 3});
}

TEST_CASE("energy values") {
    const Hypergraph g = four_vertex_graph();
    CHECK(energy(g, Vec{2, 1, -1, -2}, 2.0) == 8.0);
    CHECK(energy(g, Vec{2, 1, -1, -2}, 1.0) == 4.0);
    CHECK(energy(g, Vec{3, 3, 3, 3}, 2.0) == 0.0);

    const Hypergraph split = validate({5, {{{1, 2}, 1.0}, {{3, 4, 5}, 2.0}}});
    const auto basis = zero_eigenspace_basis(connected_components(split));
    for (const Vec& b : basis) CHECK(energy(split, b, 1.5) == 0.0);
    CHECK(energy(split, Vec{-2, -2, 7, 7, 7}, 3.0) == 0.0);
}

TEST_CASE("canonical subgradient reproduces the degenerate four-vertex values") {
    const Hypergraph g = four_vertex_graph();
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
        for (const Vec& x : {Vec{1, 0.3, -0.7, -1}, Vec{1, -0.5, 0.2, -1}, Vec{1, 0.99, -0.99, -1}}) {
            const Vec y = canonical_subgradient(g, x, p).vector;
            const double top = std::pow(2.0, p - 1.0);
            CHECK(y == Vec{top, 0, 0, -top});
        }
    }
}

TEST_CASE("canonical subgradient special points") {
    const Hypergraph g = four_vertex_graph();
    CHECK(canonical_subgradient(g, Vec{5, 5, 5, 5}, 2.0).vector == Vec{0, 0, 0, 0});
    CHECK(canonical_subgradient(g, Vec{5, 5, 5, 5}, 1.0).vector == Vec{0, 0, 0, 0});
    CHECK(canonical_subgradient(g, Vec{1, 1, -1, -1}, 2.0).vector == Vec{1, 1, -1, -1});

    const SubgradientPoint point = canonical_subgradient(g, Vec{1, 1, -1, -1}, 2.0);
    REQUIRE(point.coefficients.size() == 1);
    CHECK(point.coefficients[0].lambda == std::vector<double>{0.5, 0.5});
    CHECK(point.coefficients[0].mu == std::vector<double>{0.5, 0.5});
}

TEST_CASE("graph Laplacian check") {
    const Hypergraph path = validate({2, {{{1, 2}, 1.0}}});
    CHECK(graph_laplacian_check(path, Vec{1, 0}) == Vec{1, -1});
    CHECK(graph_laplacian_check(path, Vec{4, 4}) == Vec{0, 0});

    const Hypergraph triangle = validate({3, {{{1, 2}, 1.0}, {{2, 3}, 1.0}, {{1, 3}, 1.0}}});
    CHECK(graph_laplacian_check(triangle, Vec{1, 0, 0}) == Vec{2, -1, -1});
    CHECK(canonical_subgradient(triangle, Vec{1, 0, 0}, 2.0).vector == Vec{2, -1, -1});

    try {
        graph_laplacian_check(four_vertex_graph(), Vec{1, 0, 0, 0});
        FAIL("expected NotAnOrdinaryGraph");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotAnOrdinaryGraph);
    }
}

TEST_CASE("D - A equals the canonical subgradient exactly on integer data") {
    oracle::Rng rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        const Hypergraph g = oracle::random_integer_graph(rng, 8, 12);
        const Vec x = oracle::random_integer_vector(rng, g.num_vertices(), 6);
        CHECK(graph_laplacian_check(g, x) == canonical_subgradient(g, x, 2.0).vector);
    }
}

TEST_CASE("subgradient properties on random hypergraphs") {
    oracle::Rng rng(1234);
    for (int trial = 0; trial < 300; ++trial) {
        const Hypergraph g = oracle::random_hypergraph(rng);
        const int n = g.num_vertices();
        const double p = std::array{1.0, 1.5, 2.0, 3.0}[trial % 4];
        const Vec x = oracle::random_vector(rng, n, 2.0);
        const Vec xi = oracle::random_vector(rng, n, 2.0);
        const Vec y = canonical_subgradient(g, x, p).vector;

        // Subgradient inequality.
        CHECK(dot(y, minus(xi, x)) <= energy(g, xi, p) - energy(g, x, p) + 1e-12);

        // Oddness.
        Vec neg(n);
        for (int v = 0; v < n; ++v) neg[v] = -x[v];
        const Vec y_neg = canonical_subgradient(g, neg, p).vector;
        for (int v = 0; v < n; ++v) CHECK(y_neg[v] == -y[v]);

        // Monotonicity lower bound.
        const Vec y2 = canonical_subgradient(g, xi, p).vector;
        double bound = 0.0;
        for (const Edge& e : g.edges()) {
            const double f1 = edge_spread(e, x);
            const double f2 = edge_spread(e, xi);
            bound += e.weight * (energy_slope(f1, p) - energy_slope(f2, p)) * (f1 - f2);
        }
        const double lhs = dot(minus(y, y2), minus(x, xi));
        CHECK(lhs >= bound - 1e-12 * (1.0 + std::abs(bound)));
        CHECK(bound >= -1e-12);

        // Translation by a component-constant vector.
        const ComponentPartition P = connected_components(g);
        Vec shifted = x;
        for (int v = 0; v < n; ++v) shifted[v] += 0.75 * (P.component_of[v] + 1);
        CHECK(energy(g, shifted, p) == doctest::Approx(energy(g, x, p)).epsilon(1e-12));
        const auto f0 = edge_faces(g, x, 1e-9);
        const auto f1 = edge_faces(g, shifted, 1e-9);
        for (std::size_t e = 0; e < f0.size(); ++e) {
            CHECK(f0[e].argmax == f1[e].argmax);
            CHECK(f0[e].argmin == f1[e].argmin);
        }

        // Subgradients are orthogonal to every component indicator.
        for (const Vec& b : zero_eigenspace_basis(P)) CHECK(std::abs(dot(y, b)) <= 1e-12);
    }
}

TEST_CASE("Poincare-Wirtinger inequality on random instances") {
    oracle::Rng rng(4242);
    for (int trial = 0; trial < 400; ++trial) {
        const Hypergraph g = oracle::random_hypergraph(rng);
        const ComponentPartition P = connected_components(g);
        const double p = std::array{1.0, 1.5, 2.0, 3.0}[trial % 4];
        const Vec x = oracle::random_vector(rng, g.num_vertices(), 3.0);
        const Vec diff = minus(x, component_average(x, P));
        const double rhs = p * poincare_constant(g, P, p) * energy(g, x, p);
        double l1 = 0.0, l2 = 0.0, linf = 0.0;
        for (double d : diff) {
            l1 += std::abs(d);
            l2 += d * d;
            linf = std::max(linf, std::abs(d));
        }
        for (double norm : {l1, std::sqrt(l2), linf}) {
            CHECK(std::pow(norm, p) <= rhs * (1.0 + 1e-9));
        }
    }
}

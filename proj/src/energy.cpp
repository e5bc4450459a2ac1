#include "hyperlap/energy.hpp"

#include <algorithm>
#include <cmath>

#include "hyperlap/error.hpp"

namespace hyperlap {

double default_active_tolerance(std::span<const double> x) {
    double sup = 0.0;
    for (double value : x) sup = std::max(sup, std::abs(value));
    return 1e-9 * (1.0 + sup);
}

double edge_spread(const Edge& edge, std::span<const double> x) {
    double hi = x[edge.vertices.front()];
    double lo = hi;
    for (int v : edge.vertices) {
        hi = std::max(hi, x[v]);
        lo = std::min(lo, x[v]);
    }
    return hi - lo;
}

EdgeFace edge_face(const Hypergraph& graph, std::span<const double> x, std::size_t e,
                   double tol_active) {
    if (!(tol_active >= 0.0)) throw Error(ErrorKind::InvalidArgument, "tol_active must be >= 0");
    if (x.size() != static_cast<std::size_t>(graph.num_vertices())) {
        throw Error(ErrorKind::InvalidArgument, "potential length does not match vertex count");
    }
    const Edge& edge = graph.edge(e);
    double hi = x[edge.vertices.front()];
    double lo = hi;
    for (int v : edge.vertices) {
        hi = std::max(hi, x[v]);
        lo = std::min(lo, x[v]);
    }
    EdgeFace face;
    face.edge = e;
    face.spread = hi - lo;
    face.tolerance = tol_active;
    for (int v : edge.vertices) {
        if (x[v] >= hi - tol_active) face.argmax.push_back(v);
        if (x[v] <= lo + tol_active) face.argmin.push_back(v);
    }
    // Within tolerance the edge is flat: the face is the whole polytope.
    if (face.spread <= tol_active) {
        face.argmax = edge.vertices;
        face.argmin = edge.vertices;
    }
    std::sort(face.argmax.begin(), face.argmax.end());
    std::sort(face.argmin.begin(), face.argmin.end());
    return face;
}

std::vector<EdgeFace> edge_faces(const Hypergraph& graph, std::span<const double> x,
                                 double tol_active) {
    std::vector<EdgeFace> faces;
    faces.reserve(graph.num_edges());
    for (std::size_t e = 0; e < graph.num_edges(); ++e) {
        faces.push_back(edge_face(graph, x, e, tol_active));
    }
    return faces;
}

double energy_slope(double spread, double p) {
    if (p == 1.0) return 1.0;
    if (spread <= 0.0) return 0.0;
    return std::pow(spread, p - 1.0);
}

double energy(const Hypergraph& graph, std::span<const double> x, double p) {
    if (!(p >= 1.0)) throw Error(ErrorKind::InvalidArgument, "p must be >= 1");
    if (x.size() != static_cast<std::size_t>(graph.num_vertices())) {
        throw Error(ErrorKind::InvalidArgument, "potential length does not match vertex count");
    }
    double sum = 0.0;
    for (const Edge& edge : graph.edges()) {
        sum += edge.weight * std::pow(edge_spread(edge, x), p);
    }
    return sum / p;
}

Vec assemble_subgradient(const Hypergraph& graph, std::span<const EdgeFace> faces,
                         std::span<const EdgeCoefficients> coefficients, double p) {
    Vec out(graph.num_vertices(), 0.0);
    for (std::size_t k = 0; k < faces.size(); ++k) {
        const EdgeFace& face = faces[k];
        const double scale = graph.edge(face.edge).weight * energy_slope(face.spread, p);
        if (scale == 0.0) continue;
        const EdgeCoefficients& c = coefficients[k];
        for (std::size_t i = 0; i < face.argmax.size(); ++i) out[face.argmax[i]] += scale * c.lambda[i];
        for (std::size_t i = 0; i < face.argmin.size(); ++i) out[face.argmin[i]] -= scale * c.mu[i];
    }
    return out;
}

SubgradientPoint canonical_subgradient(const Hypergraph& graph, std::span<const double> x, double p,
                                       double tol_active) {
    if (!(p >= 1.0)) throw Error(ErrorKind::InvalidArgument, "p must be >= 1");
    SubgradientPoint point;
    point.faces = edge_faces(graph, x, tol_active);
    point.coefficients.reserve(point.faces.size());
    for (const EdgeFace& face : point.faces) {
        EdgeCoefficients c;
        c.lambda.assign(face.argmax.size(), 1.0 / static_cast<double>(face.argmax.size()));
        c.mu.assign(face.argmin.size(), 1.0 / static_cast<double>(face.argmin.size()));
        point.coefficients.push_back(std::move(c));
    }
    point.vector = assemble_subgradient(graph, point.faces, point.coefficients, p);
    return point;
}

SubgradientPoint canonical_subgradient(const Hypergraph& graph, std::span<const double> x, double p) {
    return canonical_subgradient(graph, x, p, default_active_tolerance(x));
}

Vec graph_laplacian_check(const Hypergraph& graph, std::span<const double> x) {
    if (!graph.is_ordinary_graph()) {
        throw Error(ErrorKind::NotAnOrdinaryGraph, "every edge must contain exactly two vertices");
    }
    const int n = graph.num_vertices();
    std::vector<double> degree(n, 0.0);
    std::vector<std::vector<double>> adjacency(n, std::vector<double>(n, 0.0));
    for (const Edge& edge : graph.edges()) {
        const int u = edge.vertices[0];
        const int v = edge.vertices[1];
        adjacency[u][v] += edge.weight;
        adjacency[v][u] += edge.weight;
        degree[u] += edge.weight;
        degree[v] += edge.weight;
    }
    Vec out(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double ax = 0.0;
        for (int j = 0; j < n; ++j) ax += adjacency[i][j] * x[j];
        out[i] = degree[i] * x[i] - ax;
    }
    return out;
}

}  // namespace hyperlap

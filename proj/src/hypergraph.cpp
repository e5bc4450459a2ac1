#include "hyperlap/hypergraph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

#include "hyperlap/error.hpp"

namespace hyperlap {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::EmptyEdge: return "EmptyEdge";
        case ErrorKind::SingletonEdge: return "SingletonEdge";
        case ErrorKind::NonpositiveWeight: return "NonpositiveWeight";
        case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorKind::NoEdges: return "NoEdges";
        case ErrorKind::NotAnOrdinaryGraph: return "NotAnOrdinaryGraph";
        case ErrorKind::NonConvergence: return "NonConvergence";
        case ErrorKind::IncompatibleForcing: return "IncompatibleForcing";
        case ErrorKind::GridMismatch: return "GridMismatch";
        case ErrorKind::Parse: return "Parse";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

namespace {

std::string edge_label(std::size_t e) { return "edge " + std::to_string(e + 1); }

}  // namespace

Hypergraph::Hypergraph(int num_vertices, std::vector<Edge> edges) : n_(num_vertices) {
    if (num_vertices <= 0) {
        throw Error(ErrorKind::InvalidArgument, "vertex count must be positive");
    }
    edges_.reserve(edges.size());
    for (std::size_t e = 0; e < edges.size(); ++e) {
        Edge& edge = edges[e];
        if (edge.vertices.empty()) {
            throw Error(ErrorKind::EmptyEdge, edge_label(e) + " has no vertices");
        }
        std::vector<int> distinct;
        distinct.reserve(edge.vertices.size());
        for (int v : edge.vertices) {
            if (v < 0 || v >= n_) {
                throw Error(ErrorKind::IndexOutOfRange,
                            edge_label(e) + " references vertex " + std::to_string(v + 1) +
                                " outside 1.." + std::to_string(n_));
            }
            if (std::find(distinct.begin(), distinct.end(), v) == distinct.end()) {
                distinct.push_back(v);
            }
        }
        if (distinct.size() < 2) {
            throw Error(ErrorKind::SingletonEdge, edge_label(e) + " has fewer than two distinct vertices");
        }
        if (!(edge.weight > 0.0) || !std::isfinite(edge.weight)) {
            throw Error(ErrorKind::NonpositiveWeight,
                        edge_label(e) + " has non-positive weight " + std::to_string(edge.weight));
        }
        edges_.push_back(Edge{std::move(distinct), edge.weight});
    }
}

double Hypergraph::min_weight() const {
    if (edges_.empty()) throw Error(ErrorKind::NoEdges, "hypergraph has no edges");
    double w = std::numeric_limits<double>::infinity();
    for (const Edge& e : edges_) w = std::min(w, e.weight);
    return w;
}

double Hypergraph::max_weight() const {
    if (edges_.empty()) throw Error(ErrorKind::NoEdges, "hypergraph has no edges");
    double w = 0.0;
    for (const Edge& e : edges_) w = std::max(w, e.weight);
    return w;
}

bool Hypergraph::is_ordinary_graph() const noexcept {
    return std::all_of(edges_.begin(), edges_.end(),
                       [](const Edge& e) { return e.vertices.size() == 2; });
}

Hypergraph validate(const RawHypergraph& raw) {
    if (raw.num_vertices <= 0 || raw.num_vertices > std::numeric_limits<int>::max()) {
        throw Error(ErrorKind::InvalidArgument, "vertex count must be a positive integer");
    }
    const int n = static_cast<int>(raw.num_vertices);
    std::vector<Edge> edges;
    edges.reserve(raw.edges.size());
    for (std::size_t e = 0; e < raw.edges.size(); ++e) {
        Edge edge;
        edge.weight = raw.edges[e].weight;
        for (long v : raw.edges[e].vertices) {
            if (v < 1 || v > n) {
                throw Error(ErrorKind::IndexOutOfRange, edge_label(e) + " references vertex " +
                                                            std::to_string(v) + " outside 1.." +
                                                            std::to_string(n));
            }
            edge.vertices.push_back(static_cast<int>(v - 1));
        }
        edges.push_back(std::move(edge));
    }
    return Hypergraph(n, std::move(edges));
}

ComponentPartition connected_components(const Hypergraph& graph) {
    const int n = graph.num_vertices();
    std::vector<std::vector<std::size_t>> incident(n);
    for (std::size_t e = 0; e < graph.num_edges(); ++e) {
        for (int v : graph.edge(e).vertices) incident[v].push_back(e);
    }

    ComponentPartition partition;
    partition.component_of.assign(n, -1);
    std::vector<bool> edge_seen(graph.num_edges(), false);
    for (int root = 0; root < n; ++root) {
        if (partition.component_of[root] >= 0) continue;
        const int id = static_cast<int>(partition.components.size());
        std::vector<int> members;
        std::queue<int> frontier;
        frontier.push(root);
        partition.component_of[root] = id;
        while (!frontier.empty()) {
            const int u = frontier.front();
            frontier.pop();
            members.push_back(u);
            for (std::size_t e : incident[u]) {
                if (edge_seen[e]) continue;
                edge_seen[e] = true;
                for (int v : graph.edge(e).vertices) {
                    if (partition.component_of[v] < 0) {
                        partition.component_of[v] = id;
                        frontier.push(v);
                    }
                }
            }
        }
        std::sort(members.begin(), members.end());
        partition.components.push_back(std::move(members));
    }
    return partition;
}

std::vector<double> component_means(std::span<const double> x, const ComponentPartition& partition) {
    if (x.size() != partition.component_of.size()) {
        throw Error(ErrorKind::InvalidArgument, "potential length does not match partition");
    }
    std::vector<double> means;
    means.reserve(partition.size());
    // Mean taken as first entry plus mean deviation: exact on constant input,
    // which makes averaging idempotent in floating point.
    for (const auto& component : partition.components) {
        const double pivot = x[component.front()];
        double deviation = 0.0;
        for (int v : component) deviation += x[v] - pivot;
        means.push_back(pivot + deviation / static_cast<double>(component.size()));
    }
    return means;
}

Vec component_average(std::span<const double> x, const ComponentPartition& partition) {
    const std::vector<double> means = component_means(x, partition);
    Vec out(x.size());
    for (std::size_t v = 0; v < x.size(); ++v) out[v] = means[partition.component_of[v]];
    return out;
}

double poincare_constant(const Hypergraph& graph, const ComponentPartition& partition, double p) {
    if (!(p >= 1.0)) throw Error(ErrorKind::InvalidArgument, "p must be >= 1");
    const double min_w = graph.min_weight();
    double sum = 0.0;
    for (const auto& component : partition.components) {
        sum += std::pow(static_cast<double>(component.size()), 2.0 - 1.0 / p);
    }
    return std::pow(sum, p) / min_w;
}

std::vector<Vec> zero_eigenspace_basis(const ComponentPartition& partition) {
    std::vector<Vec> basis;
    basis.reserve(partition.size());
    for (const auto& component : partition.components) {
        Vec indicator(partition.component_of.size(), 0.0);
        for (int v : component) indicator[v] = 1.0;
        basis.push_back(std::move(indicator));
    }
    return basis;
}

}  // namespace hyperlap

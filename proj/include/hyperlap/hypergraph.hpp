#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hyperlap {

// A point of R^V. Indexed by 0-based vertex id.
using Vec = std::vector<double>;

struct Edge {
    std::vector<int> vertices;  // 0-based, distinct, in input order
    double weight = 1.0;

    bool operator==(const Edge&) const = default;
};

// Edge as read from an external source: 1-based, possibly with repeats.
struct RawEdge {
    std::vector<long> vertices;
    double weight = 1.0;
};

struct RawHypergraph {
    long num_vertices = 0;
    std::vector<RawEdge> edges;
};

/// Weighted hypergraph G = (V, E, w). Immutable once built; every edge has at
/// least two distinct vertices and a strictly positive weight. Edge order is
/// kept as supplied.
class Hypergraph {
public:
    /// Builds from 0-based edges. Repeated vertices inside an edge collapse.
    /// Throws Error (EmptyEdge, SingletonEdge, NonpositiveWeight,
    /// IndexOutOfRange) naming the first offending edge.
    Hypergraph(int num_vertices, std::vector<Edge> edges);

    int num_vertices() const noexcept { return n_; }
    std::size_t num_edges() const noexcept { return edges_.size(); }
    std::span<const Edge> edges() const noexcept { return edges_; }
    const Edge& edge(std::size_t e) const { return edges_.at(e); }

    double min_weight() const;  // throws NoEdges on an edgeless graph
    double max_weight() const;

    bool is_ordinary_graph() const noexcept;

    friend bool operator==(const Hypergraph&, const Hypergraph&) = default;

private:
    int n_;
    std::vector<Edge> edges_;
};

/// Converts 1-based raw input into a validated Hypergraph.
Hypergraph validate(const RawHypergraph& raw);

struct ComponentPartition {
    std::vector<std::vector<int>> components;  // each sorted ascending
    std::vector<int> component_of;             // vertex -> component index

    std::size_t size() const noexcept { return components.size(); }
};

/// Components ordered by least contained vertex; isolated vertices become
/// singleton components.
ComponentPartition connected_components(const Hypergraph& graph);

/// Replaces every entry by the mean of x over its component.
Vec component_average(std::span<const double> x, const ComponentPartition& partition);

/// Per-component means, in component order.
std::vector<double> component_means(std::span<const double> x, const ComponentPartition& partition);

/// (sum_j |S_j|^(2 - 1/p))^p / min_e w(e).
double poincare_constant(const Hypergraph& graph, const ComponentPartition& partition, double p);

/// Indicator vectors of the components; they span the kernel of L_{G,p}.
std::vector<Vec> zero_eigenspace_basis(const ComponentPartition& partition);

}  // namespace hyperlap

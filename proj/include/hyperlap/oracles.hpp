#pragma once

// Independent reference computations used by the test suites and by the
// `verify` subcommand. Nothing here calls into the solvers it is used to check.

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "hyperlap/hypergraph.hpp"
#include "hyperlap/projection.hpp"

namespace hyperlap::oracle {

using Rng = std::mt19937_64;

struct RandomGraphSpec {
    int min_vertices = 2;
    int max_vertices = 8;
    int min_edges = 1;
    int max_edges = 6;
    int max_edge_size = 4;
    double min_weight = 0.25;
    double max_weight = 4.0;
};

Hypergraph random_hypergraph(Rng& rng, const RandomGraphSpec& spec = {});

/// Ordinary graph with small integer weights, so (D - A)x and the canonical
/// subgradient are computed without rounding for integer x.
Hypergraph random_integer_graph(Rng& rng, int max_vertices, int max_edges);

Vec random_vector(Rng& rng, int n, double scale = 1.0);
Vec random_integer_vector(Rng& rng, int n, int bound);

/// Face product on 2..6 coordinates with 1..3 terms whose active sets have at
/// most three members; sized for the brute-force oracle.
FaceProduct random_face(Rng& rng);

/// Vertex-to-vertex reachability by transitive closure of the edge relation.
std::vector<std::vector<bool>> reachability(const Hypergraph& graph);

/// Nearest point of a face product to `target` by block-wise barycentric grid
/// search (step 1e-2, refined around the best cell) cycled over the simplex
/// factors. Intended for faces whose active sets have at most three vertices.
Vec brute_force_nearest(const FaceProduct& face, std::span<const double> target);

/// Every extreme point of a face product (product of choices). Small faces only.
std::vector<Vec> extreme_points(const FaceProduct& face);

/// Implicit Euler Y_{k+1} + dt k Y_{k+1}^(p/2) = Y_k, solved by bisection.
double implicit_envelope_step(double previous, double rate, double p, double dt);

}  // namespace hyperlap::oracle

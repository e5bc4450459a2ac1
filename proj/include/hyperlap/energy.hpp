#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hyperlap/hypergraph.hpp"

namespace hyperlap {

/// Active geometry of one edge at a point x: the spread f_e(x) and the vertex
/// sets attaining (within `tolerance`) the max and the min of x on the edge.
/// These sets determine the face of B_e that is the subdifferential of f_e.
struct EdgeFace {
    std::size_t edge = 0;
    double spread = 0.0;
    std::vector<int> argmax;
    std::vector<int> argmin;
    double tolerance = 0.0;
};

/// Per-edge convex coefficients: `lambda` over the edge's argmax set and `mu`
/// over its argmin set, each summing to one.
struct EdgeCoefficients {
    std::vector<double> lambda;
    std::vector<double> mu;
};

/// One element of L_{G,p}(x) together with the coefficients that certify it.
struct SubgradientPoint {
    Vec vector;
    std::vector<EdgeFace> faces;
    std::vector<EdgeCoefficients> coefficients;
};

/// 1e-9 * (1 + |x|_inf): relative tie detection for active sets.
double default_active_tolerance(std::span<const double> x);

double edge_spread(const Edge& edge, std::span<const double> x);

EdgeFace edge_face(const Hypergraph& graph, std::span<const double> x, std::size_t e,
                   double tol_active);

std::vector<EdgeFace> edge_faces(const Hypergraph& graph, std::span<const double> x,
                                 double tol_active);

/// g'(f) for g(s) = s^p / p, i.e. f^(p-1), with 0^0 = 1 so that p = 1 keeps the
/// full face at zero spread.
double energy_slope(double spread, double p);

/// phi_{G,p}(x) = (1/p) sum_e w(e) f_e(x)^p.
double energy(const Hypergraph& graph, std::span<const double> x, double p);

/// Selection of L_{G,p}(x) with uniform coefficients on every active set.
/// Odd in x; not the minimal section in general.
SubgradientPoint canonical_subgradient(const Hypergraph& graph, std::span<const double> x, double p,
                                       double tol_active);
SubgradientPoint canonical_subgradient(const Hypergraph& graph, std::span<const double> x, double p);

/// Rebuilds sum_e w(e) f_e^(p-1) (sum lambda_u 1_u - sum mu_v 1_v) from faces
/// and coefficients.
Vec assemble_subgradient(const Hypergraph& graph, std::span<const EdgeFace> faces,
                         std::span<const EdgeCoefficients> coefficients, double p);

/// (D - A) x for an ordinary graph (every edge has two vertices), evaluated as
/// d_i x_i - sum_j w_ij x_j. Throws NotAnOrdinaryGraph otherwise.
Vec graph_laplacian_check(const Hypergraph& graph, std::span<const double> x);

}  // namespace hyperlap

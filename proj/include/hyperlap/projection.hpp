#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hyperlap/energy.hpp"
#include "hyperlap/hypergraph.hpp"

namespace hyperlap {

/// One factor s * (conv{1_u : u in plus} - conv{1_v : v in minus}).
struct FaceTerm {
    std::size_t edge = 0;
    double scale = 0.0;
    std::vector<int> plus;
    std::vector<int> minus;
};

/// Minkowski sum of FaceTerms in R^dimension. Built from a point x it is the
/// set L_{G,p}(x).
struct FaceProduct {
    int dimension = 0;
    std::vector<FaceTerm> terms;
};

/// Terms with scale w(e) f_e(x)^(p-1); zero-scale edges are dropped.
FaceProduct face_product(const Hypergraph& graph, std::span<const EdgeFace> faces, double p);
FaceProduct face_product(const Hypergraph& graph, std::span<const double> x, double p,
                         double tol_active);

struct ProjectionOptions {
    double tol_opt = 1e-10;  // on the Wolfe gap z.(z - w), squared-norm units
    int max_iterations = 10000;
    // Positive: also stop once the distance is known to lie on one side of
    // this value (the iterate norm bounds it from above, the gap from below).
    double accept_distance = 0.0;
};

struct ProjectionResult {
    Vec point;                                   // element of the face product
    std::vector<EdgeCoefficients> coefficients;  // aligned with FaceProduct::terms
    double distance = 0.0;                       // |point - target|
    double gap = 0.0;                            // certified optimality gap
    int iterations = 0;
};

/// Nearest point of `face` to `target` in l2, by Wolfe's min-norm-point
/// iteration on face - target. Throws NonConvergence when the iteration cap is
/// reached or the active corral stalls above tolerance.
ProjectionResult nearest_point(const FaceProduct& face, std::span<const double> target,
                               const ProjectionOptions& options = {});

/// Least-norm element of the face product (the minimal section when the face
/// product is L_{G,p}(x)).
ProjectionResult min_norm_point(const FaceProduct& face, const ProjectionOptions& options = {});

/// l2 distance from v to the face product.
double distance_to_face(const FaceProduct& face, std::span<const double> v,
                        const ProjectionOptions& options = {});

/// Expresses a projection result as a SubgradientPoint of G at the faces it
/// was built from. Dropped (zero-scale) edges get uniform coefficients.
SubgradientPoint to_subgradient(const Hypergraph& graph, std::span<const EdgeFace> faces,
                                const FaceProduct& face, const ProjectionResult& result, double p);

}  // namespace hyperlap

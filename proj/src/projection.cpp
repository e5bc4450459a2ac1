#include "hyperlap/projection.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdio>
#include <string>

#include "hyperlap/error.hpp"

namespace hyperlap {

namespace {

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

// Extreme point of the face product: one vertex of each plus simplex and one
// of each minus simplex, identified by positions into the term's sets.
struct Atom {
    std::vector<int> plus_pos;
    std::vector<int> minus_pos;
    Eigen::VectorXd q;  // extreme point minus target

    bool same_choice(const Atom& other) const {
        return plus_pos == other.plus_pos && minus_pos == other.minus_pos;
    }
};

Atom linear_minimizer(const FaceProduct& face, const Eigen::VectorXd& direction,
                      const Eigen::VectorXd& target) {
    Atom atom;
    atom.q = -target;
    atom.plus_pos.resize(face.terms.size());
    atom.minus_pos.resize(face.terms.size());
    for (std::size_t k = 0; k < face.terms.size(); ++k) {
        const FaceTerm& term = face.terms[k];
        int best_plus = 0;
        for (int i = 1; i < static_cast<int>(term.plus.size()); ++i) {
            if (direction[term.plus[i]] < direction[term.plus[best_plus]]) best_plus = i;
        }
        int best_minus = 0;
        for (int i = 1; i < static_cast<int>(term.minus.size()); ++i) {
            if (direction[term.minus[i]] > direction[term.minus[best_minus]]) best_minus = i;
        }
        atom.plus_pos[k] = best_plus;
        atom.minus_pos[k] = best_minus;
        atom.q[term.plus[best_plus]] += term.scale;
        atom.q[term.minus[best_minus]] -= term.scale;
    }
    return atom;
}

// Weights of the point of least norm in the affine hull of the corral.
Eigen::VectorXd affine_minimizer(const std::vector<Atom>& corral) {
    const Eigen::Index k = static_cast<Eigen::Index>(corral.size());
    Eigen::VectorXd alpha(k);
    if (k == 1) {
        alpha[0] = 1.0;
        return alpha;
    }
    const Eigen::Index n = corral.front().q.size();
    Eigen::MatrixXd directions(n, k - 1);
    for (Eigen::Index i = 1; i < k; ++i) directions.col(i - 1) = corral[i].q - corral[0].q;
    const Eigen::VectorXd beta = directions.colPivHouseholderQr().solve(-corral[0].q);
    alpha[0] = 1.0 - beta.sum();
    alpha.tail(k - 1) = beta;
    return alpha;
}

Eigen::VectorXd combine(const std::vector<Atom>& corral, const Eigen::VectorXd& weights) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(corral.front().q.size());
    for (std::size_t i = 0; i < corral.size(); ++i) x += weights[static_cast<Eigen::Index>(i)] * corral[i].q;
    return x;
}

constexpr double kWeightFloor = 1e-14;

}  // namespace

FaceProduct face_product(const Hypergraph& graph, std::span<const EdgeFace> faces, double p) {
    FaceProduct product;
    product.dimension = graph.num_vertices();
    for (const EdgeFace& face : faces) {
        const double scale = graph.edge(face.edge).weight * energy_slope(face.spread, p);
        if (scale == 0.0) continue;
        product.terms.push_back(FaceTerm{face.edge, scale, face.argmax, face.argmin});
    }
    return product;
}

FaceProduct face_product(const Hypergraph& graph, std::span<const double> x, double p,
                         double tol_active) {
    const std::vector<EdgeFace> faces = edge_faces(graph, x, tol_active);
    return face_product(graph, faces, p);
}

ProjectionResult nearest_point(const FaceProduct& face, std::span<const double> target,
                               const ProjectionOptions& options) {
    if (!(options.tol_opt > 0.0)) throw Error(ErrorKind::InvalidArgument, "tol_opt must be > 0");
    if (target.size() != static_cast<std::size_t>(face.dimension)) {
        throw Error(ErrorKind::InvalidArgument, "target length does not match face dimension");
    }
    const Eigen::Index n = face.dimension;
    const Eigen::VectorXd goal = Eigen::Map<const Eigen::VectorXd>(target.data(), n);

    ProjectionResult result;
    if (face.terms.empty()) {
        result.point.assign(n, 0.0);
        result.distance = goal.norm();
        return result;
    }

    std::vector<Atom> corral{linear_minimizer(face, -goal, goal)};
    Eigen::VectorXd weights = Eigen::VectorXd::Ones(1);
    Eigen::VectorXd x = corral.front().q;
    double scale_sq = x.squaredNorm();

    bool converged = false;
    double gap = 0.0;
    int iteration = 0;
    for (; iteration < options.max_iterations; ++iteration) {
        Atom candidate = linear_minimizer(face, x, goal);
        scale_sq = std::max(scale_sq, candidate.q.squaredNorm());
        gap = x.squaredNorm() - x.dot(candidate.q);
        // Below 64 ulp of |x| |q| the gap is rounding noise.
        const double noise = 64.0 * std::numeric_limits<double>::epsilon() * x.norm() * std::sqrt(scale_sq);
        if (gap <= options.tol_opt || gap <= noise) {
            converged = true;
            break;
        }
        if (options.accept_distance > 0.0) {
            const double norm = x.norm();
            if (norm <= options.accept_distance || norm * norm - gap > options.accept_distance * norm) {
                converged = true;
                break;
            }
        }
        const bool repeated = std::any_of(corral.begin(), corral.end(),
                                          [&](const Atom& a) { return a.same_choice(candidate); });
        if (repeated) {
            // Rounding floor of the corral solve; the gap cannot shrink further.
            converged = gap <= 1e-13 * (1.0 + scale_sq);
            break;
        }
        corral.push_back(std::move(candidate));
        weights.conservativeResize(static_cast<Eigen::Index>(corral.size()));
        weights[weights.size() - 1] = 0.0;

        for (;;) {
            const Eigen::VectorXd alpha = affine_minimizer(corral);
            if (alpha.minCoeff() > kWeightFloor) {
                weights = alpha;
                break;
            }
            // Step from the current weights toward alpha until a weight hits zero.
            double theta = 1.0;
            Eigen::Index limiting = -1;
            for (Eigen::Index i = 0; i < alpha.size(); ++i) {
                if (alpha[i] > kWeightFloor) continue;
                const double denom = weights[i] - alpha[i];
                const double ratio = denom > 0.0 ? weights[i] / denom : 0.0;
                if (limiting < 0 || ratio < theta) {
                    theta = std::min(theta, ratio);
                    limiting = i;
                }
            }
            weights = (1.0 - theta) * weights + theta * alpha;
            weights[limiting] = 0.0;
            std::vector<Atom> kept;
            std::vector<double> kept_weights;
            for (Eigen::Index i = 0; i < weights.size(); ++i) {
                if (weights[i] > kWeightFloor) {
                    kept.push_back(std::move(corral[static_cast<std::size_t>(i)]));
                    kept_weights.push_back(weights[i]);
                }
            }
            corral = std::move(kept);
            weights = Eigen::Map<Eigen::VectorXd>(kept_weights.data(),
                                                  static_cast<Eigen::Index>(kept_weights.size()));
            weights /= weights.sum();
        }
        x = combine(corral, weights);
    }

    if (!converged) {
        throw NonConvergence("min-norm point did not converge after " + std::to_string(iteration) +
                                 " iterations (gap " + sci(gap) + ")",
                             gap);
    }

    result.iterations = iteration;
    result.gap = std::max(gap, 0.0);
    result.distance = x.norm();
    const Eigen::VectorXd point = x + goal;
    result.point.assign(point.data(), point.data() + n);
    result.coefficients.resize(face.terms.size());
    for (std::size_t k = 0; k < face.terms.size(); ++k) {
        result.coefficients[k].lambda.assign(face.terms[k].plus.size(), 0.0);
        result.coefficients[k].mu.assign(face.terms[k].minus.size(), 0.0);
    }
    for (std::size_t i = 0; i < corral.size(); ++i) {
        const double w = weights[static_cast<Eigen::Index>(i)];
        for (std::size_t k = 0; k < face.terms.size(); ++k) {
            result.coefficients[k].lambda[corral[i].plus_pos[k]] += w;
            result.coefficients[k].mu[corral[i].minus_pos[k]] += w;
        }
    }
    return result;
}

ProjectionResult min_norm_point(const FaceProduct& face, const ProjectionOptions& options) {
    const Vec origin(face.dimension, 0.0);
    return nearest_point(face, origin, options);
}

double distance_to_face(const FaceProduct& face, std::span<const double> v,
                        const ProjectionOptions& options) {
    return nearest_point(face, v, options).distance;
}

SubgradientPoint to_subgradient(const Hypergraph& graph, std::span<const EdgeFace> faces,
                                const FaceProduct& face, const ProjectionResult& result, double p) {
    SubgradientPoint point;
    point.faces.assign(faces.begin(), faces.end());
    point.coefficients.resize(faces.size());
    for (std::size_t i = 0; i < faces.size(); ++i) {
        point.coefficients[i].lambda.assign(faces[i].argmax.size(), 1.0 / faces[i].argmax.size());
        point.coefficients[i].mu.assign(faces[i].argmin.size(), 1.0 / faces[i].argmin.size());
    }
    for (std::size_t k = 0; k < face.terms.size(); ++k) {
        for (std::size_t i = 0; i < faces.size(); ++i) {
            if (faces[i].edge == face.terms[k].edge) point.coefficients[i] = result.coefficients[k];
        }
    }
    point.vector = assemble_subgradient(graph, point.faces, point.coefficients, p);
    return point;
}

}  // namespace hyperlap

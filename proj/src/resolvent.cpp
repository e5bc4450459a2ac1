#include "hyperlap/resolvent.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <string>

#include "hyperlap/error.hpp"
#include "hyperlap/projection.hpp"

namespace hyperlap {

namespace {

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

// Level a(m) at which removing mass m from the top of `values` leaves the
// clamped entries: sum_i (v_i - a)_+ = m. Piecewise linear and decreasing.
class TopLevel {
public:
    explicit TopLevel(std::span<const double> values) : sorted_(values.begin(), values.end()) {
        std::sort(sorted_.begin(), sorted_.end(), std::greater<>());
        prefix_.resize(sorted_.size());
        breaks_.resize(sorted_.size());
        double sum = 0.0;
        for (std::size_t j = 0; j < sorted_.size(); ++j) {
            breaks_[j] = sum - static_cast<double>(j) * sorted_[j];
            sum += sorted_[j];
            prefix_[j] = sum;
        }
    }

    std::span<const double> breaks() const { return breaks_; }

    std::size_t piece(double m) const {
        std::size_t j = 0;
        while (j + 1 < breaks_.size() && breaks_[j + 1] <= m) ++j;
        return j;
    }

    double level(double m, std::size_t j) const {
        return (prefix_[j] - m) / static_cast<double>(j + 1);
    }

    double level(double m) const { return level(m, piece(m)); }

private:
    std::vector<double> sorted_;
    std::vector<double> prefix_;
    std::vector<double> breaks_;
};

// Groups of vertices whose values lie within `fraction` of their component's
// range from a neighbour in sorted order, never crossing component boundaries.
std::vector<int> cluster(std::span<const double> x, const ComponentPartition& partition,
                         double fraction, int& count) {
    std::vector<double> width(partition.size(), 0.0);
    for (std::size_t c = 0; c < partition.size(); ++c) {
        double lo = x[partition.components[c].front()];
        double hi = lo;
        for (int v : partition.components[c]) {
            lo = std::min(lo, x[v]);
            hi = std::max(hi, x[v]);
        }
        width[c] = fraction * (hi - lo);
    }
    std::vector<int> order(x.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const int ca = partition.component_of[a];
        const int cb = partition.component_of[b];
        return ca != cb ? ca < cb : x[a] < x[b];
    });
    std::vector<int> group(x.size());
    count = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const bool fresh = i == 0 ||
                           partition.component_of[order[i]] != partition.component_of[order[i - 1]] ||
                           x[order[i]] - x[order[i - 1]] > width[partition.component_of[order[i]]];
        if (fresh) ++count;
        group[order[i]] = count - 1;
    }
    return group;
}

// Common refinement of two groupings.
std::pair<std::vector<int>, int> refine(const std::vector<int>& a, const std::vector<int>& b) {
    std::map<std::pair<int, int>, int> ids;
    std::vector<int> group(a.size());
    for (std::size_t v = 0; v < a.size(); ++v) {
        group[v] = ids.try_emplace({a[v], b[v]}, static_cast<int>(ids.size())).first->second;
    }
    return {std::move(group), static_cast<int>(ids.size())};
}

// Minimizes 1/2 |x - target|^2 + step phi(x) over x constant on each group,
// by damped Newton. Exact ties inside a group survive to the output.
Vec polish(const Hypergraph& graph, std::span<const double> target, std::span<const double> start,
           const std::vector<int>& group, int count, double step, double p) {
    const std::size_t n = target.size();
    Eigen::VectorXd size = Eigen::VectorXd::Zero(count);
    Eigen::VectorXd pull = Eigen::VectorXd::Zero(count);
    Eigen::VectorXd u = Eigen::VectorXd::Zero(count);
    for (std::size_t v = 0; v < n; ++v) {
        size[group[v]] += 1.0;
        pull[group[v]] += target[v];
        u[group[v]] += start[v];
    }
    u = u.cwiseQuotient(size);

    struct Span { int hi, lo; double w; };
    auto spans = [&](const Eigen::VectorXd& point) {
        std::vector<Span> out;
        for (const Edge& e : graph.edges()) {
            int hi = group[e.vertices.front()];
            int lo = hi;
            for (int v : e.vertices) {
                if (point[group[v]] > point[hi]) hi = group[v];
                if (point[group[v]] < point[lo]) lo = group[v];
            }
            if (hi != lo) out.push_back({hi, lo, e.weight});
        }
        return out;
    };
    auto objective = [&](const Eigen::VectorXd& point) {
        double value = 0.5 * point.cwiseProduct(size).dot(point) - pull.dot(point);
        for (const Span& s : spans(point)) value += step * s.w * std::pow(std::max(point[s.hi] - point[s.lo], 0.0), p) / p;
        return value;
    };

    for (int it = 0; it < 100; ++it) {
        Eigen::VectorXd gradient = size.cwiseProduct(u) - pull;
        Eigen::MatrixXd hessian = size.asDiagonal();
        for (const Span& s : spans(u)) {
            const double spread = u[s.hi] - u[s.lo];
            if (!(spread > 0.0)) continue;
            const double slope = step * s.w * energy_slope(spread, p);
            gradient[s.hi] += slope;
            gradient[s.lo] -= slope;
            if (p != 1.0) {
                const double curve = step * s.w * (p - 1.0) * std::pow(spread, p - 2.0);
                hessian(s.hi, s.hi) += curve;
                hessian(s.lo, s.lo) += curve;
                hessian(s.hi, s.lo) -= curve;
                hessian(s.lo, s.hi) -= curve;
            }
        }
        const Eigen::VectorXd direction = -hessian.ldlt().solve(gradient);
        if (!direction.allFinite()) break;
        const double current = objective(u);
        double t = 1.0;
        Eigen::VectorXd next = u + direction;
        while (t > 1e-12 && objective(next) > current + 1e-4 * t * gradient.dot(direction)) {
            t *= 0.5;
            next = u + t * direction;
        }
        const double moved = (next - u).lpNorm<Eigen::Infinity>();
        u = next;
        if (moved <= 1e-16 * u.lpNorm<Eigen::Infinity>()) break;
    }

    Vec x(n);
    for (std::size_t v = 0; v < n; ++v) x[v] = u[group[v]];
    return x;
}

}  // namespace

std::vector<double> single_edge_prox(std::span<const double> r, double c, double p) {
    const std::size_t k = r.size();
    std::vector<double> out(r.begin(), r.end());
    if (k < 2) return out;
    const auto [lo_it, hi_it] = std::minmax_element(r.begin(), r.end());
    if (*hi_it == *lo_it) return out;

    const double mean = std::accumulate(r.begin(), r.end(), 0.0) / static_cast<double>(k);
    double collapse_mass = 0.0;
    for (double v : r) collapse_mass += std::max(v - mean, 0.0);

    std::vector<double> negated(k);
    std::transform(r.begin(), r.end(), negated.begin(), std::negate<>());
    const TopLevel top(r);
    const TopLevel bottom(negated);  // bottom level is -bottom.level(m)

    auto spread_on = [&](double m, std::size_t j, std::size_t l) {
        return std::max(top.level(m, j) + bottom.level(m, l), 0.0);
    };

    double mass = 0.0;
    if (p == 1.0) {
        mass = std::min(c, collapse_mass);
    } else {
        std::vector<double> knots;
        for (double b : top.breaks()) if (b > 0.0 && b < collapse_mass) knots.push_back(b);
        for (double b : bottom.breaks()) if (b > 0.0 && b < collapse_mass) knots.push_back(b);
        knots.push_back(0.0);
        knots.push_back(collapse_mass);
        std::sort(knots.begin(), knots.end());
        knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

        // F(m) = m - c s(m)^(p-1) is increasing; locate the piece holding its root.
        mass = collapse_mass;
        for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
            const double a = knots[i];
            const double b = knots[i + 1];
            const double mid = 0.5 * (a + b);
            const std::size_t j = top.piece(mid);
            const std::size_t l = bottom.piece(mid);
            auto residual = [&](double m) { return m - c * std::pow(spread_on(m, j, l), p - 1.0); };
            if (residual(b) <= 0.0 && i + 2 < knots.size()) continue;
            if (p == 2.0) {
                const double inv = 1.0 / static_cast<double>(j + 1) + 1.0 / static_cast<double>(l + 1);
                const double s0 = top.level(0.0, j) + bottom.level(0.0, l);
                mass = std::clamp(c * s0 / (1.0 + c * inv), a, b);
            } else {
                double lo = a;
                double hi = b;
                for (int it = 0; it < 200 && lo < hi; ++it) {
                    const double m = 0.5 * (lo + hi);
                    if (m <= lo || m >= hi) break;
                    (residual(m) > 0.0 ? hi : lo) = m;
                }
                mass = 0.5 * (lo + hi);
            }
            break;
        }
    }

    if (mass >= collapse_mass) {
        std::fill(out.begin(), out.end(), mean);
        return out;
    }
    const double upper = top.level(mass);
    const double lower = -bottom.level(mass);
    if (!(upper > lower)) {
        std::fill(out.begin(), out.end(), mean);
        return out;
    }
    for (double& v : out) v = std::clamp(v, lower, upper);
    return out;
}

ProxResult shifted_prox(const Hypergraph& graph, std::span<const double> y, double lambda,
                        double shift, double p, const ProxOptions& options) {
    if (!(lambda > 0.0)) throw Error(ErrorKind::InvalidArgument, "lambda must be > 0");
    if (!(shift >= 0.0)) throw Error(ErrorKind::InvalidArgument, "shift must be >= 0");
    if (!(p >= 1.0)) throw Error(ErrorKind::InvalidArgument, "p must be >= 1");
    if (!(options.tol_opt > 0.0)) throw Error(ErrorKind::InvalidArgument, "tol_opt must be > 0");
    const std::size_t n = static_cast<std::size_t>(graph.num_vertices());
    if (y.size() != n) throw Error(ErrorKind::InvalidArgument, "y length does not match vertex count");

    // (1 + shift) x + lambda L(x) ∋ y  <=>  x + (lambda/a) L(x) ∋ y/a.
    const double a = 1.0 + shift;
    const double step = lambda / a;
    Vec target(y.begin(), y.end());
    if (a != 1.0) for (double& v : target) v /= a;

    ProxResult result;

    // Work relative to the component means, which the prox leaves unchanged.
    // Near-collapsed data keeps its full relative precision this way.
    const ComponentPartition partition = connected_components(graph);
    const std::vector<double> offset = component_means(target, partition);
    for (std::size_t v = 0; v < n; ++v) target[v] -= offset[partition.component_of[v]];
    int target_count = 0;
    const std::vector<int> target_ties = cluster(target, partition, 0.0, target_count);
    auto finish = [&](Vec x_centered, int sweeps) {
        for (std::size_t v = 0; v < n; ++v) x_centered[v] += offset[partition.component_of[v]];
        result.x = std::move(x_centered);
        result.iterations = sweeps;
        return result;
    };

    // Block coordinate ascent on the dual: x = target - step * sum_e z_e, each
    // block update is the exact single-edge prox.
    Vec x = target;
    std::vector<std::vector<double>> dual(graph.num_edges());
    for (std::size_t e = 0; e < graph.num_edges(); ++e) dual[e].assign(graph.edge(e).vertices.size(), 0.0);

    std::vector<double> local;
    // The gap is on squared norms; the residual is a distance.
    const ProjectionOptions projection{options.tol_opt * options.tol_opt, 10000, options.tol_opt};
    double best_residual = std::numeric_limits<double>::infinity();

    // Unexplained part of the implied subgradient at the last certified point.
    Vec pressure(n, 0.0);
    auto certify = [&](const Vec& x) {
        const double tol_active = options.tol_active >= 0.0 ? options.tol_active : default_active_tolerance(x);
        const std::vector<EdgeFace> faces = edge_faces(graph, x, tol_active);
        const FaceProduct face = face_product(graph, faces, p);
        Vec implied(n);
        for (std::size_t v = 0; v < n; ++v) implied[v] = (target[v] - x[v]) / step;
        ProjectionResult projected;
        try {
            projected = nearest_point(face, implied, projection);
        } catch (const NonConvergence&) {
            std::fill(pressure.begin(), pressure.end(), 0.0);
            return std::numeric_limits<double>::infinity();
        }
        for (std::size_t v = 0; v < n; ++v) pressure[v] = implied[v] - projected.point[v];
        result.residual = projected.distance;
        result.certificate = to_subgradient(graph, faces, face, projected, p);
        return projected.distance;
    };

    const double floor = 4.0 * std::numeric_limits<double>::epsilon();
    for (int sweep = 1; sweep <= options.max_sweeps; ++sweep) {
        double change = 0.0;
        double magnitude = 0.0;
        for (std::size_t e = 0; e < graph.num_edges(); ++e) {
            const std::vector<int>& vertices = graph.edge(e).vertices;
            std::vector<double>& z = dual[e];
            local.resize(vertices.size());
            for (std::size_t i = 0; i < vertices.size(); ++i) local[i] = x[vertices[i]] + step * z[i];
            const std::vector<double> updated = single_edge_prox(local, step * graph.edge(e).weight, p);
            for (std::size_t i = 0; i < vertices.size(); ++i) {
                z[i] = (local[i] - updated[i]) / step;
                change = std::max(change, std::abs(updated[i] - x[vertices[i]]));
                magnitude = std::max(magnitude, std::abs(updated[i]));
                x[vertices[i]] = updated[i];
            }
        }
        const bool settled = change <= floor * magnitude;
        if (settled || sweep % options.check_every == 0 || graph.num_edges() <= 1) {
            const double residual = certify(x);
            best_residual = std::min(best_residual, residual);
            if (residual <= options.tol_opt) return finish(std::move(x), sweep);
            // Slow tail of the dual ascent: guess the tie pattern, solve for it
            // directly, and merge groups that the solve drives together. Exact
            // ties in the target usually persist, so they seed guesses too.
            std::vector<std::pair<std::vector<int>, int>> guesses;
            for (double fraction : {1e-2, 1e-4, 0.0}) {
                int count = 0;
                std::vector<int> group = cluster(x, partition, fraction, count);
                guesses.emplace_back(std::move(group), count);
            }
            guesses.emplace_back(target_ties, target_count);
            guesses.push_back(refine(target_ties, guesses[1].first));
            for (auto& [group, count] : guesses) {
                Vec guess = x;
                for (int round = 0; round < 8; ++round) {
                    Vec candidate = polish(graph, target, guess, group, count, step, p);
                    const double polished = certify(candidate);
                    best_residual = std::min(best_residual, polished);
                    if (polished <= options.tol_opt) return finish(std::move(candidate), sweep);
                    // Merge the closest groups first; a stalled line search
                    // can leave a would-be tie slightly open.
                    int merged = count;
                    std::vector<int> coarser;
                    for (double fraction : {1e-8, 1e-6, 1e-4}) {
                        coarser = cluster(candidate, partition, fraction, merged);
                        if (merged < count) break;
                    }
                    if (merged < count) {
                        group = std::move(coarser);
                        count = merged;
                        guess = std::move(candidate);
                        continue;
                    }
                    // Nothing to merge: vertices carrying most of the leftover
                    // pressure leave their group in its direction.
                    const double peak = *std::max_element(pressure.begin(), pressure.end(),
                                                          [](double a, double b) { return std::abs(a) < std::abs(b); });
                    if (peak == 0.0) break;
                    std::vector<int> side(n);
                    for (std::size_t v = 0; v < n; ++v) {
                        side[v] = pressure[v] > 0.5 * std::abs(peak) ? 1 : pressure[v] < -0.5 * std::abs(peak) ? -1 : 0;
                    }
                    auto [split, parts] = refine(group, side);
                    if (parts == count) break;
                    const auto [lo, hi] = std::minmax_element(candidate.begin(), candidate.end());
                    const double nudge = 1e-3 * (*hi - *lo > 0.0 ? *hi - *lo : std::abs(peak) * step);
                    for (std::size_t v = 0; v < n; ++v) candidate[v] += side[v] * nudge;
                    group = std::move(split);
                    count = parts;
                    guess = std::move(candidate);
                }
            }
            if (settled) break;
        }
    }
    throw NonConvergence("prox did not reach residual " + sci(options.tol_opt) +
                             " (best " + sci(best_residual) + ")",
                         best_residual);
}

ProxResult prox(const Hypergraph& graph, std::span<const double> y, double lambda, double p,
                const ProxOptions& options) {
    return shifted_prox(graph, y, lambda, 0.0, p, options);
}

}  // namespace hyperlap

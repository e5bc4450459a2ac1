#include "hyperlap/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace hyperlap::oracle {

Hypergraph random_hypergraph(Rng& rng, const RandomGraphSpec& spec) {
    std::uniform_int_distribution<int> vertex_count(spec.min_vertices, spec.max_vertices);
    const int n = vertex_count(rng);
    std::uniform_int_distribution<int> edge_count(spec.min_edges, spec.max_edges);
    const int m = edge_count(rng);
    std::uniform_int_distribution<int> edge_size(2, std::max(2, std::min(n, spec.max_edge_size)));
    std::uniform_real_distribution<double> weight(spec.min_weight, spec.max_weight);

    std::vector<int> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    std::vector<Edge> edges;
    for (int e = 0; e < m; ++e) {
        std::shuffle(pool.begin(), pool.end(), rng);
        const int k = edge_size(rng);
        edges.push_back(Edge{std::vector<int>(pool.begin(), pool.begin() + k), weight(rng)});
    }
    return Hypergraph(n, std::move(edges));
}

Hypergraph random_integer_graph(Rng& rng, int max_vertices, int max_edges) {
    const int n = std::uniform_int_distribution<int>(2, max_vertices)(rng);
    const int m = std::uniform_int_distribution<int>(1, max_edges)(rng);
    std::uniform_int_distribution<int> vertex(0, n - 1);
    std::uniform_int_distribution<int> weight(1, 5);
    std::vector<Edge> edges;
    for (int e = 0; e < m; ++e) {
        const int u = vertex(rng);
        int v = vertex(rng);
        while (v == u) v = vertex(rng);
        edges.push_back(Edge{{u, v}, static_cast<double>(weight(rng))});
    }
    return Hypergraph(n, std::move(edges));
}

Vec random_vector(Rng& rng, int n, double scale) {
    std::uniform_real_distribution<double> dist(-scale, scale);
    Vec x(n);
    for (double& v : x) v = dist(rng);
    return x;
}

Vec random_integer_vector(Rng& rng, int n, int bound) {
    std::uniform_int_distribution<int> dist(-bound, bound);
    Vec x(n);
    for (double& v : x) v = static_cast<double>(dist(rng));
    return x;
}

FaceProduct random_face(Rng& rng) {
    auto subset = [&](int n, int max_size) {
        std::vector<int> pool(n);
        std::iota(pool.begin(), pool.end(), 0);
        std::shuffle(pool.begin(), pool.end(), rng);
        const int k = std::uniform_int_distribution<int>(1, std::min(n, max_size))(rng);
        std::vector<int> chosen(pool.begin(), pool.begin() + k);
        std::sort(chosen.begin(), chosen.end());
        return chosen;
    };
    FaceProduct face;
    face.dimension = std::uniform_int_distribution<int>(2, 6)(rng);
    const int terms = std::uniform_int_distribution<int>(1, 3)(rng);
    std::uniform_real_distribution<double> scale(0.2, 3.0);
    for (int k = 0; k < terms; ++k) {
        FaceTerm term{static_cast<std::size_t>(k), scale(rng), {}, {}};
        term.plus = subset(face.dimension, 3);
        term.minus = subset(face.dimension, 3);
        face.terms.push_back(std::move(term));
    }
    return face;
}

std::vector<std::vector<bool>> reachability(const Hypergraph& graph) {
    const int n = graph.num_vertices();
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (int v = 0; v < n; ++v) reach[v][v] = true;
    for (const Edge& edge : graph.edges()) {
        for (int u : edge.vertices) {
            for (int v : edge.vertices) reach[u][v] = true;
        }
    }
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i) {
            if (!reach[i][k]) continue;
            for (int j = 0; j < n; ++j) {
                if (reach[k][j]) reach[i][j] = true;
            }
        }
    }
    return reach;
}

namespace {

struct Block {
    std::vector<int> vertices;
    double signed_scale;
    std::vector<double> weights;
};

void add_block(Vec& point, const Block& block, double factor) {
    for (std::size_t i = 0; i < block.vertices.size(); ++i) {
        point[block.vertices[i]] += factor * block.signed_scale * block.weights[i];
    }
}

// Objective restricted to one block: |base + signed_scale * sum w_i 1_{v_i}|^2
// up to the constant from coordinates the block does not touch.
double block_objective(const Vec& base, const Block& block, const std::vector<double>& w) {
    Vec local(block.vertices.size());
    for (std::size_t i = 0; i < block.vertices.size(); ++i) local[i] = base[block.vertices[i]];
    // Repeated vertices within a block cannot occur; each simplex is over distinct vertices.
    double total = 0.0;
    for (std::size_t i = 0; i < block.vertices.size(); ++i) {
        const double value = local[i] + block.signed_scale * w[i];
        total += value * value - local[i] * local[i];
    }
    return total;
}

// Grid search over the block simplex. After the first sweep the search starts
// from the previous weights and only refines locally; the block problem is convex.
std::vector<double> minimize_block(const Vec& base, const Block& block, bool warm) {
    const std::size_t m = block.vertices.size();
    if (m == 1) return {1.0};
    if (m > 3) throw std::invalid_argument("brute-force oracle supports active sets of size <= 3");

    auto weights_of = [m](double a, double b) {
        return m == 2 ? std::vector<double>{a, 1.0 - a} : std::vector<double>{a, b, 1.0 - a - b};
    };
    double step = 1e-2;
    double best_a = 0.0;
    double best_b = 0.0;
    double best = std::numeric_limits<double>::infinity();
    const int coarse = warm ? -1 : 100;
    if (warm) {
        best_a = block.weights[0];
        best_b = m == 2 ? 0.0 : block.weights[1];
        best = block_objective(base, block, block.weights);
        step = 1e-1;
    }
    for (int i = 0; i <= coarse; ++i) {
        const int j_max = m == 2 ? 0 : coarse - i;
        for (int j = 0; j <= j_max; ++j) {
            const double a = i * step;
            const double b = j * step;
            const double value = block_objective(base, block, weights_of(a, b));
            if (value < best) {
                best = value;
                best_a = a;
                best_b = b;
            }
        }
    }
    for (int level = 0; level < (warm ? 11 : 10); ++level) {
        const double fine = step / 10.0;
        const double center_a = best_a;
        const double center_b = best_b;
        for (int i = -10; i <= 10; ++i) {
            const int j_lo = m == 2 ? 0 : -10;
            const int j_hi = m == 2 ? 0 : 10;
            for (int j = j_lo; j <= j_hi; ++j) {
                const double a = center_a + i * fine;
                const double b = m == 2 ? 0.0 : center_b + j * fine;
                if (a < 0.0 || b < 0.0 || a + b > 1.0) continue;
                const double value = block_objective(base, block, weights_of(a, b));
                if (value < best) {
                    best = value;
                    best_a = a;
                    best_b = b;
                }
            }
        }
        step = fine;
    }
    return weights_of(best_a, best_b);
}

}  // namespace

Vec brute_force_nearest(const FaceProduct& face, std::span<const double> target) {
    std::vector<Block> blocks;
    for (const FaceTerm& term : face.terms) {
        blocks.push_back(Block{term.plus, term.scale,
                               std::vector<double>(term.plus.size(), 1.0 / term.plus.size())});
        blocks.push_back(Block{term.minus, -term.scale,
                               std::vector<double>(term.minus.size(), 1.0 / term.minus.size())});
    }
    Vec point(face.dimension, 0.0);
    for (const Block& block : blocks) add_block(point, block, 1.0);

    for (int sweep = 0; sweep < 5000; ++sweep) {
        double change = 0.0;
        for (Block& block : blocks) {
            add_block(point, block, -1.0);
            Vec base(face.dimension);
            for (int v = 0; v < face.dimension; ++v) base[v] = point[v] - target[v];
            const std::vector<double> weights = minimize_block(base, block, sweep > 0);
            for (std::size_t i = 0; i < weights.size(); ++i) {
                change = std::max(change, std::abs(weights[i] - block.weights[i]) * std::abs(block.signed_scale));
            }
            block.weights = weights;
            add_block(point, block, 1.0);
        }
        if (change < 1e-13) break;
    }
    return point;
}

std::vector<Vec> extreme_points(const FaceProduct& face) {
    std::vector<Vec> points{Vec(face.dimension, 0.0)};
    for (const FaceTerm& term : face.terms) {
        std::vector<Vec> next;
        for (const Vec& partial : points) {
            for (int u : term.plus) {
                for (int v : term.minus) {
                    Vec point = partial;
                    point[u] += term.scale;
                    point[v] -= term.scale;
                    next.push_back(std::move(point));
                }
            }
        }
        points = std::move(next);
    }
    return points;
}

double implicit_envelope_step(double previous, double rate, double p, double dt) {
    if (previous <= 0.0) return 0.0;
    double lo = 0.0;
    double hi = previous;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double value = mid + dt * rate * std::pow(mid, 0.5 * p);
        (value > previous ? hi : lo) = mid;
    }
    return hi;
}

}  // namespace hyperlap::oracle

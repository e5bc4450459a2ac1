#include "doctest.h"

#include <cmath>

#include "hyperlap/error.hpp"
#include "hyperlap/oracles.hpp"
#include "hyperlap/projection.hpp"

using namespace hyperlap;

namespace {

double norm(const Vec& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double max_abs_diff(const Vec& a, const Vec& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST_CASE("minimal section of the symmetric four-vertex face") {
    FaceProduct face{4, {FaceTerm{0, 2.0, {0, 1}, {2, 3}}}};
    const ProjectionResult r = min_norm_point(face);
    CHECK(max_abs_diff(r.point, Vec{1, 1, -1, -1}) <= 1e-12);
    REQUIRE(r.coefficients.size() == 1);
    for (double c : r.coefficients[0].lambda) CHECK(c == doctest::Approx(0.5).epsilon(1e-12));
    for (double c : r.coefficients[0].mu) CHECK(c == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.gap <= 1e-10);
}

TEST_CASE("single-point faces") {
    FaceProduct single{3, {FaceTerm{0, 2.0, {0}, {2}}}};
    CHECK(max_abs_diff(min_norm_point(single).point, Vec{2, 0, -2}) <= 1e-15);

    FaceProduct opposing{3, {FaceTerm{0, 1.0, {0}, {1}}, FaceTerm{1, 1.0, {1}, {0}}}};
    CHECK(max_abs_diff(min_norm_point(opposing).point, Vec{0, 0, 0}) <= 1e-15);
    CHECK(max_abs_diff(min_norm_point(opposing).point, oracle::brute_force_nearest(opposing, Vec{0, 0, 0})) <= 1e-9);

    FaceProduct empty{3, {}};
    CHECK(min_norm_point(empty).point == Vec{0, 0, 0});
    CHECK(distance_to_face(empty, Vec{3, 4, 0}) == 5.0);
}

TEST_CASE("distance to the face of L_{G,p}") {
    const Hypergraph g = validate({4, {{{1, 2, 3, 4}, 1.0}}});
    for (double p : {1.0, 2.0, 3.0}) {
        const Vec x{1, 0.3, -0.7, -1};
        const FaceProduct face = face_product(g, x, p, 1e-9);
        const double top = std::pow(2.0, p - 1.0);
        CHECK(distance_to_face(face, Vec{top, 0, 0, -top}) <= 1e-12);
        CHECK(distance_to_face(face, canonical_subgradient(g, x, p).vector) <= 1e-12);
        CHECK(distance_to_face(face, Vec{0, 0, 0, 0}) == doctest::Approx(top * std::sqrt(2.0)).epsilon(1e-12));
    }

    // Single-point faces: distance from the origin is the norm of the point.
    const Hypergraph two = validate({4, {{{1, 2, 3}, 1.5}, {{2, 4}, 0.5}}});
    const Vec x{3, 1, -2, 0.5};
    const FaceProduct face = face_product(two, x, 2.0, 1e-9);
    const Vec point = canonical_subgradient(two, x, 2.0).vector;
    CHECK(distance_to_face(face, Vec{0, 0, 0, 0}) == doctest::Approx(norm(point)).epsilon(1e-12));
}

TEST_CASE("agreement with the brute-force barycentric oracle") {
    oracle::Rng rng(31337);
    for (int trial = 0; trial < 60; ++trial) {
        const FaceProduct face = oracle::random_face(rng);
        const Vec target = oracle::random_vector(rng, face.dimension, 2.0);
        const ProjectionResult r = nearest_point(face, target);
        const Vec reference = oracle::brute_force_nearest(face, target);
        CHECK(max_abs_diff(r.point, reference) <= 1e-6);
    }
}

TEST_CASE("projection variational inequality over all extreme points") {
    oracle::Rng rng(2718);
    for (int trial = 0; trial < 100; ++trial) {
        const FaceProduct face = oracle::random_face(rng);
        const ProjectionResult r = min_norm_point(face);
        for (const Vec& w : oracle::extreme_points(face)) {
            double vi = 0.0;
            for (int i = 0; i < face.dimension; ++i) vi += r.point[i] * (r.point[i] - w[i]);
            CHECK(vi <= 1e-10);
        }
        // Coefficients certify the point.
        Vec rebuilt(face.dimension, 0.0);
        for (std::size_t k = 0; k < face.terms.size(); ++k) {
            const FaceTerm& t = face.terms[k];
            double lsum = 0.0, msum = 0.0;
            for (std::size_t i = 0; i < t.plus.size(); ++i) {
                CHECK(r.coefficients[k].lambda[i] >= 0.0);
                lsum += r.coefficients[k].lambda[i];
                rebuilt[t.plus[i]] += t.scale * r.coefficients[k].lambda[i];
            }
            for (std::size_t i = 0; i < t.minus.size(); ++i) {
                CHECK(r.coefficients[k].mu[i] >= 0.0);
                msum += r.coefficients[k].mu[i];
                rebuilt[t.minus[i]] -= t.scale * r.coefficients[k].mu[i];
            }
            CHECK(lsum == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(msum == doctest::Approx(1.0).epsilon(1e-12));
        }
        CHECK(max_abs_diff(rebuilt, r.point) <= 1e-12);
    }
}

TEST_CASE("min-norm point is odd in x and scales with the face") {
    oracle::Rng rng(55);
    for (int trial = 0; trial < 100; ++trial) {
        const Hypergraph g = oracle::random_hypergraph(rng);
        const int n = g.num_vertices();
        Vec x = oracle::random_integer_vector(rng, n, 2);  // ties are common
        const double p = std::array{1.0, 2.0, 3.0}[trial % 3];
        Vec neg(n);
        for (int v = 0; v < n; ++v) neg[v] = -x[v];
        const Vec z = min_norm_point(face_product(g, x, p, 1e-9)).point;
        const Vec z_neg = min_norm_point(face_product(g, neg, p, 1e-9)).point;
        for (int v = 0; v < n; ++v) CHECK(z_neg[v] == doctest::Approx(-z[v]).epsilon(1e-12));

        FaceProduct scaled = face_product(g, x, p, 1e-9);
        for (FaceTerm& t : scaled.terms) t.scale *= 3.5;
        const Vec z_scaled = min_norm_point(scaled).point;
        for (int v = 0; v < n; ++v) CHECK(z_scaled[v] == doctest::Approx(3.5 * z[v]).epsilon(1e-10));
    }
}

TEST_CASE("invalid tolerance is rejected") {
    FaceProduct face{2, {FaceTerm{0, 1.0, {0}, {1}}}};
    CHECK_THROWS_AS(min_norm_point(face, ProjectionOptions{0.0, 10}), Error);
}

TEST_CASE("early exit on a distance threshold agrees with the full solve") {
    oracle::Rng rng(77);
    for (int trial = 0; trial < 200; ++trial) {
        const FaceProduct face = oracle::random_face(rng);
        const Vec target = oracle::random_vector(rng, face.dimension, 3.0);
        const ProjectionResult full = nearest_point(face, target, ProjectionOptions{1e-24, 10000});
        const double threshold = full.distance * (trial % 2 == 0 ? 1.01 : 0.99);
        const ProjectionResult quick = nearest_point(face, target, ProjectionOptions{1e-24, 10000, threshold});
        CHECK(quick.distance >= full.distance - 1e-12);
        CHECK((quick.distance <= threshold) == (trial % 2 == 0));
    }
}

#pragma once

#include <span>
#include <vector>

#include "hyperlap/energy.hpp"
#include "hyperlap/hypergraph.hpp"

namespace hyperlap {

struct ProxOptions {
    double tol_opt = 1e-10;     // bound on the returned residual
    double tol_active = -1.0;   // negative: default_active_tolerance(x)
    int max_sweeps = 200000;
    int check_every = 25;       // sweeps between certificate evaluations
};

struct ProxResult {
    Vec x;
    double residual = 0.0;  // dist((y - a x)/lambda, L_{G,p}(x))
    int iterations = 0;     // dual sweeps
    SubgradientPoint certificate;
};

/// Unique x with x + lambda L_{G,p}(x) containing y, i.e. the minimizer of
/// 1/2 |x - y|^2 + lambda phi_{G,p}(x).
ProxResult prox(const Hypergraph& graph, std::span<const double> y, double lambda, double p,
                const ProxOptions& options = {});

/// Unique x with (1 + shift) x + lambda L_{G,p}(x) containing y; shift >= 0.
/// This is one implicit step for the operator (shift/lambda) I + L_{G,p}.
ProxResult shifted_prox(const Hypergraph& graph, std::span<const double> y, double lambda,
                        double shift, double p, const ProxOptions& options = {});

/// Minimizer of 1/2 |x - r|^2 + c f(x)^p / p over x in R^k, where f is the
/// spread max - min. Exact up to rounding; tied extremes come out bit-equal.
/// Exposed for testing.
std::vector<double> single_edge_prox(std::span<const double> r, double c, double p);

}  // namespace hyperlap

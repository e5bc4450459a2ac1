#pragma once

#include <string>
#include <variant>
#include <vector>

#include "hyperlap/hypergraph.hpp"

namespace hyperlap {

/// External force h : [0, T] -> R^V. Every kind has an exact integral, so
/// interval averages and compatibility residuals carry no quadrature error.
class Signal {
public:
    struct Zero {};
    struct Constant { Vec value; };
    /// Linear interpolation between samples, held constant outside them.
    struct PiecewiseLinear {
        std::vector<double> times;
        std::vector<Vec> samples;
    };
    /// h = (2a e^{2(t - T/2)} + 2b, 0, 0, -2a e^{2(t - T/2)} - 2b) on four vertices.
    struct CoshExample {
        double alpha;
        double beta;
        double period;
    };
    /// h = sin(2 pi t / T) * amplitude.
    struct Sine {
        Vec amplitude;
        double period;
    };
    using Kind = std::variant<Zero, Constant, PiecewiseLinear, CoshExample, Sine>;

    static Signal zero(int dimension);
    static Signal constant(Vec value);
    static Signal piecewise_linear(std::vector<double> times, std::vector<Vec> samples);
    static Signal cosh_example(double alpha, double beta, double period);
    static Signal sine(Vec amplitude, double period);

    int dimension() const noexcept { return dimension_; }
    const Kind& kind() const noexcept { return kind_; }
    bool is_zero() const noexcept;

    Vec value(double t) const;
    /// Exact integral over [t0, t1].
    Vec integral(double t0, double t1) const;
    /// integral(t0, t1) / (t1 - t0).
    Vec average(double t0, double t1) const;
    /// sup over [0, T] of |h(t)|_inf.
    double sup_norm(double T) const;

    std::string describe() const;

private:
    Signal(int dimension, Kind kind) : dimension_(dimension), kind_(std::move(kind)) {}

    int dimension_;
    Kind kind_;
};

}  // namespace hyperlap

#include "hyperlap/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hyperlap/error.hpp"

namespace hyperlap {

namespace {

double inf_norm(const Vec& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

template <class... F>
struct Overloaded : F... {
    using F::operator()...;
};

}  // namespace

Signal Signal::zero(int dimension) {
    if (dimension <= 0) throw Error(ErrorKind::InvalidArgument, "signal dimension must be positive");
    return Signal(dimension, Zero{});
}

Signal Signal::constant(Vec value) {
    if (value.empty()) throw Error(ErrorKind::InvalidArgument, "signal dimension must be positive");
    const int n = static_cast<int>(value.size());
    return Signal(n, Constant{std::move(value)});
}

Signal Signal::piecewise_linear(std::vector<double> times, std::vector<Vec> samples) {
    if (times.empty() || times.size() != samples.size()) {
        throw Error(ErrorKind::InvalidArgument, "signal needs one sample per time and at least one sample");
    }
    const std::size_t n = samples.front().size();
    if (n == 0) throw Error(ErrorKind::InvalidArgument, "signal dimension must be positive");
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (samples[k].size() != n) throw Error(ErrorKind::InvalidArgument, "signal samples differ in length");
        if (!std::isfinite(times[k])) throw Error(ErrorKind::InvalidArgument, "signal time is not finite");
        if (k > 0 && !(times[k] > times[k - 1])) {
            throw Error(ErrorKind::InvalidArgument, "signal times must be strictly increasing");
        }
        for (double v : samples[k]) {
            if (!std::isfinite(v)) throw Error(ErrorKind::InvalidArgument, "signal value is not finite");
        }
    }
    return Signal(static_cast<int>(n), PiecewiseLinear{std::move(times), std::move(samples)});
}

Signal Signal::cosh_example(double alpha, double beta, double period) {
    if (!(period > 0.0)) throw Error(ErrorKind::InvalidArgument, "cosh-example period must be > 0");
    return Signal(4, CoshExample{alpha, beta, period});
}

Signal Signal::sine(Vec amplitude, double period) {
    if (amplitude.empty()) throw Error(ErrorKind::InvalidArgument, "signal dimension must be positive");
    if (!(period > 0.0)) throw Error(ErrorKind::InvalidArgument, "sine period must be > 0");
    const int n = static_cast<int>(amplitude.size());
    return Signal(n, Sine{std::move(amplitude), period});
}

bool Signal::is_zero() const noexcept {
    return std::visit(Overloaded{
                          [](const Zero&) { return true; },
                          [](const Constant& c) { return inf_norm(c.value) == 0.0; },
                          [](const PiecewiseLinear& s) {
                              return std::all_of(s.samples.begin(), s.samples.end(),
                                                 [](const Vec& v) { return inf_norm(v) == 0.0; });
                          },
                          [](const CoshExample& c) { return c.alpha == 0.0 && c.beta == 0.0; },
                          [](const Sine& s) { return inf_norm(s.amplitude) == 0.0; },
                      },
                      kind_);
}

Vec Signal::value(double t) const {
    const auto n = static_cast<std::size_t>(dimension_);
    return std::visit(Overloaded{
                          [&](const Zero&) { return Vec(n, 0.0); },
                          [&](const Constant& c) { return c.value; },
                          [&](const PiecewiseLinear& s) {
                              if (t <= s.times.front()) return s.samples.front();
                              if (t >= s.times.back()) return s.samples.back();
                              const auto it = std::upper_bound(s.times.begin(), s.times.end(), t);
                              const std::size_t k = static_cast<std::size_t>(it - s.times.begin());
                              const double theta = (t - s.times[k - 1]) / (s.times[k] - s.times[k - 1]);
                              Vec out(n);
                              for (std::size_t v = 0; v < n; ++v) {
                                  out[v] = (1.0 - theta) * s.samples[k - 1][v] + theta * s.samples[k][v];
                              }
                              return out;
                          },
                          [&](const CoshExample& c) {
                              const double top = 2.0 * c.alpha * std::exp(2.0 * (t - 0.5 * c.period)) + 2.0 * c.beta;
                              return Vec{top, 0.0, 0.0, -top};
                          },
                          [&](const Sine& s) {
                              const double factor = std::sin(2.0 * std::numbers::pi * t / s.period);
                              Vec out(s.amplitude);
                              for (double& v : out) v *= factor;
                              return out;
                          },
                      },
                      kind_);
}

Vec Signal::integral(double t0, double t1) const {
    const auto n = static_cast<std::size_t>(dimension_);
    const double length = t1 - t0;
    return std::visit(Overloaded{
                          [&](const Zero&) { return Vec(n, 0.0); },
                          [&](const Constant& c) {
                              Vec out(c.value);
                              for (double& v : out) v *= length;
                              return out;
                          },
                          [&](const PiecewiseLinear& s) {
                              // Trapezoid between consecutive knots is exact for a linear piece.
                              std::vector<double> cuts{t0};
                              for (double k : s.times) {
                                  if (k > std::min(t0, t1) && k < std::max(t0, t1)) cuts.push_back(k);
                              }
                              if (t1 < t0) std::reverse(cuts.begin() + 1, cuts.end());
                              cuts.push_back(t1);
                              Vec out(n, 0.0);
                              Vec left = value(cuts.front());
                              for (std::size_t i = 1; i < cuts.size(); ++i) {
                                  const Vec right = value(cuts[i]);
                                  const double h = cuts[i] - cuts[i - 1];
                                  for (std::size_t v = 0; v < n; ++v) out[v] += 0.5 * h * (left[v] + right[v]);
                                  left = right;
                              }
                              return out;
                          },
                          [&](const CoshExample& c) {
                              const double half = 0.5 * c.period;
                              const double top = c.alpha * (std::exp(2.0 * (t1 - half)) - std::exp(2.0 * (t0 - half))) +
                                                 2.0 * c.beta * length;
                              return Vec{top, 0.0, 0.0, -top};
                          },
                          [&](const Sine& s) {
                              const double omega = 2.0 * std::numbers::pi / s.period;
                              const double factor = (std::cos(omega * t0) - std::cos(omega * t1)) / omega;
                              Vec out(s.amplitude);
                              for (double& v : out) v *= factor;
                              return out;
                          },
                      },
                      kind_);
}

Vec Signal::average(double t0, double t1) const {
    if (!(t1 > t0)) throw Error(ErrorKind::InvalidArgument, "average needs t1 > t0");
    Vec out = integral(t0, t1);
    for (double& v : out) v /= (t1 - t0);
    return out;
}

double Signal::sup_norm(double T) const {
    return std::visit(Overloaded{
                          [&](const Zero&) { return 0.0; },
                          [&](const Constant& c) { return inf_norm(c.value); },
                          [&](const PiecewiseLinear& s) {
                              double m = std::max(inf_norm(value(0.0)), inf_norm(value(T)));
                              for (std::size_t k = 0; k < s.times.size(); ++k) {
                                  if (s.times[k] > 0.0 && s.times[k] < T) m = std::max(m, inf_norm(s.samples[k]));
                              }
                              return m;
                          },
                          [&](const CoshExample&) {
                              // Monotone in t, so the extremes sit at the ends.
                              return std::max(inf_norm(value(0.0)), inf_norm(value(T)));
                          },
                          [&](const Sine& s) {
                              const double reach = T >= 0.25 * s.period
                                                       ? 1.0
                                                       : std::sin(2.0 * std::numbers::pi * T / s.period);
                              return reach * inf_norm(s.amplitude);
                          },
                      },
                      kind_);
}

std::string Signal::describe() const {
    std::ostringstream out;
    out.precision(17);
    std::visit(Overloaded{
                   [&](const Zero&) { out << "zero"; },
                   [&](const Constant&) { out << "constant"; },
                   [&](const PiecewiseLinear& s) { out << "piecewise-linear(" << s.times.size() << " samples)"; },
                   [&](const CoshExample& c) { out << "cosh-example(" << c.alpha << "," << c.beta << ")"; },
                   [&](const Sine& s) { out << "sine(period " << s.period << ")"; },
               },
               kind_);
    return out.str();
}

}  // namespace hyperlap

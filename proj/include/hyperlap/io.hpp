#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

#include "hyperlap/evolution.hpp"
#include "hyperlap/hypergraph.hpp"
#include "hyperlap/periodic.hpp"
#include "hyperlap/signal.hpp"

namespace hyperlap::io {

/// Text format:
///   n <count>
///   e <weight> <v1> <v2> ...     (1-based vertices)
/// `#` starts a comment; blank lines are ignored. Parse errors name the line.
Hypergraph read_hypergraph(std::istream& in);
Hypergraph read_hypergraph(const std::filesystem::path& path);

/// Weights written with 17 significant digits, so reading back is bit-exact.
void write_hypergraph(std::ostream& out, const Hypergraph& graph);

/// CSV with header `t,h_1,...,h_n` and strictly increasing t; the result
/// interpolates linearly between rows.
Signal read_signal_csv(std::istream& in, int expected_dimension);
Signal read_signal_csv(const std::filesystem::path& path, int expected_dimension);

/// Header `t,x_1,...,x_n,energy,residual`, one row per node, 17 significant digits.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& trajectory);

/// Key-value text, one `key = value` per line.
void write_periodic_report(std::ostream& out, const PeriodicSolveReport& report, double p, double T, double dt);

/// Flat `key = value` file; `#` comments. Repeated keys keep the last value.
std::map<std::string, std::string> read_config(std::istream& in);
std::map<std::string, std::string> read_config(const std::filesystem::path& path);

/// Shortest decimal form that reads back to the same double (%.17g).
std::string format_double(double v);

}  // namespace hyperlap::io

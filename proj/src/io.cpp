#include "hyperlap/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hyperlap/error.hpp"

namespace hyperlap::io {

namespace {

std::string strip_comment(const std::string& line) {
    const auto hash = line.find('#');
    return hash == std::string::npos ? line : line.substr(0, hash);
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

[[noreturn]] void parse_error(const std::string& where, int line, const std::string& what) {
    throw Error(ErrorKind::Parse, where + " line " + std::to_string(line) + ": " + what);
}

template <class T>
bool parse_number(std::string_view token, T& value) {
    const char* end = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(token.data(), end, value);
    return ec == std::errc() && ptr == end;
}

std::ifstream open(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Parse, "cannot open " + path.string());
    return in;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream stream(line);
    while (std::getline(stream, field, sep)) out.push_back(trim(field));
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Hypergraph read_hypergraph(std::istream& in) {
    RawHypergraph raw;
    raw.num_vertices = -1;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        std::istringstream tokens(strip_comment(line));
        std::string tag;
        if (!(tokens >> tag)) continue;
        if (tag == "n") {
            if (raw.num_vertices >= 0) parse_error("hypergraph", number, "repeated vertex count");
            std::string count;
            if (!(tokens >> count) || !parse_number(count, raw.num_vertices) || raw.num_vertices <= 0) {
                parse_error("hypergraph", number, "expected `n <positive count>`");
            }
        } else if (tag == "e") {
            if (raw.num_vertices < 0) parse_error("hypergraph", number, "edge before the `n` line");
            std::string weight;
            RawEdge edge;
            if (!(tokens >> weight) || !parse_number(weight, edge.weight)) {
                parse_error("hypergraph", number, "expected `e <weight> <v1> <v2> ...`");
            }
            std::string vertex;
            while (tokens >> vertex) {
                long v = 0;
                if (!parse_number(vertex, v)) parse_error("hypergraph", number, "bad vertex index '" + vertex + "'");
                edge.vertices.push_back(v);
            }
            raw.edges.push_back(std::move(edge));
            continue;
        } else {
            parse_error("hypergraph", number, "unknown record '" + tag + "'");
        }
        std::string extra;
        if (tokens >> extra) parse_error("hypergraph", number, "trailing text '" + extra + "'");
    }
    if (raw.num_vertices < 0) throw Error(ErrorKind::Parse, "hypergraph: missing `n <count>` line");
    return validate(raw);
}

Hypergraph read_hypergraph(const std::filesystem::path& path) {
    std::ifstream in = open(path);
    return read_hypergraph(in);
}

void write_hypergraph(std::ostream& out, const Hypergraph& graph) {
    out << "n " << graph.num_vertices() << '\n';
    for (const Edge& e : graph.edges()) {
        out << "e " << format_double(e.weight);
        for (int v : e.vertices) out << ' ' << v + 1;
        out << '\n';
    }
}

Signal read_signal_csv(std::istream& in, int expected_dimension) {
    std::string line;
    int number = 0;
    std::vector<double> times;
    std::vector<Vec> samples;
    bool header = false;
    while (std::getline(in, line)) {
        ++number;
        const std::string body = trim(strip_comment(line));
        if (body.empty()) continue;
        const std::vector<std::string> fields = split(body, ',');
        if (!header) {
            if (fields.empty() || fields.front() != "t") parse_error("signal", number, "header must start with `t`");
            if (static_cast<int>(fields.size()) != expected_dimension + 1) {
                parse_error("signal", number,
                            "expected " + std::to_string(expected_dimension) + " force columns, found " +
                                std::to_string(fields.size() - 1));
            }
            header = true;
            continue;
        }
        if (static_cast<int>(fields.size()) != expected_dimension + 1) {
            parse_error("signal", number, "wrong number of fields");
        }
        double t = 0.0;
        if (!parse_number(fields[0], t)) parse_error("signal", number, "bad time '" + fields[0] + "'");
        if (!times.empty() && !(t > times.back())) parse_error("signal", number, "times must increase strictly");
        Vec row(static_cast<std::size_t>(expected_dimension));
        for (int v = 0; v < expected_dimension; ++v) {
            if (!parse_number(fields[v + 1], row[v]) || !std::isfinite(row[v])) {
                parse_error("signal", number, "bad value '" + fields[v + 1] + "'");
            }
        }
        times.push_back(t);
        samples.push_back(std::move(row));
    }
    if (!header) throw Error(ErrorKind::Parse, "signal: missing header");
    if (times.empty()) throw Error(ErrorKind::Parse, "signal: no samples");
    return Signal::piecewise_linear(std::move(times), std::move(samples));
}

Signal read_signal_csv(const std::filesystem::path& path, int expected_dimension) {
    std::ifstream in = open(path);
    return read_signal_csv(in, expected_dimension);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
    const std::size_t n = trajectory.states.empty() ? 0 : trajectory.states.front().size();
    out << 't';
    for (std::size_t v = 0; v < n; ++v) out << ",x_" << v + 1;
    out << ",energy,residual\n";
    for (std::size_t k = 0; k < trajectory.times.size(); ++k) {
        out << format_double(trajectory.times[k]);
        for (double x : trajectory.states[k]) out << ',' << format_double(x);
        out << ',' << format_double(trajectory.energy[k]) << ',' << format_double(trajectory.residual[k]) << '\n';
    }
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& trajectory) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path.string());
    write_trajectory_csv(out, trajectory);
}

void write_periodic_report(std::ostream& out, const PeriodicSolveReport& report, double p, double T, double dt) {
    auto list = [&](const auto& values) {
        std::string s;
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) s += ' ';
            if constexpr (std::is_same_v<std::decay_t<decltype(values[i])>, int>) {
                s += std::to_string(values[i]);
            } else {
                s += format_double(values[i]);
            }
        }
        return s;
    };
    out << "p = " << format_double(p) << '\n';
    out << "T = " << format_double(T) << '\n';
    out << "dt = " << format_double(dt) << '\n';
    out << "steps = " << report.orbit.steps() << '\n';
    out << "compatibility_residuals = " << list(report.compatibility.residuals) << '\n';
    out << "compatibility_tolerance = " << format_double(report.compatibility.tolerance) << '\n';
    out << "eps_used = " << list(report.eps_used) << '\n';
    out << "period_map_iterations = " << list(report.iterations) << '\n';
    out << "periodicity_defects = " << list(report.defects) << '\n';
    out << "eps_cauchy_distances = " << list(report.cauchy) << '\n';
    out << "eps_settled = " << (report.settled ? "true" : "false") << '\n';
    // No convergence rate in eps is known; the Cauchy distances are the evidence.
    out << "eps_limit_note = empirical Cauchy check only\n";
    if (!report.orbit.states.empty()) out << "x0 = " << list(report.orbit.states.front()) << '\n';
}

std::map<std::string, std::string> read_config(std::istream& in) {
    std::map<std::string, std::string> config;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const std::string body = trim(strip_comment(line));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) parse_error("config", number, "expected `key = value`");
        const std::string key = trim(std::string_view(body).substr(0, eq));
        if (key.empty()) parse_error("config", number, "empty key");
        config[key] = trim(std::string_view(body).substr(eq + 1));
    }
    return config;
}

std::map<std::string, std::string> read_config(const std::filesystem::path& path) {
    std::ifstream in = open(path);
    return read_config(in);
}

}  // namespace hyperlap::io

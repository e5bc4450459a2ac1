// hyperlap: command-line front end for the hypergraph p-Laplacian solvers.
//
//   hyperlap info           --graph G [--p P]
//   hyperlap solve-cauchy   --graph G --x0 V --T T --dt DT [--signal S] [--out CSV]
//   hyperlap solve-periodic --graph G --signal S --T T --dt DT [--eps-schedule E] [--out REPORT]
//   hyperlap verify         [--seed N] [--threads K]
//   hyperlap reproduce      [--case NAME] [--out CSV]
//
// Settings come from `--config FILE` (key = value lines) and flags; flags win.
// Exit codes: 0 ok, 1 invalid input, 2 solver did not converge, 3 a check failed.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cerrno>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hyperlap/check.hpp"
#include "hyperlap/energy.hpp"
#include "hyperlap/error.hpp"
#include "hyperlap/evolution.hpp"
#include "hyperlap/io.hpp"
#include "hyperlap/oracles.hpp"
#include "hyperlap/periodic.hpp"

using namespace hyperlap;

namespace {

enum ExitCode { kOk = 0, kInvalid = 1, kNoConvergence = 2, kCheckFailed = 3 };

const std::vector<std::string> kKeys = {
    "graph", "p",     "T",       "dt",         "scheme",  "eps-schedule", "signal",       "x0",      "out",
    "seed",  "case",  "threads", "tol-active", "tol-opt", "tol-periodic", "tol-uni", "tol-compat",
};

void report_error(std::string_view kind, int code, const std::string& message) {
    nlohmann::json line{{"error", kind}, {"exit", code}, {"message", message}};
    std::cerr << line.dump() << '\n';
}

Error invalid(const std::string& message) { return Error(ErrorKind::InvalidArgument, message); }

std::string normalize_key(std::string key) {
    for (char& c : key) if (c == '_') c = '-';
    return key;
}

double parse_real(const std::string& key, const std::string& text) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || *end != '\0' || errno == ERANGE) throw invalid(key + ": not a number: '" + text + "'");
    return v;
}

std::vector<double> parse_list(const std::string& key, std::string text) {
    for (char& c : text) if (c == ',') c = ' ';
    std::istringstream in(text);
    std::vector<double> out;
    for (std::string item; in >> item;) out.push_back(parse_real(key, item));
    if (out.empty()) throw invalid(key + ": empty list");
    return out;
}

struct RunConfig {
    std::string graph;
    double p = 2.0;
    double T = 1.0;
    double dt = 1e-2;
    Scheme scheme = Scheme::Implicit;
    std::vector<double> eps_schedule = default_eps_schedule();
    std::string signal = "zero";
    std::string x0;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::string case_name;
    unsigned threads = 0;
    double tol_active = -1.0;
    double tol_opt = 1e-10;
    double tol_periodic = 1e-9;
    double tol_uni = 1e-6;
    double tol_compat = -1.0;
};

RunConfig build_config(const std::map<std::string, std::string>& values) {
    RunConfig c;
    for (const auto& [key, text] : values) {
        if (key == "graph") c.graph = text;
        else if (key == "p") c.p = parse_real(key, text);
        else if (key == "T") c.T = parse_real(key, text);
        else if (key == "dt") c.dt = parse_real(key, text);
        else if (key == "scheme") c.scheme = parse_scheme(text);
        else if (key == "eps-schedule") c.eps_schedule = parse_list(key, text);
        else if (key == "signal") c.signal = text;
        else if (key == "x0") c.x0 = text;
        else if (key == "out") c.out = text;
        else if (key == "case") c.case_name = text;
        else if (key == "seed" || key == "threads") {
            const double v = parse_real(key, text);
            if (v < 0 || v != static_cast<double>(static_cast<std::uint64_t>(v))) {
                throw invalid(key + " must be a non-negative integer");
            }
            if (key == "seed") c.seed = static_cast<std::uint64_t>(v);
            else c.threads = static_cast<unsigned>(v);
        } else if (key.starts_with("tol-")) {
            const double v = parse_real(key, text);
            if (!(v > 0.0)) throw invalid(key + " must be > 0");
            if (key == "tol-active") c.tol_active = v;
            else if (key == "tol-opt") c.tol_opt = v;
            else if (key == "tol-periodic") c.tol_periodic = v;
            else if (key == "tol-uni") c.tol_uni = v;
            else if (key == "tol-compat") c.tol_compat = v;
            else throw invalid("unknown setting '" + key + "'");
        } else {
            throw invalid("unknown setting '" + key + "'");
        }
    }
    if (!(c.p >= 1.0)) throw invalid("p must be >= 1");
    if (!(c.T > 0.0)) throw invalid("T must be > 0");
    if (!(c.dt > 0.0)) throw invalid("dt must be > 0");
    if (!(c.dt < c.T)) throw invalid("dt must be smaller than T");
    return c;
}

Hypergraph load_graph(const RunConfig& c) {
    if (c.graph.empty()) throw invalid("--graph is required");
    return io::read_hypergraph(std::filesystem::path(c.graph));
}

// zero | cosh-example(alpha,beta) | path to a `t,h_1,...` CSV file.
Signal load_signal(const RunConfig& c, int n) {
    if (c.signal == "zero") return Signal::zero(n);
    const std::string preset = "cosh-example";
    if (c.signal.starts_with(preset)) {
        const std::string rest = c.signal.substr(preset.size());
        std::vector<double> args{1.0, 0.0};
        if (!rest.empty()) {
            if (rest.front() != '(' || rest.back() != ')') throw invalid("signal: expected cosh-example(alpha,beta)");
            args = parse_list("signal", rest.substr(1, rest.size() - 2));
            if (args.size() != 2) throw invalid("signal: cosh-example takes two arguments");
        }
        if (n != 4) throw invalid("signal: cosh-example needs a four-vertex graph");
        return Signal::cosh_example(args[0], args[1], c.T);
    }
    return io::read_signal_csv(std::filesystem::path(c.signal), n);
}

// Comma- or space-separated values, or `random` (uniform in [-1, 1], seeded).
Vec load_x0(const RunConfig& c, int n) {
    if (c.x0 == "random") {
        oracle::Rng rng(c.seed.value_or(1));
        return oracle::random_vector(rng, n, 1.0);
    }
    const std::vector<double> x = parse_list("x0", c.x0);
    if (static_cast<int>(x.size()) != n) {
        throw invalid("x0 has " + std::to_string(x.size()) + " entries, graph has " + std::to_string(n) + " vertices");
    }
    return x;
}

// Writes to `path`, or to stdout when it is empty.
template <class Write>
void emit(const std::string& path, Write&& write) {
    if (path.empty()) {
        write(std::cout);
        return;
    }
    std::ofstream out(path);
    if (!out) throw invalid("cannot write " + path);
    write(out);
}

std::string join(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + io::format_double(v[i]);
    return s;
}

int run_info(const RunConfig& c) {
    const Hypergraph g = load_graph(c);
    const ComponentPartition P = connected_components(g);
    emit(c.out, [&](std::ostream& out) {
        out << "vertices = " << g.num_vertices() << '\n';
        out << "edges = " << g.num_edges() << '\n';
        out << "ordinary_graph = " << (g.is_ordinary_graph() ? "true" : "false") << '\n';
        out << "components = " << P.size() << '\n';
        for (std::size_t k = 0; k < P.size(); ++k) {
            out << "component_" << k + 1 << " =";
            for (int v : P.components[k]) out << ' ' << v + 1;
            out << '\n';
        }
        out << "p = " << io::format_double(c.p) << '\n';
        if (g.num_edges() > 0) {
            out << "min_weight = " << io::format_double(g.min_weight()) << '\n';
            out << "max_weight = " << io::format_double(g.max_weight()) << '\n';
            out << "poincare_constant = " << io::format_double(poincare_constant(g, P, c.p)) << '\n';
        }
        const std::vector<Vec> basis = zero_eigenspace_basis(P);
        out << "zero_eigenspace_dimension = " << basis.size() << '\n';
        for (std::size_t k = 0; k < basis.size(); ++k) out << "zero_eigenspace_" << k + 1 << " = " << join(basis[k]) << '\n';
    });
    return kOk;
}

StepOptions step_options(const RunConfig& c) {
    StepOptions s;
    s.tol_opt = c.tol_opt;
    s.tol_active = c.tol_active;
    return s;
}

int run_cauchy(const RunConfig& c) {
    const Hypergraph g = load_graph(c);
    if (c.x0.empty()) throw invalid("--x0 is required for solve-cauchy");
    const Vec x0 = load_x0(c, g.num_vertices());
    const Signal h = load_signal(c, g.num_vertices());
    const Trajectory tr = solve_cauchy(g, x0, h, c.T, c.dt, c.scheme, c.p, step_options(c));
    emit(c.out, [&](std::ostream& out) { io::write_trajectory_csv(out, tr); });
    return kOk;
}

int run_periodic(const RunConfig& c) {
    const Hypergraph g = load_graph(c);
    const int n = g.num_vertices();
    const Signal h = load_signal(c, n);
    PeriodicOptions options;
    options.tol_periodic = c.tol_periodic;
    options.tol_uni = c.tol_uni;
    options.tol_compat = c.tol_compat;
    options.step = step_options(c);
    const Vec warm = c.x0.empty() ? Vec{} : load_x0(c, n);

    // Residuals go out first so they are on record even if the solve is refused.
    const CompatibilityReport compat = check_compatibility(h, c.T, connected_components(g), c.tol_compat);
    std::cout << "compatibility_residuals = " << join(compat.residuals) << '\n';
    std::cout << "compatibility_ok = " << (compat.ok ? "true" : "false") << '\n';

    const PeriodicSolveReport report = solve_periodic(g, h, c.T, c.dt, c.p, c.eps_schedule, options, warm);
    emit(c.out, [&](std::ostream& out) { io::write_periodic_report(out, report, c.p, c.T, c.dt); });
    if (!c.out.empty()) io::write_trajectory_csv(std::filesystem::path(c.out + ".orbit.csv"), report.orbit);
    return kOk;
}

int run_verify(const RunConfig& c) {
    std::vector<std::uint64_t> seeds;
    if (c.seed) seeds.push_back(*c.seed);
    else for (std::uint64_t s = 1; s <= 10; ++s) seeds.push_back(s);

    struct Totals { int checks = 0; int violations = 0; double worst = 0.0; };
    std::map<std::string, Totals> totals;
    std::vector<std::string> failures;
    for (std::uint64_t seed : seeds) {
        const check::VerifyReport report = check::verify(seed, c.threads);
        for (const check::PropertyResult& p : report.properties) {
            Totals& t = totals[p.name];
            t.checks += p.checks;
            t.violations += p.violations;
            t.worst = std::max(t.worst, p.worst);
            if (p.violations > 0) failures.push_back(p.name + " seed " + std::to_string(seed) + ": " + p.first_failure);
        }
    }
    bool ok = true;
    emit(c.out, [&](std::ostream& out) {
        out << "seeds = " << seeds.size() << '\n';
        for (std::string_view name : check::property_names()) {
            const Totals& t = totals[std::string(name)];
            out << name << " = checks " << t.checks << " violations " << t.violations;
            if (t.violations > 0) out << " worst " << io::format_double(t.worst);
            out << '\n';
            ok = ok && t.violations == 0;
        }
        for (const std::string& f : failures) out << "failure = " << f << '\n';
        out << "verify = " << (ok ? "PASS" : "FAIL") << '\n';
    });
    if (!ok) {
        report_error("VerificationFailed", kCheckFailed, std::to_string(failures.size()) + " suite run(s) had violations");
        return kCheckFailed;
    }
    return kOk;
}

int run_reproduce(const RunConfig& c) {
    std::vector<std::string> names;
    if (!c.case_name.empty() && c.case_name != "all") names.push_back(c.case_name);
    else for (std::string_view n : check::case_names()) names.emplace_back(n);
    if (!c.out.empty() && names.size() != 1) throw invalid("--out needs a single --case");

    std::vector<std::string> failed;
    for (const std::string& name : names) {
        const check::CaseReport r = check::reproduce(name);
        std::cout << "[" << r.name << "]\n";
        for (const auto& [key, value] : r.values) std::cout << key << " = " << value << '\n';
        std::cout << "result = " << (r.ok ? "PASS" : "FAIL") << "\n\n";
        if (!r.ok) failed.push_back(r.name);
        if (!c.out.empty()) {
            if (!r.trajectory) throw invalid("case " + r.name + " has no trajectory to write");
            io::write_trajectory_csv(std::filesystem::path(c.out), *r.trajectory);
        }
    }
    if (!failed.empty()) {
        std::string list;
        for (const std::string& f : failed) list += (list.empty() ? "" : ", ") + f;
        report_error("VerificationFailed", kCheckFailed, "failed cases: " + list);
        return kCheckFailed;
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hypergraph p-Laplacian: heat flow and periodic solutions"};
    app.require_subcommand(1);

    std::map<std::string, std::string> flags;
    for (const std::string& key : kKeys) flags[key];
    std::string config_path;
    app.add_option("--config", config_path, "key = value settings file; flags override it");
    app.add_option("--graph", flags["graph"], "hypergraph file (`n <count>`, then `e <w> <v>...` lines)");
    app.add_option("--p", flags["p"], "exponent p >= 1 (default 2)");
    app.add_option("--T", flags["T"], "final time or period (default 1)");
    app.add_option("--dt", flags["dt"], "time step (default 0.01)");
    app.add_option("--scheme", flags["scheme"], "implicit | explicit (default implicit)");
    app.add_option("--eps-schedule", flags["eps-schedule"], "decreasing eps values, comma separated");
    app.add_option("--signal", flags["signal"], "zero | cosh-example(a,b) | CSV file `t,h_1,...`");
    app.add_option("--x0", flags["x0"], "initial datum: comma-separated values or `random`");
    app.add_option("--out", flags["out"], "output file (default stdout)");
    app.add_option("--seed", flags["seed"], "seed for randomized suites and `--x0 random`");
    app.add_option("--case", flags["case"], "reproduce case name, or `all`");
    app.add_option("--threads", flags["threads"], "worker threads for verify (0 = all cores)");
    app.add_option("--tol-active", flags["tol-active"], "tie tolerance for active sets");
    app.add_option("--tol-opt", flags["tol-opt"], "prox certificate tolerance (default 1e-10)");
    app.add_option("--tol-periodic", flags["tol-periodic"], "periodicity defect tolerance (default 1e-9)");
    app.add_option("--tol-uni", flags["tol-uni"], "orbit change that ends the eps schedule (default 1e-6)");
    app.add_option("--tol-compat", flags["tol-compat"], "compatibility tolerance (default 1e-10 T sup|h|)");

    const std::pair<const char*, const char*> commands[] = {
        {"info", "components, Poincare constant and zero eigenspace of a hypergraph"},
        {"solve-cauchy", "integrate x' + L(x) = h from x0 and write the trajectory CSV"},
        {"solve-periodic", "T-periodic solution through a decreasing eps schedule"},
        {"verify", "run the property suites over fixed seeds"},
        {"reproduce", "rerun the worked examples and compare with their closed forms"},
    };
    for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        report_error("Usage", kInvalid, e.what());
        return kInvalid;
    }

    try {
        std::map<std::string, std::string> values;
        if (!config_path.empty()) {
            for (const auto& [key, value] : io::read_config(std::filesystem::path(config_path))) {
                values[normalize_key(key)] = value;
            }
        }
        for (const std::string& key : kKeys) {
            if (app.count("--" + key) > 0) values[key] = flags[key];
        }
        const RunConfig config = build_config(values);
        const std::string command = app.get_subcommands().front()->get_name();
        if (command == "info") return run_info(config);
        if (command == "solve-cauchy") return run_cauchy(config);
        if (command == "solve-periodic") return run_periodic(config);
        if (command == "verify") return run_verify(config);
        return run_reproduce(config);
    } catch (const NonConvergence& e) {
        report_error(to_string(e.kind()), kNoConvergence, e.what());
        return kNoConvergence;
    } catch (const Error& e) {
        report_error(to_string(e.kind()), kInvalid, e.what());
        return kInvalid;
    } catch (const std::exception& e) {
        report_error("Internal", kInvalid, e.what());
        return kInvalid;
    }
}

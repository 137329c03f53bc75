// crheat: command-line front end for the kernel, geodesic and validation code.
#include <CLI11.hpp>
#include <json.hpp>

#include <crheat/asymptotics.hpp>
#include <crheat/cli_support.hpp>
#include <crheat/cr_kernel.hpp>
#include <crheat/elliptic_kernel.hpp>
#include <crheat/geodesics.hpp>
#include <crheat/parallel.hpp>
#include <crheat/validation.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace {

using namespace crheat;
using json = nlohmann::ordered_json;

constexpr const char* version = "1.0.0";

struct Config {
    std::string command;
    int n = 1;
    std::string t = "0.5";
    double theta1 = 0.5;
    double phi1 = 1.0;
    std::string grid;
    std::optional<double> tol;
    int kmax = 0;
    int kcap = 8;
    double ucut = 0.0;
    std::string pairing = "auto";
    std::string out;
    std::string format = "csv";
    std::string only;
    std::uint64_t seed = 7;
};

// A table cell: number, text, or empty.
using Cell = std::variant<std::monostate, double, long long, std::string>;

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;
    int exit_code = 0;
};

std::string csv_cell(const Cell& c) {
    if (auto d = std::get_if<double>(&c)) return cli::format_double(*d);
    if (auto i = std::get_if<long long>(&c)) return std::to_string(*i);
    if (auto s = std::get_if<std::string>(&c)) return cli::csv_quote(*s);
    return "";
}

json json_cell(const Cell& c) {
    if (auto d = std::get_if<double>(&c)) return std::isfinite(*d) ? json(*d) : json(nullptr);
    if (auto i = std::get_if<long long>(&c)) return *i;
    if (auto s = std::get_if<std::string>(&c)) return *s;
    return nullptr;
}

std::vector<SpherePoint> points_of(const Config& cfg) {
    std::vector<SpherePoint> pts;
    if (cfg.grid.empty()) {
        pts.emplace_back(cfg.theta1, cfg.phi1);
        return pts;
    }
    auto [th, ph] = cli::parse_grid(cfg.grid);
    for (double a : cli::samples(th))
        for (double b : cli::samples(ph)) pts.emplace_back(a, b);
    return pts;
}

struct RowResult {
    std::vector<std::vector<Cell>> rows;
    int code = 0;
    std::string message; // error text when code != 0, otherwise a warning
};

// Rows are produced concurrently but collected in index order; the worst exit code wins.
template <class Fn>
Table run_rows(std::vector<std::string> header, std::size_t count, Fn&& fn) {
    auto res = parallel_map<RowResult>(count, [&](std::size_t i) {
        RowResult r;
        fn(i, r);
        return r;
    });
    Table tab{std::move(header), {}, 0};
    for (auto& r : res) {
        if (r.code) {
            tab.exit_code = std::max(tab.exit_code, r.code);
            std::cerr << "crheat: " << r.message << "\n";
        } else if (!r.message.empty()) {
            std::cerr << "crheat: warning: " << r.message << "\n";
        }
        for (auto& row : r.rows) tab.rows.push_back(std::move(row));
    }
    return tab;
}

Table run_kernel(const Config& cfg) {
    EvalSpec spec;
    if (cfg.tol) spec.quad_tol = *cfg.tol;
    spec.k_max = cfg.kmax;
    spec.u_cutoff = cfg.ucut;
    spec.pairing = parse_pairing(cfg.pairing);
    const auto ts = cli::parse_list(cfg.t, "t");
    const auto pts = points_of(cfg);
    const int n = cfg.n;
    return run_rows({"theta1", "phi1", "t", "n", "P_C", "remainder_bound", "P_S", "gamma", "status"},
                    pts.size() * ts.size(), [&](std::size_t i, RowResult& r) {
                        const SpherePoint& p = pts[i / ts.size()];
                        const double t = ts[i % ts.size()];
                        const double gamma = riemannian_angle(p);
                        double pc = NAN, rb = NAN, ps = NAN;
                        std::string status = "ok";
                        try {
                            // P_S first: it stays available where P_C is refused
                            ps = eval_PS(gamma, t, n);
                            KernelValue kv = eval_PC_series(p, t, n, spec);
                            pc = kv.value;
                            rb = kv.remainder_bound;
                        } catch (const crheat::Error& e) {
                            status = e.kind();
                            r.code = e.exit_code();
                            r.message = e.what();
                        }
                        r.rows.push_back({p.theta1, p.phi1, t, (long long)n, pc, rb, ps, gamma, status});
                    });
}

Table run_distance(const Config& cfg) {
    const auto pts = points_of(cfg);
    return run_rows({"theta1", "phi1", "d_c", "eta", "tau1_t", "status"}, pts.size(), [&](std::size_t i, RowResult& r) {
        const SpherePoint& p = pts[i];
        try {
            CCDistance d = carnot_distance(p);
            Cell eta, tau;
            if (d.branch) {
                eta = d.branch->eta;
                tau = d.branch->tau1_t;
            }
            r.rows.push_back({p.theta1, p.phi1, d.value, eta, tau, std::string("ok")});
        } catch (const crheat::Error& e) {
            r.code = e.exit_code();
            r.message = e.what();
            r.rows.push_back({p.theta1, p.phi1, NAN, {}, {}, std::string(e.kind())});
        }
    });
}

Table run_geodesics(const Config& cfg) {
    const auto pts = points_of(cfg);
    if (cfg.kcap < 0 || cfg.kcap % 2) throw DomainError("--kcap must be a non-negative even integer");
    return run_rows({"theta1", "phi1", "kind", "k", "j", "multiplicity", "eta", "tau1_t", "length"}, pts.size(),
                    [&](std::size_t i, RowResult& r) {
                        const SpherePoint& p = pts[i];
                        try {
                            if (p.theta1 == 0.0) {
                                // the canonical curve: a discrete family indexed by k alone
                                auto ls = theta0_lengths(p.phi1, cfg.kcap);
                                for (std::size_t k = 0; k < ls.size(); ++k)
                                    r.rows.push_back({p.theta1, p.phi1, std::string("branch"), (long long)k, {}, 1LL,
                                                      {}, {}, ls[k]});
                            } else {
                                for (const auto& b : enumerate_branches(p, cfg.kcap))
                                    r.rows.push_back({p.theta1, p.phi1, std::string("branch"), (long long)b.k,
                                                      (long long)b.j, (long long)b.multiplicity, b.eta, b.tau1_t,
                                                      b.length});
                            }
                            CCDistance d = carnot_distance(p);
                            Cell eta, tau;
                            if (d.branch) {
                                eta = d.branch->eta;
                                tau = d.branch->tau1_t;
                            }
                            r.rows.push_back({p.theta1, p.phi1, std::string("distance"), {}, {}, {}, eta, tau, d.value});
                        } catch (const crheat::Error& e) {
                            r.code = e.exit_code();
                            r.message = e.what();
                            r.rows.push_back({p.theta1, p.phi1, std::string(e.kind()), {}, {}, {}, {}, {}, {}});
                        }
                    });
}

Table run_asymptotics(const Config& cfg) {
    EvalSpec spec;
    if (cfg.tol) spec.quad_tol = *cfg.tol;
    spec.k_max = cfg.kmax;
    spec.u_cutoff = cfg.ucut;
    spec.pairing = parse_pairing(cfg.pairing);
    const auto ts = cli::parse_list(cfg.t, "t");
    const auto pts = points_of(cfg);
    const int n = cfg.n;
    return run_rows({"theta1", "phi1", "t", "n", "leading", "d_c_sq", "prefactor", "regime", "P_C", "ratio", "status"},
                    pts.size() * ts.size(), [&](std::size_t i, RowResult& r) {
                        const SpherePoint& p = pts[i / ts.size()];
                        const double t = ts[i % ts.size()];
                        try {
                            AsymptoticValue a = leading_PC(p, t, n);
                            if (!a.warning.empty()) r.message = a.warning;
                            double pc = eval_PC_series(p, t, n, spec).value;
                            r.rows.push_back({p.theta1, p.phi1, t, (long long)n, a.leading, a.d_c_sq, a.prefactor,
                                              std::string(a.regime == AsymptoticRegime::generic ? "generic"
                                                                                                 : "canonical_curve"),
                                              pc, pc / a.leading, std::string(a.warning.empty() ? "ok" : "warning")});
                        } catch (const crheat::Error& e) {
                            r.code = e.exit_code();
                            r.message = e.what();
                            r.rows.push_back({p.theta1, p.phi1, t, (long long)n, NAN, NAN, NAN, {}, NAN, NAN,
                                              std::string(e.kind())});
                        }
                    });
}

Table run_validate(const Config& cfg) {
    ValidateConfig vc;
    vc.seed = cfg.seed;
    vc.only = cfg.only;
    if (cfg.tol) vc.tol_scale = *cfg.tol;
    Table tab{{"check", "case", "measured", "lower", "upper", "pass"}, {}, 0};
    for (const auto& c : run_checks(vc)) {
        tab.rows.push_back({c.check, c.name, c.measured, c.lower, c.upper, std::string(c.pass ? "true" : "false")});
        if (!c.pass) tab.exit_code = 1;
    }
    return tab;
}

json meta_of(const Config& cfg) {
    json m;
    m["version"] = version;
    m["command"] = cfg.command;
    m["n"] = cfg.n;
    m["t"] = cfg.t;
    m["theta1"] = cfg.theta1;
    m["phi1"] = cfg.phi1;
    m["grid"] = cfg.grid;
    m["tol"] = cfg.tol ? json(*cfg.tol) : json(nullptr);
    m["kmax"] = cfg.kmax;
    m["kcap"] = cfg.kcap;
    m["ucut"] = cfg.ucut;
    m["pairing"] = cfg.pairing;
    m["only"] = cfg.only;
    m["seed"] = cfg.seed;
    return m;
}

std::string render(const Config& cfg, const Table& tab) {
    std::ostringstream os;
    if (cfg.format == "csv") {
        for (std::size_t i = 0; i < tab.header.size(); ++i) os << (i ? "," : "") << tab.header[i];
        os << "\n";
        for (const auto& row : tab.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
            os << "\n";
        }
        return os.str();
    }
    json doc;
    doc["meta"] = meta_of(cfg);
    json rows = json::array(), checks = json::array();
    for (const auto& row : tab.rows) {
        json obj;
        for (std::size_t i = 0; i < row.size(); ++i) obj[tab.header[i]] = json_cell(row[i]);
        if (cfg.command == "validate") {
            obj["pass"] = std::get<std::string>(row.back()) == "true";
            checks.push_back(std::move(obj));
        } else {
            rows.push_back(std::move(obj));
        }
    }
    doc["rows"] = std::move(rows);
    doc["checks"] = std::move(checks);
    os << doc.dump(2) << "\n";
    return os.str();
}

} // namespace

int main(int argc, char** argv) {
    Config cfg;
    CLI::App app{"Heat kernels, CR-geodesics and the Carnot-Caratheodory distance on S^{2n+1}"};
    app.set_version_flag("--version", version);
    app.set_config("--config", "", "flat key=value file; command-line flags take precedence");
    app.add_option("command", cfg.command, "kernel | distance | geodesics | asymptotics | validate")
        ->required()
        ->check(CLI::IsMember({"kernel", "distance", "geodesics", "asymptotics", "validate"}));
    app.add_option("--n", cfg.n, "sphere is S^{2n+1}")->check(CLI::PositiveNumber);
    app.add_option("--t", cfg.t, "heat time, or a comma-separated list");
    app.add_option("--theta1", cfg.theta1, "target theta1 when no grid is given");
    app.add_option("--phi1", cfg.phi1, "target phi1 when no grid is given");
    app.add_option("--grid", cfg.grid, "theta1 and phi1 ranges a:b:count,a:b:count");
    app.add_option("--tol", cfg.tol, "quadrature tolerance; for validate, a multiplier on every tolerance");
    app.add_option("--kmax", cfg.kmax, "retained pairs in the P_C series (0 chooses from the tail bound)");
    app.add_option("--kcap", cfg.kcap, "largest even interval index for geodesic enumeration");
    app.add_option("--ucut", cfg.ucut, "cutoff of the u integral (0 chooses from the decay envelope)");
    app.add_option("--pairing", cfg.pairing, "grouping of the k-series")->check(CLI::IsMember({"auto", "kk", "kk1"}));
    app.add_option("--out", cfg.out, "output file (default stdout)");
    app.add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--only", cfg.only, "run a single validation check");
    app.add_option("--seed", cfg.seed, "seed for sampled validation points");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        Table tab;
        if (cfg.command == "kernel") tab = run_kernel(cfg);
        else if (cfg.command == "distance") tab = run_distance(cfg);
        else if (cfg.command == "geodesics") tab = run_geodesics(cfg);
        else if (cfg.command == "asymptotics") tab = run_asymptotics(cfg);
        else tab = run_validate(cfg);

        const std::string text = render(cfg, tab);
        if (cfg.out.empty()) {
            std::cout << text;
        } else {
            std::ofstream f(cfg.out, std::ios::binary);
            if (!(f << text)) {
                std::cerr << "crheat: cannot write " << cfg.out << "\n";
                return 2;
            }
        }
        return tab.exit_code;
    } catch (const crheat::Error& e) {
        std::cerr << "crheat: " << e.kind() << ": " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "crheat: " << e.what() << "\n";
        return 2;
    }
}

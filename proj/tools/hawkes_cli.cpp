// Command-line runner: one subcommand per experiment, JSON config files with
// full flag override (flags win), deterministic CSV outputs whose headers
// carry the tool version, the resolved-config hash and the master seed.
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hawkes/engine.hpp"
#include "hawkes/impulsion.hpp"
#include "hawkes/lattice.hpp"
#include "hawkes/meanfield.hpp"
#include "hawkes/rng.hpp"
#include "hawkes/stats.hpp"
#include "hawkes/volterra.hpp"

namespace {

using nlohmann::json;
using namespace hawkes;

constexpr const char* kVersion = "0.1.0";

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

double to_double(const std::string& s, const char* what) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw std::invalid_argument(std::string(what) + ": expected a number, got '" + s + "'");
    }
}

long long to_ll(const std::string& s, const char* what) {
    try {
        std::size_t pos = 0;
        long long v = std::stoll(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw std::invalid_argument(std::string(what) + ": expected an integer, got '" + s + "'");
    }
}

std::uint64_t to_u64(const std::string& s, const char* what) {
    long long v = to_ll(s, what);
    if (v < 0) throw std::invalid_argument(std::string(what) + ": must be >= 0");
    return static_cast<std::uint64_t>(v);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

std::vector<double> parse_doubles(const std::string& s, const char* what) {
    std::vector<double> out;
    for (const std::string& item : split(s, ',')) out.push_back(to_double(item, what));
    if (out.empty()) throw std::invalid_argument(std::string(what) + ": empty list");
    return out;
}

std::vector<int> parse_ints(const std::string& s, const char* what) {
    std::vector<int> out;
    for (const std::string& item : split(s, ',')) {
        out.push_back(static_cast<int>(to_ll(item, what)));
    }
    if (out.empty()) throw std::invalid_argument(std::string(what) + ": empty list");
    return out;
}

Kernel parse_kernel(const std::string& s) {
    auto colon = s.find(':');
    std::string name = s.substr(0, colon);
    std::vector<double> p;
    if (colon != std::string::npos) p = parse_doubles(s.substr(colon + 1), "kernel");
    if (name == "exponential" && p.size() == 2) return Kernel::exponential(p[0], p[1]);
    if (name == "rectangular" && p.size() == 2) return Kernel::rectangular(p[0], p[1]);
    throw std::invalid_argument("kernel: want exponential:a,b or rectangular:c,tau, got '" + s +
                                "'");
}

Topology parse_topology(const std::string& s) {
    auto colon = s.find(':');
    std::string name = s.substr(0, colon);
    std::vector<std::string> args;
    if (colon != std::string::npos) args = split(s.substr(colon + 1), ',');
    if (name == "complete" && args.size() == 1) {
        return Topology::complete(static_cast<int>(to_ll(args[0], "topology")));
    }
    if (name == "lattice" && (args.size() == 2 || args.size() == 3)) {
        int d = static_cast<int>(to_ll(args[0], "topology"));
        int L = static_cast<int>(to_ll(args[1], "topology"));
        Boundary b = Boundary::periodic;
        if (args.size() == 3) {
            if (args[2] == "absorbing") b = Boundary::absorbing;
            else if (args[2] != "periodic") {
                throw std::invalid_argument("topology: boundary must be periodic or absorbing");
            }
        }
        return Topology::lattice_box(d, L, b);
    }
    throw std::invalid_argument(
        "topology: want complete:N or lattice:d,L[,periodic|absorbing], got '" + s + "'");
}

Boundary parse_boundary(const std::string& s) {
    if (s == "periodic") return Boundary::periodic;
    if (s == "absorbing") return Boundary::absorbing;
    throw std::invalid_argument("boundary: want periodic or absorbing, got '" + s + "'");
}

std::vector<double> parse_baseline(const std::string& s, const Topology& topo,
                                   std::uint64_t seed) {
    auto colon = s.find(':');
    std::string name = s.substr(0, colon);
    std::vector<double> p;
    if (colon != std::string::npos) p = parse_doubles(s.substr(colon + 1), "baseline");
    if (name == "constant" && p.size() == 1) return constant_baseline(topo.node_count(), p[0]);
    if (name == "alternating" && p.size() == 2) return alternating_baseline(topo, p[0], p[1]);
    if (name == "uniform" && p.size() == 2) {
        return iid_uniform_baseline(topo.node_count(), p[0], p[1], derive_seed(seed, {0x6d75}));
    }
    throw std::invalid_argument(
        "baseline: want constant:v, alternating:v0,v1 or uniform:lo,hi, got '" + s + "'");
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file " + path);
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string default_out(const std::string& flag, const char* sub) {
    if (!flag.empty()) return flag;
    const char* dir = std::getenv("HAWKES_OUT_DIR");
    std::string d = (dir && *dir) ? dir : ".";
    return d + "/" + sub + ".csv";
}

std::string join_lines(const std::vector<std::string>& lines) {
    std::string out;
    for (const std::string& l : lines) {
        out += l;
        out += '\n';
    }
    return out;
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ---- SVG plotting -------------------------------------------------------

struct Series {
    std::string label;
    std::vector<std::pair<double, double>> pts;
    bool scatter = false;
};

std::string render_svg(const std::string& title, const std::vector<Series>& series) {
    constexpr double kW = 720, kH = 460, kL = 70, kR = 690, kT = 45, kB = 415;
    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    bool first = true;
    for (const Series& s : series) {
        for (auto [x, y] : s.pts) {
            if (first) {
                xmin = xmax = x;
                ymin = ymax = y;
                first = false;
            }
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }
    auto pad = [](double& lo, double& hi) {
        double span = hi - lo;
        if (span <= 0) span = std::abs(lo) > 0 ? std::abs(lo) : 1.0;
        lo -= 0.05 * span;
        hi += 0.05 * span;
    };
    pad(xmin, xmax);
    pad(ymin, ymax);
    auto mx = [&](double x) { return kL + (x - xmin) / (xmax - xmin) * (kR - kL); };
    auto my = [&](double y) { return kB - (y - ymin) / (ymax - ymin) * (kB - kT); };
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22"};
    char buf[256];
    std::string svg;
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%g\" height=\"%g\" "
                  "viewBox=\"0 0 %g %g\">\n",
                  kW, kH, kW, kH);
    svg += buf;
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%g\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\">%s</text>\n",
                  kL, title.c_str());
    svg += buf;
    std::snprintf(buf, sizeof buf,
                  "<rect x=\"%g\" y=\"%g\" width=\"%g\" height=\"%g\" fill=\"none\" "
                  "stroke=\"#444\"/>\n",
                  kL, kT, kR - kL, kB - kT);
    svg += buf;
    auto label = [&](double px, double py, const char* anchor, double v) {
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%g\" y=\"%g\" font-family=\"sans-serif\" font-size=\"11\" "
                      "text-anchor=\"%s\">%.6g</text>\n",
                      px, py, anchor, v);
        svg += buf;
    };
    label(kL, kB + 16, "middle", xmin);
    label(kR, kB + 16, "middle", xmax);
    label(kL - 6, kB, "end", ymin);
    label(kL - 6, kT + 10, "end", ymax);
    for (std::size_t si = 0; si < series.size(); ++si) {
        const char* color = palette[si % 8];
        const Series& s = series[si];
        if (s.scatter) {
            for (auto [x, y] : s.pts) {
                std::snprintf(buf, sizeof buf,
                              "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3\" fill=\"%s\" "
                              "fill-opacity=\"0.6\"/>\n",
                              mx(x), my(y), color);
                svg += buf;
            }
        } else if (!s.pts.empty()) {
            svg += "<polyline fill=\"none\" stroke=\"";
            svg += color;
            svg += "\" stroke-width=\"1.5\" points=\"";
            for (auto [x, y] : s.pts) {
                std::snprintf(buf, sizeof buf, "%.2f,%.2f ", mx(x), my(y));
                svg += buf;
            }
            svg += "\"/>\n";
        }
        if (!s.label.empty()) {
            std::snprintf(buf, sizeof buf,
                          "<text x=\"%g\" y=\"%g\" font-family=\"sans-serif\" font-size=\"12\" "
                          "fill=\"%s\" text-anchor=\"end\">%s</text>\n",
                          kR - 8, kT + 16 + 15 * static_cast<double>(si), color,
                          s.label.c_str());
            svg += buf;
        }
    }
    svg += "</svg>\n";
    return svg;
}

// ---- config resolution --------------------------------------------------

// Every parameter value is carried as a string: flag text if the flag was
// given, else the config-file value, else the built-in default. The resolved
// set (including the subcommand and seed) is what gets hashed into the
// output header, so identical resolved configs hash identically no matter
// how they were supplied.
struct RunCtx {
    CLI::App* sub = nullptr;
    std::string config_path;
    std::string seed_str = "1";
    std::string out_path;
    std::string plot_path;
    json cfg = json::object();
    json resolved = json::object();
    std::uint64_t seed = 1;

    void begin() {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw std::invalid_argument("config: cannot open " + config_path);
            try {
                in >> cfg;
            } catch (const json::exception& e) {
                throw std::invalid_argument("config: " + std::string(e.what()));
            }
            if (!cfg.is_object()) throw std::invalid_argument("config: top level must be an object");
        }
        seed = to_u64(value("seed", seed_str), "seed");
    }

    std::string value(const std::string& key, const std::string& flag_value) {
        std::string v = flag_value;
        if (sub->count("--" + key) == 0) {
            auto it = cfg.find(key);
            if (it != cfg.end()) v = it->is_string() ? it->get<std::string>() : it->dump();
        }
        resolved[key] = v;
        return v;
    }

    bool flag(const std::string& key, bool flag_value) {
        bool v = flag_value;
        if (sub->count("--" + key) == 0) {
            auto it = cfg.find(key);
            if (it != cfg.end()) {
                if (!it->is_boolean()) throw std::invalid_argument("config: " + key + " must be a bool");
                v = it->get<bool>();
            }
        }
        resolved[key] = v;
        return v;
    }

    std::vector<std::string> headers() const {
        return {std::string("# hawkes ") + kVersion, "# config_hash=" + hex64(fnv1a(resolved.dump())),
                "# seed=" + std::to_string(seed)};
    }

    void maybe_plot(const std::string& title, const std::vector<Series>& series) const {
        if (!plot_path.empty()) write_text(plot_path, render_svg(title, series));
    }
};

RunCtx* attach_common(std::deque<RunCtx>& store, CLI::App* sub, const char* name) {
    store.emplace_back();
    RunCtx& c = store.back();
    c.sub = sub;
    c.resolved["subcommand"] = name;
    sub->add_option("--config", c.config_path, "JSON config file; explicit flags win");
    sub->add_option("--seed", c.seed_str, "master seed (default 1)");
    sub->add_option("--out", c.out_path, "output CSV (default $HAWKES_OUT_DIR/<subcommand>.csv)");
    sub->add_option("--plot", c.plot_path, "also render an SVG plot to this path");
    return &c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multivariate Hawkes process simulation and numerical verification"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    std::deque<RunCtx> ctxs;
    int exit_code = 0;

    // ---- validate ----
    struct {
        std::string kernel = "exponential:2,1";
        std::string topology = "complete:10";
        std::string baseline = "constant:1";
        std::string bound = "0";
    } vaf;
    {
        auto* sub = app.add_subcommand("validate", "Check the stability assumption on a network");
        RunCtx* c = attach_common(ctxs, sub, "validate");
        sub->add_option("--kernel", vaf.kernel, "exponential:a,b or rectangular:c,tau");
        sub->add_option("--topology", vaf.topology, "complete:N or lattice:d,L[,boundary]");
        sub->add_option("--baseline", vaf.baseline, "constant:v | alternating:v0,v1 | uniform:lo,hi");
        sub->add_option("--bound", vaf.bound, "reject nodes whose multiplier exceeds this (0 = report only)");
        sub->callback([&, c]() {
            c->begin();
            Kernel k = parse_kernel(c->value("kernel", vaf.kernel));
            Topology topo = parse_topology(c->value("topology", vaf.topology));
            topo.mu = parse_baseline(c->value("baseline", vaf.baseline), topo, c->seed);
            double bound = to_double(c->value("bound", vaf.bound), "bound");
            int n = topo.node_count();
            std::vector<double> ones(static_cast<std::size_t>(n), 1.0);
            AssumptionReport rep = validate_assumption(topo, ones, ones, k, bound);
            std::string csv = join_lines(c->headers());
            csv += "quantity,value\n";
            csv += "kernel_mass," + num(k.total_mass()) + "\n";
            csv += "max_multiplier," + num(rep.max_multiplier) + "\n";
            csv += "weighted_baseline_sum," + num(rep.weighted_baseline_sum) + "\n";
            csv += "offenders," + std::to_string(rep.offenders.size()) + "\n";
            csv += std::string("pass,") + (rep.pass ? "1" : "0") + "\n";
            write_text(default_out(c->out_path, "validate"), csv);
            Series s{"multiplier", {}, false};
            for (int i = 0; i < n; ++i) {
                s.pts.emplace_back(i, rep.multiplier[static_cast<std::size_t>(i)]);
            }
            c->maybe_plot("admissible excitation multiplier per node", {s});
            std::printf("validate: max multiplier %.6g, weighted baseline sum %.6g -> %s\n",
                        rep.max_multiplier, rep.weighted_baseline_sum, rep.pass ? "pass" : "FAIL");
            if (!rep.pass) exit_code = 1;
        });
    }

    // ---- volterra ----
    struct {
        std::string kernel = "exponential:2,1";
        std::string mu = "1";
        std::string T = "1";
        std::string dt = "0.001";
        std::string series = "m";
    } vof;
    {
        auto* sub = app.add_subcommand("volterra", "Mean growth by product-integration");
        RunCtx* c = attach_common(ctxs, sub, "volterra");
        sub->add_option("--kernel", vof.kernel, "exponential:a,b or rectangular:c,tau");
        sub->add_option("--mu", vof.mu, "baseline rate");
        sub->add_option("--T", vof.T, "horizon");
        sub->add_option("--dt", vof.dt, "grid step");
        sub->add_option("--series", vof.series, "m | mprime | gamma | upsilon");
        sub->callback([&, c]() {
            c->begin();
            Kernel k = parse_kernel(c->value("kernel", vof.kernel));
            double mu = to_double(c->value("mu", vof.mu), "mu");
            double T = to_double(c->value("T", vof.T), "T");
            double dt = to_double(c->value("dt", vof.dt), "dt");
            std::string series = c->value("series", vof.series);
            GridFunction g;
            if (series == "m" || series == "mprime") {
                MeanSolution sol = solve_mean(k, IntensityMap::linear(mu), T, dt);
                if (sol.step_too_coarse) {
                    std::fprintf(stderr, "note: step looks coarse (richardson error %.3g)\n",
                                 sol.error_estimate);
                }
                g = series == "m" ? sol.m : sol.m_prime;
            } else if (series == "gamma" || series == "upsilon") {
                RenewalSolution sol = renewal_density(k, T, dt);
                g = series == "gamma" ? sol.gamma : sol.upsilon;
            } else {
                throw std::invalid_argument("series: want m, mprime, gamma or upsilon");
            }
            write_text(default_out(c->out_path, "volterra"), g.to_csv(c->headers()));
            Series s{series, {}, false};
            for (std::size_t i = 0; i < g.size(); ++i) s.pts.emplace_back(g.time_at(i), g.values[i]);
            c->maybe_plot("volterra solution", {s});
            std::printf("volterra: %s(%g) = %.17g\n", series.c_str(), T, g.values.back());
        });
    }

    // ---- simulate ----
    struct {
        std::string kernel = "exponential:1,2";
        std::string topology = "complete:10";
        std::string baseline = "constant:1";
        std::string T = "10";
        std::string audit = "0";
        std::string max_events = "10000000";
        bool force_generic = false;
        bool impulse = false;
    } sif;
    {
        auto* sub = app.add_subcommand("simulate", "Exact thinning simulation, events to CSV");
        RunCtx* c = attach_common(ctxs, sub, "simulate");
        sub->add_option("--kernel", sif.kernel, "exponential:a,b or rectangular:c,tau");
        sub->add_option("--topology", sif.topology, "complete:N or lattice:d,L[,boundary]");
        sub->add_option("--baseline", sif.baseline, "constant:v | alternating:v0,v1 | uniform:lo,hi");
        sub->add_option("--T", sif.T, "horizon");
        sub->add_option("--audit", sif.audit, "fraction of decisions re-verified from history");
        sub->add_option("--max-events", sif.max_events, "explosion guard");
        sub->add_flag("--force-generic", sif.force_generic, "disable the exponential fast path");
        sub->add_flag("--impulse", sif.impulse, "phantom event at t=0 at the origin, no baselines");
        sub->callback([&, c]() {
            c->begin();
            Kernel k = parse_kernel(c->value("kernel", sif.kernel));
            Topology topo = parse_topology(c->value("topology", sif.topology));
            topo.mu = parse_baseline(c->value("baseline", sif.baseline), topo, c->seed);
            double T = to_double(c->value("T", sif.T), "T");
            SimOptions opts;
            opts.audit_fraction = to_double(c->value("audit", sif.audit), "audit");
            opts.max_events = to_u64(c->value("max-events", sif.max_events), "max-events");
            opts.force_generic_path = c->flag("force-generic", sif.force_generic);
            opts.impulse_at_origin = c->flag("impulse", sif.impulse);
            if (opts.impulse_at_origin) {
                topo.mu = constant_baseline(topo.node_count(), 0.0);
            }
            SystemSpec spec{std::move(topo), k, IntensityMap::linear(), T, c->seed};
            AuditReport audit;
            EventLog log =
                simulate(spec, opts, opts.audit_fraction > 0.0 ? &audit : nullptr);
            write_text(default_out(c->out_path, "simulate"), log.to_csv(c->headers()));
            Series s{"total count", {{0.0, 0.0}}, false};
            std::size_t stride = std::max<std::size_t>(1, log.events.size() / 2000);
            for (std::size_t i = 0; i < log.events.size(); i += stride) {
                s.pts.emplace_back(log.events[i].time, static_cast<double>(i + 1));
            }
            c->maybe_plot("superposed counting path", {s});
            std::printf("simulate: %llu events from %llu candidates\n",
                        static_cast<unsigned long long>(log.total()),
                        static_cast<unsigned long long>(log.candidates));
            if (opts.audit_fraction > 0.0) {
                std::printf("audit: %llu checked, %llu mismatches, max rate error %.3g\n",
                            static_cast<unsigned long long>(audit.checked),
                            static_cast<unsigned long long>(audit.decision_mismatches),
                            audit.max_rate_error);
                if (audit.decision_mismatches > 0) exit_code = 1;
            }
        });
    }

    // ---- chaos ----
    struct {
        std::string kernel = "exponential:1,2";
        std::string mu = "1";
        std::string T = "10";
        std::string n_list = "10,100,1000";
        std::string replicas = "200";
    } chf;
    {
        auto* sub = app.add_subcommand("chaos", "Coupled distance to the mean-field limit vs N");
        RunCtx* c = attach_common(ctxs, sub, "chaos");
        sub->add_option("--kernel", chf.kernel, "exponential:a,b or rectangular:c,tau");
        sub->add_option("--mu", chf.mu, "baseline rate");
        sub->add_option("--T", chf.T, "horizon");
        sub->add_option("--n-list", chf.n_list, "network sizes, comma separated");
        sub->add_option("--replicas", chf.replicas, "replicas per size");
        sub->callback([&, c]() {
            c->begin();
            Kernel k = parse_kernel(c->value("kernel", chf.kernel));
            double mu = to_double(c->value("mu", chf.mu), "mu");
            double T = to_double(c->value("T", chf.T), "T");
            std::vector<int> ns = parse_ints(c->value("n-list", chf.n_list), "n-list");
            int reps = static_cast<int>(to_ll(c->value("replicas", chf.replicas), "replicas"));
            ChaosReport rep = chaos_error(k, IntensityMap::linear(mu), T, ns, reps, c->seed);
            std::string csv = join_lines(c->headers());
            csv += "# slope=" + num(rep.slope.slope) + " ci=[" + num(rep.slope.ci_low) + "," +
                   num(rep.slope.ci_high) + "]\n";
            csv += "n,sup_error,stderr,tv_error\n";
            std::vector<Series> series{{"sup error (log10)", {}, true}, {"fit", {}, false}};
            for (std::size_t i = 0; i < ns.size(); ++i) {
                csv += std::to_string(ns[i]) + "," + num(rep.sup_error[i]) + "," +
                       num(rep.sup_error_se[i]) + "," + num(rep.tv_error[i]) + "\n";
                double lx = std::log10(static_cast<double>(ns[i]));
                series[0].pts.emplace_back(lx, std::log10(rep.sup_error[i]));
                double ly = (rep.slope.intercept + rep.slope.slope * std::log(static_cast<double>(ns[i]))) /
                            std::log(10.0);
                series[1].pts.emplace_back(lx, ly);
            }
            write_text(default_out(c->out_path, "chaos"), csv);
            c->maybe_plot("coupled sup distance vs network size (log10 axes)", series);
            std::printf("chaos: slope %.4f, ci [%.4f, %.4f], %d replicas\n", rep.slope.slope,
                        rep.slope.ci_low, rep.slope.ci_high, rep.replicas);
            if (!rep.enough_replicas) {
                std::fprintf(stderr, "note: standard errors are large next to the inter-N spacing; "
                                     "consider more replicas\n");
            }
        });
    }

    // ---- clt ----
    struct {
        std::string kernel = "exponential:1,2";
        std::string mu = "1";
        std::string T = "200";
        std::string N = "200";
        std::string ell = "2";
        std::string replicas = "1000";
    } clf;
    {
        auto* sub = app.add_subcommand("clt", "Normalized fluctuation vectors on the complete graph");
        RunCtx* c = attach_common(ctxs, sub, "clt");
        sub->add_option("--kernel", clf.kernel, "exponential:a,b or rectangular:c,tau");
        sub->add_option("--mu", clf.mu, "baseline rate");
        sub->add_option("--T", clf.T, "horizon");
        sub->add_option("--N", clf.N, "network size");
        sub->add_option("--ell", clf.ell, "components per replica");
        sub->add_option("--replicas", clf.replicas, "replicas");
        sub->callback([&, c]() {
            c->begin();
            Kernel k = parse_kernel(c->value("kernel", clf.kernel));
            double mu = to_double(c->value("mu", clf.mu), "mu");
            double T = to_double(c->value("T", clf.T), "T");
            int n = static_cast<int>(to_ll(c->value("N", clf.N), "N"));
            int ell = static_cast<int>(to_ll(c->value("ell", clf.ell), "ell"));
            int reps = static_cast<int>(to_ll(c->value("replicas", clf.replicas), "replicas"));
            CltSample s = clt_sample(k, mu, T, n, ell, reps, c->seed);
            std::string csv = join_lines(c->headers());
            csv += "# regime=" + to_string(s.regime) + " m_t=" + num(s.m_t) +
                   " scale=" + num(s.scale) + " sigma2=" + num(s.sigma2) + "\n";
            csv += "replica";
            for (int j = 1; j <= ell; ++j) csv += ",z" + std::to_string(j);
            csv += "\n";
            for (std::size_t r = 0; r < s.statistics.size(); ++r) {
                csv += std::to_string(r);
                for (double v : s.statistics[r]) csv += "," + num(v);
                csv += "\n";
            }
            write_text(default_out(c->out_path, "clt"), csv);
            std::vector<double> c0, c1;
            for (const auto& row : s.statistics) {
                c0.push_back(row[0]);
                if (ell > 1) c1.push_back(row[1]);
            }
            std::printf("clt: regime %s, m_T = %.6g, scale = %.6g\n", to_string(s.regime).c_str(),
                        s.m_t, s.scale);
            std::printf("clt: component 1 mean %.4f var %.4f\n", mean(c0), sample_variance(c0));
            if (ell > 1) {
                std::printf("clt: cross-correlation %.4f\n", correlation(c0, c1));
                Series pts{"(z1, z2)", {}, true};
                for (std::size_t r = 0; r < c0.size(); ++r) pts.pts.emplace_back(c0[r], c1[r]);
                c->maybe_plot("fluctuation components", {pts});
            } else {
                std::vector<double> sorted = c0;
                std::sort(sorted.begin(), sorted.end());
                Series ecdf{"ecdf(z1)", {}, false};
                for (std::size_t r = 0; r < sorted.size(); ++r) {
                    ecdf.pts.emplace_back(sorted[r],
                                          static_cast<double>(r + 1) / static_cast<double>(sorted.size()));
                }
                c->maybe_plot("fluctuation ecdf", {ecdf});
            }
            if (s.regime_mismatch) {
                std::fprintf(stderr, "note: m_T/N is between the limit regimes; statistics are "
                                     "labelled but not expected to match either law\n");
            }
        });
    }

    // ---- lattice-lln ----
    struct {
        std::string kernel = "exponential:1,2";
        std::string d = "1";
        std::string L = "201";
        std::string boundary = "periodic";
        std::string baseline = "alternating:0,2";
        std::string T = "200";
        std::string replicas = "200";
    } llf;
    {
        auto* sub = app.add_subcommand("lattice-lln", "Per-node long-run averages on a lattice box");
        RunCtx* c = attach_common(ctxs, sub, "lattice-lln");
        sub->add_option("--kernel", llf.kernel, "exponential:a,b or rectangular:c,tau");
        sub->add_option("--d", llf.d, "lattice dimension");
        sub->add_option("--L", llf.L, "box side (odd)");
        sub->add_option("--boundary", llf.boundary, "periodic | absorbing");
        sub->add_option("--baseline", llf.baseline, "constant:v | alternating:v0,v1 | uniform:lo,hi");
        sub->add_option("--T", llf.T, "horizon");
        sub->add_option("--replicas", llf.replicas, "replicas");
        sub->callback([&, c]() {
            c->begin();
            Kernel k = parse_kernel(c->value("kernel", llf.kernel));
            int d = static_cast<int>(to_ll(c->value("d", llf.d), "d"));
            int L = static_cast<int>(to_ll(c->value("L", llf.L), "L"));
            Boundary b = parse_boundary(c->value("boundary", llf.boundary));
            Topology topo = Topology::lattice_box(d, L, b);
            topo.mu = parse_baseline(c->value("baseline", llf.baseline), topo, c->seed);
            double T = to_double(c->value("T", llf.T), "T");
            int reps = static_cast<int>(to_ll(c->value("replicas", llf.replicas), "replicas"));
            Criticality crit = k.classify();
            if (crit == Criticality::critical) {
                throw std::invalid_argument("lattice-lln: kernel mass 1 sits on the boundary "
                                            "between regimes; no limit to test against");
            }
            LatticeLlnReport rep = crit == Criticality::subcritical
                                       ? lln_subcritical(topo, k, T, reps, c->seed)
                                       : lln_supercritical(topo, k, T, reps, c->seed);
            write_text(default_out(c->out_path, "lattice-lln"), rep.to_csv(c->headers()));
            Series est{"estimate", {}, false}, tgt{"target", {}, false};
            double worst = 0.0;
            for (std::size_t i = 0; i < rep.nodes.size(); ++i) {
                est.pts.emplace_back(rep.nodes[i], rep.estimate[i]);
                tgt.pts.emplace_back(rep.nodes[i], rep.target[i]);
                if (rep.target[i] != 0.0) {
                    worst = std::max(worst, std::abs(rep.estimate[i] / rep.target[i] - 1.0));
                }
            }
            c->maybe_plot("per-node limit estimate", {est, tgt});
            std::printf("lattice-lln: %s, %zu monitored nodes, worst relative error %.4f\n",
                        to_string(crit).c_str(), rep.nodes.size(), worst);
            if (crit == Criticality::supercritical) {
                std::printf("lattice-lln: flatness %.4f\n", rep.flatness);
            }
            if (rep.box_too_small) {
                std::fprintf(stderr, "lattice-lln: absorbing box leaks too much mass for the "
                                     "monitored nodes; grow L or T\n");
                exit_code = 1;
            }
        });
    }

    // ---- impulse-extinction ----
    struct {
        std::string kernel = "exponential:2,1";
        std::string lambda;
        std::string replicas = "10000";
        std::string generation_cap = "1000";
        std::string threshold = "2000";
    } ief;
    {
        auto* sub = app.add_subcommand("impulse-extinction",
                                       "Extinction probability of the impulse cascade");
        RunCtx* c = attach_common(ctxs, sub, "impulse-extinction");
        sub->add_option("--kernel", ief.kernel, "sets lambda = kernel mass unless --lambda given");
        sub->add_option("--lambda", ief.lambda, "mean offspring count (overrides the kernel mass)");
        sub->add_option("--replicas", ief.replicas, "replicas");
        sub->add_option("--generation-cap", ief.generation_cap, "stop a run after this many generations");
        sub->add_option("--threshold", ief.threshold, "population declaring survival (supercritical)");
        sub->callback([&, c]() {
            c->begin();
            std::string lam_str = c->value("lambda", ief.lambda);
            Kernel k = parse_kernel(c->value("kernel", ief.kernel));
            double lam = lam_str.empty() ? k.total_mass() : to_double(lam_str, "lambda");
            int reps = static_cast<int>(to_ll(c->value("replicas", ief.replicas), "replicas"));
            int cap = static_cast<int>(to_ll(c->value("generation-cap", ief.generation_cap),
                                             "generation-cap"));
            std::uint64_t thr = to_u64(c->value("threshold", ief.threshold), "threshold");
            ExtinctionEstimate est = extinction_empirical(lam, reps, c->seed, cap, thr);
            write_text(default_out(c->out_path, "impulse-extinction"),
                       join_lines(c->headers()) + est.to_csv());
            Series pts{"closed form / empirical", {{0.0, est.closed_form}, {1.0, est.empirical}},
                       true};
            c->maybe_plot("extinction probability", {pts});
            std::printf("impulse-extinction: lambda %.6g, closed form %.8f, empirical %.8f "
                        "(se %.2g, cap fraction %.2g)\n",
                        lam, est.closed_form, est.empirical, est.se, est.cap_fraction);
        });
    }

    // ---- impulse-profile ----
    struct {
        std::string kernel = "exponential:2,1";
        std::string L = "81";
        std::string boundary = "periodic";
        std::string T = "10";
        std::string t_list = "6,8,10";
        std::string x_list = "-1,-0.5,0,0.5,1";
        std::string replicas = "2000";
    } ipf;
    {
        auto* sub = app.add_subcommand("impulse-profile",
                                       "Space-time shape of the surviving cascade");
        RunCtx* c = attach_common(ctxs, sub, "impulse-profile");
        sub->add_option("--kernel", ipf.kernel, "supercritical exponential:a,b");
        sub->add_option("--L", ipf.L, "box side (odd)");
        sub->add_option("--boundary", ipf.boundary, "periodic | absorbing");
        sub->add_option("--T", ipf.T, "simulation horizon");
        sub->add_option("--t-list", ipf.t_list, "profile times, increasing");
        sub->add_option("--x-list", ipf.x_list, "diffusive positions x (node nearest x sqrt t)");
        sub->add_option("--replicas", ipf.replicas, "replicas");
        sub->callback([&, c]() {
            c->begin();
            ImpulsionSpec spec;
            spec.d = 1;
            spec.kernel = parse_kernel(c->value("kernel", ipf.kernel));
            spec.L = static_cast<int>(to_ll(c->value("L", ipf.L), "L"));
            spec.boundary = parse_boundary(c->value("boundary", ipf.boundary));
            spec.horizon = to_double(c->value("T", ipf.T), "T");
            spec.seed = c->seed;
            std::vector<double> ts = parse_doubles(c->value("t-list", ipf.t_list), "t-list");
            std::vector<double> xs = parse_doubles(c->value("x-list", ipf.x_list), "x-list");
            int reps = static_cast<int>(to_ll(c->value("replicas", ipf.replicas), "replicas"));
            ProfileReport rep = profile(spec, ts, xs, reps);
            std::string csv = join_lines(c->headers());
            csv += "# h_mean=" + num(rep.h_mean) + " h_stderr=" + num(rep.h_se) +
                   " h_sensitivity=" + num(rep.h_sensitivity) + "\n";
            csv += "# extinct_fraction=" + num(rep.extinct_fraction) +
                   " extinct_closed_form=" + num(rep.extinct_closed_form) + "\n";
            csv += rep.to_csv();
            write_text(default_out(c->out_path, "impulse-profile"), csv);
            std::vector<Series> series;
            for (std::size_t kx = 0; kx < ts.size(); ++kx) {
                Series s{"t=" + std::to_string(ts[kx]).substr(0, 4), {}, false};
                for (std::size_t j = 0; j < xs.size(); ++j) {
                    s.pts.emplace_back(xs[j], rep.ratio_median[kx][j]);
                }
                series.push_back(std::move(s));
            }
            c->maybe_plot("profile ratio vs x", series);
            std::printf("impulse-profile: %d/%d survivors, h %.4f +- %.4f, extinct %.4f "
                        "(closed form %.5f), half-horizon shift %.3g\n",
                        rep.survivors, rep.replicas, rep.h_mean, rep.h_se, rep.extinct_fraction,
                        rep.extinct_closed_form, rep.h_sensitivity);
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return exit_code;
}

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fbq/analytic/sojourn.hpp"
#include "fbq/asymptotics/asymptotics.hpp"
#include "fbq/dist/parse.hpp"
#include "fbq/dist/service.hpp"
#include "fbq/sim/engine.hpp"
#include "fbq/sim/stats.hpp"
#include "fbq/tail/tail.hpp"

namespace {

using fbq::ServiceDistribution;
using fbq::TrafficPoint;
using json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitUnsupported = 3;
constexpr int kExitNumerical = 4;

// Shortest decimal that parses back to the same double.
std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

// 17 significant digits, scientific: round-trip exact and >= 12 digits
// (scan rows).
std::string fmt17(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto [ptr, ec] =
        std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, 16);
    (void)ec;
    return std::string(buf, ptr);
}

struct CommonArgs {
    std::string dist_spec;
    std::optional<double> rho;
    std::optional<double> lambda;
    std::string out;
    std::string format = "csv";
    double jobs = 100000;
    double warmup = 0;
    std::uint32_t reps = 1;
    std::uint64_t seed = 1;
    std::string config_path;
};

void write_output(const std::string& out, const std::string& text) {
    if (out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file " + out);
    f << text;
}

TrafficPoint traffic_point(const ServiceDistribution& d, const CommonArgs& args) {
    if (args.rho && args.lambda) {
        throw CLI::ValidationError("--rho and --lambda are mutually exclusive; supply one");
    }
    if (args.rho) return TrafficPoint::from_rho(d, *args.rho);
    if (args.lambda) return TrafficPoint::from_lambda(d, *args.lambda);
    throw CLI::ValidationError("one of --rho / --lambda is required");
}

std::vector<double> parse_grid(const std::string& text, const std::string& what) {
    // Either comma-separated values or lo:hi:count.
    std::vector<double> grid;
    auto number = [&](const std::string& tok) {
        double v = 0.0;
        auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc{} || p != tok.data() + tok.size()) {
            throw CLI::ValidationError(what + ": bad number '" + tok + "'");
        }
        return v;
    };
    if (text.find(':') != std::string::npos) {
        std::stringstream ss(text);
        std::string lo_s, hi_s, n_s;
        if (!std::getline(ss, lo_s, ':') || !std::getline(ss, hi_s, ':') ||
            !std::getline(ss, n_s)) {
            throw CLI::ValidationError(what + ": expected lo:hi:count");
        }
        const double lo = number(lo_s);
        const double hi = number(hi_s);
        const int n = static_cast<int>(number(n_s));
        if (n < 2 || hi <= lo) throw CLI::ValidationError(what + ": expected lo < hi, count >= 2");
        for (int i = 0; i < n; ++i) {
            grid.push_back(lo + (hi - lo) * i / (n - 1));
        }
        return grid;
    }
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) grid.push_back(number(tok));
    if (grid.empty()) throw CLI::ValidationError(what + ": empty grid");
    return grid;
}

// key=value lines; '#' starts a comment. Flags given on the command line win.
std::map<std::string, std::string> read_config(const std::string& path) {
    std::map<std::string, std::string> kv;
    std::ifstream f(path);
    if (!f) throw CLI::ValidationError("cannot read config file " + path);
    std::string line;
    while (std::getline(f, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto strip = [](std::string s) {
            while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.erase(s.begin());
            while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
                s.pop_back();
            return s;
        };
        std::string key = strip(line.substr(0, eq));
        if (!key.empty()) kv[key] = strip(line.substr(eq + 1));
    }
    return kv;
}

void apply_config(CLI::App* cmd, const CommonArgs& args) {
    if (args.config_path.empty()) return;
    for (const auto& [key, value] : read_config(args.config_path)) {
        CLI::Option* opt = cmd->get_option_no_throw("--" + key);
        if (opt == nullptr || opt->count() > 0) continue;  // unknown key or flag given
        opt->add_result(value);
        opt->run_callback();
    }
}

void add_common(CLI::App* cmd, CommonArgs& args, bool needs_traffic) {
    cmd->add_option("--dist", args.dist_spec, "service distribution, e.g. pareto(alpha=3,xl=1)")
        ->required();
    if (needs_traffic) {
        cmd->add_option("--rho", [&args](const CLI::results_t& res) {
            args.rho = std::stod(res[0]);
            return true;
        }, "offered load rho = lambda E[B]");
        cmd->add_option("--lambda", [&args](const CLI::results_t& res) {
            args.lambda = std::stod(res[0]);
            return true;
        }, "arrival rate");
    }
    cmd->add_option("--out", args.out, "output path (default: stdout)");
    cmd->add_option("--format", args.format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--seed", args.seed, "random seed");
    cmd->add_option("--jobs", args.jobs, "measured jobs");
    cmd->add_option("--warmup", args.warmup, "warmup jobs per replication");
    cmd->add_option("--reps", args.reps, "replications");
    cmd->add_option("--config", args.config_path, "key=value config file");
}

// ---- dist ------------------------------------------------------------

int cmd_dist(const CommonArgs& args) {
    ServiceDistribution d = fbq::parse_distribution(args.dist_spec);
    double eq_mean = std::numeric_limits<double>::infinity();
    if (std::isfinite(d.second_moment())) eq_mean = d.eq_mean();
    const fbq::MdaInfo info = fbq::mda_info(d);

    if (args.format == "json") {
        json j;
        j["dist"] = fbq::format_distribution(d);
        j["mean"] = d.mean();
        j["second_moment"] = d.second_moment();
        j["eq_mean"] = eq_mean;
        j["x_right"] = std::isinf(d.x_right()) ? json("inf") : json(d.x_right());
        j["mda_class"] = info.class_name();
        j["p_H"] = info.p_H ? json(*info.p_H) : json();
        j["r_H"] = info.r_H ? json(*info.r_H) : json();
        write_output(args.out, j.dump(2) + "\n");
        return kExitOk;
    }
    std::ostringstream s;
    s << "dist," << fbq::format_distribution(d) << "\n"
      << "mean," << fmt(d.mean()) << "\n"
      << "second_moment," << fmt(d.second_moment()) << "\n"
      << "eq_mean," << fmt(eq_mean) << "\n"
      << "x_right," << fmt(d.x_right()) << "\n"
      << "mda_class," << info.class_name() << "\n"
      << "p_H," << (info.p_H ? fmt(*info.p_H) : "") << "\n"
      << "r_H," << (info.r_H ? fmt(*info.r_H) : "") << "\n";
    write_output(args.out, s.str());
    return kExitOk;
}

// ---- mean ------------------------------------------------------------

int cmd_mean(const CommonArgs& args) {
    ServiceDistribution d = fbq::parse_distribution(args.dist_spec);
    TrafficPoint tp = traffic_point(d, args);
    const double direct = fbq::mean_sojourn_fb(tp);
    const double alt = fbq::mean_sojourn_fb_alt(tp);
    const double srpt = fbq::mean_sojourn_srpt(tp);
    if (args.format == "json") {
        json j;
        j["rho"] = tp.rho;
        j["lambda"] = tp.lambda;
        j["mean_fb"] = direct;
        j["mean_fb_alt"] = alt;
        j["mean_srpt"] = srpt;
        write_output(args.out, j.dump(2) + "\n");
        return kExitOk;
    }
    std::ostringstream s;
    s << "rho,lambda,mean_fb,mean_fb_alt,mean_srpt\n"
      << fmt(tp.rho) << ',' << fmt(tp.lambda) << ',' << fmt(direct) << ',' << fmt(alt) << ','
      << fmt(srpt) << "\n";
    write_output(args.out, s.str());
    return kExitOk;
}

// ---- asymp -----------------------------------------------------------

int cmd_asymp(const CommonArgs& args) {
    ServiceDistribution d = fbq::parse_distribution(args.dist_spec);
    TrafficPoint tp = traffic_point(d, args);
    const fbq::AsymptoticRegime regime = fbq::classify_regime(d);
    const double mean = fbq::asymptotic_mean_fb(tp);
    double growth = std::numeric_limits<double>::quiet_NaN();
    if (regime.kind != fbq::RateKind::LogRate) {
        growth = fbq::growth_functional(tp).value;
    }
    auto optional_value = [&](auto&& f) {
        try {
            return f();
        } catch (const std::exception&) {
            return std::numeric_limits<double>::quiet_NaN();
        }
    };
    const double table = optional_value([&] { return fbq::gumbel_table_mean(tp); });
    const double srpt_ratio = optional_value([&] { return fbq::srpt_ratio_asymptotic(tp); });

    if (args.format == "json") {
        json j;
        j["rho"] = tp.rho;
        j["asymptotic_mean"] = mean;
        j["growth_functional"] = std::isnan(growth) ? json() : json(growth);
        j["rate"] = regime.rate_description;
        j["leading_constant"] = regime.leading_constant;
        j["gumbel_table_mean"] = std::isnan(table) ? json() : json(table);
        j["srpt_ratio"] = std::isnan(srpt_ratio) ? json() : json(srpt_ratio);
        write_output(args.out, j.dump(2) + "\n");
        return kExitOk;
    }
    std::ostringstream s;
    s << "rho,asymptotic_mean,growth_functional,rate,leading_constant,gumbel_table_mean,"
         "srpt_ratio\n"
      << fmt(tp.rho) << ',' << fmt(mean) << ',' << fmt(growth) << ',' << regime.rate_description
      << ',' << fmt(regime.leading_constant) << ',' << fmt(table) << ',' << fmt(srpt_ratio)
      << "\n";
    write_output(args.out, s.str());
    return kExitOk;
}

// ---- tail ------------------------------------------------------------

int cmd_tail(const CommonArgs& args, const std::string& t_grid_s, const std::string& q_grid_s) {
    ServiceDistribution d = fbq::parse_distribution(args.dist_spec);
    const fbq::TailParams params = fbq::TailParams::from_mda(fbq::mda_info(d), d.eq_mean());

    std::vector<double> t_grid =
        t_grid_s.empty() ? parse_grid("0:" + fmt(10.0 * params.eq_mean) + ":101", "--t-grid")
                         : parse_grid(t_grid_s, "--t-grid");
    std::vector<double> q_grid = q_grid_s.empty()
                                     ? std::vector<double>{0, 0.25, 0.5, 1, 2, 4, 8}
                                     : parse_grid(q_grid_s, "--q-grid");

    std::vector<double> gstar(t_grid.size());
    for (std::size_t i = 0; i < t_grid.size(); ++i) gstar[i] = fbq::g_star(t_grid[i], params);
    std::vector<double> lap(q_grid.size());
    for (std::size_t i = 0; i < q_grid.size(); ++i) lap[i] = fbq::laplace_residual(q_grid[i], params);

    if (args.format == "json") {
        json j;
        j["p_H"] = params.p_H;
        j["r_H"] = params.r_H;
        j["eq_mean"] = params.eq_mean;
        j["gstar"] = json::array();
        for (std::size_t i = 0; i < t_grid.size(); ++i) j["gstar"].push_back({t_grid[i], gstar[i]});
        j["laplace"] = json::array();
        for (std::size_t i = 0; i < q_grid.size(); ++i) j["laplace"].push_back({q_grid[i], lap[i]});
        write_output(args.out, j.dump(2) + "\n");
        return kExitOk;
    }
    std::ostringstream s;
    s << "kind,arg,value\n";
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        s << "gstar," << fmt(t_grid[i]) << ',' << fmt(gstar[i]) << "\n";
    }
    for (std::size_t i = 0; i < q_grid.size(); ++i) {
        s << "laplace," << fmt(q_grid[i]) << ',' << fmt(lap[i]) << "\n";
    }
    write_output(args.out, s.str());
    return kExitOk;
}

// ---- simulate ---------------------------------------------------------

int cmd_simulate(const CommonArgs& args) {
    ServiceDistribution d = fbq::parse_distribution(args.dist_spec);
    TrafficPoint tp = traffic_point(d, args);

    fbq::SimConfig cfg;
    cfg.measured_jobs = static_cast<std::uint64_t>(args.jobs);
    cfg.warmup_jobs = static_cast<std::uint64_t>(args.warmup);
    cfg.replications = args.reps;
    cfg.seed = args.seed;
    fbq::SimResult res = fbq::simulate_fb_detailed(tp, cfg);
    fbq::SojournStats stats = fbq::summarize(res, cfg.ccdf_points);

    json j;
    j["dist"] = fbq::format_distribution(d);
    j["rho"] = tp.rho;
    j["lambda"] = tp.lambda;
    j["seed"] = args.seed;
    j["jobs"] = cfg.measured_jobs;
    j["warmup"] = cfg.warmup_jobs;
    j["reps"] = cfg.replications;
    j["n"] = stats.n;
    j["mean"] = stats.mean;
    j["variance"] = stats.variance;
    j["std_error"] = stats.std_error;
    j["busy_periods"] = stats.busy_periods;
    j["ccdf"] = json::array();
    for (const auto& [y, frac] : stats.empirical_ccdf) j["ccdf"].push_back({y, frac});

    // Scaled-tail diagnostic against g* when the MDA class admits one.
    try {
        const fbq::TailParams params = fbq::TailParams::from_mda(fbq::mda_info(d), d.eq_mean());
        const double fbar = fbq::ccdf(d, fbq::g_inverse(d, tp.rho));
        const double denom = params.r_H * params.eq_mean * fbar;
        const double omr2 = (1.0 - tp.rho) * (1.0 - tp.rho);
        std::vector<double> sorted(res.sojourns);
        std::sort(sorted.begin(), sorted.end());
        json rows = json::array();
        for (int i = 1; i <= 32; ++i) {
            const double y = 0.125 * i * params.eq_mean;
            const double emp = fbq::empirical_ccdf_at(sorted, y / omr2);
            rows.push_back({y, emp / denom, fbq::g_star(y, params)});
        }
        j["scaled_tail"] = std::move(rows);
        j["scaled_tail_columns"] = {"y", "scaled_empirical", "gstar"};
    } catch (const fbq::UnsupportedRegimeError&) {
        j["scaled_tail"] = json();
    } catch (const fbq::InfiniteMomentError&) {
        j["scaled_tail"] = json();
    }
    write_output(args.out, j.dump(2) + "\n");
    return kExitOk;
}

// ---- scan ------------------------------------------------------------

int cmd_scan(const CommonArgs& args, const std::string& rhos_s, const std::string& nlist_s) {
    ServiceDistribution d = fbq::parse_distribution(args.dist_spec);
    if (!rhos_s.empty() && !nlist_s.empty()) {
        throw CLI::ValidationError("--rhos and --n-list are mutually exclusive");
    }
    std::vector<double> rhos;
    if (!rhos_s.empty()) {
        rhos = parse_grid(rhos_s, "--rhos");
    } else {
        std::vector<double> ns = nlist_s.empty() ? std::vector<double>{10, 100, 1000, 10000}
                                                 : parse_grid(nlist_s, "--n-list");
        for (double n : ns) rhos.push_back(1.0 - 1.0 / n);
    }
    for (double rho : rhos) {
        if (!(rho > 0.0 && rho < 1.0)) {
            throw CLI::ValidationError("scan grid must lie in (0,1)");
        }
    }

    bool any_failure = false;
    std::ostringstream csv;
    csv << "rho,exact_mean,asymptotic_mean,ratio,growth_functional,log_bench\n";
    json rows = json::array();
    for (double rho : rhos) {
        TrafficPoint tp = TrafficPoint::from_rho(d, rho);
        const double nan = std::numeric_limits<double>::quiet_NaN();
        double exact = nan;
        double asymp = nan;
        double growth = nan;
        try {
            exact = fbq::mean_sojourn_fb(tp, {1e-10, 1e-9, 100000});
            asymp = fbq::asymptotic_mean_fb(tp);
            const fbq::AsymptoticRegime regime = fbq::classify_regime(d);
            growth = regime.kind == fbq::RateKind::LogRate ? nan
                                                           : fbq::growth_functional(tp).value;
        } catch (const fbq::QuadratureError&) {
            any_failure = true;
        }
        const double ratio = exact / asymp;
        const double lb = -std::log1p(-rho);
        csv << fmt17(rho) << ',' << fmt17(exact) << ',' << fmt17(asymp) << ',' << fmt17(ratio)
            << ',' << fmt17(growth) << ',' << fmt17(lb) << "\n";
        rows.push_back({{"rho", rho},
                        {"exact_mean", exact},
                        {"asymptotic_mean", asymp},
                        {"ratio", ratio},
                        {"growth_functional", growth},
                        {"log_bench", lb}});
    }
    if (args.format == "json") {
        write_output(args.out, rows.dump(2) + "\n");
    } else {
        write_output(args.out, csv.str());
    }
    return any_failure ? kExitNumerical : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"M/GI/1 foreground-background sojourn-time workbench"};
    app.require_subcommand(1);

    CommonArgs dist_args, mean_args, asymp_args, tail_args, sim_args, scan_args;
    std::string t_grid, q_grid, rhos, nlist;

    CLI::App* c_dist = app.add_subcommand("dist", "distribution report");
    add_common(c_dist, dist_args, false);
    CLI::App* c_mean = app.add_subcommand("mean", "exact mean sojourn times (quadrature)");
    add_common(c_mean, mean_args, true);
    CLI::App* c_asymp = app.add_subcommand("asymp", "closed-form heavy-traffic asymptotics");
    add_common(c_asymp, asymp_args, true);
    CLI::App* c_tail = app.add_subcommand("tail", "limiting residual tail density grids");
    add_common(c_tail, tail_args, false);
    c_tail->add_option("--t-grid", t_grid, "t grid: comma list or lo:hi:count");
    c_tail->add_option("--q-grid", q_grid, "q grid: comma list or lo:hi:count");
    CLI::App* c_sim = app.add_subcommand("simulate", "event-driven FB simulation");
    add_common(c_sim, sim_args, true);
    CLI::App* c_scan = app.add_subcommand("scan", "heavy-traffic sweep");
    add_common(c_scan, scan_args, false);
    c_scan->add_option("--rhos", rhos, "explicit rho grid (comma list or lo:hi:count)");
    c_scan->add_option("--n-list", nlist, "rho = 1 - 1/n grid (default 10,100,1000,10000)");

    try {
        app.parse(argc, argv);
        if (c_dist->parsed()) {
            apply_config(c_dist, dist_args);
            return cmd_dist(dist_args);
        }
        if (c_mean->parsed()) {
            apply_config(c_mean, mean_args);
            return cmd_mean(mean_args);
        }
        if (c_asymp->parsed()) {
            apply_config(c_asymp, asymp_args);
            return cmd_asymp(asymp_args);
        }
        if (c_tail->parsed()) {
            apply_config(c_tail, tail_args);
            return cmd_tail(tail_args, t_grid, q_grid);
        }
        if (c_sim->parsed()) {
            apply_config(c_sim, sim_args);
            return cmd_simulate(sim_args);
        }
        if (c_scan->parsed()) {
            apply_config(c_scan, scan_args);
            return cmd_scan(scan_args, rhos, nlist);
        }
        return kExitUsage;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitUsage;
    } catch (const fbq::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const fbq::UnsupportedRegimeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUnsupported;
    } catch (const fbq::InfiniteMomentError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUnsupported;
    } catch (const fbq::QuadratureError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const fbq::SimulationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}

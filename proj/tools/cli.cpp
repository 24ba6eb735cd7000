#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "generators.hpp"
#include "pelastic/bounds.hpp"
#include "pelastic/io.hpp"
#include "pelastic/optimize.hpp"
#include "pelastic/surgery.hpp"

namespace fs = std::filesystem;

namespace pelastic::cli {

namespace {

const std::vector<std::string> kCheckNames{"isop",     "isop_plus", "theta_growth",   "length_lower",
                                           "kubota",   "diameter",  "curvature_lower"};
const std::vector<std::string> kDefaultChecks{"isop", "isop_plus", "theta_growth", "length_lower", "kubota",
                                              "diameter"};

class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct Options {
    std::vector<std::string> inputs;
    std::vector<std::string> generators;
    std::string family;
    std::size_t count = 20;
    std::uint64_t seed = 1;
    std::string p_list = "2";
    std::string f_spec;
    std::size_t n = 256;
    double area = kPi;
    double tol = 1e-4;
    int max_outer = 40;
    std::string checks;
    std::string out = "pelastic-out";
    std::string operation;
    double eps = 0.0;
    int threads = 0;
};

std::vector<std::string> split_list(const std::string &s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    for (std::string item; std::getline(in, item, ',');)
        if (!item.empty()) out.push_back(item);
    return out;
}

std::vector<double> parse_p_list(const std::string &s) {
    std::vector<double> out;
    for (const std::string &item : split_list(s)) {
        std::size_t used = 0;
        double p = 0.0;
        try {
            p = std::stod(item, &used);
        } catch (const std::exception &) {
            used = 0;
        }
        if (used != item.size()) throw UsageError("--p: bad number \"" + item + "\"");
        if (!(p > 1.0) || !std::isfinite(p)) throw UsageError("--p: every exponent must be finite and > 1");
        out.push_back(p);
    }
    if (out.empty()) throw UsageError("--p: empty exponent list");
    return out;
}

std::vector<std::string> parse_checks(const std::string &s) {
    if (s.empty()) return kDefaultChecks;
    std::vector<std::string> out = split_list(s);
    for (const std::string &c : out)
        if (std::find(kCheckNames.begin(), kCheckNames.end(), c) == kCheckNames.end())
            throw UsageError("--checks: unknown check \"" + c + "\"");
    return out;
}

void validate(const Options &o) {
    const bool pow2 = o.n >= 64 && o.n <= 4096 && (o.n & (o.n - 1)) == 0;
    if (!pow2) throw UsageError("--N must be a power of two in [64, 4096]");
    if (!(o.area > 0.0)) throw UsageError("--area must be positive");
    for (const std::string &path : o.inputs)
        if (!fs::exists(path)) throw UsageError("input file " + path + " does not exist");
    if (!o.family.empty() &&
        std::find(gen::family_names().begin(), gen::family_names().end(), o.family) == gen::family_names().end())
        throw UsageError("--family: unknown family \"" + o.family + "\"");
    parse_p_list(o.p_list);
}

CurvatureIntegrand integrand_for(const Options &o, double p) {
    if (o.f_spec.empty()) return CurvatureIntegrand::power(p);
    const auto colon = o.f_spec.find(':');
    if (colon != std::string::npos) {
        const std::string kind = o.f_spec.substr(0, colon);
        const double q = std::stod(o.f_spec.substr(colon + 1));
        if (kind == "power") return CurvatureIntegrand::power(q);
        if (kind == "positive_power" || kind == "plus") return CurvatureIntegrand::positive_power(q);
        throw UsageError("--f: unknown integrand kind \"" + kind + "\"");
    }
    try {
        return integrand_from_json(read_json_file(o.f_spec));
    } catch (const std::invalid_argument &e) {
        throw std::runtime_error(o.f_spec + ": " + e.what());
    }
}

std::vector<gen::NamedCurve> load_curves(const Options &o) {
    std::vector<gen::NamedCurve> out;
    for (const std::string &path : o.inputs) {
        try {
            out.push_back({fs::path(path).stem().string(), angle_curve_from_json(read_json_file(path), o.n)});
        } catch (const std::invalid_argument &e) {
            throw std::runtime_error(path + ": " + e.what());
        }
    }
    for (const std::string &spec : o.generators) out.push_back(gen::make_generator(spec, o.n));
    if (!o.family.empty()) {
        auto fam = gen::make_family(o.family, o.count, o.seed, o.n);
        std::move(fam.begin(), fam.end(), std::back_inserter(out));
    }
    if (out.empty()) throw UsageError("no curves given (use --input, --generator or --family)");
    return out;
}

std::string p_tag(double p) {
    std::ostringstream os;
    os << p;
    return os.str();
}

void write_text(const fs::path &path, const std::string &text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

void write_manifest(const std::string &command, const Options &o) {
    fs::create_directories(o.out);
    Json m{{"command", command},
           {"inputs", o.inputs},
           {"generators", o.generators},
           {"family", o.family},
           {"count", o.count},
           {"seed", o.seed},
           {"params",
            {{"p", parse_p_list(o.p_list)},
             {"f", o.f_spec.empty() ? "power:p" : o.f_spec},
             {"N", o.n},
             {"area", o.area},
             {"tol", o.tol},
             {"max_outer", o.max_outer},
             {"checks", parse_checks(o.checks)},
             {"operation", o.operation},
             {"eps", o.eps}}},
           {"outputs", o.out}};
    write_json_file(fs::path(o.out) / "manifest.json", m);
}

// Runs task(i) for i in [0, count) on worker threads; the first failure in
// index order is rethrown.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)> &task) {
    std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads) : std::thread::hardware_concurrency();
    workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(1, count));
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                task(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (std::thread &t : pool) t.join();
    for (const std::exception_ptr &e : errors)
        if (e) std::rethrow_exception(e);
}

std::string svg_of(const std::vector<AngleCurve> &curves, const std::vector<std::pair<Vec2, Vec2>> &dashed) {
    static const char *colors[] = {"black", "#1f77b4", "#d62728"};
    std::vector<SvgPath> paths;
    for (std::size_t i = 0; i < curves.size(); ++i) {
        // unconverged iterates may not close; draw them as integrated
        const PointCurve pc = points_from_angle(curves[i], {}, std::numeric_limits<double>::infinity());
        paths.push_back({std::vector<Vec2>(pc.points().begin(), pc.points().end()), colors[i % 3]});
    }
    return render_svg(paths, dashed);
}

int cmd_eval(const Options &o) {
    const auto curves = load_curves(o);
    const auto ps = parse_p_list(o.p_list);
    std::ostringstream csv;
    csv << std::setprecision(17)
        << "curve-id,p,N,L,area,width,diameter,convex,E_f,F_p,F_p_plus,Q_p,Q_p_plus,Q_circle\n";
    Json rows = Json::array();
    for (const auto &[id, curve] : curves) {
        const CurveMetrics m = metrics(curve);
        for (double p : ps) {
            const EnergyReport e = energy_report(curve, integrand_for(o, p), p);
            csv << id << ',' << p << ',' << curve.size() << ',' << m.length << ',' << m.area << ',' << m.width << ','
                << m.diameter << ',' << (m.convex ? "true" : "false") << ',' << e.e_f << ',' << e.f_p << ','
                << e.f_p_plus << ',' << e.q_p << ',' << e.q_p_plus << ',' << circle_quotient(p) << '\n';
            rows.push_back({{"curve_id", id}, {"p", p}, {"metrics", to_json(m)}, {"energy", to_json(e)},
                            {"Q_circle", circle_quotient(p)}});
            std::cout << id << " p=" << p << " F_p=" << e.f_p << " Q_p=" << e.q_p << " (circle "
                      << circle_quotient(p) << ")\n";
        }
    }
    write_text(fs::path(o.out) / "eval.csv", csv.str());
    write_json_file(fs::path(o.out) / "eval.json", rows);
    return kExitOk;
}

OptimizerConfig optimizer_config(const Options &o, double p) {
    OptimizerConfig cfg;
    cfg.p = p;
    cfg.target_area = o.area;
    cfg.n = o.n;
    cfg.max_outer = o.max_outer;
    cfg.grad_tol = o.tol;
    cfg.validate();
    return cfg;
}

int cmd_minimize(const Options &o) {
    const auto curves = load_curves(o);
    const auto ps = parse_p_list(o.p_list);
    bool all_converged = true;
    for (const auto &[id, curve] : curves)
        for (double p : ps) {
            const OptimizationResult r = minimize_Fp(curve, optimizer_config(o, p));
            const std::string stem = id + "_p" + p_tag(p);
            const fs::path dir(o.out);
            write_json_file(dir / (stem + "_result.json"), to_json(r));
            std::ostringstream hist;
            write_history_csv(hist, r.history);
            write_text(dir / (stem + "_history.csv"), hist.str());
            write_text(dir / (stem + "_initial.svg"), svg_of({curve}, {}));
            write_text(dir / (stem + "_final.svg"), svg_of({r.curve}, {}));
            std::cout << stem << ": " << (r.converged ? "converged" : "not converged") << " after "
                      << r.outer_iterations << " outer / " << r.inner_iterations
                      << " inner iterations, circularity " << r.circularity << ", Q_p " << r.q_p << " (circle "
                      << circle_quotient(p) << "), EL residual " << r.el_residual << '\n';
            all_converged = all_converged && r.converged;
        }
    return all_converged ? kExitOk : kExitNotConverged;
}

int cmd_surgery(const Options &o) {
    static const std::vector<std::string> ops{"centrosymmetrize", "perturb", "notch", "reduce"};
    if (std::find(ops.begin(), ops.end(), o.operation) == ops.end())
        throw UsageError("surgery: operation must be one of centrosymmetrize, perturb, notch, reduce");
    const auto curves = load_curves(o);
    const double p = parse_p_list(o.p_list).front();
    const CurvatureIntegrand f = integrand_for(o, p);
    int code = kExitOk;
    for (const auto &[id, curve] : curves) {
        const fs::path dir(o.out);
        const std::string stem = id + "_" + o.operation;
        Json j;
        std::vector<AngleCurve> after;
        std::vector<std::pair<Vec2, Vec2>> overlay;
        AngleCurve shown = curve;
        try {
            if (o.operation == "centrosymmetrize") {
                const SurgeryReport r = centrosymmetrize(curve, f);
                j = to_json(r);
                after = {r.output};
                overlay = r.segments;
            } else if (o.operation == "perturb") {
                const Perturbation r = perturb_theta_eps(curve, o.eps > 0.0 ? o.eps : 0.1, p);
                j = {{"construction", "perturb_theta_eps"}, {"input", to_json(curve)},
                     {"output", to_json(r.perturbed)}, {"estimates", to_json(r.estimates)}};
                after = {r.perturbed};
            } else if (o.operation == "notch") {
                AngleCurve input = curve;
                if (o.eps > 0.0) input = perturb_theta_eps(curve, o.eps, p).perturbed;
                shown = input;
                const NotchRemoval r = notch_removal(input, f);
                j = to_json(r);
                after = {r.report.output};
                overlay = r.report.segments;
            } else {
                const Reduction r = reduce_two_convex_arcs(curve, f);
                j = to_json(r);
                for (const SurgeryReport &s : r.reports) {
                    after.push_back(s.output);
                    overlay.insert(overlay.end(), s.segments.begin(), s.segments.end());
                }
            }
        } catch (const NotApplicable &e) {
            j = {{"construction", o.operation}, {"applicable", false}, {"message", e.what()}};
            write_json_file(dir / (stem + ".json"), j);
            std::cout << stem << ": not applicable: " << e.what() << '\n';
            code = kExitNotConverged;
            continue;
        }
        j["applicable"] = true;
        j["integrand"] = to_json(f);
        write_json_file(dir / (stem + ".json"), j);
        write_text(dir / (stem + "_before.svg"), svg_of({shown}, overlay));
        write_text(dir / (stem + "_after.svg"), svg_of(after, {}));
        if (j.contains("energy_before"))
            std::cout << stem << ": energy " << j["energy_before"].get<double>() << " -> "
                      << j["energy_after"].get<double>() << ", area " << j["area_before"].get<double>() << " -> "
                      << j["area_after"].get<double>() << '\n';
        if (j.contains("comparison")) {
            const Json &c = j["comparison"];
            std::cout << stem << ": E_input " << c["E_input"].get<double>() << " >= mean_E_halves "
                      << c["mean_E_halves"].get<double>() << " >= E_disc " << c["E_disc"].get<double>() << '\n';
        }
        if (j.contains("estimates")) {
            const Json &e = j["estimates"];
            std::cout << stem << ": dE " << e["dE_measured"].get<double>() << " (bound "
                      << e["dE_bound"].get<double>() << "), dA " << e["dA_measured"].get<double>() << '\n';
        }
    }
    return code;
}

BoundCheck run_check(const std::string &name, const AngleCurve &curve, double p) {
    if (name == "isop") return check_isop(curve, p, false);
    if (name == "isop_plus") return check_isop(curve, p, true);
    if (name == "theta_growth") return check_theta_growth(curve, p);
    if (name == "length_lower") return check_length_lower(curve, p);
    if (name == "kubota") return check_kubota(curve);
    if (name == "diameter") return check_diameter_bound(curve, p);
    return check_curvature_lower(curve, p);
}

int cmd_verify(const Options &o) {
    const std::vector<std::string> checks = parse_checks(o.checks);
    const auto curves = load_curves(o);
    const auto ps = parse_p_list(o.p_list);
    struct Outcome {
        std::vector<BoundCheck> rows;
        std::size_t skipped = 0;
    };
    std::vector<Outcome> outcomes(curves.size());
    parallel_for(curves.size(), o.threads, [&](std::size_t i) {
        const auto &[id, curve] = curves[i];
        const bool convex = is_convex(curve, 1e-9);
        const bool symmetric = convex && is_centrosymmetric(curve, 1e-4);
        for (const std::string &name : checks) {
            const bool needs_convex = name != "isop" && name != "isop_plus";
            if ((needs_convex && !convex) || (name == "curvature_lower" && !symmetric)) {
                ++outcomes[i].skipped;
                continue;
            }
            for (double p : ps) {
                BoundCheck c = run_check(name, curve, p);
                c.curve_id = id;
                outcomes[i].rows.push_back(std::move(c));
                if (name == "kubota") break;
            }
        }
    });
    std::ostringstream csv;
    write_csv_header(csv);
    std::size_t passed = 0, failed = 0, diagnostic = 0, skipped = 0;
    for (const Outcome &out : outcomes) {
        skipped += out.skipped;
        for (const BoundCheck &c : out.rows) {
            write_csv_row(csv, c);
            if (c.diagnostic_only)
                ++diagnostic;
            else if (c.passed)
                ++passed;
            else {
                ++failed;
                std::cout << "FAILED " << c.name << " p=" << c.p << " " << c.curve_id << " margin " << c.margin
                          << '\n';
            }
        }
    }
    write_text(fs::path(o.out) / "checks.csv", csv.str());
    std::cout << "verify: " << passed << " passed, " << failed << " failed, " << diagnostic << " diagnostic, "
              << skipped << " skipped on " << curves.size() << " curves\n";
    return failed == 0 ? kExitOk : kExitError;
}

int cmd_sweep(const Options &o) {
    const auto curves = load_curves(o);
    const auto ps = parse_p_list(o.p_list);
    const std::size_t tasks = curves.size() * ps.size();
    std::vector<OptimizationResult> results;
    results.reserve(tasks);
    for (std::size_t i = 0; i < tasks; ++i) results.push_back(OptimizationResult{curves[i / ps.size()].curve});
    parallel_for(tasks, o.threads, [&](std::size_t i) {
        results[i] = minimize_Fp(curves[i / ps.size()].curve, optimizer_config(o, ps[i % ps.size()]));
    });
    std::ostringstream csv;
    csv << std::setprecision(17)
        << "curve-id,p,converged,outer,inner,circularity,Q_p,Q_circle,el_residual,convex\n";
    std::size_t converged = 0;
    for (std::size_t i = 0; i < tasks; ++i) {
        const OptimizationResult &r = results[i];
        const double p = ps[i % ps.size()];
        csv << curves[i / ps.size()].id << ',' << p << ',' << (r.converged ? "true" : "false") << ','
            << r.outer_iterations << ',' << r.inner_iterations << ',' << r.circularity << ',' << r.q_p << ','
            << circle_quotient(p) << ',' << r.el_residual << ',' << (r.convex ? "true" : "false") << '\n';
        converged += r.converged ? 1 : 0;
    }
    write_text(fs::path(o.out) / "sweep.csv", csv.str());
    std::cout << "sweep: " << converged << "/" << tasks << " runs converged\n";
    return converged == tasks ? kExitOk : kExitNotConverged;
}

void add_common(CLI::App *sub, Options &o) {
    sub->add_option("--input", o.inputs, "curve JSON file(s)");
    sub->add_option("--generator", o.generators,
                    "named generator: 'circle R', 'ellipse A B', 'peanut AMP K', 'polygon-smooth SEED', "
                    "'oval SEED', 'egg', 'perturbed-circle SEED', 'rounded-square RHO'");
    sub->add_option("--family", o.family, "curve family: circles, perturbed-circles, convex, peanuts, mixed");
    sub->add_option("--n", o.count, "number of family samples");
    sub->add_option("--seed", o.seed, "family seed");
    sub->add_option("--p", o.p_list, "comma-separated exponents > 1");
    sub->add_option("--f", o.f_spec, "integrand: power:P, positive_power:P, or a JSON file");
    sub->add_option("--N", o.n, "angle samples, a power of two in [64, 4096]");
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--threads", o.threads, "worker threads (0 = hardware)");
}

}  // namespace

int run(const std::vector<std::string> &args) {
    CLI::App app{"p-elastic energies of closed plane curves"};
    app.require_subcommand(1);
    Options o;
    std::string command;

    CLI::App *eval = app.add_subcommand("eval", "energies and metrics per (curve, p)");
    add_common(eval, o);
    CLI::App *minimize = app.add_subcommand("minimize", "minimize F_p at fixed area");
    add_common(minimize, o);
    CLI::App *surgery = app.add_subcommand("surgery", "centrosymmetrize | perturb | notch | reduce");
    add_common(surgery, o);
    surgery->add_option("operation", o.operation, "centrosymmetrize, perturb, notch or reduce")->required();
    surgery->add_option("--eps", o.eps, "perturbation length (perturb; notch perturbs first when set)");
    CLI::App *verify = app.add_subcommand("verify", "check the inequalities over curves and exponents");
    add_common(verify, o);
    verify->add_option("--checks", o.checks, "comma-separated: " + [] {
        std::string s;
        for (const std::string &c : kCheckNames) s += (s.empty() ? "" : ",") + c;
        return s;
    }());
    CLI::App *sweep = app.add_subcommand("sweep", "parallel minimize over curves and exponents");
    add_common(sweep, o);
    for (CLI::App *sub : {minimize, sweep}) {
        sub->add_option("--area", o.area, "target area");
        sub->add_option("--max-outer", o.max_outer, "outer iterations");
        sub->add_option("--tol", o.tol, "stationarity tolerance");
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitError;
    }

    try {
        validate(o);
        CLI::App *chosen = app.get_subcommands().front();
        command = chosen->get_name();
        parse_checks(o.checks);
        write_manifest(command, o);
        if (command == "eval") return cmd_eval(o);
        if (command == "minimize") return cmd_minimize(o);
        if (command == "surgery") return cmd_surgery(o);
        if (command == "verify") return cmd_verify(o);
        return cmd_sweep(o);
    } catch (const UsageError &e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitError;
    } catch (const NotApplicable &e) {
        std::cerr << "not applicable: " << e.what() << '\n';
        return kExitNotConverged;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
}

}  // namespace pelastic::cli

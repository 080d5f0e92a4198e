#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "lse/analysis.hpp"
#include "lse/harness.hpp"
#include "lse/kernels.hpp"
#include "lse/number_format.hpp"
#include "lse/oracle.hpp"
#include "lse/precision.hpp"

namespace lse::cli {

namespace {

using nlohmann::json;

constexpr int kPrintDigits = 9;

std::string sig(double v, int digits = kPrintDigits) { return detail::format_sig(v, digits); }

/// Finite values as JSON numbers; inf/nan as strings, which JSON cannot carry.
json num(double v) {
    if (std::isfinite(v)) return v;
    return detail::format_sig(v, kPrintDigits);
}

json num_array(std::span<const double> v) {
    json a = json::array();
    for (double x : v) a.push_back(num(x));
    return a;
}

std::string list(std::span<const double> v, int digits = kPrintDigits) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += sig(v[i], digits);
    }
    return s + "]";
}

std::vector<InputVector> parse_inline(const std::string& text) {
    std::istringstream in(text);
    auto vectors = parse_vectors_csv(in);
    if (vectors.size() != 1) throw Error("--x expects exactly one comma-separated vector");
    return vectors;
}

struct InputOptions {
    std::string inline_x;
    std::string csv_path;

    void add_to(CLI::App& app) {
        auto* x = app.add_option("--x", inline_x, "Comma-separated vector, e.g. --x=1,-1")->allow_extra_args(false);
        auto* c = app.add_option("--csv", csv_path, "CSV file, one vector per line");
        x->excludes(c);
        c->excludes(x);
    }

    [[nodiscard]] std::vector<InputVector> load() const {
        if (inline_x.empty() == csv_path.empty()) throw Error("give exactly one of --x or --csv");
        return inline_x.empty() ? ingest_csv(csv_path) : parse_inline(inline_x);
    }
};

unsigned thread_count(int cli_value) {
    if (cli_value > 0) return static_cast<unsigned>(cli_value);
    if (const char* env = std::getenv("LSE_THREADS")) {
        const auto v = detail::parse_double(env);
        if (!v || *v < 1 || *v != std::floor(*v)) throw Error("LSE_THREADS must be a positive integer");
        return static_cast<unsigned>(*v);
    }
    return 0;
}

// -- eval --------------------------------------------------------------------

struct EvalCmd {
    std::string alg = "shifted";
    std::string format = "fp64";
    bool as_json = false;
    InputOptions input;

    int run(std::ostream& out) const {
        const auto algorithm = parse_algorithm(alg);
        const auto fmt = format_params(format);
        const auto ctx = fmt.is_binary64() ? ArithmeticContext::native() : ArithmeticContext::simulated(fmt);
        bool first = true;
        for (const auto& raw : input.load()) {
            const auto x = InputVector::rounded(raw.values(), fmt);
            const auto r = evaluate(algorithm, x, ctx);
            if (as_json) {
                json j;
                j["algorithm"] = to_string(r.algorithm);
                j["format"] = fmt.name;
                j["x"] = num_array(x.values());
                j["y"] = num(r.y);
                j["g"] = num_array(r.g);
                j["flags"] = r.flags.empty() ? json::array() : json(split_flags(r.flags));
                out << j.dump() << '\n';
                continue;
            }
            if (!first) out << '\n';
            first = false;
            out << "algorithm: " << to_string(r.algorithm) << '\n'
                << "format: " << fmt.name << '\n'
                << "y: " << sig(r.y) << '\n'
                << "g: " << list(r.g) << '\n'
                << "flags: " << (r.flags.empty() ? std::string("none") : r.flags.to_string()) << '\n';
        }
        return kOk;
    }

    static std::vector<std::string> split_flags(EvalFlags flags) {
        std::vector<std::string> names;
        std::string s = flags.to_string();
        std::size_t pos = 0;
        while (pos <= s.size()) {
            const auto plus = s.find('+', pos);
            names.push_back(s.substr(pos, plus - pos));
            if (plus == std::string::npos) break;
            pos = plus + 1;
        }
        return names;
    }
};

// -- analyze -----------------------------------------------------------------

struct AnalyzeCmd {
    bool as_json = false;
    InputOptions input;

    int run(std::ostream& out) const {
        bool first = true;
        for (const auto& x : input.load()) {
            const auto ref = lse_softmax_reference(x);
            const double cf = cond_lse(x);
            const auto cg = cond_softmax(x);
            const auto range = y_range(x);
            const auto ingredients = bound_ingredients(x, ref.y_ref);
            if (as_json) {
                json j;
                j["x"] = num_array(x.values());
                j["y_ref"] = num(ref.y_ref);
                j["g_ref"] = num_array(ref.g_ref);
                j["cond_f"] = num(cf);
                j["cond_g"] = {{"exact", num(cg.exact)}, {"upper", num(cg.upper)}};
                j["y_range"] = {num(range.lo), num(range.hi)};
                json bounds;
                for (auto id : kAllBounds) bounds[std::string(to_string(id))] = num(leading_factor(id, ingredients));
                j["bounds"] = bounds;
                out << j.dump() << '\n';
                continue;
            }
            if (!first) out << '\n';
            first = false;
            out << "y_ref: " << sig(ref.y_ref) << '\n'
                << "g_ref: " << list(ref.g_ref) << '\n'
                << "cond_f: " << sig(cf) << '\n'
                << "cond_g: exact " << sig(cg.exact) << ", upper " << sig(cg.upper) << '\n'
                << "y_range: (" << sig(range.lo) << ", " << sig(range.hi) << ")\n"
                << "bounds (coefficient of u):\n";
            for (auto id : kAllBounds) {
                out << "  " << std::left << std::setw(20) << to_string(id) << sig(leading_factor(id, ingredients))
                    << '\n';
            }
        }
        return kOk;
    }
};

// -- experiment --------------------------------------------------------------

struct ExperimentCmd {
    std::string gen;
    std::string csv_path;
    std::size_t n = 10;
    std::size_t count = 2500;
    std::uint64_t seed = 0;
    std::string format = "fp16";
    std::string out_prefix = "experiment";
    bool svg = false;
    bool log_axes = false;
    int threads = 0;

    int run(std::ostream& out) const {
        if (gen.empty() == csv_path.empty()) throw Error("give exactly one of --gen or --csv");
        const auto fmt = format_params(format);

        std::vector<InputVector> data;
        if (!gen.empty()) {
            DataSpec spec;
            spec.kind = parse_generator(gen);
            spec.n = n;
            spec.count = count;
            spec.seed = seed;
            spec.format = fmt;
            data = generate(spec);
        } else {
            data = ingest_csv(csv_path);
            if (data.empty()) throw Error("'" + csv_path + "' contains no vectors");
        }

        const auto records = run_experiment(data, fmt, ExperimentOptions{thread_count(threads)});
        const auto summary = summarize(records);

        const std::string records_path = out_prefix + ".csv";
        const std::string summary_path = out_prefix + "_summary.csv";
        emit_csv(records, records_path);
        emit_csv(summary, summary_path);

        out << "format: " << fmt.name << " (u = " << sig(fmt.unit_roundoff, 3) << ")\n";
        out << "source: " << (gen.empty() ? csv_path : gen) << '\n';
        print_summary(summary, out);
        out << "records: " << records_path << '\n' << "summary: " << summary_path << '\n';
        if (svg) write_plots(records, out);
        return summary.total_violations() == 0 ? kOk : kBoundViolation;
    }

    void write_plots(const std::vector<TrialRecord>& records, std::ostream& out) const {
        struct Plot {
            const char* suffix;
            const char* x;
            const char* y;
            bool diagonal;
            const char* title;
        };
        static constexpr Plot kPlots[] = {
            {"lse_basic", "bnd_lse_basic", "err_lse_basic", true, "basic log-sum-exp: scaled error vs bound"},
            {"lse_shift", "bnd_lse_shift", "err_lse_shift", true, "shifted log-sum-exp: scaled error vs bound"},
            {"lse_pair", "err_lse_basic", "err_lse_shift", true, "log-sum-exp: basic vs shifted error"},
            {"sm_basic", "err_sm_shift", "err_sm_basic", true, "softmax: shifted vs basic error"},
            {"sm_alt", "err_sm_shift", "err_sm_alt", true, "softmax: shifted vs alternative error"},
            {"sm_altshift", "err_sm_shift", "err_sm_altshift", true, "softmax: shifted vs alternative shifted error"},
            {"sum_basic", "trial_id", "sum_dev_basic", false, "basic softmax |sum - 1| / u"},
            {"sum_alt", "trial_id", "sum_dev_alt", false, "alternative softmax |sum - 1| / u"},
            {"sum_shift", "trial_id", "sum_dev_shift", false, "shifted softmax |sum - 1| / u"},
            {"sum_altshift", "trial_id", "sum_dev_altshift", false, "alternative shifted softmax |sum - 1| / u"},
        };
        for (const auto& p : kPlots) {
            ScatterOptions opts;
            opts.log_axes = log_axes;
            opts.reference_line = p.diagonal;
            opts.title = p.title;
            const std::string path = out_prefix + "_" + p.suffix + ".svg";
            emit_svg_scatter(records, p.x, p.y, path, opts);
            out << "plot: " << path << '\n';
        }
    }
};

// -- formats -----------------------------------------------------------------

struct FormatsCmd {
    bool as_json = false;
    std::vector<std::string> names = {"bfloat16", "fp16", "fp32", "fp64"};

    int run(std::ostream& out) const {
        json rows = json::array();
        if (!as_json) {
            out << std::left << std::setw(10) << "format" << std::setw(4) << "t" << std::setw(7) << "emin"
                << std::setw(7) << "emax" << std::setw(12) << "subnormals" << std::setw(11) << "u" << std::setw(11)
                << "rmin_s" << std::setw(11) << "rmin" << std::setw(11) << "rmax" << std::setw(10) << "ln_rmin_s"
                << std::setw(10) << "ln_rmin" << "ln_rmax\n";
        }
        for (const auto& name : names) {
            const auto f = format_params(name);
            const double rmin_s = f.denorm_min_encoding();
            if (as_json) {
                rows.push_back({{"format", f.name},
                                {"precision_bits", f.precision_bits},
                                {"emin", f.emin},
                                {"emax", f.emax},
                                {"subnormals", f.subnormals_enabled},
                                {"u", f.unit_roundoff},
                                {"rmin_s", rmin_s},
                                {"rmin", f.r_min},
                                {"rmax", f.r_max},
                                {"r_min_subnormal_effective", f.r_min_subnormal},
                                {"ln_rmin_s", std::log(rmin_s)},
                                {"ln_rmin", std::log(f.r_min)},
                                {"ln_rmax", std::log(f.r_max)}});
                continue;
            }
            out << std::setw(10) << f.name << std::setw(4) << f.precision_bits << std::setw(7) << f.emin
                << std::setw(7) << f.emax << std::setw(12) << (f.subnormals_enabled ? "yes" : "no")
                << std::setw(11) << sci3(f.unit_roundoff) << std::setw(11) << sci3(rmin_s) << std::setw(11)
                << sci3(f.r_min) << std::setw(11) << sci3(f.r_max) << std::setw(10) << fix3(std::log(rmin_s))
                << std::setw(10) << fix3(std::log(f.r_min)) << fix3(std::log(f.r_max)) << '\n';
        }
        if (as_json) out << rows.dump() << '\n';
        return kOk;
    }

    /// Three significant figures, trailing zeros kept ("-9.70").
    static std::string fix3(double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%#.3g", v);
        std::string s = buf;
        if (!s.empty() && s.back() == '.') s.pop_back();
        return s;
    }

    static std::string sci3(double v) {
        std::ostringstream s;
        s << std::scientific << std::setprecision(2) << v;
        return s.str();
    }
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Log-sum-exp and softmax evaluation under simulated floating-point formats", "lse"};
    app.require_subcommand(1);

    EvalCmd eval;
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate one algorithm on a vector");
    eval_cmd->add_option("--alg", eval.alg, "basic | shifted | alt_basic | alt_shifted")->capture_default_str();
    eval_cmd->add_option("--format", eval.format, "fp16 | bfloat16 | fp32 | fp64 | custom:...")->capture_default_str();
    eval_cmd->add_flag("--json", eval.as_json, "One JSON object per vector");
    eval.input.add_to(*eval_cmd);

    AnalyzeCmd analyze;
    auto* analyze_cmd = app.add_subcommand("analyze", "Condition numbers, y range and error-bound factors");
    analyze_cmd->add_flag("--json", analyze.as_json, "One JSON object per vector");
    analyze.input.add_to(*analyze_cmd);

    ExperimentCmd exp;
    auto* exp_cmd = app.add_subcommand("experiment", "Scaled errors of all algorithms against their bounds");
    auto* gen_opt = exp_cmd->add_option("--gen", exp.gen,
                                        "uniform:<lo>,<hi> | near-singular:<eps> | wide-spread:<delta> | constant:<c>");
    auto* csv_opt = exp_cmd->add_option("--csv", exp.csv_path, "CSV file, one vector per line");
    gen_opt->excludes(csv_opt);
    csv_opt->excludes(gen_opt);
    exp_cmd->add_option("--n", exp.n, "Vector length for --gen")->capture_default_str()->check(CLI::PositiveNumber);
    exp_cmd->add_option("--count", exp.count, "Number of vectors for --gen")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    exp_cmd->add_option("--seed", exp.seed, "Generator seed")->capture_default_str();
    exp_cmd->add_option("--format", exp.format, "Simulated format")->capture_default_str();
    exp_cmd->add_option("--out", exp.out_prefix, "Output prefix: <out>.csv, <out>_summary.csv")->capture_default_str();
    exp_cmd->add_flag("--svg", exp.svg, "Write scatter plots <out>_*.svg");
    exp_cmd->add_flag("--log-axes", exp.log_axes, "Log-log axes in plots");
    exp_cmd->add_option("--threads", exp.threads, "Worker threads (default: LSE_THREADS or all cores)")
        ->check(CLI::NonNegativeNumber);

    FormatsCmd formats;
    auto* formats_cmd = app.add_subcommand("formats", "Parameters of the supported formats");
    formats_cmd->add_flag("--json", formats.as_json, "Emit a JSON array");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            for (auto* sub : app.get_subcommands()) out << sub->help();
            return kOk;
        }
        err << "error: " << e.what() << '\n';
        return kBadInput;
    }

    try {
        if (*eval_cmd) return eval.run(out);
        if (*analyze_cmd) return analyze.run(out);
        if (*exp_cmd) return exp.run(out);
        if (*formats_cmd) return formats.run(out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kBadInput;
    }
    return kBadInput;
}

}  // namespace lse::cli

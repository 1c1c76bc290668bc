#include "trunkload/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "trunkload/oracle.hpp"
#include "trunkload/pipeline.hpp"
#include "trunkload/report_io.hpp"

#ifndef TRUNKLOAD_SOURCE_DATA_DIR
#define TRUNKLOAD_SOURCE_DATA_DIR ""
#endif
#ifndef TRUNKLOAD_INSTALL_DATA_DIR
#define TRUNKLOAD_INSTALL_DATA_DIR ""
#endif

namespace trunkload::cli {

namespace {

/// File system trouble while reading inputs or writing outputs.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad flag combination detected after parsing.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

const std::set<std::string> kFormats{"table", "csv", "json", "plot"};

struct CommonOptions {
    std::string model;
    std::vector<std::string> scenarios;
    std::vector<std::string> cases;
    std::string phase;
    std::string injured_side;
    double foot_fraction = kDefaultInjuredFootFraction;
    double crutch_share = kDefaultCrutchShare;
    int exponent = 2;
    std::string out_dir;
    std::string format = "table,csv,json,plot";
    bool lenient = false;
    bool no_reserves = false;
    bool verbose = false;
    CLI::Option* foot_fraction_opt = nullptr;
    CLI::Option* crutch_share_opt = nullptr;
    CLI::Option* exponent_opt = nullptr;
};

struct OracleOptions {
    std::uint64_t seed = 42;
    int instances = 100;
    double grid_step = 0.02;
    int muscles = 4;
    int coordinates = 2;
    int exponent = 2;
};

struct CaseSpec {
    ScenarioConfig config;
    std::optional<PostureTable> posture;
    std::string source;  // scenario path or "built-in"
};

std::set<std::string> parse_formats(const std::string& text) {
    std::set<std::string> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        if (!kFormats.count(item)) throw UsageError("unknown format '" + item + "' (use table, csv, json, plot)");
        out.insert(item);
    }
    if (out.empty()) throw UsageError("at least one output format is required");
    return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write '" + path.string() + "'");
    f << content;
    if (!f) throw IoError("write failed for '" + path.string() + "'");
}

std::filesystem::path prepare_out_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
    return dir;
}

Model load_model_checked(const std::string& flag, bool lenient) {
    const auto path = resolve_model_path(flag);
    if (!std::filesystem::exists(path)) throw IoError("model file '" + path.string() + "' does not exist");
    return load_model_file(path, LoadOptions{lenient});
}

SolverParams solver_params(const CommonOptions& o) {
    SolverParams p;
    p.exponent = o.exponent;
    p.reserves_enabled = !o.no_reserves;
    return p;
}

/// Applies the shared knob flags on top of a case configuration.
void apply_overrides(CaseSpec& spec, const CommonOptions& o, bool allow_phase) {
    auto& c = spec.config;
    if (!o.injured_side.empty()) {
        const auto side = parse_side(o.injured_side);
        if (!side || *side == Side::midline) throw UsageError("--injured-side must be left or right");
        c.injured_side = *side;
    }
    if (o.foot_fraction_opt->count() > 0) c.injured_foot_fraction = o.foot_fraction;
    if (o.crutch_share_opt->count() > 0) c.crutch_share = o.crutch_share;
    if (allow_phase && !o.phase.empty()) c.phase = parse_phase(c.walking_case, o.phase);
    c.validate();
}

CaseSpec spec_from_scenario(const std::string& path, const CommonOptions& o) {
    if (!std::filesystem::exists(path)) throw IoError("scenario file '" + path + "' does not exist");
    auto doc = load_scenario_file(path, o.lenient);
    return {doc.config, doc.posture, path};
}

CaseSpec spec_from_case(const std::string& name) {
    const auto c = parse_walking_case(name);
    if (!c) throw UsageError("unknown case '" + name + "'");
    CaseSpec spec;
    spec.config.walking_case = *c;
    spec.config.phase = default_phase(*c);
    spec.source = "built-in";
    return spec;
}

std::string label(const ScenarioConfig& c) {
    return std::string(to_string(c.walking_case)) + "_" + std::string(to_string(c.phase));
}

/// Runs `body`, mapping every failure to the exit-code contract.
template <class F>
int guarded(std::ostream& err, const std::string& context, F&& body) {
    try {
        return body();
    } catch (const UsageError& e) {
        err << context << ": " << e.what() << "\n";
        return kUsageFailure;
    } catch (const IoError& e) {
        err << context << ": " << e.what() << "\n";
        return kUsageFailure;
    } catch (const ParseError& e) {
        err << context << ": " << e.what() << "\n";
        return kUsageFailure;
    } catch (const TooLarge& e) {
        err << context << ": " << e.what() << "\n";
        return kUsageFailure;
    } catch (const ValidationError& e) {
        err << context << ": " << e.what() << "\n";
        return kDomainFailure;
    } catch (const InfeasibleError& e) {
        err << context << ": " << e.what() << "\n";
        return kDomainFailure;
    } catch (const Error& e) {
        err << context << ": " << e.what() << "\n";
        return kDomainFailure;
    } catch (const std::filesystem::filesystem_error& e) {
        err << context << ": " << e.what() << "\n";
        return kUsageFailure;
    }
}

void print_warnings(std::ostream& err, const std::string& prefix, const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) err << "warning: " << prefix << w << "\n";
}

void print_details(std::ostream& out, const AnalysisResult& r) {
    char buf[160];
    out << "\nactivations:\n";
    for (std::size_t i = 0; i < r.model.muscles.size(); ++i) {
        std::snprintf(buf, sizeof buf, "  %-28s %.4f\n", r.model.muscles[i].name.c_str(),
                      r.solution.activations[static_cast<Eigen::Index>(i)]);
        out << buf;
    }
    out << "generalized forces / reserves:\n";
    for (std::size_t j = 0; j < r.model.coordinates.size(); ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        std::snprintf(buf, sizeof buf, "  %-24s %10.3f %10.3f\n", r.model.coordinates[j].name.c_str(), r.tau.tau[jj],
                      r.solution.reserves.size() ? r.solution.reserves[jj] : 0.0);
        out << buf;
    }
}

int cmd_validate(const CommonOptions& o, const std::string& positional, std::ostream& out, std::ostream& err) {
    const std::string flag = !positional.empty() ? positional : o.model;
    const auto path = resolve_model_path(flag);
    if (!std::filesystem::exists(path)) throw IoError("model file '" + path.string() + "' does not exist");
    try {
        const Model model = load_model_file(path, LoadOptions{o.lenient});
        out << "OK " << path.string() << ": " << model.segments.size() - 1 << " segments, "
            << model.coordinate_count() << " coordinates, " << model.muscles.size() << " muscles\n";
        for (const auto& v : check_muscle_mirror(model)) err << "note: " << v.to_string() << "\n";
        return kSuccess;
    } catch (const ValidationError& e) {
        out << "INVALID " << path.string() << ": " << e.violations().size() << " violation(s)\n";
        for (const auto& v : e.violations()) out << "  " << v.to_string() << "\n";
        return kDomainFailure;
    }
}

int cmd_analyze(const CommonOptions& o, std::ostream& out, std::ostream& err) {
    if (o.scenarios.size() + o.cases.size() != 1) {
        throw UsageError("analyze needs exactly one --scenario or --case");
    }
    const auto formats = parse_formats(o.format);
    CaseSpec spec = o.scenarios.empty() ? spec_from_case(o.cases.front()) : spec_from_scenario(o.scenarios.front(), o);
    apply_overrides(spec, o, true);
    const Model model = load_model_checked(o.model, o.lenient);

    AnalysisRequest req{spec.config, spec.posture, solver_params(o), {}};
    const auto result = analyze(model, req);
    out << "scenario: " << spec.source << " | model: " << resolve_model_path(o.model).string() << "\n";
    out << report_text(result.report);
    if (o.verbose) print_details(out, result);
    print_warnings(err, "", result.warnings);

    if (!o.out_dir.empty()) {
        const auto dir = prepare_out_dir(o.out_dir);
        const std::string base = label(spec.config);
        const std::vector<SymmetryReport> one{result.report};
        if (formats.count("table")) write_file(dir / (base + ".txt"), report_text(result.report));
        if (formats.count("csv")) write_file(dir / (base + ".csv"), reports_csv(one));
        if (formats.count("json")) write_file(dir / (base + ".json"), report_json(result.report));
        if (formats.count("plot")) {
            const auto table = compare_cases(one);
            write_file(dir / (base + ".svg"), comparison_svg(table, "Trunk muscle activation: " + base));
            write_file(dir / (base + ".dat"), comparison_columns(table));
        }
    }
    return kSuccess;
}

int cmd_compare(const CommonOptions& o, std::ostream& out, std::ostream& err) {
    const auto formats = parse_formats(o.format);
    std::vector<CaseSpec> specs;
    for (const auto& s : o.scenarios) specs.push_back(spec_from_scenario(s, o));
    for (const auto& c : o.cases) specs.push_back(spec_from_case(c));
    if (specs.empty()) {
        for (const auto* name : {"normal", "single_crutch", "double_crutch"}) specs.push_back(spec_from_case(name));
    }
    if (specs.size() < 2) throw UsageError("compare needs at least two cases");
    if (!o.phase.empty()) throw UsageError("--phase applies to analyze only; use scenario files to pick phases");
    for (auto& s : specs) apply_overrides(s, o, false);
    const Model model = load_model_checked(o.model, o.lenient);
    const SolverParams params = solver_params(o);

    std::vector<std::future<AnalysisResult>> jobs;
    jobs.reserve(specs.size());
    for (const auto& s : specs) {
        jobs.push_back(std::async(std::launch::async, [&model, &params, s] {
            return analyze(model, AnalysisRequest{s.config, s.posture, params, {}});
        }));
    }
    std::vector<AnalysisResult> results;
    for (std::size_t k = 0; k < jobs.size(); ++k) {
        try {
            results.push_back(jobs[k].get());
        } catch (const Error& e) {
            // Drain the remaining jobs before reporting.
            for (std::size_t m = k + 1; m < jobs.size(); ++m) {
                try {
                    jobs[m].get();
                } catch (...) {
                }
            }
            err << "compare: case " << label(specs[k].config) << " (" << specs[k].source << ") failed\n";
            throw;
        }
    }

    std::vector<SymmetryReport> reports;
    for (const auto& r : results) reports.push_back(r.report);
    const auto table = compare_cases(reports);
    for (std::size_t k = 0; k < results.size(); ++k) {
        const auto& a = results[k].report.assumptions;
        char buf[200];
        std::snprintf(buf, sizeof buf, "%-30s injured %s | f = %.2f | kappa = %.2f | W = %.1f N | posture %s\n",
                      table.columns[k].c_str(), std::string(to_string(a.injured_side)).c_str(),
                      a.injured_foot_fraction, a.crutch_share, a.body_weight, a.posture_hash.c_str());
        out << buf;
        print_warnings(err, table.columns[k] + ": ", results[k].warnings);
    }
    out << "\n" << comparison_text(table);

    if (!o.out_dir.empty()) {
        const auto dir = prepare_out_dir(o.out_dir);
        if (formats.count("table")) write_file(dir / "compare.txt", comparison_text(table));
        if (formats.count("csv")) write_file(dir / "compare.csv", reports_csv(reports));
        if (formats.count("json")) write_file(dir / "compare.json", comparison_json(table, reports));
        if (formats.count("plot")) {
            write_file(dir / "compare.svg", comparison_svg(table, "Trunk muscle activation by walking case"));
            write_file(dir / "compare.dat", comparison_columns(table));
        }
    }
    return kSuccess;
}

int cmd_oracle_check(const OracleOptions& o, std::ostream& out, std::ostream& err) {
    if (o.grid_step > 0.1) {
        err << "warning: grid step " << o.grid_step
            << " is coarse; the grid slack grows with the step and the comparison loses resolution\n";
    }
    OracleCheckConfig cfg;
    cfg.instances = o.instances;
    cfg.seed = o.seed;
    cfg.grid_step = o.grid_step;
    cfg.max_muscles = o.muscles;
    cfg.max_coordinates = o.coordinates;
    cfg.exponent = o.exponent;
    const auto report = run_oracle_check(cfg);
    char buf[256];
    for (const auto& c : report.cases) {
        if (c.passed) continue;
        std::snprintf(buf, sizeof buf, "instance %d (%d muscles, %d coordinates): solver %.6f, oracle %.6f, slack %.4f %s\n",
                      c.index, c.muscles, c.coordinates, c.solver_objective, c.oracle_objective, c.grid_slack,
                      c.note.c_str());
        out << buf;
    }
    std::snprintf(buf, sizeof buf,
                  "oracle-check: %d instances, seed %llu, grid %.4g, p = %d: max |objective gap| %.3e, "
                  "max relative residual %.3e, failures %d\n",
                  o.instances, static_cast<unsigned long long>(o.seed), o.grid_step, o.exponent, report.max_deviation,
                  report.max_residual, report.failures);
    out << buf << (report.failures == 0 ? "PASS\n" : "FAIL\n");
    return report.failures == 0 ? kSuccess : kDomainFailure;
}

void add_common(CLI::App* cmd, CommonOptions& o, bool with_cases) {
    cmd->add_option("--model", o.model, "Model file (default: $TRUNKLOAD_DEFAULT_MODEL or the shipped model)");
    cmd->add_flag("--lenient", o.lenient, "Ignore unknown fields in model and scenario files");
    if (!with_cases) return;
    cmd->add_option("--scenario", o.scenarios, "Scenario file (repeatable for compare)");
    cmd->add_option("--case", o.cases, "Walking case: normal, single_crutch, double_crutch (repeatable for compare)")
        ->check(CLI::IsMember({"normal", "single_crutch", "double_crutch"}));
    cmd->add_option("--injured-side", o.injured_side, "Injured side: left or right (default right)")
        ->check(CLI::IsMember({"left", "right"}));
    o.foot_fraction_opt = cmd->add_option("--foot-fraction", o.foot_fraction,
                                          "Body-weight fraction on the injured foot (default 0.10)");
    o.crutch_share_opt = cmd->add_option("--crutch-share", o.crutch_share,
                                         "Share of the remaining weight carried by crutches (default 0.30)");
    o.exponent_opt = cmd->add_option("--exponent", o.exponent, "Activation cost exponent p (1, 2 or 3)")
                         ->check(CLI::Range(1, 3));
    cmd->add_option("--out-dir", o.out_dir, "Directory for report files");
    cmd->add_option("--format", o.format, "Comma list of table, csv, json, plot");
    cmd->add_flag("--no-reserves", o.no_reserves, "Disable reserve actuators (may be infeasible)");
    cmd->add_flag("-v,--verbose", o.verbose, "Print per-muscle activations and reserves");
}

}  // namespace

std::filesystem::path data_dir() {
    for (const char* candidate : {TRUNKLOAD_SOURCE_DATA_DIR, TRUNKLOAD_INSTALL_DATA_DIR}) {
        if (*candidate && std::filesystem::exists(std::filesystem::path(candidate) / "models")) return candidate;
    }
    return "data";
}

std::filesystem::path resolve_model_path(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("TRUNKLOAD_DEFAULT_MODEL"); env && *env) return env;
    return data_dir() / "models" / "default_trunk.json";
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Trunk muscle loading under crutch-assisted gait"};
    app.name("trunkload");
    app.require_subcommand(1);

    CommonOptions validate_opts;
    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "Check a model file for invariant violations");
    validate->add_option("path", validate_path, "Model file (same as --model)");
    add_common(validate, validate_opts, false);

    CommonOptions analyze_opts;
    auto* analyze_cmd = app.add_subcommand("analyze", "Analyse one walking case snapshot");
    add_common(analyze_cmd, analyze_opts, true);
    analyze_cmd->add_option("--phase", analyze_opts.phase, "Gait phase within the case");

    CommonOptions compare_opts;
    auto* compare = app.add_subcommand("compare", "Compare walking cases (default: all three)");
    add_common(compare, compare_opts, true);
    compare->add_option("--phase", compare_opts.phase, "Not supported; phases come from scenarios");

    OracleOptions oracle_opts;
    auto* oracle = app.add_subcommand("oracle-check", "Cross-check the solver against brute-force enumeration");
    oracle->add_option("--seed", oracle_opts.seed, "Random seed (default 42)");
    oracle->add_option("--instances", oracle_opts.instances, "Number of instances (default 100)")
        ->check(CLI::PositiveNumber);
    oracle->add_option("--grid-step", oracle_opts.grid_step, "Oracle grid step in (0, 1] (default 0.02)");
    oracle->add_option("--muscles", oracle_opts.muscles, "Largest muscle count (default 4)");
    oracle->add_option("--coordinates", oracle_opts.coordinates, "Largest coordinate count (default 2)");
    oracle->add_option("--exponent", oracle_opts.exponent, "Activation cost exponent p (default 2)")
        ->check(CLI::Range(1, 3));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "trunkload: " << e.what() << "\n";
        if (!app.get_subcommands().empty()) err << "run '" << app.get_subcommands().front()->get_name() << " --help' for usage\n";
        return kUsageFailure;
    }

    if (validate->parsed()) {
        return guarded(err, "validate", [&] { return cmd_validate(validate_opts, validate_path, out, err); });
    }
    if (analyze_cmd->parsed()) return guarded(err, "analyze", [&] { return cmd_analyze(analyze_opts, out, err); });
    if (compare->parsed()) return guarded(err, "compare", [&] { return cmd_compare(compare_opts, out, err); });
    return guarded(err, "oracle-check", [&] { return cmd_oracle_check(oracle_opts, out, err); });
}

}  // namespace trunkload::cli

#include "kdvnf/cli.hpp"

#include <cmath>
#include <filesystem>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "kdvnf/estimate.hpp"
#include "kdvnf/gauge.hpp"
#include "kdvnf/report.hpp"
#include "kdvnf/solver.hpp"
#include "kdvnf/spectral.hpp"
#include "kdvnf/verify.hpp"

namespace kdvnf {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

json parameters_json(const RunConfig& c) {
    json p;
    p["N"] = c.N;
    p["h"] = c.h;
    p["dt"] = c.dt;
    p["t_final"] = c.t_final;
    p["J"] = c.J;
    p["cstar"] = c.cstar;
    p["delta"] = c.delta;
    p["checkpoints"] = c.checkpoints;
    p["rhs"] = c.rhs;
    p["initial"] = c.initial;
    p["speed"] = c.speed;
    p["j_max"] = c.j_max;
    p["trials"] = c.trials;
    p["direction"] = c.direction;
    p["region"] = c.region;
    p["weight"] = c.weight;
    p["s"] = c.s;
    p["p"] = c.p;
    p["experiment"] = c.experiment;
    p["outer_points"] = c.outer_points;
    p["output_dir"] = c.output_dir;
    return p;
}

void write_manifest(const fs::path& dir, const RunConfig& c) {
    json m;
    m["artifact"] = "kdvnf";
    m["version"] = artifact_version;
    m["subcommand"] = c.subcommand;
    m["seed"] = c.seed;
    m["parameters"] = parameters_json(c);
    m["explicit_keys"] = std::vector<std::string>(c.explicit_keys.begin(), c.explicit_keys.end());
    write_json(dir / "manifest.json", m);
}

RegionConfig region_of(const RunConfig& c) { return RegionConfig(c.cstar, 1.0, c.region == "empty"); }

// Initial data by name; anything else is read as a field CSV.
SpectralField initial_field(const RunConfig& c) {
    const GridSpec g(c.N, c.h);
    if (c.initial == "smooth") return smooth_field(g, c.delta, 0.375 * g.max_frequency());
    if (c.initial == "soliton") return soliton_field(g, c.speed, 0.0);
    SpectralField f = read_field_csv(c.initial);
    if (!(f.grid() == g) && (c.explicit_keys.count("N") || c.explicit_keys.count("h")))
        throw GridMismatchError("input field grid does not match the configured N and h");
    return f;
}

CsvTable field_table(const SpectralField& f) {
    CsvTable t{{"k", "xi", "re", "im"}, {}};
    const GridSpec& g = f.grid();
    for (int k = g.kmin(); k <= g.kmax(); ++k) t.add({cell(k), cell(g.xi(k)), cell(f[k].real()), cell(f[k].imag())});
    return t;
}

json optional_json(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

// ---------------------------------------------------------------------------

int run_trees(const RunConfig& c, const fs::path& dir, std::ostream& out) {
    if (c.j_max > default_max_tree_order) throw BoundedResourceError("trees: j_max exceeds the enumeration limit");
    CsvTable tab{{"j", "index", "type", "nodes"}, {}};
    json counts = json::array();
    for (int j = 1; j <= c.j_max; ++j) {
        const auto trees = enumerate_trees(j);
        const TypeCounts tc = count_types(j);
        for (std::size_t i = 0; i < trees.size(); ++i) {
            const auto tag = classify_tree(trees[i]).tag;
            const char* type = tag == TreeType::TypeI       ? "I"
                               : tag == TreeType::TypeII_III ? "II/III"
                               : tag == TreeType::TypeIV     ? "IV"
                                                             : "-";
            std::string nodes;
            for (const Node& n : trees[i].words()) nodes += (nodes.empty() ? "" : " ") + (n.is_root() ? "0" : n.str());
            tab.add({cell(j), cell(i), cell(std::string(type)), cell(nodes)});
        }
        counts.push_back({{"j", j},
                          {"total", tc.total},
                          {"catalan", catalan(j)},
                          {"type_ii_iii", tc.type_ii_iii},
                          {"type_iv", tc.type_iv}});
        out << "j=" << j << ": " << tc.total << " trees\n";
    }
    emit_report(dir, "trees", json{{"counts", counts}}, tab);
    return exit_ok;
}

int run_verify(const RunConfig& c, const fs::path& dir, std::ostream& out) {
    CampaignOptions o;
    o.j_max = c.j_max;
    o.trials = c.trials;
    o.seed = c.seed;
    o.adversarial = true;
    if (c.explicit_keys.count("cstar"))
        o.regions = {RegionConfig(c.cstar)};
    else
        o.regions = {RegionConfig(0.1), RegionConfig(1e-3), RegionConfig(1e-10)};

    const std::vector<std::pair<std::string, VerificationReport (*)(const CampaignOptions&)>> campaigns = {
        {"pair_cancellation", verify_pair_cancellation},
        {"total_cancellation", verify_total_cancellation},
        {"nf_recursion", verify_nf_recursion},
        {"regrouping", verify_regrouping},
    };
    const std::vector<std::pair<std::string, VerificationReport (*)(const CampaignOptions&)>> engine = {
        {"phase_additivity", verify_phase_additivity},
        {"k_formula", verify_k_formula},
    };

    CsvTable tab{{"identity", "group", "status", "tree_count", "assignment_count"}, {}};
    bool all = true;
    auto record = [&](const VerificationReport& r, const std::string& group, const fs::path& sub) {
        write_json(sub / (r.identity_name + ".json"), certificate_json(r));
        tab.add({cell(r.identity_name), cell(group), cell(std::string(r.pass ? "pass" : "fail")), cell(r.tree_count),
                 cell(r.assignment_count)});
        out << (r.pass ? "pass " : "FAIL ") << r.identity_name << "\n";
        all = all && r.pass;
    };
    for (const auto& [name, fn] : campaigns) record(fn(o), "certificate", dir / "certificates");
    record(verify_counts(c.j_max, c.seed), "certificate", dir / "certificates");
    for (const auto& [name, fn] : engine) record(fn(o), "engine", dir / "engine");
    emit_report(dir, "verify_summary", json{{"status", all ? "pass" : "fail"}}, tab);
    return all ? exit_ok : exit_failure;
}

int run_gauge(const RunConfig& c, const fs::path& dir, std::ostream& out) {
    const SpectralField in = initial_field(c);
    const RegionConfig reg = region_of(c);
    json summary{{"direction", c.direction}, {"region", c.region}, {"cstar", c.cstar}};
    SpectralField res(in.grid());
    if (c.direction == "forward") {
        const GaugeSolve gs = gauge_forward_detailed(in, reg);
        res = gs.w;
        summary["iterations"] = gs.iterations;
        summary["last_increment"] = gs.last_increment;
    } else {
        res = gauge_inverse(in, reg);
    }
    summary["sup_input"] = sup_norm(in);
    summary["sup_output"] = sup_norm(res);
    summary["sup_difference"] = max_abs_diff(in, res);
    write_field_csv((dir / "input_field.csv").string(), in);
    write_field_csv((dir / "output_field.csv").string(), res);
    emit_report(dir, "gauge", summary, field_table(res));
    out << "gauge " << c.direction << ": sup |out - in| = " << fmt17(max_abs_diff(in, res)) << "\n";
    return exit_ok;
}

SolverConfig solver_config(const RunConfig& c) {
    SolverConfig sc;
    sc.dt = c.dt;
    sc.t_final = c.t_final;
    sc.J = c.J;
    sc.region = region_of(c);
    sc.checkpoints = c.checkpoints;
    return sc;
}

int run_solve(const RunConfig& c, const fs::path& dir, std::ostream& out, std::ostream& err) {
    const SpectralField u0 = initial_field(c);
    const SolverConfig sc = solver_config(c);
    const RhsKind kind = c.rhs == "gkdv" ? RhsKind::gkdv : RhsKind::kdv;
    Trajectory tr;
    try {
        tr = integrate(kind, u0, sc);
    } catch (const InstabilityError& e) {
        write_json(dir / "instability.json",
                   json{{"status", "unstable"}, {"message", e.what()}, {"dt", c.dt}, {"rhs", c.rhs}});
        err << "kdvnf: " << e.what() << "\n";
        return exit_failure;
    }
    CsvTable tab{{"time", "k", "re", "im"}, {}};
    const GridSpec& g = tr.grid;
    for (std::size_t i = 0; i < tr.size(); ++i)
        for (int k = g.kmin(); k <= g.kmax(); ++k)
            tab.add({cell(tr.times[i]), cell(k), cell(tr.fields[i][k].real()), cell(tr.fields[i][k].imag())});
    const long steps = std::max(1L, static_cast<long>(std::ceil(sc.t_final / sc.dt - 1e-9)));
    json diag{{"rhs", c.rhs},
              {"J", kind == RhsKind::kdv ? 1 : c.J},
              {"steps", steps},
              {"dt_effective", sc.t_final / static_cast<double>(steps)},
              {"times", tr.times},
              {"mass", tr.mass},
              {"momentum", tr.momentum}};
    double drift = 0.0;
    for (double m : tr.momentum) drift = std::max(drift, std::abs(m - tr.momentum.front()));
    diag["momentum_drift"] = drift;
    if (c.initial == "soliton" && kind == RhsKind::kdv) {
        const SpectralField exact = soliton_field(g, c.speed, c.t_final);
        diag["soliton_relative_error"] =
            fl_norm(tr.final_field() - exact, 0.0, 2.0) / fl_norm(exact, 0.0, 2.0);
    }
    write_csv(dir / "trajectory.csv", tab);
    write_json(dir / "diagnostics.json", diag);
    out << "solve: " << steps << " steps, momentum drift " << fmt17(drift) << "\n";
    return exit_ok;
}

int run_equiv(const RunConfig& c, const fs::path& dir, std::ostream& out) {
    const SpectralField u0 = initial_field(c);
    std::vector<int> Js;
    for (int j = 1; j <= c.J; ++j) Js.push_back(j);
    const EquivalenceReport rep = equivalence_experiment(u0, solver_config(c), Js);
    CsvTable tab{{"J", "r"}, {}};
    bool decreasing = true;
    for (std::size_t i = 0; i < rep.J.size(); ++i) {
        tab.add({cell(rep.J[i]), cell(rep.r[i])});
        if (i > 0 && !(rep.r[i] < rep.r[i - 1])) decreasing = false;
        out << "J=" << rep.J[i] << " r=" << fmt17(rep.r[i]) << "\n";
    }
    json summary{{"J", rep.J},
                 {"r", rep.r},
                 {"r_ablation", rep.r_ablation},
                 {"times", rep.times},
                 {"strictly_decreasing", decreasing}};
    emit_report(dir, "equivalence", summary, tab);
    return decreasing ? exit_ok : exit_failure;
}

int run_estimate(const RunConfig& c, const fs::path& dir, std::ostream& out) {
    const WeightKind kind = parse_weight_kind(c.weight);
    const double s = c.explicit_keys.count("s") ? c.s : default_s(kind);
    const EstimateDesign d = default_estimate_design(c.outer_points);
    const ExponentFit f = fit_exponents(kind, s, d.M_list, d.alpha_list, d.xi_list, d.quad, RegionConfig(c.cstar));
    CsvTable tab{{"alpha", "M", "value", "argmax_xi"}, {}};
    for (const auto& smp : f.samples) tab.add({cell(smp.alpha), cell(smp.M), cell(smp.value), cell(smp.argmax_xi)});
    const bool pass = !f.claim_beta || f.beta <= *f.claim_beta + 0.1;
    json summary{{"weight", to_string(kind)},
                 {"s", s},
                 {"beta", f.beta},
                 {"lambda", f.lambda},
                 {"intercept", f.intercept},
                 {"residual", f.residual},
                 {"claim_beta", optional_json(f.claim_beta)},
                 {"claim_lambda", optional_json(f.claim_lambda)},
                 {"outer_points", c.outer_points},
                 {"status", pass ? "pass" : "fail"}};
    emit_report(dir, "estimate", summary, tab);
    out << to_string(kind) << ": beta=" << fmt17(f.beta) << " lambda=" << fmt17(f.lambda) << "\n";
    return pass ? exit_ok : exit_failure;
}

int run_illposed(const RunConfig& c, const fs::path& dir, std::ostream& out) {
    if (c.experiment == "picard3") {
        const Picard3Table t = picard3_experiment(c.s, {8, 16, 32, 64, 128});
        CsvTable tab{{"N", "value"}, {}};
        for (const auto& r : t.rows) tab.add({cell(r.N), cell(r.value)});
        const double expected = -3.0 * c.s - 2.0;
        const bool pass = std::abs(t.slope - expected) <= 0.15;
        emit_report(dir, "picard3",
                    json{{"s", t.s}, {"c", t.c}, {"slope", t.slope}, {"expected_slope", expected},
                         {"status", pass ? "pass" : "fail"}},
                    tab);
        out << "picard3: slope " << fmt17(t.slope) << " (expected " << fmt17(expected) << ")\n";
        return pass ? exit_ok : exit_failure;
    }
    const MiuraTable t = miura_sequence_experiment(c.s, c.p, {8, 16, 32, 64});
    CsvTable tab{{"N", "distance", "norm_u0"}, {}};
    bool decreasing = true;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        tab.add({cell(t.rows[i].N), cell(t.rows[i].distance), cell(t.rows[i].norm_u0)});
        if (i > 0 && !(t.rows[i].distance < t.rows[i - 1].distance)) decreasing = false;
    }
    emit_report(dir, "miura_sequence",
                json{{"s", t.s}, {"p", t.p}, {"h", t.h}, {"window", t.window},
                     {"status", decreasing ? "pass" : "fail"}},
                tab);
    out << "miura: final distance " << fmt17(t.rows.back().distance) << "\n";
    return decreasing ? exit_ok : exit_failure;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    cfg.validate();
    const fs::path dir(cfg.output_dir);
    write_manifest(dir, cfg);
    const std::string& sc = cfg.subcommand;
    if (sc == "trees") return run_trees(cfg, dir, out);
    if (sc == "verify") return run_verify(cfg, dir, out);
    if (sc == "gauge") return run_gauge(cfg, dir, out);
    if (sc == "solve") return run_solve(cfg, dir, out, err);
    if (sc == "equiv") return run_equiv(cfg, dir, out);
    if (sc == "estimate") return run_estimate(cfg, dir, out);
    if (sc == "illposed") return run_illposed(cfg, dir, out);
    err << "kdvnf: unknown subcommand '" << sc << "'\n";
    return exit_usage;
}

int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"kdvnf: infinite normal-form reduction experiments for KdV"};
    app.set_help_flag("--help", "Print this help message and exit");
    app.require_subcommand(0, 1);

    std::string config_path;
    app.add_option("--config", config_path, "key = value configuration file");

    std::map<std::string, std::string> overrides;
    for (const std::string& key : config_keys()) {
        if (key == "subcommand") continue;
        const std::string names = key == "output_dir" ? "--output_dir,--out" : "--" + key;
        app.add_option(names, overrides[key], "override configuration key '" + key + "'");
    }
    for (const std::string& name : subcommands()) app.add_subcommand(name, "run the " + name + " experiment")->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    RunConfig cfg;
    try {
        if (!config_path.empty()) cfg = load_config(config_path, false);
        for (const std::string& key : config_keys()) {
            if (key == "subcommand") continue;
            const std::string opt = key == "output_dir" ? "--output_dir" : "--" + key;
            if (app.get_option(opt)->count() > 0) set_config_value(cfg, key, overrides[key]);
        }
        const auto chosen = app.get_subcommands();
        if (!chosen.empty()) set_config_value(cfg, "subcommand", chosen.front()->get_name());
        if (cfg.subcommand.empty()) {
            err << "kdvnf: no subcommand given\n" << app.help();
            return exit_usage;
        }
        cfg.validate();
    } catch (const ValidationError& e) {
        err << "kdvnf: invalid configuration: " << e.what() << "\n";
        return exit_usage;
    } catch (const ParseError& e) {
        err << "kdvnf: configuration parse error: " << e.what() << "\n";
        return exit_usage;
    } catch (const Error& e) {
        err << "kdvnf: " << e.what() << "\n";
        return exit_usage;
    }

    try {
        return run(cfg, out, err);
    } catch (const Error& e) {
        err << "kdvnf: " << e.what() << "\n";
        return exit_failure;
    } catch (const std::exception& e) {
        err << "kdvnf: unexpected failure: " << e.what() << "\n";
        return exit_failure;
    }
}

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<std::string> storage;
    storage.reserve(args.size() + 1);
    storage.emplace_back("kdvnf");
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : storage) argv.push_back(s.data());
    argv.push_back(nullptr);
    return cli_main(static_cast<int>(storage.size()), argv.data(), out, err);
}

}  // namespace kdvnf

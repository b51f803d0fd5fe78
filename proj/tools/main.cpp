#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "kakeya/experiments.hpp"

namespace fs = std::filesystem;
using namespace kakeya;

namespace {

struct GlobalOpts {
    std::string config_path;
    std::string out_dir;
    uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0;
    int kappa = 0;
};

ExperimentConfig resolve_config(const GlobalOpts& g) {
    ExperimentConfig cfg = g.config_path.empty() ? ExperimentConfig{} : load_config(g.config_path);
    if (g.seed_set) cfg.seed = g.seed;
    if (g.threads > 0) cfg.threads = g.threads;
    if (g.kappa > 0) cfg.kappa = g.kappa;
    if (!g.out_dir.empty()) cfg.out_dir = g.out_dir;
    return cfg;
}

void ensure_out(const ExperimentConfig& cfg) { fs::create_directories(cfg.out_dir); }

std::string out_path(const ExperimentConfig& cfg, const std::string& name) {
    return (fs::path(cfg.out_dir) / name).string();
}

int cmd_sweep(const ExperimentConfig& cfg) {
    ensure_out(cfg);
    const SweepResult r = weak_type_sweep(cfg);
    write_text_file(out_path(cfg, "sweep.csv"), sweep_csv(r));
    json fit = {{"slope", r.slope},
                {"intercept", r.intercept},
                {"points_in_fit", r.points_in_fit}};
    write_text_file(out_path(cfg, "sweep_fit.json"), fit.dump(2) + "\n");
    write_text_file(out_path(cfg, "timings_sweep.csv"), sweep_timings_csv(r));
    std::cout << "sweep: " << r.rows.size() << " rows, slope " << r.slope << " ("
              << r.points_in_fit << " points)\n";
    return 0;
}

int cmd_probe(const ExperimentConfig& cfg) {
    ensure_out(cfg);
    const ProbeResult r = holder_probe(cfg, cfg.probe_alpha, cfg.probe_scale_exps);
    write_text_file(out_path(cfg, "probe.csv"), probe_csv(r));
    write_text_file(out_path(cfg, "timings_probe.csv"), probe_timings_csv(r));
    std::cout << "probe-holder: " << r.rows.size() << " scales, nondecreasing="
              << (r.nondecreasing ? "yes" : "no") << ", control spread " << r.control_spread
              << "\n";
    return 0;
}

int cmd_campaign(const ExperimentConfig& cfg) {
    ensure_out(cfg);
    const CampaignResult r = run_campaign(cfg);
    write_text_file(out_path(cfg, "campaign.json"), campaign_to_json(cfg, r).dump(2) + "\n");
    write_text_file(out_path(cfg, "campaign_summary.csv"), campaign_summary_csv(r));
    write_text_file(out_path(cfg, "timings_campaign.csv"),
                    "runtime_sec\n" + format_double(r.runtime_sec) + "\n");
    std::cout << "campaign: " << r.instances.size() << " instances, " << r.failed_instances
              << " failed\n";
    for (const auto& rep : r.summary)
        std::cout << "  " << rep.name << ": ratio " << rep.ratio << ", violations "
                  << rep.violations << "\n";
    if (r.failed_instances > 0 || has_hard_violations(r.summary)) return 2;
    return 0;
}

int cmd_verify(const ExperimentConfig& cfg, const std::string& family_path) {
    ensure_out(cfg);
    const json jf = json::parse(read_text_file(family_path));
    FamilyFile ff = family_from_json(jf);
    const Sampler sampler = cfg.make_sampler();
    const CoverGridSpec grid{ff.field.domain(), cfg.campaign_grid_n};
    const CoveringPipelineResult pr =
        run_covering_pipeline(ff.family, ff.field, sampler, cfg.kappa, grid);
    const auto reports = run_all_checks(pr, ff.family, cfg.kappa, grid);
    write_text_file(out_path(cfg, "covering.json"), covering_to_json(pr.covering).dump(2) + "\n");
    json decomps = json::array();
    for (const auto& ud : pr.decomps) decomps.push_back(ud_to_json(ud));
    write_text_file(out_path(cfg, "decomps.json"), decomps.dump(2) + "\n");
    write_text_file(out_path(cfg, "verify_reports.json"), reports_to_json(reports).dump(2) + "\n");
    write_text_file(out_path(cfg, "selection_log.txt"), selection_log_text(pr.covering));
    std::cout << "verify: " << ff.family.size() << " rects, " << pr.covering.selected.size()
              << " selected\n";
    for (const auto& rep : reports)
        std::cout << "  " << rep.name << ": ratio " << rep.ratio << ", violations "
                  << rep.violations << "\n";
    return has_hard_violations(reports) ? 2 : 0;
}

int cmd_eval(const ExperimentConfig& cfg, const std::string& op, const std::string& input,
             double csv_pitch, double delta, double eps) {
    ensure_out(cfg);
    ScalarField f = input.size() > 4 && input.substr(input.size() - 4) == ".csv"
                        ? ScalarField::load_csv(input, csv_pitch)
                        : ScalarField::load_binary(input);
    MaxField m;
    const VectorField field = cfg.make_field();
    if (op == "mvdelta") {
        const RectFamily fam =
            build_rect_family(field, delta, cfg.make_enum_spec(), cfg.make_sampler());
        std::cout << "family: " << fam.size() << " rects\n";
        m = eval_M_v_delta(f, fam, cfg.threads);
    } else if (op == "kakeya") {
        m = eval_M_K_eps(f, eps, cfg.make_enum_spec(), cfg.threads);
    } else if (op == "kappa") {
        m = eval_M_kappa(f, cfg.kappa, cfg.threads);
    } else if (op == "field-segment") {
        m = eval_M_v(f, field, cfg.threads);
    } else {
        throw std::runtime_error("eval: unknown --op '" + op +
                                 "' (mvdelta|kakeya|kappa|field-segment)");
    }
    ScalarField vals(m.nx, m.ny, m.pitch, m.origin);
    for (int j = 0; j < m.ny; ++j)
        for (int i = 0; i < m.nx; ++i) vals.set(i, j, m.values[m.idx(i, j)]);
    vals.save_binary(out_path(cfg, "maxfield.bin"));
    std::string wit = "i,j,witness\n";
    for (int j = 0; j < m.ny; ++j)
        for (int i = 0; i < m.nx; ++i)
            if (m.witness[m.idx(i, j)] >= 0)
                wit += std::to_string(i) + "," + std::to_string(j) + "," +
                       std::to_string(m.witness[m.idx(i, j)]) + "\n";
    write_text_file(out_path(cfg, "witness.csv"), wit);
    std::cout << "eval " << op << ": max value " << vals.max_value() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Maximal functions over density-filtered rectangle families, with covering "
                 "verification"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--config", g.config_path, "configuration file (key = value)");
    app.add_option("--out", g.out_dir, "output directory");
    app.add_option("--seed", g.seed, "sampler seed")->each([&](const std::string&) {
        g.seed_set = true;
    });
    app.add_option("--threads", g.threads, "worker threads");
    app.add_option("--kappa", g.kappa, "covering constant");
    app.fallthrough();

    auto* sweep = app.add_subcommand("sweep", "weak-type quantity across the delta list");
    auto* probe = app.add_subcommand("probe-holder", "lacunary-field sharpness probe");
    auto* campaign = app.add_subcommand("campaign", "randomized covering verification");
    auto* verify = app.add_subcommand("verify", "verify one family file");
    std::string family_path;
    verify->add_option("--family", family_path, "family JSON file")->required();
    auto* eval = app.add_subcommand("eval", "evaluate one operator on one grid");
    std::string op, input;
    double csv_pitch = 1.0 / 64.0, delta = 0.25, eps = 0.25;
    eval->add_option("--op", op, "mvdelta|kakeya|kappa|field-segment")->required();
    eval->add_option("--input", input, "grid file (.bin or .csv)")->required();
    eval->add_option("--pitch", csv_pitch, "cell size for CSV input");
    eval->add_option("--delta", delta, "density threshold for mvdelta");
    eval->add_option("--eps", eps, "eccentricity floor for kakeya");

    CLI11_PARSE(app, argc, argv);

    ExperimentConfig cfg;
    try {
        cfg = resolve_config(g);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (sweep->parsed()) return cmd_sweep(cfg);
        if (probe->parsed()) return cmd_probe(cfg);
        if (campaign->parsed()) return cmd_campaign(cfg);
        if (verify->parsed()) return cmd_verify(cfg, family_path);
        if (eval->parsed()) return cmd_eval(cfg, op, input, csv_pitch, delta, eps);
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kakeya/experiments.hpp"

using namespace kakeya;

TEST_CASE("config parsing") {
    const ExperimentConfig cfg = parse_config_text(R"(
# comment
field.kind = constant
field.angle = 0.7
domain = 0, 0, 2, 2
grid.n = 64
sweep.deltas = 0.5, 0.25
sweep.disc_radii = 4, 8
kappa = 16
seed = 99
threads = 2
out = somewhere
)");
    CHECK(cfg.field_kind == "constant");
    CHECK(cfg.field_angle == 0.7);
    CHECK(cfg.domain.x1 == 2.0);
    CHECK(cfg.grid_n == 64);
    CHECK(cfg.sweep_deltas == std::vector<double>{0.5, 0.25});
    CHECK(cfg.disc_radii_cells == std::vector<int>{4, 8});
    CHECK(cfg.kappa == 16);
    CHECK(cfg.seed == 99);
    CHECK(cfg.threads == 2);
    CHECK(cfg.out_dir == "somewhere");
    CHECK(cfg.grid_pitch() == doctest::Approx(2.0 / 64));
}

TEST_CASE("config errors") {
    CHECK_THROWS(parse_config_text("no equals sign here"));
    CHECK_THROWS(parse_config_text("unknown.key = 3"));
    CHECK_THROWS(parse_config_text("grid.n = 4"));
    CHECK_THROWS(parse_config_text("sweep.deltas = 0.5, 1.5"));
    CHECK_THROWS(parse_config_text("domain = 1, 1, 0, 0"));
    CHECK_THROWS(parse_config_text("kappa = 2"));
    CHECK_THROWS(parse_config_text("grid.n = banana"));
    CHECK_THROWS(parse_config_text("sampler.strategy = sometimes"));
    CHECK_NOTHROW(parse_config_text("sampler.strategy = grid"));
}

TEST_CASE("field construction from config") {
    ExperimentConfig cfg;
    cfg.field_kind = "constant";
    CHECK(cfg.make_field().kind_name() == "constant");
    cfg.field_kind = "linear-angle";
    cfg.field_rate = 0.5;
    CHECK(cfg.make_field().lip() == doctest::Approx(0.5));
    cfg.field_kind = "sinusoidal-angle";
    cfg.field_amp = 0.5;
    cfg.field_freq = 2.0;
    CHECK(cfg.make_field().lip() == doctest::Approx(1.0));
    cfg.field_kind = "holder-alpha";
    CHECK(std::isinf(cfg.make_field().lip()));
    cfg.field_kind = "nonsense";
    CHECK_THROWS(cfg.make_field());
}

TEST_CASE("weak-type quantity: zero function and scaling anchor") {
    ScalarField zero(32, 32, 1.0 / 32);
    MaxField m = MaxField::zeros_like(zero);
    const WeakTypeQuantity q = weak_type_quantity(m, zero);
    CHECK(q.quantity == 0.0);

    // constant max field over a normalized disc: quantity is positive and
    // the witness lambda sits on the geometric grid
    const ScalarField f = make_disc_probe(32, 1.0 / 32, {0.5, 0.5}, 0.2);
    MaxField m2 = MaxField::zeros_like(f);
    for (auto& v : m2.values) v = 1.0;
    const WeakTypeQuantity q2 = weak_type_quantity(m2, f);
    CHECK(q2.quantity > 0.0);
    CHECK(q2.witness_lambda > 0.0);
    CHECK(q2.witness_lambda < 1.0);  // values of 1 need lambda < 1 to exceed
}

TEST_CASE("sweep on a constant field: delta-independent rows, slope zero") {
    ExperimentConfig cfg;
    cfg.field_kind = "constant";
    cfg.field_angle = 0.3;
    cfg.grid_n = 64;
    cfg.sweep_deltas = {0.5, 0.25, 0.125};
    cfg.disc_radii_cells = {4, 8};
    cfg.enum_spec.len_levels = 2;
    cfg.enum_spec.wid_levels = 3;
    cfg.seed = 5;
    const SweepResult r = weak_type_sweep(cfg);
    REQUIRE(r.rows.size() == 6);
    CHECK(r.slope == 0.0);
    for (const auto& row : r.rows) {
        CHECK_FALSE(row.excluded);
        CHECK(std::isfinite(row.quantity));
    }
    // per-probe quantities identical across deltas
    for (size_t i = 2; i < r.rows.size(); ++i)
        CHECK(r.rows[i].quantity == r.rows[i % 2].quantity);

    // cross-check one cell against a direct evaluation
    const VectorField v = cfg.make_field();
    const RectFamily fam = build_rect_family(v, 0.5, cfg.make_enum_spec(), cfg.make_sampler());
    const ScalarField f =
        make_disc_probe(cfg.grid_n, cfg.grid_pitch(), {1.0, 1.0}, 4 * cfg.grid_pitch());
    // the sweep centers probes on the domain midpoint
    const ScalarField fc = make_disc_probe(
        cfg.grid_n, cfg.grid_pitch(),
        {0.5 * (cfg.domain.x0 + cfg.domain.x1), 0.5 * (cfg.domain.y0 + cfg.domain.y1)},
        4 * cfg.grid_pitch());
    const WeakTypeQuantity direct = weak_type_quantity(eval_M_v_delta(fc, fam, 1), fc);
    CHECK(r.rows[0].quantity == direct.quantity);
    CHECK(r.rows[0].witness_lambda == direct.witness_lambda);
    (void)f;
}

TEST_CASE("sweep CSV is stable and excludes runtimes") {
    SweepResult r;
    r.rows.push_back({0.5, "disc4", 0.25, 1.5, 10, 123.0, false});
    r.rows.push_back({0.25, "disc8", 0.0, 0.0, 0, 5.0, true});
    const std::string csv = sweep_csv(r);
    CHECK(csv == "delta,probe,quantity,witness_lambda,family_size,excluded\n"
                 "0.5,disc4,0.25,1.5,10,0\n"
                 "0.25,disc8,0,0,0,1\n");
    CHECK(sweep_timings_csv(r).find("123") != std::string::npos);
}

TEST_CASE("campaign determinism: byte-identical bundles for a fixed seed") {
    ExperimentConfig cfg;
    cfg.field_kind = "sinusoidal-angle";
    cfg.field_amp = 0.5;
    cfg.field_freq = 40.0;
    cfg.campaign_instances = 2;
    cfg.campaign_max_rects = 40;
    cfg.campaign_grid_n = 64;
    cfg.seed = 123;
    const CampaignResult a = run_campaign(cfg);
    const CampaignResult b = run_campaign(cfg);
    CHECK(campaign_to_json(cfg, a).dump() == campaign_to_json(cfg, b).dump());
    CHECK(campaign_summary_csv(a) == campaign_summary_csv(b));
    CHECK(a.failed_instances == 0);

    // a different seed produces a different bundle
    ExperimentConfig cfg2 = cfg;
    cfg2.seed = 124;
    const CampaignResult c = run_campaign(cfg2);
    CHECK(campaign_to_json(cfg, a).dump() != campaign_to_json(cfg2, c).dump());
}

TEST_CASE("hard violation classification") {
    std::vector<EstimateReport> reports;
    EstimateReport ok;
    ok.name = "transverse_overlap";
    ok.violations = 5;  // empirical estimate, not a hard bound
    reports.push_back(ok);
    CHECK_FALSE(has_hard_violations(reports));
    EstimateReport bad;
    bad.name = "direction_pinch";
    bad.violations = 1;
    reports.push_back(bad);
    CHECK(has_hard_violations(reports));
}

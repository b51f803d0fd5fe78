#pragma once

#include <string>
#include <vector>

#include "kakeya/config.hpp"
#include "kakeya/report_io.hpp"
#include "kakeya/verify.hpp"

namespace kakeya {

// sup over the lambda grid of lambda^2 |{values > lambda}| / ||f||_2^2,
// with the geometric lambda grid anchored at ||f||_2 / |supp f|^{1/2}.
struct WeakTypeQuantity {
    double quantity = 0.0;
    double witness_lambda = 0.0;
};
WeakTypeQuantity weak_type_quantity(const MaxField& m, const ScalarField& f);

struct SweepRow {
    double delta = 0.0;
    std::string probe;  // disc label, e.g. "disc8"
    double quantity = 0.0;
    double witness_lambda = 0.0;
    int64_t family_size = 0;
    double runtime_sec = 0.0;  // reported separately; not in the deterministic CSV
    bool excluded = false;     // empty family at this delta
};

struct SweepResult {
    std::vector<SweepRow> rows;
    double slope = 0.0;      // log(max-over-probes quantity) vs log(1/delta)
    double intercept = 0.0;
    int points_in_fit = 0;
    double build_sec = 0.0;
};

SweepResult weak_type_sweep(const ExperimentConfig& cfg);
std::string sweep_csv(const SweepResult& r);     // deterministic
std::string sweep_timings_csv(const SweepResult& r);

struct ProbeRow {
    int scale_exp = 0;      // finest wavelength 2^-exp
    double quantity = 0.0;  // lacunary field
    double control = 0.0;   // one-term (Lipschitz) field, same machinery
    int64_t family_size = 0;
    int64_t control_family_size = 0;
    double runtime_sec = 0.0;
};

struct ProbeResult {
    std::vector<ProbeRow> rows;
    bool nondecreasing = false;   // lacunary quantity monotone in the scale
    double control_spread = 0.0;  // max/min of the control quantity
};

ProbeResult holder_probe(const ExperimentConfig& cfg, double alpha,
                         const std::vector<int>& scale_exps);
std::string probe_csv(const ProbeResult& r);
std::string probe_timings_csv(const ProbeResult& r);

// Random family of rectangles admissible for v at the given threshold:
// anchored at the local field direction with jittered orientation, dyadic
// sizes below the cap, centers scattered within `spread` of a few cluster
// anchors (spread <= 0 picks a default of several kappa-dilate lengths so
// the covering selection is neither trivial nor degenerate). ids are the
// (deterministic) attempt indices.
RectFamily random_admissible_family(const VectorField& v, double delta, int max_rects,
                                    uint64_t seed, const Sampler& s, double spread = -1.0);

// Admissible host rectangle plus admissible thin members meeting it at
// transverse angles. Populates the projection-group and interval machinery
// directly, against an arbitrary host window (the estimates hold for any
// host slab, not only selected rectangles).
struct HostWindowInstance {
    Rect host;
    std::vector<Rect> members;
    std::vector<double> densities;
};
HostWindowInstance random_host_window(const VectorField& v, double delta, int max_members,
                                      uint64_t seed, const Sampler& s);

// build_projection_groups + build_heavy_intervals + all group-level checks,
// plus the transverse overlap sum against the host.
std::vector<EstimateReport> host_window_checks(const HostWindowInstance& inst,
                                               const VectorField& v, const Sampler& s,
                                               double delta, int kappa);

struct CampaignInstance {
    int index = 0;
    int64_t family_size = 0;
    int64_t selected = 0;
    int64_t discarded = 0;
    int64_t host_members = 0;
    std::vector<EstimateReport> reports;
    std::string error;  // nonempty when the instance failed
};

struct CampaignResult {
    std::vector<CampaignInstance> instances;
    std::vector<EstimateReport> summary;  // merged across instances
    int64_t failed_instances = 0;
    double runtime_sec = 0.0;
};

CampaignResult run_campaign(const ExperimentConfig& cfg);
json campaign_to_json(const ExperimentConfig& cfg, const CampaignResult& r);
std::string campaign_summary_csv(const CampaignResult& r);

// Checks with explicit constants; any violation is a verification failure
// (process exit code 2).
bool has_hard_violations(const std::vector<EstimateReport>& reports);

std::string format_double(double v);  // %.17g, round-trip exact

}  // namespace kakeya

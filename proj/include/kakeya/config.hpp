#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "kakeya/covering.hpp"
#include "kakeya/maximal.hpp"
#include "kakeya/vector_field.hpp"

namespace kakeya {

// Flat "key = value" configuration with dotted keys; # starts a comment.
// Unknown keys are config errors so typos cannot silently change runs.
struct ExperimentConfig {
    // field
    std::string field_kind = "sinusoidal-angle";
    double field_angle = 0.0;   // constant offset / base direction
    double field_rate = 1.0;    // linear-angle
    double field_amp = 0.5;     // sinusoidal / holder amplitude
    double field_freq = 2.0;
    double field_dir = 0.0;     // direction of the 1-D profile
    double field_phase = 0.0;
    double field_alpha = 0.5;   // holder exponent
    int field_scales = 5;       // holder truncation
    double field_length_cap = 0.01;  // admissibility cap for the holder kind

    Box domain{0.0, 0.0, 1.0, 1.0};

    // scalar grid
    int grid_n = 256;

    // sweep
    std::vector<double> sweep_deltas{0.5, 0.25, 0.125, 0.0625, 0.03125};
    std::vector<int> disc_radii_cells{4, 8, 16};

    // holder probe
    double probe_alpha = 0.5;
    std::vector<int> probe_scale_exps{6, 7, 8, 9, 10};
    double probe_delta = 0.25;

    // enumeration
    EnumSpec enum_spec;          // domain filled from `domain`
    double enum_min_width_cells = 1.0;  // floor = cells * grid pitch

    // covering / campaign
    int kappa = 100;
    int campaign_instances = 200;
    int campaign_max_rects = 500;
    int campaign_grid_n = 128;
    double campaign_delta = 0.25;
    double campaign_spread = -1.0;  // <= 0: auto from the admissible cap

    uint64_t seed = 1;
    int sampler_count = 256;
    std::string sampler_strategy = "quasi-random";
    int threads = 1;
    std::string out_dir = "out";

    // derived helpers
    VectorField make_field() const;
    VectorField make_holder_field(double alpha, int scales) const;
    EnumSpec make_enum_spec() const;  // min_width resolved against grid_n
    Sampler make_sampler() const;
    double grid_pitch() const { return domain.width() / grid_n; }
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);

}  // namespace kakeya

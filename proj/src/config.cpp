#include "kakeya/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace kakeya {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    return out;
}

double to_double(const std::string& key, const std::string& s) {
    try {
        size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("config: bad numeric value for " + key + ": '" + s + "'");
    }
}

int to_int(const std::string& key, const std::string& s) {
    const double v = to_double(key, s);
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v)
        throw std::runtime_error("config: expected integer for " + key + ": '" + s + "'");
    return i;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config: line " + std::to_string(lineno) +
                                     " is not 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));

        if (key == "field.kind") cfg.field_kind = val;
        else if (key == "field.angle") cfg.field_angle = to_double(key, val);
        else if (key == "field.rate") cfg.field_rate = to_double(key, val);
        else if (key == "field.amp") cfg.field_amp = to_double(key, val);
        else if (key == "field.freq") cfg.field_freq = to_double(key, val);
        else if (key == "field.dir") cfg.field_dir = to_double(key, val);
        else if (key == "field.phase") cfg.field_phase = to_double(key, val);
        else if (key == "field.alpha") cfg.field_alpha = to_double(key, val);
        else if (key == "field.scales") cfg.field_scales = to_int(key, val);
        else if (key == "field.length_cap") cfg.field_length_cap = to_double(key, val);
        else if (key == "domain") {
            const auto parts = split_commas(val);
            if (parts.size() != 4) throw std::runtime_error("config: domain needs x0,y0,x1,y1");
            cfg.domain = {to_double(key, parts[0]), to_double(key, parts[1]),
                          to_double(key, parts[2]), to_double(key, parts[3])};
        } else if (key == "grid.n") cfg.grid_n = to_int(key, val);
        else if (key == "sweep.deltas") {
            cfg.sweep_deltas.clear();
            for (const auto& p : split_commas(val)) cfg.sweep_deltas.push_back(to_double(key, p));
        } else if (key == "sweep.disc_radii") {
            cfg.disc_radii_cells.clear();
            for (const auto& p : split_commas(val)) cfg.disc_radii_cells.push_back(to_int(key, p));
        } else if (key == "probe.alpha") cfg.probe_alpha = to_double(key, val);
        else if (key == "probe.scales") {
            cfg.probe_scale_exps.clear();
            for (const auto& p : split_commas(val)) cfg.probe_scale_exps.push_back(to_int(key, p));
        } else if (key == "probe.delta") cfg.probe_delta = to_double(key, val);
        else if (key == "enum.max_len") cfg.enum_spec.max_len = to_double(key, val);
        else if (key == "enum.len_levels") cfg.enum_spec.len_levels = to_int(key, val);
        else if (key == "enum.wid_levels") cfg.enum_spec.wid_levels = to_int(key, val);
        else if (key == "enum.min_width_cells") cfg.enum_min_width_cells = to_double(key, val);
        else if (key == "enum.orient_factor") cfg.enum_spec.orient_factor = to_double(key, val);
        else if (key == "enum.center_factor") cfg.enum_spec.center_factor = to_double(key, val);
        else if (key == "kappa") cfg.kappa = to_int(key, val);
        else if (key == "campaign.instances") cfg.campaign_instances = to_int(key, val);
        else if (key == "campaign.max_rects") cfg.campaign_max_rects = to_int(key, val);
        else if (key == "campaign.grid_n") cfg.campaign_grid_n = to_int(key, val);
        else if (key == "campaign.delta") cfg.campaign_delta = to_double(key, val);
        else if (key == "campaign.spread") cfg.campaign_spread = to_double(key, val);
        else if (key == "sampler.seed" || key == "seed")
            cfg.seed = static_cast<uint64_t>(std::stoull(val));
        else if (key == "sampler.count") cfg.sampler_count = to_int(key, val);
        else if (key == "sampler.strategy") cfg.sampler_strategy = val;
        else if (key == "threads") cfg.threads = to_int(key, val);
        else if (key == "out") cfg.out_dir = val;
        else
            throw std::runtime_error("config: unknown key '" + key + "'");
    }

    // validation
    if (cfg.grid_n < 8) throw std::runtime_error("config: grid.n must be >= 8");
    if (cfg.domain.width() <= 0.0 || cfg.domain.height() <= 0.0)
        throw std::runtime_error("config: empty domain");
    for (double d : cfg.sweep_deltas)
        if (!(d > 0.0 && d <= 1.0)) throw std::runtime_error("config: deltas must be in (0,1]");
    if (!(cfg.probe_delta > 0.0 && cfg.probe_delta <= 1.0))
        throw std::runtime_error("config: probe.delta must be in (0,1]");
    if (cfg.kappa < 8) throw std::runtime_error("config: kappa must be >= 8");
    if (cfg.threads < 1) throw std::runtime_error("config: threads must be >= 1");
    if (cfg.campaign_instances < 1 || cfg.campaign_max_rects < 1)
        throw std::runtime_error("config: campaign sizes must be positive");
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("config: cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str());
}

VectorField ExperimentConfig::make_field() const {
    if (field_kind == "constant") return VectorField::constant(field_angle, domain);
    if (field_kind == "linear-angle")
        return VectorField::linear_angle(field_rate, field_dir, field_angle, domain);
    if (field_kind == "sinusoidal-angle")
        return VectorField::sinusoidal_angle(field_amp, field_freq, field_dir, field_phase,
                                             field_angle, domain);
    if (field_kind == "holder-alpha")
        return make_holder_field(field_alpha, field_scales);
    throw std::runtime_error("config: unsupported field.kind '" + field_kind + "'");
}

VectorField ExperimentConfig::make_holder_field(double alpha, int scales) const {
    return VectorField::holder_alpha(alpha, scales, field_amp, field_freq, field_dir, field_angle,
                                     domain, field_length_cap);
}

EnumSpec ExperimentConfig::make_enum_spec() const {
    EnumSpec spec = enum_spec;
    spec.domain = domain;
    spec.min_width = enum_min_width_cells * grid_pitch();
    return spec;
}

Sampler ExperimentConfig::make_sampler() const {
    Sampler s;
    s.count = sampler_count;
    s.seed = seed;
    if (sampler_strategy == "grid") s.strategy = Sampler::Strategy::Grid;
    else if (sampler_strategy == "quasi-random") s.strategy = Sampler::Strategy::QuasiRandom;
    else throw std::runtime_error("config: sampler.strategy must be grid or quasi-random");
    return s;
}

}  // namespace kakeya

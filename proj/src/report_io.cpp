#include "kakeya/report_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace kakeya {

json box_to_json(const Box& b) { return json::array({b.x0, b.y0, b.x1, b.y1}); }

Box box_from_json(const json& j) {
    if (!j.is_array() || j.size() != 4) throw std::runtime_error("box: expected [x0,y0,x1,y1]");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
}

json field_to_json(const VectorField& v) {
    json j;
    j["kind"] = v.kind_name();
    j["domain"] = box_to_json(v.domain());
    j["offset"] = v.offset;
    switch (v.kind()) {
        case VectorField::Kind::Constant:
            break;
        case VectorField::Kind::LinearAngle:
            j["rate"] = v.parts[0].amp;
            j["dir"] = v.parts[0].dir_angle;
            break;
        case VectorField::Kind::SinusoidalAngle:
            j["amp"] = v.parts[0].amp;
            j["freq"] = v.parts[0].freq;
            j["dir"] = v.parts[0].dir_angle;
            j["phase"] = v.parts[0].phase;
            break;
        case VectorField::Kind::HolderAlpha:
            j["alpha"] = v.alpha;
            j["scales"] = v.scales;
            j["amp"] = v.parts[0].amp;
            j["freq"] = v.parts[0].freq;
            j["dir"] = v.parts[0].dir_angle;
            j["length_cap"] = v.length_cap();
            break;
        case VectorField::Kind::Composite: {
            json parts = json::array();
            for (const auto& c : v.parts)
                parts.push_back({{"profile", c.profile == VectorField::Component::Profile::Linear
                                                 ? "linear"
                                                 : "sine"},
                                 {"amp", c.amp},
                                 {"freq", c.freq},
                                 {"dir", c.dir_angle},
                                 {"phase", c.phase}});
            j["parts"] = parts;
            break;
        }
    }
    return j;
}

VectorField field_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    const Box dom = box_from_json(j.at("domain"));
    const double offset = j.value("offset", 0.0);
    if (kind == "constant") return VectorField::constant(offset, dom);
    if (kind == "linear-angle")
        return VectorField::linear_angle(j.at("rate").get<double>(), j.value("dir", 0.0), offset,
                                         dom);
    if (kind == "sinusoidal-angle")
        return VectorField::sinusoidal_angle(j.at("amp").get<double>(), j.value("freq", 1.0),
                                             j.value("dir", 0.0), j.value("phase", 0.0), offset,
                                             dom);
    if (kind == "holder-alpha")
        return VectorField::holder_alpha(j.at("alpha").get<double>(), j.at("scales").get<int>(),
                                         j.at("amp").get<double>(), j.value("freq", 1.0),
                                         j.value("dir", 0.0), offset, dom,
                                         j.at("length_cap").get<double>());
    if (kind == "composite") {
        std::vector<VectorField::Component> parts;
        for (const auto& p : j.at("parts")) {
            VectorField::Component c;
            c.profile = p.value("profile", std::string("sine")) == "linear"
                            ? VectorField::Component::Profile::Linear
                            : VectorField::Component::Profile::Sine;
            c.amp = p.at("amp").get<double>();
            c.freq = p.value("freq", 1.0);
            c.dir_angle = p.value("dir", 0.0);
            c.phase = p.value("phase", 0.0);
            parts.push_back(c);
        }
        return VectorField::composite(std::move(parts), offset, dom);
    }
    throw std::runtime_error("unknown field kind: " + kind);
}

json rect_to_json(const Rect& r) {
    return {{"id", r.id},   {"cx", r.center.x}, {"cy", r.center.y},
            {"angle", r.dir.angle}, {"len", r.len},     {"wid", r.wid}};
}

Rect rect_from_json(const json& j) {
    return Rect({j.at("cx").get<double>(), j.at("cy").get<double>()},
                UnitVec::from_angle(j.at("angle").get<double>()), j.at("len").get<double>(),
                j.at("wid").get<double>(), j.at("id").get<int64_t>());
}

json family_to_json(const RectFamily& fam, const VectorField& v) {
    json j;
    j["field"] = field_to_json(v);
    j["delta"] = fam.delta;
    j["nu"] = fam.nu;
    json rects = json::array();
    for (size_t i = 0; i < fam.rects.size(); ++i) {
        json r = rect_to_json(fam.rects[i]);
        r["density"] = fam.densities[i];
        rects.push_back(std::move(r));
    }
    j["rects"] = std::move(rects);
    return j;
}

FamilyFile family_from_json(const json& j) {
    FamilyFile out{RectFamily{}, field_from_json(j.at("field"))};
    out.family.delta = j.at("delta").get<double>();
    out.family.nu = j.value("nu", 0.0);
    for (const auto& r : j.at("rects")) {
        out.family.rects.push_back(rect_from_json(r));
        out.family.densities.push_back(r.value("density", 1.0));
    }
    return out;
}

json covering_to_json(const CoveringResult& cr) {
    json j;
    j["selected"] = cr.selected;
    j["discarded"] = cr.discarded;
    json pairs = json::array();
    for (const auto& [a, b] : cr.pairs) pairs.push_back(json::array({a, b}));
    j["pairs"] = std::move(pairs);
    json absorbed = json::object();
    for (const auto& [id, v] : cr.absorbed) absorbed[std::to_string(id)] = v;
    j["absorbed"] = std::move(absorbed);
    json transverse = json::object();
    for (const auto& [id, v] : cr.transverse) transverse[std::to_string(id)] = v;
    j["transverse"] = std::move(transverse);
    j["diagnostics"] = cr.diagnostics;
    return j;
}

json ud_to_json(const UDecomposition& ud) {
    json j;
    j["rho"] = rect_to_json(ud.rho);
    j["delta"] = ud.delta;
    j["reps"] = ud.reps;
    json members = json::object();
    for (const auto& [id, v] : ud.members) members[std::to_string(id)] = v;
    j["members"] = std::move(members);
    json theta = json::object();
    for (const auto& [id, t] : ud.theta) theta[std::to_string(id)] = t;
    j["theta"] = std::move(theta);
    json vsets = json::object();
    for (const auto& [id, vs] : ud.vsets) {
        json arr = json::array();
        for (const Interval& iv : vs.to_intervals()) arr.push_back(json::array({iv.lo, iv.hi}));
        vsets[std::to_string(id)] = std::move(arr);
    }
    j["vsets"] = std::move(vsets);
    json decomp = json::object();
    for (const auto& [id, dec] : ud.rep_decomp) {
        json d;
        json iv = json::array();
        for (const auto& hi : dec.intervals)
            iv.push_back({{"lo", hi.span.lo}, {"hi", hi.span.hi}, {"members", hi.members}});
        d["intervals"] = std::move(iv);
        d["residual"] = dec.residual;
        decomp[std::to_string(id)] = std::move(d);
    }
    j["interval_decomposition"] = std::move(decomp);
    j["empty_projection"] = ud.empty_projection;
    j["diagnostics"] = ud.diagnostics;
    return j;
}

json reports_to_json(const std::vector<EstimateReport>& reps) {
    json out = json::array();
    for (const auto& r : reps)
        out.push_back({{"name", r.name},
                       {"measured", r.measured},
                       {"bound", r.bound},
                       {"ratio", r.ratio},
                       {"instances", r.instances},
                       {"violations", r.violations},
                       {"slack", r.slack}});
    return out;
}

std::string selection_log_text(const CoveringResult& cr) {
    std::ostringstream ss;
    for (const auto& e : cr.log) {
        if (e.kind == SelectionLogEntry::Kind::Select)
            ss << "select " << e.id << "\n";
        else
            ss << "discard " << e.id << " round=" << e.round << "\n";
    }
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << content;
    if (!f) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace kakeya

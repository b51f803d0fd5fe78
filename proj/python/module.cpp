#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kakeya/experiments.hpp"

namespace py = pybind11;
using namespace kakeya;

namespace {

ScalarField field_from_numpy(py::array_t<double, py::array::c_style | py::array::forcecast> arr,
                             double pitch) {
    if (arr.ndim() != 2) throw std::invalid_argument("expected a 2-D array");
    const int ny = static_cast<int>(arr.shape(0));
    const int nx = static_cast<int>(arr.shape(1));
    ScalarField f(nx, ny, pitch);
    auto r = arr.unchecked<2>();
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) f.set(i, j, r(j, i));
    return f;
}

py::array_t<double> values_to_numpy(const std::vector<double>& v, int nx, int ny) {
    py::array_t<double> out({ny, nx});
    auto w = out.mutable_unchecked<2>();
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) w(j, i) = v[static_cast<size_t>(j) * nx + i];
    return out;
}

py::array_t<int64_t> witness_to_numpy(const std::vector<int64_t>& v, int nx, int ny) {
    py::array_t<int64_t> out({ny, nx});
    auto w = out.mutable_unchecked<2>();
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) w(j, i) = v[static_cast<size_t>(j) * nx + i];
    return out;
}

py::dict report_to_dict(const EstimateReport& r) {
    py::dict d;
    d["name"] = r.name;
    d["measured"] = r.measured;
    d["bound"] = r.bound;
    d["ratio"] = r.ratio;
    d["instances"] = r.instances;
    d["violations"] = r.violations;
    d["slack"] = r.slack;
    return d;
}

}  // namespace

PYBIND11_MODULE(pykakeya, m) {
    m.doc() = "Directional maximal functions over density-filtered rectangle families, with "
              "the covering-selection machinery and its verifiers.";

    py::class_<Vec2>(m, "Vec2")
        .def(py::init<double, double>(), py::arg("x"), py::arg("y"))
        .def_readwrite("x", &Vec2::x)
        .def_readwrite("y", &Vec2::y);

    py::class_<UnitVec>(m, "UnitVec")
        .def_static("from_angle", &UnitVec::from_angle)
        .def_readonly("angle", &UnitVec::angle);

    py::class_<Arc>(m, "Arc")
        .def_readonly("center", &Arc::center)
        .def_readonly("length", &Arc::length)
        .def("contains_arc", &Arc::contains_arc)
        .def("dilated", &Arc::dilated);

    py::class_<Rect>(m, "Rect")
        .def(py::init([](double cx, double cy, double angle, double len, double wid, int64_t id) {
                 return Rect({cx, cy}, UnitVec::from_angle(angle), len, wid, id);
             }),
             py::arg("cx"), py::arg("cy"), py::arg("angle"), py::arg("len"), py::arg("wid"),
             py::arg("id") = -1)
        .def_readonly("center", &Rect::center)
        .def_readonly("dir", &Rect::dir)
        .def_readonly("len", &Rect::len)
        .def_readonly("wid", &Rect::wid)
        .def_readonly("id", &Rect::id)
        .def("area", &Rect::area)
        .def("contains", &Rect::contains);

    py::class_<Segment>(m, "Segment")
        .def(py::init([](double ox, double oy, double angle, double halfwidth) {
                 return Segment{{ox, oy}, UnitVec::from_angle(angle), halfwidth};
             }),
             py::arg("ox"), py::arg("oy"), py::arg("angle"), py::arg("halfwidth"));

    py::class_<Box>(m, "Box")
        .def(py::init<double, double, double, double>(), py::arg("x0"), py::arg("y0"),
             py::arg("x1"), py::arg("y1"));

    m.def("angle_dist", &angle_dist);
    m.def("eccentricity_arc", &eccentricity_arc);
    m.def("dilate", &dilate);
    m.def("intersection_area", &intersection_area);
    m.def("rects_intersect", &rects_intersect);
    m.def("inclusion_holds", &inclusion_holds);
    m.def("project_onto_segment", [](const Rect& r, const Segment& s) -> py::object {
        const auto iv = project_onto_segment(r, s);
        if (!iv) return py::none();
        return py::make_tuple(iv->lo, iv->hi);
    });

    py::class_<VectorField>(m, "VectorField")
        .def_static("constant", &VectorField::constant)
        .def_static("linear_angle", &VectorField::linear_angle)
        .def_static("sinusoidal_angle", &VectorField::sinusoidal_angle)
        .def_static("holder_alpha", &VectorField::holder_alpha)
        .def("eval", [](const VectorField& v, double x, double y) { return v.eval({x, y}).angle; })
        .def("angle_at", [](const VectorField& v, double x, double y) { return v.angle_at({x, y}); })
        .def_property_readonly("lip", &VectorField::lip)
        .def_property_readonly("nu", &VectorField::nu)
        .def_property_readonly("kind", &VectorField::kind_name);

    m.def("estimate_lipschitz", &estimate_lipschitz, py::arg("v"), py::arg("box"), py::arg("n"),
          py::arg("min_sep") = -1.0, py::arg("max_sep") = -1.0, py::arg("seed") = 0x5eedULL);

    py::class_<Sampler>(m, "Sampler")
        .def(py::init([](int count, uint64_t seed, const std::string& strategy) {
                 Sampler s;
                 s.count = count;
                 s.seed = seed;
                 s.strategy = strategy == "grid" ? Sampler::Strategy::Grid
                                                 : Sampler::Strategy::QuasiRandom;
                 return s;
             }),
             py::arg("count") = 256, py::arg("seed") = 0,
             py::arg("strategy") = "quasi-random");

    m.def("vset_density", &vset_density);
    m.def("vset_projection", [](const Rect& r, const Segment& seg, const VectorField& v,
                                const Sampler& s) {
        std::vector<std::pair<double, double>> out;
        for (const Interval& iv : vset_projection(r, seg, v, s).to_intervals())
            out.emplace_back(iv.lo, iv.hi);
        return out;
    });

    py::class_<ScalarField>(m, "ScalarField")
        .def(py::init(&field_from_numpy), py::arg("values"), py::arg("pitch"))
        .def_property_readonly("nx", &ScalarField::nx)
        .def_property_readonly("ny", &ScalarField::ny)
        .def_property_readonly("pitch", &ScalarField::pitch)
        .def("values", [](const ScalarField& f) {
            return values_to_numpy(f.values(), f.nx(), f.ny());
        })
        .def("norm_l1", &ScalarField::norm_l1)
        .def("norm_l2_sq", &ScalarField::norm_l2_sq)
        .def("save", &ScalarField::save_binary)
        .def_static("load", &ScalarField::load_binary)
        .def_static("load_csv", &ScalarField::load_csv);

    m.def("make_disc_probe", [](int n, double pitch, double cx, double cy, double radius) {
        return make_disc_probe(n, pitch, {cx, cy}, radius);
    });

    m.def("rect_average", &rect_average);

    py::class_<EnumSpec>(m, "EnumSpec")
        .def(py::init<>())
        .def_readwrite("domain", &EnumSpec::domain)
        .def_readwrite("max_len", &EnumSpec::max_len)
        .def_readwrite("len_levels", &EnumSpec::len_levels)
        .def_readwrite("wid_levels", &EnumSpec::wid_levels)
        .def_readwrite("min_width", &EnumSpec::min_width)
        .def_readwrite("orient_factor", &EnumSpec::orient_factor)
        .def_readwrite("center_factor", &EnumSpec::center_factor);

    py::class_<RectFamily>(m, "RectFamily")
        .def_readonly("rects", &RectFamily::rects)
        .def_readonly("densities", &RectFamily::densities)
        .def_readonly("delta", &RectFamily::delta)
        .def_readonly("nu", &RectFamily::nu)
        .def("__len__", &RectFamily::size)
        .def("filtered", &RectFamily::filtered);

    m.def("build_rect_family", &build_rect_family);
    m.def("random_admissible_family", &random_admissible_family);

    py::class_<MaxField>(m, "MaxField")
        .def_property_readonly("nx", [](const MaxField& f) { return f.nx; })
        .def_property_readonly("ny", [](const MaxField& f) { return f.ny; })
        .def("values", [](const MaxField& f) { return values_to_numpy(f.values, f.nx, f.ny); })
        .def("witness", [](const MaxField& f) { return witness_to_numpy(f.witness, f.nx, f.ny); });

    m.def("eval_M_v_delta", &eval_M_v_delta, py::arg("f"), py::arg("family"),
          py::arg("threads") = 1);
    m.def("eval_M_kappa", &eval_M_kappa, py::arg("g"), py::arg("kappa"), py::arg("threads") = 1);
    m.def("eval_M_K_eps", &eval_M_K_eps, py::arg("f"), py::arg("eps"), py::arg("spec"),
          py::arg("threads") = 1);
    m.def("eval_M_v", &eval_M_v, py::arg("f"), py::arg("v"), py::arg("threads") = 1);

    py::class_<CoverGridSpec>(m, "CoverGridSpec")
        .def(py::init([](const Box& domain, int n) {
                 return CoverGridSpec{domain, n};
             }),
             py::arg("domain"), py::arg("n") = 128);

    py::class_<CoveringResult>(m, "CoveringResult")
        .def_readonly("selected", &CoveringResult::selected)
        .def_readonly("discarded", &CoveringResult::discarded)
        .def_readonly("pairs", &CoveringResult::pairs)
        .def_readonly("diagnostics", &CoveringResult::diagnostics);

    m.def("select_covering", &select_covering);
    m.def("run_pipeline_checks",
          [](const RectFamily& fam, const VectorField& v, const Sampler& s, int kappa,
             const CoverGridSpec& grid) {
              const CoveringPipelineResult pr = run_covering_pipeline(fam, v, s, kappa, grid);
              py::list reports;
              for (const auto& r : run_all_checks(pr, fam, kappa, grid))
                  reports.append(report_to_dict(r));
              py::dict out;
              out["selected"] = pr.covering.selected;
              out["discarded"] = pr.covering.discarded;
              out["reports"] = reports;
              return out;
          },
          py::arg("family"), py::arg("field"), py::arg("sampler"), py::arg("kappa"),
          py::arg("grid"));
}

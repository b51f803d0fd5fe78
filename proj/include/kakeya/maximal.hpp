#pragma once

#include <cstdint>
#include <vector>

#include "kakeya/scalar_field.hpp"
#include "kakeya/vector_field.hpp"

namespace kakeya {

// Rectangle enumeration parameters. Lengths are dyadic below the admissible
// cap, widths dyadic below each length, orientation pitch scales with the
// eccentricity-arc length and center pitch with the width, so the grid
// refines exactly where thin rectangles need it.
struct EnumSpec {
    Box domain;
    double max_len = -1.0;      // <= 0: min(field cap, domain short side / 4)
    int len_levels = 3;         // L in {L0 * 2^-j}
    int wid_levels = 4;         // W in {L * 2^-k}, k < wid_levels
    double min_width = 0.0;     // absolute floor; 0 disables
    double orient_factor = 0.5; // orientation pitch = factor * (W/L)
    double center_factor = 0.5; // center pitch = factor * W
};

// Finite admissible collection. ids are stable enumeration indices: the same
// geometric candidate gets the same id at any density threshold.
struct RectFamily {
    std::vector<Rect> rects;        // ascending id
    std::vector<double> densities;  // parallel to rects
    double delta = 0.0;
    double nu = 0.0;  // effective length cap used by the enumeration
    EnumSpec provenance;

    size_t size() const { return rects.size(); }
    bool empty() const { return rects.empty(); }
    // Subfamily at a stricter threshold; ids and densities are preserved.
    RectFamily filtered(double delta2) const;
    const Rect* find(int64_t id) const;  // nullptr if absent
    int index_of(int64_t id) const;      // -1 if absent
};

struct MaxField {
    Vec2 origin;
    double pitch = 1.0;
    int nx = 0, ny = 0;
    std::vector<double> values;
    std::vector<int64_t> witness;  // rect id realizing the value, -1 if none

    static MaxField zeros_like(const ScalarField& f);
    size_t idx(int i, int j) const { return static_cast<size_t>(j) * nx + i; }
    Vec2 cell_center(int i, int j) const {
        return {origin.x + (i + 0.5) * pitch, origin.y + (j + 0.5) * pitch};
    }
    bool operator==(const MaxField& o) const;
};

// Mean of f over r, on a fixed deterministic interior lattice of at least
// 256 bilinear samples, shaped to the rectangle's aspect ratio. Exact for
// constant f.
double rect_average(const ScalarField& f, const Rect& r);

// Enumerates dyadic rectangles over spec.domain and keeps those whose
// sampled density meets delta. Thin wrappers around one enumeration core:
// the field version filters by aligned density, the eccentricity version
// by wid/len >= eps with no field at all.
RectFamily build_rect_family(const VectorField& v, double delta, const EnumSpec& spec,
                             const Sampler& s);
RectFamily build_eccentricity_family(double eps, const EnumSpec& spec);

// Supremum over family rectangles containing each grid point of the
// rectangle average; 0 (witness -1) where no rectangle applies.
MaxField eval_M_v_delta(const ScalarField& f, const RectFamily& fam, int threads = 1);

// Max over dyadic scales of the centered-square average and of segment
// averages along kappa uniformly distributed directions.
MaxField eval_M_kappa(const ScalarField& g, int kappa, int threads = 1);

// eval_M_v_delta with the eccentricity family (no vector-field filter).
MaxField eval_M_K_eps(const ScalarField& f, double eps, const EnumSpec& spec, int threads = 1);

// Segment averages along the field direction at each point, dyadic
// half-lengths in (pitch, length cap].
MaxField eval_M_v(const ScalarField& f, const VectorField& v, int threads = 1);

}  // namespace kakeya

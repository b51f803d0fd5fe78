#pragma once

// Independent oracles used to freeze expected values. Everything here is
// deliberately written against the public contracts only, with the plainest
// possible evaluation (sampling counts, per-point double loops), so the
// implementations under test cannot share their failure modes.

#include "kakeya/maximal.hpp"
#include "kakeya/rng.hpp"

namespace kakeya::oracles {

// Quasi-random area of r1 ∩ r2: n points spread over r1, counting the ones
// that land in r2.
double mc_intersection_area(const Rect& r1, const Rect& r2, int n, uint64_t seed);

// Mean of f over r by dense quasi-random sampling (for disc-average checks).
double mc_rect_average(const ScalarField& f, const Rect& r, int n, uint64_t seed);

// Plain per-point, per-rectangle double loop.
MaxField brute_force_rect_supremum(const ScalarField& f, const RectFamily& fam);

// Direct 1-D quadrature of the mean of f along [x - s w, x + s w].
double direct_segment_mean(const ScalarField& f, const Vec2& x, const Vec2& w, double s, int n);

// Random oriented rectangle with length in [lmin, lmax] inside the box.
Rect random_rect(Rng& rng, const Box& box, double lmin, double lmax, int64_t id = -1);

}  // namespace kakeya::oracles

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "kakeya/geometry.hpp"
#include "kakeya/rng.hpp"

namespace kakeya {

// Unit-vector field on a planar box, given by an angle map x -> theta(x).
// The declared Lipschitz constant bounds angle variation per plane unit;
// it is 0 for constant fields and +inf for the lacunary (Holder) kind.
class VectorField {
public:
    enum class Kind { Constant, LinearAngle, SinusoidalAngle, HolderAlpha, Composite };

    struct Component {
        // angle contribution: amp * profile(freq * dot(x, u(dir_angle)) + phase)
        // profile is identity for Linear, sin for Sinusoidal.
        enum class Profile { Linear, Sine } profile = Profile::Sine;
        double amp = 0.0;
        double freq = 1.0;
        double dir_angle = 0.0;
        double phase = 0.0;
    };

    static VectorField constant(double angle, Box domain);
    static VectorField linear_angle(double rate, double dir_angle, double offset, Box domain);
    static VectorField sinusoidal_angle(double amp, double freq, double dir_angle, double phase,
                                        double offset, Box domain);
    // amp * sum_{j<scales} 2^{-alpha j} tri(2^j freq dot(x,u)), tri = unit
    // triangle wave. The finest wavelength present is 1/(freq 2^{scales-1}).
    // Declared lip is +inf, so admissibility needs an explicit length cap.
    static VectorField holder_alpha(double alpha, int scales, double amp, double freq,
                                    double dir_angle, double offset, Box domain,
                                    double length_cap);
    static VectorField composite(std::vector<Component> parts, double offset, Box domain);

    UnitVec eval(const Vec2& x) const;
    double angle_at(const Vec2& x) const;

    // Conservative range [lo, hi] of angle_at over the box (hi - lo may
    // exceed 2*pi, meaning the whole circle).
    Interval angle_range(const Box& b) const;

    Kind kind() const { return kind_; }
    const Box& domain() const { return domain_; }
    double lip() const { return lip_; }
    // Maximal admissible rectangle length (100*lip)^-1; +inf when lip == 0,
    // 0 when lip == +inf.
    double nu() const;
    // Cap actually enforced on rectangle lengths: nu() except for the
    // lacunary kind, which carries its explicit cap.
    double length_cap() const;

    std::string kind_name() const;

    // descriptive parameters for serialization
    double offset = 0.0;
    double alpha = 0.0;
    int scales = 0;
    std::vector<Component> parts;

private:
    VectorField(Kind k, Box d) : kind_(k), domain_(d) {}
    Kind kind_;
    Box domain_;
    double lip_ = 0.0;
    double length_cap_ = -1.0;  // <0 means "use nu()"
};

// Deterministic point sampler for measure estimation inside rectangles.
// Streams are derived from (seed, rect id): the same rectangle always sees
// the same points, regardless of evaluation order.
struct Sampler {
    enum class Strategy { Grid, QuasiRandom };
    Strategy strategy = Strategy::QuasiRandom;
    int count = 256;  // base budget per rectangle, floor 16
    uint64_t seed = 0;

    int budget(const Rect& r) const;

    // Visits every sample point of r in stream order, allocation-free.
    template <class F>
    void for_each_point(const Rect& r, F&& f) const {
        const int n = budget(r);
        const Vec2 e = r.dir.vec();
        const Vec2 p = r.dir.perp().vec();
        if (strategy == Strategy::QuasiRandom) {
            Quasi2d q(mix_key(seed, static_cast<uint64_t>(r.id)));
            for (int i = 0; i < n; ++i) {
                double u, w;
                q.next(u, w);
                f(r.center + e * ((u - 0.5) * r.len) + p * ((w - 0.5) * r.wid));
            }
        } else {
            const int rows =
                std::max(2, static_cast<int>(std::lround(std::sqrt(n / r.aspect()))));
            const int cols = (n + rows - 1) / rows;
            for (int b = 0; b < rows; ++b)
                for (int a = 0; a < cols; ++a) {
                    const double u = (a + 0.5) / cols - 0.5;
                    const double w = (b + 0.5) / rows - 0.5;
                    f(r.center + e * (u * r.len) + p * (w * r.wid));
                }
        }
    }

    // Convenience wrapper collecting the same points.
    std::vector<Vec2> points(const Rect& r) const;
};

// Union of occupied cells on a fixed 1-D grid over a host segment's
// coordinate range [-halfwidth, halfwidth]; cells are closed intervals of
// width pitch. Disjointness/overlap is exact at cell granularity.
struct VSet {
    double t0 = 0.0;     // left end of the grid (= -halfwidth)
    double pitch = 0.0;  // cell width (= halfwidth/2048)
    std::vector<int32_t> cells;  // sorted, unique

    bool empty() const { return cells.empty(); }
    double total_length() const { return pitch * static_cast<double>(cells.size()); }
    bool overlaps(const VSet& other) const;
    std::vector<Interval> to_intervals() const;  // merged runs of cells
};

constexpr int kVsetCellsPerHalfwidth = 2048;

// Sampled maximum of angle_dist(v(x), v(y)) / |x - y| over n point pairs in
// the box; pair separations are log-uniform in [min_sep, max_sep] (defaults
// span 1e-6 .. 1 times the box diagonal). A lower bound for the true constant.
double estimate_lipschitz(const VectorField& v, const Box& box, int n,
                          double min_sep = -1.0, double max_sep = -1.0,
                          uint64_t seed = 0x5eedULL);

// Fraction of sample points of r whose field direction falls in r's
// eccentricity arc. Errors when r exceeds the admissible length or leaves
// the field's domain.
double vset_density(const Rect& r, const VectorField& v, const Sampler& s);

// Same sample points, but those in the aligned set are orthogonally
// projected onto seg and coarsened to the fixed cell grid.
VSet vset_projection(const Rect& r, const Segment& seg, const VectorField& v, const Sampler& s);

}  // namespace kakeya

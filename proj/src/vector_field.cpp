#include "kakeya/vector_field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kakeya/rng.hpp"

namespace kakeya {



namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// triangle wave: period 1, range [-1, 1], slope +-4, tri(0) = -1
double tri(double t) { return 4.0 * std::fabs(t - std::round(t)) - 1.0; }

double part_lip(const VectorField::Component& c) {
    return std::fabs(c.amp * c.freq);
}

// range of dot(x, u) over the box (extremes at corners)
Interval dot_range(const Box& b, const UnitVec& u) {
    const Vec2 uv = u.vec();
    const Vec2 cs[4] = {{b.x0, b.y0}, {b.x1, b.y0}, {b.x0, b.y1}, {b.x1, b.y1}};
    double lo = cs[0].dot(uv), hi = lo;
    for (int i = 1; i < 4; ++i) {
        const double d = cs[i].dot(uv);
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
    return {lo, hi};
}

Interval sin_range(double s0, double s1) {
    if (s1 - s0 >= kTwoPi) return {-1.0, 1.0};
    double lo = std::min(std::sin(s0), std::sin(s1));
    double hi = std::max(std::sin(s0), std::sin(s1));
    // interior extrema at pi/2 + k*pi
    const double k0 = std::ceil((s0 - 0.5 * kPi) / kPi);
    const double k1 = std::floor((s1 - 0.5 * kPi) / kPi);
    for (double k = k0; k <= k1; k += 1.0) {
        const double v = std::sin(0.5 * kPi + k * kPi);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return {lo, hi};
}

Interval tri_range(double t0, double t1) {
    if (t1 - t0 >= 1.0) return {-1.0, 1.0};
    double lo = std::min(tri(t0), tri(t1));
    double hi = std::max(tri(t0), tri(t1));
    if (std::floor(t1) >= std::ceil(t0)) lo = -1.0;                    // integer inside
    if (std::floor(t1 - 0.5) >= std::ceil(t0 - 0.5)) hi = 1.0;         // half-integer inside
    return {lo, hi};
}

Interval scaled(const Interval& r, double amp) {
    return amp >= 0.0 ? Interval{amp * r.lo, amp * r.hi} : Interval{amp * r.hi, amp * r.lo};
}

}  // namespace

VectorField VectorField::constant(double angle, Box domain) {
    VectorField v(Kind::Constant, domain);
    v.offset = angle;
    v.lip_ = 0.0;
    return v;
}

VectorField VectorField::linear_angle(double rate, double dir_angle, double offset, Box domain) {
    VectorField v(Kind::LinearAngle, domain);
    v.offset = offset;
    v.parts.push_back({Component::Profile::Linear, rate, 1.0, dir_angle, 0.0});
    v.lip_ = std::fabs(rate);
    return v;
}

VectorField VectorField::sinusoidal_angle(double amp, double freq, double dir_angle, double phase,
                                          double offset, Box domain) {
    VectorField v(Kind::SinusoidalAngle, domain);
    v.offset = offset;
    v.parts.push_back({Component::Profile::Sine, amp, freq, dir_angle, phase});
    v.lip_ = std::fabs(amp * freq);
    return v;
}

VectorField VectorField::holder_alpha(double alpha_, int scales_, double amp, double freq,
                                      double dir_angle, double offset, Box domain,
                                      double length_cap) {
    if (!(alpha_ > 0.0 && alpha_ < 1.0))
        throw std::invalid_argument("holder_alpha: alpha must be in (0,1)");
    if (scales_ < 1) throw std::invalid_argument("holder_alpha: scales must be >= 1");
    if (!(length_cap > 0.0)) throw std::invalid_argument("holder_alpha: length_cap must be > 0");
    VectorField v(Kind::HolderAlpha, domain);
    v.offset = offset;
    v.alpha = alpha_;
    v.scales = scales_;
    v.parts.push_back({Component::Profile::Linear, amp, freq, dir_angle, 0.0});
    v.lip_ = kInf;
    v.length_cap_ = length_cap;
    return v;
}

VectorField VectorField::composite(std::vector<Component> parts_, double offset, Box domain) {
    VectorField v(Kind::Composite, domain);
    v.offset = offset;
    v.parts = std::move(parts_);
    v.lip_ = 0.0;
    for (const auto& c : v.parts) v.lip_ += part_lip(c);
    return v;
}

double VectorField::angle_at(const Vec2& x) const {
    double a = offset;
    if (kind_ == Kind::HolderAlpha) {
        const Component& c = parts[0];
        const double d = x.dot(UnitVec::from_angle(c.dir_angle).vec());
        double scale_amp = c.amp;
        double t = c.freq * d;
        for (int j = 0; j < scales; ++j) {
            a += scale_amp * tri(t);
            scale_amp *= std::pow(2.0, -alpha);
            t *= 2.0;
        }
        return a;
    }
    for (const Component& c : parts) {
        const double s = c.freq * x.dot(UnitVec::from_angle(c.dir_angle).vec()) + c.phase;
        a += (c.profile == Component::Profile::Linear) ? c.amp * s : c.amp * std::sin(s);
    }
    return a;
}

UnitVec VectorField::eval(const Vec2& x) const {
    if (!domain_.contains(x)) throw std::domain_error("VectorField::eval: point outside domain");
    return UnitVec::from_angle(angle_at(x));
}

Interval VectorField::angle_range(const Box& b) const {
    double lo = offset, hi = offset;
    if (kind_ == Kind::HolderAlpha) {
        const Component& c = parts[0];
        const Interval d = dot_range(b, UnitVec::from_angle(c.dir_angle));
        double scale_amp = c.amp;
        double f = c.freq;
        for (int j = 0; j < scales; ++j) {
            const Interval tr =
                tri_range(std::min(f * d.lo, f * d.hi), std::max(f * d.lo, f * d.hi));
            const Interval sr = scaled(tr, scale_amp);
            lo += sr.lo;
            hi += sr.hi;
            scale_amp *= std::pow(2.0, -alpha);
            f *= 2.0;
        }
        return {lo, hi};
    }
    for (const Component& c : parts) {
        const Interval d = dot_range(b, UnitVec::from_angle(c.dir_angle));
        const double s0 = std::min(c.freq * d.lo, c.freq * d.hi) + c.phase;
        const double s1 = std::max(c.freq * d.lo, c.freq * d.hi) + c.phase;
        const Interval pr = (c.profile == Component::Profile::Linear)
                                ? Interval{s0, s1}
                                : sin_range(s0, s1);
        const Interval sr = scaled(pr, c.amp);
        lo += sr.lo;
        hi += sr.hi;
    }
    return {lo, hi};
}

double VectorField::nu() const {
    if (lip_ == 0.0) return kInf;
    if (std::isinf(lip_)) return 0.0;
    return 1.0 / (100.0 * lip_);
}

double VectorField::length_cap() const { return length_cap_ > 0.0 ? length_cap_ : nu(); }

std::string VectorField::kind_name() const {
    switch (kind_) {
        case Kind::Constant: return "constant";
        case Kind::LinearAngle: return "linear-angle";
        case Kind::SinusoidalAngle: return "sinusoidal-angle";
        case Kind::HolderAlpha: return "holder-alpha";
        case Kind::Composite: return "composite";
    }
    return "unknown";
}

int Sampler::budget(const Rect& r) const {
    const double by_aspect = 64.0 * r.aspect();
    int n = std::max(count, static_cast<int>(std::ceil(by_aspect)));
    return std::max(n, 16);
}

std::vector<Vec2> Sampler::points(const Rect& r) const {
    std::vector<Vec2> out;
    out.reserve(static_cast<size_t>(budget(r)) + 8);
    for_each_point(r, [&](const Vec2& p) { out.push_back(p); });
    return out;
}

bool VSet::overlaps(const VSet& other) const {
    size_t i = 0, j = 0;
    while (i < cells.size() && j < other.cells.size()) {
        if (cells[i] == other.cells[j]) return true;
        if (cells[i] < other.cells[j]) ++i;
        else ++j;
    }
    return false;
}

std::vector<Interval> VSet::to_intervals() const {
    std::vector<Interval> out;
    size_t i = 0;
    while (i < cells.size()) {
        size_t j = i;
        while (j + 1 < cells.size() && cells[j + 1] == cells[j] + 1) ++j;
        out.push_back({t0 + pitch * cells[i], t0 + pitch * (cells[j] + 1)});
        i = j + 1;
    }
    return out;
}

double estimate_lipschitz(const VectorField& v, const Box& box, int n, double min_sep,
                          double max_sep, uint64_t seed) {
    if (n < 1000) throw std::invalid_argument("estimate_lipschitz: need n >= 1000 trials");
    if (max_sep <= 0.0) max_sep = box.diag();
    if (min_sep <= 0.0) min_sep = 1e-6 * box.diag();
    Rng rng(seed);
    const double llo = std::log(min_sep), lhi = std::log(max_sep);
    double best = 0.0;
    for (int i = 0; i < n; ++i) {
        Vec2 x{rng.uniform(box.x0, box.x1), rng.uniform(box.y0, box.y1)};
        const double r = std::exp(rng.uniform(llo, lhi));
        const double phi = rng.uniform(0.0, kTwoPi);
        Vec2 y{x.x + r * std::cos(phi), x.y + r * std::sin(phi)};
        y.x = std::min(std::max(y.x, box.x0), box.x1);
        y.y = std::min(std::max(y.y, box.y0), box.y1);
        const double d = (y - x).norm();
        if (d < 0.25 * min_sep) continue;
        const double q = angle_dist(v.eval(x), v.eval(y)) / d;
        best = std::max(best, q);
    }
    return best;
}

namespace {

void check_admissible(const Rect& r, const VectorField& v) {
    if (r.len > v.length_cap() * (1.0 + 1e-12))
        throw std::invalid_argument("rectangle longer than the admissible length cap");
    for (const Vec2& c : r.corners())
        if (!v.domain().contains(c))
            throw std::domain_error("rectangle leaves the field domain");
}

}  // namespace

double vset_density(const Rect& r, const VectorField& v, const Sampler& s) {
    check_admissible(r, v);
    const double half_ex = 0.5 * (r.wid / r.len);
    const double dir_angle = r.dir.angle;
    size_t hit = 0, total = 0;
    s.for_each_point(r, [&](const Vec2& p) {
        const double d = std::remainder(v.angle_at(p) - dir_angle, kTwoPi);
        if (std::fabs(d) <= half_ex) ++hit;
        ++total;
    });
    return static_cast<double>(hit) / static_cast<double>(total);
}

VSet vset_projection(const Rect& r, const Segment& seg, const VectorField& v, const Sampler& s) {
    check_admissible(r, v);
    VSet out;
    out.pitch = seg.halfwidth / kVsetCellsPerHalfwidth;
    out.t0 = -seg.halfwidth;
    const double half_ex = 0.5 * (r.wid / r.len);
    const double dir_angle = r.dir.angle;
    const int32_t ncells = 2 * kVsetCellsPerHalfwidth;
    std::vector<int32_t>& cells = out.cells;

    // Columns stratified along the length, at least two per projection cell:
    // a fully aligned rectangle then fills its whole projected span, instead
    // of the dotted pattern an unstratified stream leaves on long spans.
    const int n_len = std::max(
        64, static_cast<int>(std::ceil(2.5 * r.len / out.pitch)));
    const int n_wid = std::max(4, (s.budget(r) + n_len - 1) / n_len);
    const Vec2 e = r.dir.vec();
    const Vec2 p = r.dir.perp().vec();
    Quasi2d q(mix_key(s.seed, static_cast<uint64_t>(r.id)));
    for (int a = 0; a < n_len; ++a) {
        const double u = ((a + 0.5) / n_len - 0.5) * r.len;
        double off, unused;
        q.next(off, unused);
        for (int b = 0; b < n_wid; ++b) {
            double w = (b + 0.5) / n_wid + off;
            w -= std::floor(w);
            const Vec2 x = r.center + e * u + p * ((w - 0.5) * r.wid);
            const double d = std::remainder(v.angle_at(x) - dir_angle, kTwoPi);
            if (std::fabs(d) > half_ex) continue;
            const double t = seg.coord_of(x);
            if (t < out.t0 || t > seg.halfwidth) continue;
            int32_t k = static_cast<int32_t>(std::floor((t - out.t0) / out.pitch));
            k = std::min(std::max(k, 0), ncells - 1);
            cells.push_back(k);
        }
    }
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    return out;
}

}  // namespace kakeya

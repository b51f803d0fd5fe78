#include "kakeya/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

namespace kakeya {

double Vec2::norm() const { return std::hypot(x, y); }

double Box::diag() const { return std::hypot(width(), height()); }

UnitVec UnitVec::from_angle(double a) {
    double w = std::fmod(a, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    if (w >= kTwoPi) w = 0.0;  // fmod can land exactly on 2*pi after the add
    return UnitVec{w};
}

Vec2 UnitVec::vec() const { return {std::cos(angle), std::sin(angle)}; }

UnitVec UnitVec::perp() const { return from_angle(angle + 0.5 * kPi); }

double angle_dist(const UnitVec& a, const UnitVec& b) {
    double d = std::fabs(a.angle - b.angle);
    if (d > kPi) d = kTwoPi - d;
    return d;
}

bool Arc::contains(const UnitVec& u) const {
    return angle_dist(u, center) <= 0.5 * length;
}

bool Arc::contains_arc(const Arc& inner) const {
    if (length >= kTwoPi) return true;
    if (inner.length > length) return false;
    return angle_dist(center, inner.center) <= 0.5 * (length - inner.length);
}

double Arc::dist_to(const Arc& other) const {
    if (length >= kTwoPi || other.length >= kTwoPi) return 0.0;
    double d = angle_dist(center, other.center) - 0.5 * (length + other.length);
    return d > 0.0 ? d : 0.0;
}

Arc Arc::dilated(double c) const {
    if (c <= 0.0) throw std::invalid_argument("Arc::dilated: factor must be positive");
    return Arc{center, std::min(c * length, kTwoPi)};
}

Rect::Rect(Vec2 c, UnitVec d, double length, double width, int64_t rect_id)
    : center(c), dir(d), len(length), wid(width), id(rect_id) {
    if (!(width > 0.0) || !(length >= width))
        throw std::invalid_argument("Rect: requires 0 < wid <= len");
}

std::array<Vec2, 4> Rect::corners() const {
    const Vec2 e = dir.vec();
    const Vec2 p = dir.perp().vec();
    const Vec2 a = e * (0.5 * len);
    const Vec2 b = p * (0.5 * wid);
    return {center + a + b, center - a + b, center - a - b, center + a - b};
}

bool Rect::contains(const Vec2& p) const { return contains_point(*this, p); }

Arc eccentricity_arc(const Rect& r) { return Arc{r.dir, r.wid / r.len}; }

Rect dilate(const Rect& r, double c) {
    if (!(c > 0.0)) throw std::invalid_argument("dilate: factor must be positive");
    return Rect(r.center, r.dir, c * r.len, c * r.wid, r.id);
}

bool contains_point(const Rect& r, const Vec2& p) {
    const Vec2 d = p - r.center;
    const Vec2 e = r.dir.vec();
    const double u = d.dot(e);
    const double w = d.cross(e);  // -(component along perp), sign irrelevant
    const double tol = kClipEps * (1.0 + r.len);
    return std::fabs(u) <= 0.5 * r.len + tol && std::fabs(w) <= 0.5 * r.wid + tol;
}

namespace {

// Canonical ordering so that symmetric predicates are symmetric bit-for-bit.
bool canonical_before(const Rect& a, const Rect& b) {
    return std::tie(a.center.x, a.center.y, a.dir.angle, a.len, a.wid) <=
           std::tie(b.center.x, b.center.y, b.dir.angle, b.len, b.wid);
}

bool sat_separated(const Rect& a, const Rect& b) {
    const Vec2 axes[4] = {a.dir.vec(), a.dir.perp().vec(), b.dir.vec(), b.dir.perp().vec()};
    for (const Vec2& ax : axes) {
        const double ca = a.center.dot(ax), cb = b.center.dot(ax);
        const double ea = 0.5 * a.len * std::fabs(a.dir.vec().dot(ax)) +
                          0.5 * a.wid * std::fabs(a.dir.perp().vec().dot(ax));
        const double eb = 0.5 * b.len * std::fabs(b.dir.vec().dot(ax)) +
                          0.5 * b.wid * std::fabs(b.dir.perp().vec().dot(ax));
        const double tol = kClipEps * (1.0 + ea + eb);
        if (std::fabs(ca - cb) > ea + eb + tol) return true;
    }
    return false;
}

// Clip polygon poly by the closed half-plane {x : n.x <= c}.
void clip_halfplane(std::vector<Vec2>& poly, const Vec2& n, double c, std::vector<Vec2>& out) {
    out.clear();
    const size_t m = poly.size();
    if (m == 0) return;
    for (size_t i = 0; i < m; ++i) {
        const Vec2& cur = poly[i];
        const Vec2& nxt = poly[(i + 1) % m];
        const double dc = cur.dot(n) - c;
        const double dn = nxt.dot(n) - c;
        const bool in_c = dc <= kClipEps;
        const bool in_n = dn <= kClipEps;
        if (in_c) out.push_back(cur);
        if (in_c != in_n) {
            const double denom = dc - dn;
            if (std::fabs(denom) > kClipEps) {
                const double t = dc / denom;
                out.push_back({cur.x + t * (nxt.x - cur.x), cur.y + t * (nxt.y - cur.y)});
            }
        }
    }
}

double polygon_area(const std::vector<Vec2>& poly) {
    double s = 0.0;
    const size_t m = poly.size();
    for (size_t i = 0; i < m; ++i) {
        const Vec2& p = poly[i];
        const Vec2& q = poly[(i + 1) % m];
        s += p.cross(q);
    }
    return 0.5 * std::fabs(s);
}

double intersection_area_ordered(const Rect& a, const Rect& b) {
    const auto ca = a.corners();
    std::vector<Vec2> poly(ca.begin(), ca.end());
    std::vector<Vec2> tmp;
    tmp.reserve(8);

    const Vec2 e = b.dir.vec();
    const Vec2 p = b.dir.perp().vec();
    const struct { Vec2 n; double c; } planes[4] = {
        {e, b.center.dot(e) + 0.5 * b.len},
        {e * -1.0, -(b.center.dot(e) - 0.5 * b.len)},
        {p, b.center.dot(p) + 0.5 * b.wid},
        {p * -1.0, -(b.center.dot(p) - 0.5 * b.wid)},
    };
    for (const auto& pl : planes) {
        clip_halfplane(poly, pl.n, pl.c, tmp);
        poly.swap(tmp);
        if (poly.size() < 3) return 0.0;
    }
    const double area = polygon_area(poly);
    return area < kAreaFloor ? 0.0 : area;
}

}  // namespace

bool rects_intersect(const Rect& a, const Rect& b) {
    return canonical_before(a, b) ? !sat_separated(a, b) : !sat_separated(b, a);
}

double intersection_area(const Rect& a, const Rect& b) {
    return canonical_before(a, b) ? intersection_area_ordered(a, b)
                                  : intersection_area_ordered(b, a);
}

std::optional<Interval> project_onto_segment(const Rect& r, const Segment& s) {
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (const Vec2& c : r.corners()) {
        const double t = s.coord_of(c);
        if (first) {
            lo = hi = t;
            first = false;
        } else {
            lo = std::min(lo, t);
            hi = std::max(hi, t);
        }
    }
    lo = std::max(lo, -s.halfwidth);
    hi = std::min(hi, s.halfwidth);
    if (lo > hi) return std::nullopt;
    return Interval{lo, hi};
}

bool inclusion_holds(const Rect& r, const Rect& rp, double kappa) {
    const Arc ex_r = eccentricity_arc(r);
    const Arc ex_rp = eccentricity_arc(rp);
    const bool hyp = rects_intersect(r, rp) && r.len >= rp.len && r.wid >= rp.wid &&
                     ex_r.length <= ex_rp.length && ex_rp.dilated(10.0).contains_arc(ex_r);
    if (!hyp) return true;
    const Rect big = dilate(r, kappa);
    for (const Vec2& c : rp.corners())
        if (!contains_point(big, c)) return false;
    return true;
}

Rect slab_window(const Segment& s, const Interval& along, double width, double side_sign) {
    const double l = along.length();
    const Vec2 center =
        s.point_at(along.mid()) + s.dir.perp().vec() * (side_sign * 0.5 * width);
    if (l >= width) return Rect(center, s.dir, l, width);
    return Rect(center, s.dir.perp(), width, l);
}

}  // namespace kakeya

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace kakeya {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

// Collinearity epsilon for polygon clipping, in plane units.
constexpr double kClipEps = 1e-12;
// Intersection areas below this are reported as exactly 0.
constexpr double kAreaFloor = 1e-14;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double c) const { return {c * x, c * y}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double cross(const Vec2& o) const { return x * o.y - y * o.x; }
    double norm() const;
};

struct Box {
    double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;

    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    double short_side() const { return width() < height() ? width() : height(); }
    double diag() const;
    bool contains(const Vec2& p) const {
        return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1;
    }
};

// Point on the unit circle, stored as an angle in [0, 2*pi).
struct UnitVec {
    double angle = 0.0;

    static UnitVec from_angle(double a);
    Vec2 vec() const;
    UnitVec perp() const;  // rotated by +pi/2
};

// Geodesic distance on the circle, in [0, pi].
double angle_dist(const UnitVec& a, const UnitVec& b);

// Closed subarc of the unit circle: {u : angle_dist(u, center) <= length/2}.
struct Arc {
    UnitVec center;
    double length = 0.0;  // radians, in (0, 2*pi]

    bool contains(const UnitVec& u) const;
    bool contains_arc(const Arc& inner) const;
    // Distance between the two arcs as subsets of the circle (0 if they meet).
    double dist_to(const Arc& other) const;
    // Same center, length scaled by c and capped at 2*pi.
    Arc dilated(double c) const;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double length() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
    bool intersects(const Interval& o) const { return lo <= o.hi && o.lo <= hi; }
};

// Oriented closed rectangle: center, long-axis direction, length >= width > 0.
struct Rect {
    Vec2 center;
    UnitVec dir;
    double len = 1.0;
    double wid = 1.0;
    int64_t id = -1;

    Rect() = default;
    Rect(Vec2 c, UnitVec d, double length, double width, int64_t rect_id = -1);

    double area() const { return len * wid; }
    double aspect() const { return len / wid; }
    std::array<Vec2, 4> corners() const;
    bool contains(const Vec2& p) const;
};

// Line segment centered at origin, extending +-halfwidth along dir. Points
// project to the signed arclength coordinate t in [-halfwidth, halfwidth].
struct Segment {
    Vec2 origin;
    UnitVec dir;
    double halfwidth = 1.0;

    double coord_of(const Vec2& p) const { return (p - origin).dot(dir.vec()); }
    Vec2 point_at(double t) const { return origin + dir.vec() * t; }
};

// Arc of directions indistinguishable from dir at the rectangle's aspect
// ratio: centered at dir, of length wid/len.
Arc eccentricity_arc(const Rect& r);

Rect dilate(const Rect& r, double c);

bool contains_point(const Rect& r, const Vec2& p);

// Closed-set intersection test (separating axis over both frames).
bool rects_intersect(const Rect& a, const Rect& b);

// Area of the convex intersection polygon, by half-plane clipping.
// Symmetric by construction; values below kAreaFloor collapse to 0.
double intersection_area(const Rect& a, const Rect& b);

// Span of the orthogonal projection of r's corners onto s, clipped to s's
// extent; nullopt when the projection misses s entirely.
std::optional<Interval> project_onto_segment(const Rect& r, const Segment& s);

// Tests the rectangle-inclusion property: when the ordering hypotheses hold
// (nonempty intersection, r at least as long and wide, eccentricity arc of r
// no longer and contained in the tenfold dilate of rp's), every corner of rp
// must lie in dilate(r, kappa). Vacuously true when the hypotheses fail.
bool inclusion_holds(const Rect& r, const Rect& rp, double kappa);

// Rectangle spanning interval `along` (in s's coordinate) along s, and
// [0, width] on the side of s toward `side_sign` (+1/-1). Used for slab
// windows I x J over a host segment. The Rect invariant wid <= len is
// restored by swapping axes when needed; only the point set matters here.
Rect slab_window(const Segment& s, const Interval& along, double width, double side_sign = 1.0);

}  // namespace kakeya

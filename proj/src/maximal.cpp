#include "kakeya/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "kakeya/parallel.hpp"

namespace kakeya {

RectFamily RectFamily::filtered(double delta2) const {
    if (!(delta2 > 0.0 && delta2 <= 1.0))
        throw std::invalid_argument("filtered: delta must be in (0,1]");
    RectFamily out;
    out.delta = delta2;
    out.nu = nu;
    out.provenance = provenance;
    for (size_t i = 0; i < rects.size(); ++i) {
        if (densities[i] >= delta2) {
            out.rects.push_back(rects[i]);
            out.densities.push_back(densities[i]);
        }
    }
    return out;
}

const Rect* RectFamily::find(int64_t id) const {
    const int i = index_of(id);
    return i < 0 ? nullptr : &rects[i];
}

int RectFamily::index_of(int64_t id) const {
    auto it = std::lower_bound(rects.begin(), rects.end(), id,
                               [](const Rect& r, int64_t v) { return r.id < v; });
    if (it == rects.end() || it->id != id) return -1;
    return static_cast<int>(it - rects.begin());
}

MaxField MaxField::zeros_like(const ScalarField& f) {
    MaxField m;
    m.origin = f.origin();
    m.pitch = f.pitch();
    m.nx = f.nx();
    m.ny = f.ny();
    m.values.assign(static_cast<size_t>(m.nx) * m.ny, 0.0);
    m.witness.assign(static_cast<size_t>(m.nx) * m.ny, -1);
    return m;
}

bool MaxField::operator==(const MaxField& o) const {
    return nx == o.nx && ny == o.ny && pitch == o.pitch && origin.x == o.origin.x &&
           origin.y == o.origin.y && values == o.values && witness == o.witness;
}

double rect_average(const ScalarField& f, const Rect& r) {
    const double aspect = r.aspect();
    int n_len = static_cast<int>(std::ceil(std::sqrt(256.0 * aspect)));
    n_len = std::max(n_len, 16);
    const int n_wid = std::max(1, (256 + n_len - 1) / n_len);
    const Vec2 e = r.dir.vec();
    const Vec2 p = r.dir.perp().vec();
    double sum = 0.0;
    for (int b = 0; b < n_wid; ++b) {
        const double w = ((b + 0.5) / n_wid - 0.5) * r.wid;
        const Vec2 row = r.center + p * w;
        for (int a = 0; a < n_len; ++a) {
            const double u = ((a + 0.5) / n_len - 0.5) * r.len;
            sum += f.sample(row + e * u);
        }
    }
    return sum / (static_cast<double>(n_len) * n_wid);
}

namespace {

// circular distance from angle theta to the angle interval [lo, hi]
double circ_dist_to_range(double theta, const Interval& range) {
    if (range.length() >= kTwoPi) return 0.0;
    const double d =
        std::fabs(std::remainder(theta - range.mid(), kTwoPi)) - 0.5 * range.length();
    return d > 0.0 ? d : 0.0;
}

Box rect_bbox(const Rect& r) {
    const auto cs = r.corners();
    Box b{cs[0].x, cs[0].y, cs[0].x, cs[0].y};
    for (int i = 1; i < 4; ++i) {
        b.x0 = std::min(b.x0, cs[i].x);
        b.y0 = std::min(b.y0, cs[i].y);
        b.x1 = std::max(b.x1, cs[i].x);
        b.y1 = std::max(b.y1, cs[i].y);
    }
    return b;
}

Box clip_box(const Box& a, const Box& b) {
    return {std::max(a.x0, b.x0), std::max(a.y0, b.y0), std::min(a.x1, b.x1),
            std::min(a.y1, b.y1)};
}

double resolve_base_length(const EnumSpec& spec, double field_cap) {
    double l0 = spec.max_len > 0.0 ? std::min(spec.max_len, field_cap)
                                   : std::min(field_cap, spec.domain.short_side() / 4.0);
    if (!(l0 > 0.0) || !std::isfinite(l0))
        throw std::invalid_argument("enumeration base length is not positive and finite");
    return l0;
}

// Shared enumeration skeleton. visit(rect) is called for every candidate in
// ascending id order; ids are a pure function of the lattice indices so that
// density prefilters cannot shift them.
template <class Visit>
void enumerate_candidates(const EnumSpec& spec, double l0, Visit&& visit) {
    const Box dom = spec.domain;
    int64_t next_base = 0;
    for (int j = 0; j < spec.len_levels; ++j) {
        const double len = l0 * std::pow(2.0, -j);
        for (int k = 0; k < spec.wid_levels; ++k) {
            const double wid = len * std::pow(2.0, -k);
            if (spec.min_width > 0.0 && wid < spec.min_width) break;
            const double ex = wid / len;
            const int m =
                std::max(4, static_cast<int>(std::ceil(kTwoPi / (spec.orient_factor * ex))));
            const double dtheta = kTwoPi / m;
            const double cp = spec.center_factor * wid;
            const double inset = 0.5 * std::hypot(len, wid);
            const double avail_w = dom.width() - 2.0 * inset;
            const double avail_h = dom.height() - 2.0 * inset;
            if (avail_w < 0.0 || avail_h < 0.0) continue;
            const int64_t nxc = static_cast<int64_t>(std::floor(avail_w / cp)) + 1;
            const int64_t nyc = static_cast<int64_t>(std::floor(avail_h / cp)) + 1;
            const int64_t base = next_base;
            next_base += static_cast<int64_t>(m) * nxc * nyc;
            visit(len, wid, m, dtheta, cp, inset, nxc, nyc, base);
        }
    }
}

}  // namespace

RectFamily build_rect_family(const VectorField& v, double delta, const EnumSpec& spec,
                             const Sampler& s) {
    if (!(delta > 0.0 && delta <= 1.0))
        throw std::invalid_argument("build_rect_family: delta must be in (0,1]");
    RectFamily fam;
    fam.delta = delta;
    fam.provenance = spec;
    const Box dom = spec.domain;
    const double l0 = resolve_base_length(spec, v.length_cap());
    fam.nu = l0;

    // angle ranges over spatial tiles, used to skip candidates whose
    // eccentricity arc cannot meet the field anywhere near them
    constexpr int kTiles = 16;
    const double tw = dom.width() / kTiles;
    const double th = dom.height() / kTiles;

    enumerate_candidates(spec, l0,
                         [&](double len, double wid, int m, double dtheta, double cp,
                             double inset, int64_t nxc, int64_t nyc, int64_t base) {
        const double half_ex = 0.5 * (wid / len);
        const Interval global_range = v.angle_range(dom);

        std::vector<Interval> tile_range(static_cast<size_t>(kTiles) * kTiles);
        for (int ty = 0; ty < kTiles; ++ty)
            for (int tx = 0; tx < kTiles; ++tx) {
                Box tb{dom.x0 + tx * tw - inset, dom.y0 + ty * th - inset,
                       dom.x0 + (tx + 1) * tw + inset, dom.y0 + (ty + 1) * th + inset};
                tile_range[static_cast<size_t>(ty) * kTiles + tx] =
                    v.angle_range(clip_box(tb, dom));
            }

        for (int io = 0; io < m; ++io) {
            const double theta = io * dtheta;
            if (circ_dist_to_range(theta, global_range) > half_ex) continue;
            const UnitVec dir = UnitVec::from_angle(theta);
            for (int64_t iy = 0; iy < nyc; ++iy) {
                const double cy = dom.y0 + inset + iy * cp;
                const int ty = std::min(kTiles - 1, static_cast<int>((cy - dom.y0) / th));
                for (int64_t ix = 0; ix < nxc; ++ix) {
                    const double cx = dom.x0 + inset + ix * cp;
                    const int tx = std::min(kTiles - 1, static_cast<int>((cx - dom.x0) / tw));
                    if (circ_dist_to_range(
                            theta, tile_range[static_cast<size_t>(ty) * kTiles + tx]) > half_ex)
                        continue;
                    const int64_t id = base + (static_cast<int64_t>(io) * nyc + iy) * nxc + ix;
                    Rect r({cx, cy}, dir, len, wid, id);
                    const Interval local = v.angle_range(clip_box(rect_bbox(r), dom));
                    if (circ_dist_to_range(theta, local) > half_ex) continue;
                    const double dens = vset_density(r, v, s);
                    if (dens >= delta) {
                        fam.rects.push_back(r);
                        fam.densities.push_back(dens);
                    }
                }
            }
        }
    });
    return fam;
}

RectFamily build_eccentricity_family(double eps, const EnumSpec& spec) {
    if (!(eps > 0.0 && eps <= 1.0))
        throw std::invalid_argument("build_eccentricity_family: eps must be in (0,1]");
    RectFamily fam;
    fam.delta = 0.0;
    fam.provenance = spec;
    const double l0 = resolve_base_length(spec, std::numeric_limits<double>::infinity());
    fam.nu = l0;
    enumerate_candidates(spec, l0,
                         [&](double len, double wid, int m, double dtheta, double cp,
                             double inset, int64_t nxc, int64_t nyc, int64_t base) {
        if (wid / len < eps) return;
        for (int io = 0; io < m; ++io) {
            const UnitVec dir = UnitVec::from_angle(io * dtheta);
            for (int64_t iy = 0; iy < nyc; ++iy)
                for (int64_t ix = 0; ix < nxc; ++ix) {
                    const int64_t id = base + (static_cast<int64_t>(io) * nyc + iy) * nxc + ix;
                    fam.rects.emplace_back(
                        Vec2{spec.domain.x0 + inset + ix * cp, spec.domain.y0 + inset + iy * cp},
                        dir, len, wid, id);
                    fam.densities.push_back(1.0);
                }
        }
    });
    return fam;
}

namespace {

void accumulate_rect_sup(MaxField& out, const ScalarField& f, const std::vector<Rect>& rects,
                         int64_t begin, int64_t end) {
    const double pitch = f.pitch();
    const Vec2 org = f.origin();
    for (int64_t ri = begin; ri < end; ++ri) {
        const Rect& r = rects[static_cast<size_t>(ri)];
        const double avg = rect_average(f, r);
        if (!(avg > 0.0)) continue;
        const Box bb = rect_bbox(r);
        const int i0 = std::max(0, static_cast<int>(std::ceil((bb.x0 - org.x) / pitch - 0.5)));
        const int i1 =
            std::min(out.nx - 1, static_cast<int>(std::floor((bb.x1 - org.x) / pitch - 0.5)));
        const int j0 = std::max(0, static_cast<int>(std::ceil((bb.y0 - org.y) / pitch - 0.5)));
        const int j1 =
            std::min(out.ny - 1, static_cast<int>(std::floor((bb.y1 - org.y) / pitch - 0.5)));
        for (int j = j0; j <= j1; ++j)
            for (int i = i0; i <= i1; ++i) {
                if (!contains_point(r, out.cell_center(i, j))) continue;
                const size_t ix = out.idx(i, j);
                if (avg > out.values[ix]) {
                    out.values[ix] = avg;
                    out.witness[ix] = r.id;
                }
            }
    }
}

MaxField eval_rect_supremum(const ScalarField& f, const std::vector<Rect>& rects, int threads) {
    threads = std::max(1, threads);
    MaxField out = MaxField::zeros_like(f);
    f.box_sum(0, 0, 0, 0);  // settle the prefix cache before sharing
    const int64_t n = static_cast<int64_t>(rects.size());
    if (threads == 1 || n < 64) {
        accumulate_rect_sup(out, f, rects, 0, n);
        return out;
    }
    std::vector<MaxField> parts(static_cast<size_t>(std::min<int64_t>(threads, n)),
                                MaxField::zeros_like(f));
    parallel_chunks(n, threads, [&](int64_t b, int64_t e, int c) {
        accumulate_rect_sup(parts[static_cast<size_t>(c)], f, rects, b, e);
    });
    // winner per cell: greatest value, then smallest id — matches the
    // sequential ascending-id semantics regardless of chunking
    for (const MaxField& p : parts) {
        for (size_t ix = 0; ix < out.values.size(); ++ix) {
            if (p.values[ix] > out.values[ix] ||
                (p.values[ix] == out.values[ix] && p.witness[ix] >= 0 &&
                 (out.witness[ix] < 0 || p.witness[ix] < out.witness[ix]))) {
                out.values[ix] = p.values[ix];
                out.witness[ix] = p.witness[ix];
            }
        }
    }
    return out;
}

}  // namespace

MaxField eval_M_v_delta(const ScalarField& f, const RectFamily& fam, int threads) {
    if (fam.empty()) throw std::invalid_argument("eval_M_v_delta: empty family");
    return eval_rect_supremum(f, fam.rects, threads);
}

MaxField eval_M_K_eps(const ScalarField& f, double eps, const EnumSpec& spec, int threads) {
    const RectFamily fam = build_eccentricity_family(eps, spec);
    if (fam.empty()) throw std::invalid_argument("eval_M_K_eps: empty family");
    return eval_rect_supremum(f, fam.rects, threads);
}

MaxField eval_M_kappa(const ScalarField& g, int kappa, int threads) {
    if (kappa < 8) throw std::invalid_argument("eval_M_kappa: kappa must be >= 8");
    MaxField out = MaxField::zeros_like(g);
    g.box_sum(0, 0, 0, 0);
    const double pitch = g.pitch();
    const Box sup = g.support();
    const double smax = std::max(sup.width(), sup.height());
    std::vector<Vec2> dirs(static_cast<size_t>(kappa));
    for (int i = 0; i < kappa; ++i) dirs[static_cast<size_t>(i)] = UnitVec::from_angle(kTwoPi * i / kappa).vec();

    parallel_chunks(out.ny, threads, [&](int64_t jb, int64_t je, int) {
        for (int64_t j = jb; j < je; ++j)
            for (int i = 0; i < out.nx; ++i) {
                const Vec2 x = out.cell_center(i, static_cast<int>(j));
                double best = 0.0;
                for (double s = pitch; s <= smax; s *= 2.0) {
                    best = std::max(best, g.box_mean({x.x - 0.5 * s, x.y - 0.5 * s},
                                                     {x.x + 0.5 * s, x.y + 0.5 * s}));
                    const int msamp = std::max(9, 2 * static_cast<int>(std::ceil(2.0 * s / pitch)) + 1);
                    for (const Vec2& w : dirs) {
                        double acc = 0.0;
                        for (int q = 0; q < msamp; ++q) {
                            const double sigma = -s + (q + 0.5) * (2.0 * s / msamp);
                            acc += g.sample({x.x + sigma * w.x, x.y + sigma * w.y});
                        }
                        best = std::max(best, acc / msamp);
                    }
                }
                out.values[out.idx(i, static_cast<int>(j))] = best;
            }
    });
    return out;
}

MaxField eval_M_v(const ScalarField& f, const VectorField& v, int threads) {
    MaxField out = MaxField::zeros_like(f);
    f.box_sum(0, 0, 0, 0);
    const double pitch = f.pitch();
    const Box sup = f.support();
    const double cap = std::min(v.length_cap(), sup.diag());
    parallel_chunks(out.ny, threads, [&](int64_t jb, int64_t je, int) {
        for (int64_t j = jb; j < je; ++j)
            for (int i = 0; i < out.nx; ++i) {
                const Vec2 x = out.cell_center(i, static_cast<int>(j));
                const Vec2 w = v.eval(x).vec();
                double best = 0.0;
                for (double t = 2.0 * pitch; t <= cap; t *= 2.0) {
                    const int msamp = std::max(9, 2 * static_cast<int>(std::ceil(2.0 * t / pitch)) + 1);
                    double acc = 0.0;
                    for (int q = 0; q < msamp; ++q) {
                        const double sigma = -t + (q + 0.5) * (2.0 * t / msamp);
                        acc += f.sample({x.x - sigma * w.x, x.y - sigma * w.y});
                    }
                    best = std::max(best, acc / msamp);
                }
                out.values[out.idx(i, static_cast<int>(j))] = best;
            }
    });
    return out;
}

}  // namespace kakeya

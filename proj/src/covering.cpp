#include "kakeya/covering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace kakeya {

CountGrid::CountGrid(const CoverGridSpec& spec) {
    if (spec.n < 8) throw std::invalid_argument("CountGrid: need at least 8 cells per side");
    pitch_ = spec.domain.short_side() / spec.n;
    if (!(pitch_ > 0.0)) throw std::invalid_argument("CountGrid: empty domain");
    origin_ = {spec.domain.x0, spec.domain.y0};
    nx_ = static_cast<int>(std::ceil(spec.domain.width() / pitch_ - 1e-9));
    ny_ = static_cast<int>(std::ceil(spec.domain.height() / pitch_ - 1e-9));
    counts_.assign(static_cast<size_t>(nx_) * ny_, 0);
}

void CountGrid::add_rect(const Rect& r) {
    const auto cs = r.corners();
    double x0 = cs[0].x, x1 = cs[0].x, y0 = cs[0].y, y1 = cs[0].y;
    for (int i = 1; i < 4; ++i) {
        x0 = std::min(x0, cs[i].x);
        x1 = std::max(x1, cs[i].x);
        y0 = std::min(y0, cs[i].y);
        y1 = std::max(y1, cs[i].y);
    }
    const int i0 = std::max(0, static_cast<int>(std::ceil((x0 - origin_.x) / pitch_ - 0.5)));
    const int i1 = std::min(nx_ - 1, static_cast<int>(std::floor((x1 - origin_.x) / pitch_ - 0.5)));
    const int j0 = std::max(0, static_cast<int>(std::ceil((y0 - origin_.y) / pitch_ - 0.5)));
    const int j1 = std::min(ny_ - 1, static_cast<int>(std::floor((y1 - origin_.y) / pitch_ - 0.5)));
    for (int j = j0; j <= j1; ++j)
        for (int i = i0; i <= i1; ++i) {
            const Vec2 c{origin_.x + (i + 0.5) * pitch_, origin_.y + (j + 0.5) * pitch_};
            if (contains_point(r, c)) ++counts_[idx(i, j)];
        }
}

bool CountGrid::cell_of(const Vec2& p, int& i, int& j) const {
    i = static_cast<int>(std::floor((p.x - origin_.x) / pitch_));
    j = static_cast<int>(std::floor((p.y - origin_.y) / pitch_));
    const bool inside = i >= 0 && i < nx_ && j >= 0 && j < ny_;
    i = std::min(std::max(i, 0), nx_ - 1);
    j = std::min(std::max(j, 0), ny_ - 1);
    return inside;
}

CountGrid::LineDir CountGrid::line_dir(int d, int kappa) {
    const double a = kTwoPi * d / kappa;
    const double c = std::cos(a), s = std::sin(a);
    LineDir ld;
    ld.x_major = std::fabs(c) >= std::fabs(s);
    ld.slope = ld.x_major ? s / c : c / s;
    ld.major_abs = ld.x_major ? std::fabs(c) : std::fabs(s);
    return ld;
}

void CountGrid::line_cell(const LineDir& ld, int i0, int j0, int q, int& i, int& j) {
    if (ld.x_major) {
        const long b = j0 - std::lround(ld.slope * i0);
        i = i0 + q;
        j = static_cast<int>(b + std::lround(ld.slope * i));
    } else {
        const long b = i0 - std::lround(ld.slope * j0);
        j = j0 + q;
        i = static_cast<int>(b + std::lround(ld.slope * j));
    }
}

MKappaCover::MKappaCover(const CoverGridSpec& spec, int kappa) : grid_(spec), kappa_(kappa) {
    if (kappa < 8) throw std::invalid_argument("MKappaCover: kappa must be >= 8");
    const double smax = std::max(spec.domain.width(), spec.domain.height());
    for (double s = grid_.pitch(); s <= smax * (1.0 + 1e-12); s *= 2.0) scales_.push_back(s);
}

void MKappaCover::add_selected(const Rect& kappa_dilated) {
    grid_.add_rect(kappa_dilated);
    if (!built_) return;
    rebuild_sat();
    update_lines(kappa_dilated);
}

void MKappaCover::rebuild_sat() const {
    const int nx = grid_.nx(), ny = grid_.ny();
    sat_.assign(static_cast<size_t>(nx + 1) * (ny + 1), 0);
    for (int j = 0; j < ny; ++j) {
        int64_t row = 0;
        for (int i = 0; i < nx; ++i) {
            row += grid_.count(i, j);
            sat_[static_cast<size_t>(j + 1) * (nx + 1) + (i + 1)] =
                sat_[static_cast<size_t>(j) * (nx + 1) + (i + 1)] + row;
        }
    }
}

void MKappaCover::rebuild_line(DirTable& t, int bi) const {
    const int nx = grid_.nx(), ny = grid_.ny();
    const int ml = t.major_len;
    const int minor_len = t.ld.x_major ? ny : nx;
    const long b = t.bmin + bi;
    int64_t run = 0;
    int64_t* row = &t.prefix[static_cast<size_t>(bi) * (ml + 1)];
    for (int q = 0; q < ml; ++q) {
        const long minor = b + std::lround(t.ld.slope * q);
        if (minor >= 0 && minor < minor_len)
            run += t.ld.x_major ? grid_.count(q, static_cast<int>(minor))
                                : grid_.count(static_cast<int>(minor), q);
        row[q + 1] = run;
    }
}

void MKappaCover::rebuild() const {
    const int nx = grid_.nx(), ny = grid_.ny();
    rebuild_sat();
    if (tables_.empty()) {
        tables_.resize(static_cast<size_t>(kappa_));
        for (int d = 0; d < kappa_; ++d) {
            DirTable& t = tables_[static_cast<size_t>(d)];
            t.ld = CountGrid::line_dir(d, kappa_);
            t.major_len = t.ld.x_major ? nx : ny;
            const int ml = t.major_len;
            const int minor_len = t.ld.x_major ? ny : nx;
            const long off_end = std::lround(t.ld.slope * (ml - 1));
            t.bmin = static_cast<int>(-std::max<long>(0, off_end));
            const int bmax = static_cast<int>((minor_len - 1) - std::min<long>(0, off_end));
            t.prefix.assign(static_cast<size_t>(bmax - t.bmin + 1) * (ml + 1), 0);
        }
    }
    for (auto& t : tables_) {
        const int nb = static_cast<int>(t.prefix.size() / (t.major_len + 1));
        for (int bi = 0; bi < nb; ++bi) rebuild_line(t, bi);
    }
    built_ = true;
}

void MKappaCover::update_lines(const Rect& r) const {
    const auto cs = r.corners();
    double x0 = cs[0].x, x1 = cs[0].x, y0 = cs[0].y, y1 = cs[0].y;
    for (int i = 1; i < 4; ++i) {
        x0 = std::min(x0, cs[i].x);
        x1 = std::max(x1, cs[i].x);
        y0 = std::min(y0, cs[i].y);
        y1 = std::max(y1, cs[i].y);
    }
    const double pitch = grid_.pitch();
    const Vec2 org = grid_.origin();
    const int i0 = std::max(0, static_cast<int>(std::floor((x0 - org.x) / pitch)));
    const int i1 = std::min(grid_.nx() - 1, static_cast<int>(std::floor((x1 - org.x) / pitch)));
    const int j0 = std::max(0, static_cast<int>(std::floor((y0 - org.y) / pitch)));
    const int j1 = std::min(grid_.ny() - 1, static_cast<int>(std::floor((y1 - org.y) / pitch)));
    if (i0 > i1 || j0 > j1) return;
    for (auto& t : tables_) {
        const int nb = static_cast<int>(t.prefix.size() / (t.major_len + 1));
        const int q0 = t.ld.x_major ? i0 : j0;
        const int q1 = t.ld.x_major ? i1 : j1;
        const int m0 = t.ld.x_major ? j0 : i0;
        const int m1 = t.ld.x_major ? j1 : i1;
        // touched line ids: b = minor - lround(slope*major); extremes at corners
        const long o0 = std::lround(t.ld.slope * q0);
        const long o1 = std::lround(t.ld.slope * q1);
        const long blo = m0 - std::max(o0, o1);
        const long bhi = m1 - std::min(o0, o1);
        const int bi0 = std::max(0, static_cast<int>(blo - t.bmin));
        const int bi1 = std::min(nb - 1, static_cast<int>(bhi - t.bmin));
        for (int bi = bi0; bi <= bi1; ++bi) rebuild_line(t, bi);
    }
}



bool MKappaCover::point_passes(const Vec2& p) const {
    if (!built_) rebuild();
    const int nx = grid_.nx(), ny = grid_.ny();
    const double pitch = grid_.pitch();
    const Vec2 org = grid_.origin();
    int ci, cj;
    grid_.cell_of(p, ci, cj);

    // square averages via the summed-area table
    for (double s : scales_) {
        const int i0 = std::max(0, static_cast<int>(std::ceil((p.x - 0.5 * s - org.x) / pitch - 0.5)));
        const int i1 = std::min(nx - 1, static_cast<int>(std::floor((p.x + 0.5 * s - org.x) / pitch - 0.5)));
        const int j0 = std::max(0, static_cast<int>(std::ceil((p.y - 0.5 * s - org.y) / pitch - 0.5)));
        const int j1 = std::min(ny - 1, static_cast<int>(std::floor((p.y + 0.5 * s - org.y) / pitch - 0.5)));
        if (i0 > i1 || j0 > j1) continue;
        const size_t w = static_cast<size_t>(nx) + 1;
        const int64_t sum = sat_[(j1 + 1) * w + (i1 + 1)] - sat_[static_cast<size_t>(j0) * w + (i1 + 1)] -
                            sat_[(j1 + 1) * w + i0] + sat_[static_cast<size_t>(j0) * w + i0];
        const int64_t cnt = static_cast<int64_t>(i1 - i0 + 1) * (j1 - j0 + 1);
        if (sum * kappa_ >= cnt) return true;
    }

    // directional segment averages on the digital-line tables
    for (const auto& t : tables_) {
        const int ml = t.major_len;
        const int qi = t.ld.x_major ? ci : cj;
        const int minor_i = t.ld.x_major ? cj : ci;
        const long b = minor_i - std::lround(t.ld.slope * qi);
        const int bi = static_cast<int>(b - t.bmin);
        const int nb = static_cast<int>(t.prefix.size() / (ml + 1));
        if (bi < 0 || bi >= nb) continue;
        const int64_t* row = &t.prefix[static_cast<size_t>(bi) * (ml + 1)];
        for (double s : scales_) {
            const int delta = static_cast<int>(std::floor(s * t.ld.major_abs / pitch));
            const int q0 = std::max(0, qi - delta);
            const int q1 = std::min(ml - 1, qi + delta);
            if (q0 > q1) continue;
            const int64_t sum = row[q1 + 1] - row[q0];
            const int64_t denom = 2 * static_cast<int64_t>(delta) + 1;
            if (sum * kappa_ >= denom) return true;
        }
    }
    return false;
}

namespace {

struct SelectKey {
    double len;
    double ex;
    int64_t id;
    // longest first, then smallest eccentricity arc, then smallest id
    bool better_than(const SelectKey& o) const {
        if (len != o.len) return len > o.len;
        if (ex != o.ex) return ex < o.ex;
        return id < o.id;
    }
};

}  // namespace

CoveringResult select_covering(const RectFamily& fam, int kappa, const CoverGridSpec& grid) {
    CoveringResult cr;
    const size_t n = fam.size();
    MKappaCover cover(grid, kappa);

    std::vector<SelectKey> keys(n);
    std::vector<bool> alive(n, true);
    std::vector<std::vector<uint16_t>> pending(n);
    for (size_t i = 0; i < n; ++i) {
        const Rect& r = fam.rects[i];
        keys[i] = {r.len, r.wid / r.len, r.id};
        pending[i].resize(kContainLatticeLen * kContainLatticeWid);
        for (size_t q = 0; q < pending[i].size(); ++q)
            pending[i][q] = static_cast<uint16_t>(q);
    }

    auto lattice_point = [](const Rect& r, uint16_t q) {
        const int a = q % kContainLatticeLen;
        const int b = q / kContainLatticeLen;
        const double u = ((a + 0.5) / kContainLatticeLen - 0.5) * r.len;
        const double w = ((b + 0.5) / kContainLatticeWid - 0.5) * r.wid;
        return r.center + r.dir.vec() * u + r.dir.perp().vec() * w;
    };

    size_t remaining = n;
    int64_t round = 0;
    while (remaining > 0) {
        int best = -1;
        for (size_t i = 0; i < n; ++i)
            if (alive[i] && (best < 0 || keys[i].better_than(keys[static_cast<size_t>(best)])))
                best = static_cast<int>(i);
        const Rect& picked = fam.rects[static_cast<size_t>(best)];
        cr.selected.push_back(picked.id);
        cr.log.push_back({SelectionLogEntry::Kind::Select, picked.id, round});
        alive[static_cast<size_t>(best)] = false;
        --remaining;
        cover.add_selected(dilate(picked, static_cast<double>(kappa)));

        for (size_t i = 0; i < n && remaining > 0; ++i) {
            if (!alive[i]) continue;
            auto& pend = pending[i];
            bool fully = true;
            size_t k = 0;
            while (k < pend.size()) {
                if (cover.point_passes(lattice_point(fam.rects[i], pend[k]))) {
                    pend[k] = pend.back();
                    pend.pop_back();
                } else {
                    // retest the sticking point first next round
                    std::swap(pend[0], pend[k]);
                    fully = false;
                    break;
                }
            }
            if (fully && pend.empty()) {
                alive[i] = false;
                --remaining;
                cr.discarded.push_back(fam.rects[i].id);
                cr.log.push_back({SelectionLogEntry::Kind::Discard, fam.rects[i].id, round});
            }
        }
        ++round;
    }
    cr.diagnostics["rounds"] = static_cast<double>(round);
    cr.diagnostics["selected"] = static_cast<double>(cr.selected.size());
    cr.diagnostics["discarded"] = static_cast<double>(cr.discarded.size());
    return cr;
}

void classify_pairs(CoveringResult& cr, const RectFamily& fam, double lip) {
    cr.pairs.clear();
    cr.absorbed.clear();
    cr.transverse.clear();
    int64_t order_violations = 0;
    int64_t arc_dist_violations = 0;
    for (size_t a = 0; a < cr.selected.size(); ++a) {
        const Rect* rho = fam.find(cr.selected[a]);
        for (size_t b = a + 1; b < cr.selected.size(); ++b) {
            const Rect* r = fam.find(cr.selected[b]);
            if (!rects_intersect(*rho, *r)) continue;
            cr.pairs.emplace_back(rho->id, r->id);
            if (rho->len < r->len * (1.0 - 1e-12)) ++order_violations;
            if (std::isfinite(lip)) {
                const double d = eccentricity_arc(*rho).dist_to(eccentricity_arc(*r));
                if (d > 2.0 * lip * rho->len * (1.0 + 1e-9)) ++arc_dist_violations;
            }
            if (eccentricity_arc(*r).dilated(10.0).contains_arc(eccentricity_arc(*rho)))
                cr.absorbed[r->id].push_back(rho->id);
            else
                cr.transverse[rho->id].push_back(r->id);
        }
    }
    cr.diagnostics["pairs"] = static_cast<double>(cr.pairs.size());
    cr.diagnostics["pair_order_violations"] = static_cast<double>(order_violations);
    cr.diagnostics["pair_arc_dist_violations"] = static_cast<double>(arc_dist_violations);
}

UDecomposition build_projection_groups(const Rect& rho, const std::vector<Rect>& transverse,
                                       const VectorField& v, const Sampler& s, double delta) {
    UDecomposition ud;
    ud.rho = rho;
    ud.segment = Segment{rho.center - rho.dir.perp().vec() * (0.5 * rho.wid), rho.dir, rho.len};
    ud.delta = delta;

    std::vector<int64_t> stock;
    for (const Rect& r : transverse) {
        if (r.len > rho.len * (1.0 + 1e-12))
            throw std::invalid_argument("build_projection_groups: member longer than host");
        if (!rects_intersect(r, rho))
            throw std::invalid_argument("build_projection_groups: member disjoint from host");
        ud.rect_of[r.id] = r;
        stock.push_back(r.id);

        double lo = 0.0, hi = 0.0;
        bool first = true;
        for (const Vec2& c : r.corners()) {
            const double t = ud.segment.coord_of(c);
            if (first) { lo = hi = t; first = false; }
            lo = std::min(lo, t);
            hi = std::max(hi, t);
        }
        ud.uproj[r.id] = Interval{lo, hi};
        const auto clipped = project_onto_segment(r, ud.segment);
        ud.proj[r.id] = clipped ? *clipped : Interval{0.0, 0.0};
        ud.vsets[r.id] = vset_projection(r, ud.segment, v, s);
    }
    std::sort(stock.begin(), stock.end());

    // projection-length and projected-density diagnostics
    int64_t span_violations = 0;
    double min_vratio = std::numeric_limits<double>::infinity();
    for (int64_t id : stock) {
        const Rect& r = ud.rect_of[id];
        const double span = ud.proj[id].length();
        if (span < r.len * 0.96 || span > 2.0 * r.len * (1.0 + 1e-9)) ++span_violations;
        if (!ud.vsets[id].empty())
            min_vratio = std::min(min_vratio, ud.vsets[id].total_length() / (delta * r.len));
    }
    ud.diagnostics["proj_span_violations"] = static_cast<double>(span_violations);
    ud.diagnostics["min_vset_over_delta_len"] = min_vratio;

    while (!stock.empty()) {
        size_t best = 0;
        for (size_t i = 1; i < stock.size(); ++i) {
            const Rect& a = ud.rect_of[stock[i]];
            const Rect& b = ud.rect_of[stock[best]];
            if (a.len > b.len || (a.len == b.len && a.id < b.id)) best = i;
        }
        const int64_t rep = stock[best];
        ud.reps.push_back(rep);
        ud.theta[rep] = angle_dist(rho.dir, ud.rect_of[rep].dir);

        std::vector<int64_t> group;
        if (ud.vsets[rep].empty()) {
            group.push_back(rep);
            ud.empty_projection.push_back(rep);
        } else {
            for (int64_t id : stock)
                if (ud.vsets[rep].overlaps(ud.vsets[id])) group.push_back(id);
        }
        std::sort(group.begin(), group.end());
        ud.members[rep] = group;
        std::vector<int64_t> next;
        for (int64_t id : stock)
            if (!std::binary_search(group.begin(), group.end(), id)) next.push_back(id);
        stock.swap(next);
    }
    return ud;
}

std::vector<std::vector<Interval>> dyadic_levels(const Interval& span, double min_len) {
    std::vector<std::vector<Interval>> levels;
    const double total = span.length();
    if (!(total > 0.0)) return levels;
    for (int l = 0;; ++l) {
        const double len = total / static_cast<double>(int64_t{1} << l);
        if (l > 0 && len < min_len) break;
        // dyadic lengths at half-overlapping positions: any subinterval has a
        // covering candidate at most twice its length, which the aligned-only
        // grid misses for mass straddling a cell boundary
        std::vector<Interval> row;
        const int64_t cnt = l == 0 ? 1 : (int64_t{2} << l) - 1;
        row.reserve(static_cast<size_t>(cnt));
        for (int64_t i = 0; i < cnt; ++i) {
            const double lo = span.lo + 0.5 * len * static_cast<double>(i);
            row.push_back({lo, lo + len});
        }
        levels.push_back(std::move(row));
        if (len / 2.0 < min_len) break;
    }
    return levels;
}

void build_heavy_intervals(UDecomposition& ud, int64_t rep_id) {
    RepDecomp out;
    const Segment& seg = ud.segment;
    const double wrho = ud.rho.wid;
    const Interval span = ud.proj.at(rep_id);
    const auto levels = dyadic_levels(span, ud.vset_pitch());

    std::vector<int64_t> stock = ud.members.at(rep_id);  // ascending
    std::vector<double> ub;

    auto scan = [&](Interval& out_iv) -> bool {
        for (const auto& level : levels) {
            const double len = level.front().length();
            const double thresh = 10.0 * len * wrho;
            ub.assign(level.size(), 0.0);
            for (int64_t id : stock) {
                const Rect& r = ud.rect_of.at(id);
                if (r.len < 8.0 * len) continue;
                const Interval& up = ud.uproj.at(id);
                const int64_t i0 = std::max<int64_t>(
                    0, static_cast<int64_t>(std::floor((up.lo - span.lo) / len)));
                const int64_t i1 = std::min<int64_t>(
                    static_cast<int64_t>(level.size()) - 1,
                    static_cast<int64_t>(std::floor((up.hi - span.lo) / len)));
                for (int64_t i = i0; i <= i1; ++i) {
                    const Interval& cand = level[static_cast<size_t>(i)];
                    const double ov = std::min(cand.hi, up.hi) - std::max(cand.lo, up.lo);
                    if (ov > 0.0) ub[static_cast<size_t>(i)] += ov * wrho;
                }
            }
            for (size_t i = 0; i < level.size(); ++i) {
                if (ub[i] < thresh) continue;
                const Rect window = slab_window(seg, level[i], wrho);
                double exact = 0.0;
                for (int64_t id : stock) {
                    const Rect& r = ud.rect_of.at(id);
                    if (r.len < 8.0 * len) continue;
                    exact += intersection_area(r, window);
                }
                if (exact >= thresh) {
                    out_iv = level[i];
                    return true;
                }
            }
        }
        return false;
    };

    Interval iv;
    while (scan(iv)) {
        HeavyInterval hi;
        hi.span = iv;
        const Rect window = slab_window(seg, iv, wrho);
        std::vector<int64_t> next;
        for (int64_t id : stock) {
            const Rect& r = ud.rect_of.at(id);
            if (r.len >= 8.0 * iv.length() && rects_intersect(r, window))
                hi.members.push_back(id);
            else
                next.push_back(id);
        }
        out.intervals.push_back(std::move(hi));
        stock.swap(next);
        if (stock.empty()) break;
    }
    out.residual = stock;
    ud.rep_decomp[rep_id] = std::move(out);
}

CoveringPipelineResult run_covering_pipeline(const RectFamily& fam, const VectorField& v,
                                             const Sampler& s, int kappa,
                                             const CoverGridSpec& grid) {
    CoveringPipelineResult out;
    out.covering = select_covering(fam, kappa, grid);
    classify_pairs(out.covering, fam, v.lip());
    for (int64_t rho_id : out.covering.selected) {
        auto it = out.covering.transverse.find(rho_id);
        if (it == out.covering.transverse.end() || it->second.empty()) continue;
        std::vector<Rect> members;
        for (int64_t id : it->second) members.push_back(*fam.find(id));
        const Rect rho = *fam.find(rho_id);
        UDecomposition ud = build_projection_groups(rho, members, v, s, fam.delta);
        for (int64_t rep : ud.reps) build_heavy_intervals(ud, rep);
        out.decomps.push_back(std::move(ud));
    }
    return out;
}

}  // namespace kakeya

#include "kakeya/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "kakeya/rng.hpp"

namespace kakeya {

namespace {

double safe_ratio(double measured, double reference) {
    if (reference > 0.0) return measured / reference;
    return measured > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
}

void bump(EstimateReport& rep, double measured, double reference) {
    rep.measured = std::max(rep.measured, measured);
    rep.ratio = std::max(rep.ratio, safe_ratio(measured, reference));
    ++rep.instances;
}

}  // namespace

EstimateReport check_direction_lemma(const UDecomposition& ud) {
    EstimateReport rep;
    rep.name = "direction_pinch";
    rep.bound = "angle(member, leader) <= angle(host, leader)/2 + slack";
    const double slack = 2.0 * ud.vset_pitch() / ud.rho.len;
    rep.slack = slack;
    for (int64_t leader : ud.reps) {
        const Rect& lead = ud.rect_of.at(leader);
        const double half_theta = 0.5 * ud.theta.at(leader);
        for (int64_t id : ud.members.at(leader)) {
            const double a = angle_dist(ud.rect_of.at(id).dir, lead.dir);
            bump(rep, a, half_theta + slack);
            if (a > half_theta + slack) ++rep.violations;
        }
    }
    return rep;
}

EstimateReport check_short_rect_exclusion(const UDecomposition& ud, int64_t rep_id) {
    EstimateReport rep;
    rep.name = "short_rect_exclusion";
    rep.bound = "no member shorter than |I| meets 4I x J when the unit-density hypothesis holds";
    const Segment& seg = ud.segment;
    const double wrho = ud.rho.wid;
    const auto& members = ud.members.at(rep_id);
    const auto levels = dyadic_levels(ud.proj.at(rep_id), ud.vset_pitch());
    for (const auto& level : levels) {
        const double len = level.front().length();
        const double thresh = len * wrho;  // unit-density hypothesis
        for (const Interval& cand : level) {
            // cheap upper bound first
            double ub = 0.0;
            for (int64_t id : members) {
                const Rect& r = ud.rect_of.at(id);
                if (r.len < 8.0 * len) continue;
                const Interval& up = ud.uproj.at(id);
                const double ov = std::min(cand.hi, up.hi) - std::max(cand.lo, up.lo);
                if (ov > 0.0) ub += ov * wrho;
            }
            if (ub < thresh) continue;
            const Rect window = slab_window(seg, cand, wrho);
            double mass = 0.0;
            for (int64_t id : members) {
                const Rect& r = ud.rect_of.at(id);
                if (r.len >= 8.0 * len) mass += intersection_area(r, window);
            }
            if (mass < thresh) continue;
            ++rep.instances;
            const Interval wide{cand.mid() - 2.0 * len, cand.mid() + 2.0 * len};
            const Rect wide_window = slab_window(seg, wide, wrho);
            for (int64_t id : members) {
                const Rect& r = ud.rect_of.at(id);
                if (r.len < len && rects_intersect(r, wide_window)) {
                    ++rep.violations;
                    rep.measured += 1.0;
                }
            }
        }
    }
    rep.ratio = rep.measured;  // violation count; 0 expected
    return rep;
}

EstimateReport check_stromberg_bound(const UDecomposition& ud, int64_t rep_id, int kappa) {
    EstimateReport rep;
    rep.name = "stromberg_band";
    rep.bound = "sum over the sqrt(kappa) length band of |R' ∩ I x J| <= 5 |I| W(rho)";
    const Segment& seg = ud.segment;
    const double wrho = ud.rho.wid;
    const double root_kappa = std::sqrt(static_cast<double>(kappa));
    const auto& members = ud.members.at(rep_id);
    const auto levels = dyadic_levels(ud.proj.at(rep_id), ud.vset_pitch());
    const double slack_abs = 2.0 * ud.vset_pitch() * wrho;
    for (const auto& level : levels) {
        const double len = level.front().length();
        std::vector<int64_t> band;
        for (int64_t id : members) {
            const double l = ud.rect_of.at(id).len;
            if (l <= len && len <= root_kappa * l) band.push_back(id);
        }
        if (band.empty()) continue;
        for (const Interval& cand : level) {
            double ub = 0.0;
            for (int64_t id : band) {
                const Interval& up = ud.uproj.at(id);
                const double ov = std::min(cand.hi, up.hi) - std::max(cand.lo, up.lo);
                if (ov > 0.0) ub += ov * wrho;
            }
            const double reference = 5.0 * len * wrho;
            if (ub < 0.2 * reference) continue;  // cannot approach the bound
            const Rect window = slab_window(seg, cand, wrho);
            double mass = 0.0;
            for (int64_t id : band) mass += intersection_area(ud.rect_of.at(id), window);
            bump(rep, mass, reference);
            rep.slack = std::max(rep.slack, slack_abs / reference);
            if (mass > reference + slack_abs) ++rep.violations;
        }
    }
    return rep;
}

namespace {

EstimateReport interval_triple_overlap(const UDecomposition& ud) {
    EstimateReport rep;
    rep.name = "interval_triple_overlap";
    rep.bound = "no interior point lies in three extracted intervals";
    for (const auto& [leader, dec] : ud.rep_decomp) {
        (void)leader;
        // sweep over half-open spans: endpoint touching is not overlap
        std::vector<std::pair<double, int>> events;
        for (const auto& hi : dec.intervals) {
            events.push_back({hi.span.lo, +1});
            events.push_back({hi.span.hi, -1});
        }
        std::sort(events.begin(), events.end(), [](const auto& a, const auto& b) {
            return a.first != b.first ? a.first < b.first : a.second < b.second;
        });
        int depth = 0, maxdepth = 0;
        for (const auto& [t, d] : events) {
            (void)t;
            depth += d;
            maxdepth = std::max(maxdepth, depth);
        }
        rep.measured = std::max(rep.measured, static_cast<double>(maxdepth));
        ++rep.instances;
        if (maxdepth >= 3) ++rep.violations;
    }
    rep.ratio = rep.measured / 2.0;
    return rep;
}

EstimateReport interval_length_gap(const UDecomposition& ud, int kappa) {
    EstimateReport rep;
    rep.name = "interval_length_gap";
    rep.bound = "doubled intervals that meet differ in length by more than sqrt(kappa)";
    const double root_kappa = std::sqrt(static_cast<double>(kappa));
    for (const auto& [leader, dec] : ud.rep_decomp) {
        (void)leader;
        const auto& iv = dec.intervals;
        for (size_t a = 0; a < iv.size(); ++a)
            for (size_t b = a + 1; b < iv.size(); ++b) {
                const Interval da{2.0 * iv[a].span.lo - iv[a].span.mid(),
                                  2.0 * iv[a].span.hi - iv[a].span.mid()};
                const Interval db{2.0 * iv[b].span.lo - iv[b].span.mid(),
                                  2.0 * iv[b].span.hi - iv[b].span.mid()};
                if (!da.intersects(db)) continue;
                ++rep.instances;
                const double la = iv[a].span.length(), lb = iv[b].span.length();
                const double lo = std::min(la, lb), hi = std::max(la, lb);
                rep.measured = std::max(rep.measured, safe_ratio(root_kappa * lo, hi));
                if (!(root_kappa * lo < hi)) ++rep.violations;
            }
    }
    rep.ratio = rep.measured;
    return rep;
}

}  // namespace

std::vector<EstimateReport> ud_reports(const UDecomposition& ud, int kappa) {
    std::vector<EstimateReport> out;
    EstimateReport group_overlap;
    group_overlap.name = "group_overlap";
    group_overlap.bound = "sum over group of |R' ∩ rho| vs L(leader) W(rho)";
    EstimateReport group_len;
    group_len.name = "group_length_sum";
    group_len.bound = "sum of leader lengths vs delta^-1 L(rho)";
    EstimateReport heavy;
    heavy.name = "heavy_interval_overlap";
    heavy.bound = "sum over V(I) of |R' ∩ rho| <= 20 |I| W(rho)";
    double len_sum = 0.0;
    for (int64_t leader : ud.reps) {
        const Rect& lead = ud.rect_of.at(leader);
        len_sum += lead.len;
        double sum = 0.0;
        for (int64_t id : ud.members.at(leader))
            sum += intersection_area(ud.rect_of.at(id), ud.rho);
        bump(group_overlap, sum, lead.len * ud.rho.wid);
        auto dit = ud.rep_decomp.find(leader);
        if (dit == ud.rep_decomp.end()) continue;
        for (const auto& hi : dit->second.intervals) {
            double vsum = 0.0;
            for (int64_t id : hi.members) vsum += intersection_area(ud.rect_of.at(id), ud.rho);
            const double reference = 20.0 * hi.span.length() * ud.rho.wid;
            bump(heavy, vsum, reference);
            if (vsum > reference * (1.0 + 1e-9)) ++heavy.violations;
        }
    }
    bump(group_len, len_sum, ud.rho.len / ud.delta);
    out.push_back(group_overlap);
    out.push_back(group_len);
    out.push_back(heavy);
    out.push_back(interval_triple_overlap(ud));
    out.push_back(interval_length_gap(ud, kappa));
    merge_reports(out, {check_direction_lemma(ud)});
    for (int64_t leader : ud.reps) {
        merge_reports(out, {check_short_rect_exclusion(ud, leader)});
        merge_reports(out, {check_stromberg_bound(ud, leader, kappa)});
    }
    return out;
}

std::vector<EstimateReport> verify_estimates(const CoveringPipelineResult& pr,
                                             const RectFamily& fam, int kappa,
                                             const CoverGridSpec& grid,
                                             bool check_selection_consistency) {
    std::vector<EstimateReport> out;
    const CoveringResult& cr = pr.covering;
    const double delta = fam.delta;

    {
        EstimateReport rep;
        rep.name = "absorbed_overlap";
        rep.bound = "sum over absorbed predecessors of |R ∩ rho| <= |R|";
        for (int64_t rid : cr.selected) {
            const Rect& r = *fam.find(rid);
            auto it = cr.absorbed.find(rid);
            double sum = 0.0;
            if (it != cr.absorbed.end())
                for (int64_t pid : it->second) sum += intersection_area(r, *fam.find(pid));
            bump(rep, sum, r.area());
            if (sum > r.area() * (1.0 + 1e-9)) ++rep.violations;
        }
        out.push_back(rep);
    }
    {
        EstimateReport rep;
        rep.name = "transverse_overlap";
        rep.bound = "sum over transverse successors of |R ∩ rho| vs delta^-1 |rho|";
        for (const auto& [rho_id, ids] : cr.transverse) {
            const Rect& rho = *fam.find(rho_id);
            double sum = 0.0;
            for (int64_t id : ids) sum += intersection_area(rho, *fam.find(id));
            bump(rep, sum, rho.area() / delta);
        }
        out.push_back(rep);
    }
    for (const auto& ud : pr.decomps) merge_reports(out, ud_reports(ud, kappa));
    {
        // ||sum 1_R||_1 and ||sum 1_R||_2^2 have exact expressions in areas
        // and pairwise intersection areas; the discarded union is measured by
        // layered sampling (new mass of each rectangle against its
        // predecessors), which stays accurate at any rectangle scale.
        double n1 = 0.0, n2 = 0.0;
        std::vector<const Rect*> sel;
        for (int64_t id : cr.selected) sel.push_back(fam.find(id));
        for (const Rect* r : sel) {
            n1 += r->area();
            n2 += r->area();
        }
        for (size_t a = 0; a < sel.size(); ++a)
            for (size_t b = a + 1; b < sel.size(); ++b) {
                if (!rects_intersect(*sel[a], *sel[b])) continue;
                n2 += 2.0 * intersection_area(*sel[a], *sel[b]);
            }
        EstimateReport l2;
        l2.name = "l2_vs_l1";
        l2.bound = "||sum 1_R||_2^2 vs delta^-1 ||sum 1_R||_1";
        bump(l2, n2, n1 / delta);
        out.push_back(l2);

        std::vector<const Rect*> dis;
        for (int64_t id : cr.discarded) dis.push_back(fam.find(id));
        std::sort(dis.begin(), dis.end(),
                  [](const Rect* a, const Rect* b) { return a->id < b->id; });
        double union_area = 0.0;
        constexpr int kUnionSamples = 128;
        for (size_t i = 0; i < dis.size(); ++i) {
            std::vector<const Rect*> earlier;
            for (size_t j = 0; j < i; ++j)
                if (rects_intersect(*dis[i], *dis[j])) earlier.push_back(dis[j]);
            Quasi2d q(mix_key(0x756e696fULL, static_cast<uint64_t>(dis[i]->id)));
            const Vec2 e = dis[i]->dir.vec();
            const Vec2 p = dis[i]->dir.perp().vec();
            int fresh = 0;
            for (int m = 0; m < kUnionSamples; ++m) {
                double u, w;
                q.next(u, w);
                const Vec2 x = dis[i]->center + e * ((u - 0.5) * dis[i]->len) +
                               p * ((w - 0.5) * dis[i]->wid);
                bool seen = false;
                for (const Rect* er : earlier)
                    if (contains_point(*er, x)) {
                        seen = true;
                        break;
                    }
                if (!seen) ++fresh;
            }
            union_area += dis[i]->area() * fresh / kUnionSamples;
        }
        EstimateReport un;
        un.name = "discard_union";
        un.bound = "|union of discarded| vs ||sum of selected indicators||_1";
        bump(un, union_area, n1);
        out.push_back(un);
    }
    if (check_selection_consistency) {
        EstimateReport rep;
        rep.name = "selection_consistency";
        rep.bound = "no selected rect is fully covered by its absorbed predecessors alone";
        for (int64_t rid : cr.selected) {
            auto it = cr.absorbed.find(rid);
            if (it == cr.absorbed.end() || it->second.empty()) continue;
            MKappaCover cover(grid, kappa);
            for (int64_t pid : it->second)
                cover.add_selected(dilate(*fam.find(pid), static_cast<double>(kappa)));
            ++rep.instances;
            if (all_lattice_points(*fam.find(rid),
                                   [&](const Vec2& p) { return cover.point_passes(p); }))
                ++rep.violations;
        }
        rep.measured = static_cast<double>(rep.violations);
        rep.ratio = rep.measured;
        out.push_back(rep);
    }
    return out;
}

void merge_reports(std::vector<EstimateReport>& into, const std::vector<EstimateReport>& from) {
    for (const auto& f : from) {
        auto it = std::find_if(into.begin(), into.end(),
                               [&](const EstimateReport& r) { return r.name == f.name; });
        if (it == into.end()) {
            into.push_back(f);
            continue;
        }
        it->measured = std::max(it->measured, f.measured);
        it->ratio = std::max(it->ratio, f.ratio);
        it->instances += f.instances;
        it->violations += f.violations;
        it->slack = std::max(it->slack, f.slack);
    }
}

std::vector<EstimateReport> run_all_checks(const CoveringPipelineResult& pr,
                                           const RectFamily& fam, int kappa,
                                           const CoverGridSpec& grid,
                                           bool check_selection_consistency) {
    // verify_estimates already folds in the per-decomposition reports
    return verify_estimates(pr, fam, kappa, grid, check_selection_consistency);
}

}  // namespace kakeya

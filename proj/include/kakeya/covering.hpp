#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "kakeya/maximal.hpp"
#include "kakeya/vector_field.hpp"

namespace kakeya {

// ---------------------------------------------------------------------------
// Discrete auxiliary maximal function on a counting grid.
//
// The greedy selection below needs the superlevel test
//     M_kappa( sum_selected 1_{kappa R} ) >= 1/kappa
// at arbitrary plane points, thousands of times, with decisions that are
// exactly reproducible. Everything is therefore defined on integers:
//   * counts: cell c holds #{selected R : center(c) in kappa R};
//   * square averages: counts summed over the cells whose centers lie in the
//     closed axis box [p +- s/2], divided by the cell count;
//   * segment averages: counts summed along the digital line through p's
//     cell in direction omega_d = 2 pi d / kappa, over the 2*delta+1 cells
//     within arclength s, delta = floor(s * major(omega) / pitch);
//   * scales s: pitch * 2^t up to the larger domain side;
//   * the threshold test avg >= 1/kappa is the integer comparison
//     kappa * sum >= #cells.
// Sums of cell counts are exact in int64, so accelerated bookkeeping
// (prefix tables, sticky pass flags, early exits) cannot change any
// decision relative to a direct evaluation of the same definition.
// ---------------------------------------------------------------------------

struct CoverGridSpec {
    Box domain;
    int n = 128;  // cells along the shorter side
};

class CountGrid {
public:
    CountGrid(const CoverGridSpec& spec);

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double pitch() const { return pitch_; }
    const Vec2& origin() const { return origin_; }

    void add_rect(const Rect& r);  // +1 on cells whose centers lie in r
    int32_t count(int i, int j) const { return counts_[idx(i, j)]; }
    bool cell_of(const Vec2& p, int& i, int& j) const;

    // digital line geometry for direction d (angle 2 pi d / kappa)
    struct LineDir {
        bool x_major = true;
        double slope = 0.0;   // minor-per-major cell step
        double major_abs = 0.0;  // |major component| of the unit vector
    };
    static LineDir line_dir(int d, int kappa);
    // cell on the digital line through (i0,j0) at major-step offset q
    static void line_cell(const LineDir& ld, int i0, int j0, int q, int& i, int& j);

private:
    size_t idx(int i, int j) const { return static_cast<size_t>(j) * nx_ + i; }
    Vec2 origin_;
    double pitch_;
    int nx_, ny_;
    std::vector<int32_t> counts_;
};

// Fast evaluator for the superlevel test, with per-direction prefix tables
// rebuilt after each selection.
class MKappaCover {
public:
    MKappaCover(const CoverGridSpec& spec, int kappa);

    void add_selected(const Rect& kappa_dilated);
    // closed test: max over scales/directions of avg >= 1/kappa
    bool point_passes(const Vec2& p) const;

    const CountGrid& grid() const { return grid_; }
    int kappa() const { return kappa_; }
    const std::vector<double>& scales() const { return scales_; }

private:
    struct DirTable {
        CountGrid::LineDir ld;
        int bmin = 0;
        std::vector<int64_t> prefix;  // lines * (major_len + 1)
        int major_len = 0;
    };
    void rebuild() const;
    void rebuild_sat() const;
    void rebuild_line(DirTable& t, int bi) const;
    void update_lines(const Rect& r) const;

    CountGrid grid_;
    int kappa_;
    std::vector<double> scales_;
    mutable bool built_ = false;
    mutable std::vector<int64_t> sat_;  // (nx+1)*(ny+1)
    mutable std::vector<DirTable> tables_;
};

// Lattice fixed by design: 64 points along the length, 8 across the width.
constexpr int kContainLatticeLen = 64;
constexpr int kContainLatticeWid = 8;

template <class F>
bool all_lattice_points(const Rect& r, F&& pass) {
    const Vec2 e = r.dir.vec();
    const Vec2 p = r.dir.perp().vec();
    for (int b = 0; b < kContainLatticeWid; ++b)
        for (int a = 0; a < kContainLatticeLen; ++a) {
            const double u = ((a + 0.5) / kContainLatticeLen - 0.5) * r.len;
            const double w = ((b + 0.5) / kContainLatticeWid - 0.5) * r.wid;
            if (!pass(r.center + e * u + p * w)) return false;
        }
    return true;
}

// ---------------------------------------------------------------------------
// Greedy covering selection and the derived structures.
// ---------------------------------------------------------------------------

struct SelectionLogEntry {
    enum class Kind { Select, Discard } kind = Kind::Select;
    int64_t id = -1;
    int64_t round = -1;  // index of the selection that triggered a discard
};

struct CoveringResult {
    std::vector<int64_t> selected;   // selection order
    std::vector<int64_t> discarded;  // removal order
    std::vector<SelectionLogEntry> log;

    // pair classification (filled by classify_pairs)
    std::vector<std::pair<int64_t, int64_t>> pairs;        // (earlier, later)
    std::map<int64_t, std::vector<int64_t>> absorbed;      // R -> earlier rects whose
                                                           // arc fits in 10x EX(R)
    std::map<int64_t, std::vector<int64_t>> transverse;    // rho -> later rects, rest
    std::map<std::string, double> diagnostics;
};

// While candidates remain: select the longest (ties: smallest eccentricity
// arc, then smallest id), then drop every remaining rectangle whose full
// containment lattice passes the superlevel test against the selected
// kappa-dilates.
CoveringResult select_covering(const RectFamily& fam, int kappa, const CoverGridSpec& grid);

// All intersecting (earlier, later) selected pairs, split by whether the
// earlier rectangle's eccentricity arc fits inside the tenfold dilate of the
// later one's. lip (when finite) feeds the arc-distance diagnostic.
void classify_pairs(CoveringResult& cr, const RectFamily& fam, double lip);

// ---------------------------------------------------------------------------
// Projection grouping over a host rectangle and the interval decomposition.
// ---------------------------------------------------------------------------

struct HeavyInterval {
    Interval span;                   // in host-segment coordinates
    std::vector<int64_t> members;    // ascending id
};

struct RepDecomp {
    std::vector<HeavyInterval> intervals;  // selection order
    std::vector<int64_t> residual;         // ascending id
};

struct UDecomposition {
    Rect rho;
    Segment segment;  // doubled long edge of rho, at the width-interval end
    double delta = 0.0;

    std::vector<int64_t> reps;                        // selection order
    std::map<int64_t, std::vector<int64_t>> members;  // rep -> group
    std::map<int64_t, VSet> vsets;
    std::map<int64_t, Interval> proj;    // clipped corner projection
    std::map<int64_t, Interval> uproj;   // unclipped corner span
    std::map<int64_t, double> theta;     // rep -> angle to rho
    std::map<int64_t, RepDecomp> rep_decomp;
    std::map<int64_t, Rect> rect_of;
    std::vector<int64_t> empty_projection;  // flagged singleton groups
    std::map<std::string, double> diagnostics;

    double vset_pitch() const { return segment.halfwidth / kVsetCellsPerHalfwidth; }
};

// Groups the transverse rectangles of one host by overlap of their projected
// aligned sets: repeatedly take the longest remaining rectangle and absorb
// everything whose projection cells meet its own.
UDecomposition build_projection_groups(const Rect& rho, const std::vector<Rect>& transverse,
                                       const VectorField& v, const Sampler& s, double delta);

// Interval decomposition for one group: while some dyadic subinterval I of
// the leader's projection carries at least 10 |I| W(rho) of overlap area from
// stock rectangles of length >= 8|I|, extract the longest such I (leftmost on
// ties) together with the rectangles meeting its slab window.
void build_heavy_intervals(UDecomposition& ud, int64_t rep_id);

// Full pipeline over one family (select, classify, group, decompose).
struct CoveringPipelineResult {
    CoveringResult covering;
    std::vector<UDecomposition> decomps;  // one per host with transverse rects
};
CoveringPipelineResult run_covering_pipeline(const RectFamily& fam, const VectorField& v,
                                             const Sampler& s, int kappa,
                                             const CoverGridSpec& grid);

// Candidate dyadic subintervals of span, coarse to fine, finest >= min_len.
std::vector<std::vector<Interval>> dyadic_levels(const Interval& span, double min_len);

}  // namespace kakeya

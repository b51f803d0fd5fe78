#pragma once

#include <string>
#include <vector>

#include "kakeya/covering.hpp"

namespace kakeya {

// One verified estimate: the worst measured quantity, its reference bound,
// and the worst measured/reference ratio. Empirical estimates (the ones the
// theory states only up to an absolute constant) report their ratio without
// a violation count; explicit-constant bounds also count violations beyond
// the declared slack.
struct EstimateReport {
    std::string name;
    double measured = 0.0;  // worst raw quantity observed
    std::string bound;      // reference the ratio is taken against
    double ratio = 0.0;     // worst measured / reference
    int64_t instances = 0;  // how many cases contributed
    int64_t violations = 0; // count beyond bound + slack (explicit bounds only)
    double slack = 0.0;     // declared relative slack, when applicable
};

// Angle pinch within projection groups: every member's direction stays
// within half the host angle of its leader, up to coarsening slack.
EstimateReport check_direction_lemma(const UDecomposition& ud);

// Where long rectangles fill a slab window at unit density, no shorter
// rectangle may meet the fourfold window.
EstimateReport check_short_rect_exclusion(const UDecomposition& ud, int64_t rep_id);

// Band-limited slab traces: rectangles within a sqrt(kappa) length window of
// an interval contribute at most 5 |I| W(rho) of overlap area.
EstimateReport check_stromberg_bound(const UDecomposition& ud, int64_t rep_id, int kappa);

// Estimates local to one projection-group decomposition: group overlap
// sums, group length sums, the extracted-interval overlap bound (explicit
// constant 20), interval combinatorics, and the three lemma checks.
std::vector<EstimateReport> ud_reports(const UDecomposition& ud, int kappa);

// Core overlap/counting estimates over one pipeline output. When
// check_selection_consistency is set, additionally replays the superlevel
// test of each selected rectangle against its absorbed predecessors
// (expensive; intended for small families).
std::vector<EstimateReport> verify_estimates(const CoveringPipelineResult& pr,
                                             const RectFamily& fam, int kappa,
                                             const CoverGridSpec& grid,
                                             bool check_selection_consistency = false);

// verify_estimates plus the three lemma checks aggregated across all
// decompositions and leaders.
std::vector<EstimateReport> run_all_checks(const CoveringPipelineResult& pr,
                                           const RectFamily& fam, int kappa,
                                           const CoverGridSpec& grid,
                                           bool check_selection_consistency = false);

// Merge per-instance reports name-by-name (max of measured/ratio, sums of
// instances/violations, max slack).
void merge_reports(std::vector<EstimateReport>& into, const std::vector<EstimateReport>& from);

}  // namespace kakeya

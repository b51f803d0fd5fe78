#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kakeya/geometry.hpp"

namespace kakeya {

// Nonnegative function sampled at cell centers of a uniform grid:
// value(i, j) lives at origin + ((i+0.5) pitch, (j+0.5) pitch).
// Prefix sums support O(1) axis-aligned box sums of cell values.
class ScalarField {
public:
    ScalarField() = default;
    ScalarField(int nx, int ny, double pitch, Vec2 origin = {0.0, 0.0});

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double pitch() const { return pitch_; }
    const Vec2& origin() const { return origin_; }

    double at(int i, int j) const { return values_[idx(i, j)]; }
    void set(int i, int j, double v);
    const std::vector<double>& values() const { return values_; }

    Vec2 cell_center(int i, int j) const {
        return {origin_.x + (i + 0.5) * pitch_, origin_.y + (j + 0.5) * pitch_};
    }
    Box support() const {
        return {origin_.x, origin_.y, origin_.x + nx_ * pitch_, origin_.y + ny_ * pitch_};
    }

    // Bilinear interpolation between cell centers, clamped at the edge
    // cells; exactly 0 outside the support box.
    double sample(const Vec2& p) const;

    // Sum of cell values over cell indices [i0, i1] x [j0, j1] (clamped).
    double box_sum(int i0, int j0, int i1, int j1) const;
    // Mean of cell values whose centers lie in the closed axis box.
    double box_mean(const Vec2& lo, const Vec2& hi) const;

    double norm_l1() const;
    double norm_l2_sq() const;
    double max_value() const;

    void save_binary(const std::string& path) const;
    // 16-byte header (uint32 nx, uint32 ny, float64 pitch, little-endian),
    // then ny*nx row-major float64. Origin is fixed at (0,0).
    static ScalarField load_binary(const std::string& path);
    // rows of comma-separated values, row j first; pitch supplied by caller
    static ScalarField load_csv(const std::string& path, double pitch);

private:
    size_t idx(int i, int j) const { return static_cast<size_t>(j) * nx_ + i; }
    void rebuild_prefix() const;

    int nx_ = 0, ny_ = 0;
    double pitch_ = 1.0;
    Vec2 origin_{0.0, 0.0};
    std::vector<double> values_;
    // lazily rebuilt after writes; call box_sum once before sharing
    // the field across workers
    mutable std::vector<double> prefix_;  // (nx+1)*(ny+1)
    mutable bool prefix_dirty_ = true;
};

// L2-normalized disc indicator centered at `center` with radius in plane
// units; cells are 1 inside the disc before normalization.
ScalarField make_disc_probe(int n, double pitch, Vec2 center, double radius);

}  // namespace kakeya

#include "kakeya/scalar_field.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace kakeya {

ScalarField::ScalarField(int nx, int ny, double pitch, Vec2 origin)
    : nx_(nx), ny_(ny), pitch_(pitch), origin_(origin) {
    if (nx <= 0 || ny <= 0 || !(pitch > 0.0))
        throw std::invalid_argument("ScalarField: bad grid dimensions");
    values_.assign(static_cast<size_t>(nx) * ny, 0.0);
}

void ScalarField::set(int i, int j, double v) {
    if (v < 0.0) throw std::invalid_argument("ScalarField: values must be nonnegative");
    values_[idx(i, j)] = v;
    prefix_dirty_ = true;
}

double ScalarField::sample(const Vec2& p) const {
    const Box sup = support();
    if (!sup.contains(p)) return 0.0;
    // coordinates in cell-center units
    const double u = (p.x - origin_.x) / pitch_ - 0.5;
    const double v = (p.y - origin_.y) / pitch_ - 0.5;
    const double uc = std::min(std::max(u, 0.0), static_cast<double>(nx_ - 1));
    const double vc = std::min(std::max(v, 0.0), static_cast<double>(ny_ - 1));
    const int i0 = std::min(static_cast<int>(uc), nx_ - 2 >= 0 ? nx_ - 2 : 0);
    const int j0 = std::min(static_cast<int>(vc), ny_ - 2 >= 0 ? ny_ - 2 : 0);
    const int i1 = std::min(i0 + 1, nx_ - 1);
    const int j1 = std::min(j0 + 1, ny_ - 1);
    const double fu = uc - i0;
    const double fv = vc - j0;
    // lerp form: exact when the four cell values coincide
    const double a = at(i0, j0) + fu * (at(i1, j0) - at(i0, j0));
    const double b = at(i0, j1) + fu * (at(i1, j1) - at(i0, j1));
    return a + fv * (b - a);
}

void ScalarField::rebuild_prefix() const {
    prefix_.assign(static_cast<size_t>(nx_ + 1) * (ny_ + 1), 0.0);
    for (int j = 0; j < ny_; ++j) {
        double row = 0.0;
        for (int i = 0; i < nx_; ++i) {
            row += values_[idx(i, j)];
            prefix_[static_cast<size_t>(j + 1) * (nx_ + 1) + (i + 1)] =
                prefix_[static_cast<size_t>(j) * (nx_ + 1) + (i + 1)] + row;
        }
    }
    prefix_dirty_ = false;
}

double ScalarField::box_sum(int i0, int j0, int i1, int j1) const {
    if (prefix_dirty_) rebuild_prefix();
    i0 = std::max(i0, 0);
    j0 = std::max(j0, 0);
    i1 = std::min(i1, nx_ - 1);
    j1 = std::min(j1, ny_ - 1);
    if (i0 > i1 || j0 > j1) return 0.0;
    const size_t w = nx_ + 1;
    return prefix_[(j1 + 1) * w + (i1 + 1)] - prefix_[(j0)*w + (i1 + 1)] -
           prefix_[(j1 + 1) * w + (i0)] + prefix_[(j0)*w + (i0)];
}

double ScalarField::box_mean(const Vec2& lo, const Vec2& hi) const {
    // cells whose centers lie in the closed box
    const int i0 = static_cast<int>(std::ceil((lo.x - origin_.x) / pitch_ - 0.5));
    const int j0 = static_cast<int>(std::ceil((lo.y - origin_.y) / pitch_ - 0.5));
    const int i1 = static_cast<int>(std::floor((hi.x - origin_.x) / pitch_ - 0.5));
    const int j1 = static_cast<int>(std::floor((hi.y - origin_.y) / pitch_ - 0.5));
    const int ci0 = std::max(i0, 0), cj0 = std::max(j0, 0);
    const int ci1 = std::min(i1, nx_ - 1), cj1 = std::min(j1, ny_ - 1);
    if (ci0 > ci1 || cj0 > cj1) return 0.0;
    const double n = static_cast<double>(ci1 - ci0 + 1) * (cj1 - cj0 + 1);
    return box_sum(ci0, cj0, ci1, cj1) / n;
}

double ScalarField::norm_l1() const {
    double s = 0.0;
    for (double v : values_) s += v;
    return s * pitch_ * pitch_;
}

double ScalarField::norm_l2_sq() const {
    double s = 0.0;
    for (double v : values_) s += v * v;
    return s * pitch_ * pitch_;
}

double ScalarField::max_value() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, v);
    return m;
}

void ScalarField::save_binary(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    const uint32_t nx = static_cast<uint32_t>(nx_), ny = static_cast<uint32_t>(ny_);
    f.write(reinterpret_cast<const char*>(&nx), 4);
    f.write(reinterpret_cast<const char*>(&ny), 4);
    f.write(reinterpret_cast<const char*>(&pitch_), 8);
    f.write(reinterpret_cast<const char*>(values_.data()),
            static_cast<std::streamsize>(values_.size() * sizeof(double)));
    if (!f) throw std::runtime_error("write failed: " + path);
}

ScalarField ScalarField::load_binary(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open: " + path);
    uint32_t nx = 0, ny = 0;
    double pitch = 0.0;
    f.read(reinterpret_cast<char*>(&nx), 4);
    f.read(reinterpret_cast<char*>(&ny), 4);
    f.read(reinterpret_cast<char*>(&pitch), 8);
    if (!f || nx == 0 || ny == 0 || !(pitch > 0.0))
        throw std::runtime_error("bad grid file header: " + path);
    ScalarField out(static_cast<int>(nx), static_cast<int>(ny), pitch);
    f.read(reinterpret_cast<char*>(out.values_.data()),
           static_cast<std::streamsize>(out.values_.size() * sizeof(double)));
    if (!f) throw std::runtime_error("truncated grid file: " + path);
    for (double v : out.values_)
        if (!(v >= 0.0)) throw std::runtime_error("grid file has negative or NaN values");
    return out;
}

ScalarField ScalarField::load_csv(const std::string& path, double pitch) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open: " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (!rows.empty() && row.size() != rows.front().size())
            throw std::runtime_error("ragged CSV: " + path);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error("empty CSV: " + path);
    ScalarField out(static_cast<int>(rows.front().size()), static_cast<int>(rows.size()), pitch);
    for (int j = 0; j < out.ny(); ++j)
        for (int i = 0; i < out.nx(); ++i) out.set(i, j, rows[j][i]);
    return out;
}

ScalarField make_disc_probe(int n, double pitch, Vec2 center, double radius) {
    ScalarField f(n, n, pitch);
    const double r2 = radius * radius;
    int inside = 0;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const Vec2 c = f.cell_center(i, j);
            const Vec2 d = c - center;
            if (d.x * d.x + d.y * d.y <= r2) {
                f.set(i, j, 1.0);
                ++inside;
            }
        }
    if (inside == 0) throw std::invalid_argument("make_disc_probe: disc misses every cell");
    const double norm = std::sqrt(static_cast<double>(inside)) * pitch;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            if (f.at(i, j) > 0.0) f.set(i, j, 1.0 / norm);
    return f;
}

}  // namespace kakeya

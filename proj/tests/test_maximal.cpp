#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "kakeya/maximal.hpp"
#include "kakeya/rng.hpp"
#include "oracles.hpp"

using namespace kakeya;

namespace {

ScalarField ones(int n, double pitch) {
    ScalarField f(n, n, pitch);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) f.set(i, j, 1.0);
    return f;
}

ScalarField disc_indicator(int n, double pitch, Vec2 c, double r) {
    ScalarField f(n, n, pitch);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const Vec2 d = f.cell_center(i, j) - c;
            if (d.x * d.x + d.y * d.y <= r * r) f.set(i, j, 1.0);
        }
    return f;
}

}  // namespace

TEST_CASE("scalar field basics and prefix sums") {
    ScalarField f(8, 6, 0.25);
    CHECK_THROWS_AS(f.set(0, 0, -1.0), std::invalid_argument);
    Rng rng(3);
    for (int j = 0; j < 6; ++j)
        for (int i = 0; i < 8; ++i) f.set(i, j, rng.uniform(0, 2));
    // box sums agree with direct summation
    for (int t = 0; t < 50; ++t) {
        int i0 = static_cast<int>(rng.index(8)), i1 = static_cast<int>(rng.index(8));
        int j0 = static_cast<int>(rng.index(6)), j1 = static_cast<int>(rng.index(6));
        if (i0 > i1) std::swap(i0, i1);
        if (j0 > j1) std::swap(j0, j1);
        double direct = 0;
        for (int j = j0; j <= j1; ++j)
            for (int i = i0; i <= i1; ++i) direct += f.at(i, j);
        CHECK(f.box_sum(i0, j0, i1, j1) == doctest::Approx(direct).epsilon(1e-12));
    }
    // norms
    double l1 = 0, l2 = 0;
    for (int j = 0; j < 6; ++j)
        for (int i = 0; i < 8; ++i) {
            l1 += f.at(i, j);
            l2 += f.at(i, j) * f.at(i, j);
        }
    CHECK(f.norm_l1() == doctest::Approx(l1 * 0.0625));
    CHECK(f.norm_l2_sq() == doctest::Approx(l2 * 0.0625));
}

TEST_CASE("scalar field binary round-trip is bitwise") {
    ScalarField f(17, 9, 0.125);
    Rng rng(11);
    for (int j = 0; j < 9; ++j)
        for (int i = 0; i < 17; ++i) f.set(i, j, rng.u01());
    const std::string path = (std::filesystem::temp_directory_path() / "kg_test.bin").string();
    f.save_binary(path);
    const ScalarField g = ScalarField::load_binary(path);
    CHECK(g.nx() == 17);
    CHECK(g.ny() == 9);
    CHECK(g.pitch() == 0.125);
    CHECK(g.values() == f.values());
    std::filesystem::remove(path);
}

TEST_CASE("scalar field CSV import") {
    const std::string path = (std::filesystem::temp_directory_path() / "kg_test.csv").string();
    {
        std::FILE* fp = std::fopen(path.c_str(), "w");
        std::fputs("0,1,2\n3,4,5\n", fp);
        std::fclose(fp);
    }
    const ScalarField f = ScalarField::load_csv(path, 0.5);
    CHECK(f.nx() == 3);
    CHECK(f.ny() == 2);
    CHECK(f.at(2, 0) == 2.0);
    CHECK(f.at(0, 1) == 3.0);
    std::filesystem::remove(path);
}

TEST_CASE("rect average") {
    const ScalarField f = ones(32, 1.0 / 32);
    // constant function: exact
    const Rect r({0.5, 0.5}, UnitVec::from_angle(0.7), 0.3, 0.04, 1);
    CHECK(rect_average(f, r) == 1.0);

    // fully covered by the support, value 1 everywhere around it
    const Rect r2({0.4, 0.6}, UnitVec::from_angle(2.1), 0.25, 0.1, 2);
    CHECK(rect_average(f, r2) == 1.0);

    // disc partially covering the rectangle, against dense sampling
    const ScalarField d = disc_indicator(64, 1.0 / 64, {0.5, 0.5}, 0.18);
    const Rect r3({0.6, 0.5}, UnitVec::from_angle(0.3), 0.4, 0.12, 3);
    const double mc = oracles::mc_rect_average(d, r3, 1'000'000, 17);
    CHECK(rect_average(d, r3) == doctest::Approx(mc).epsilon(0.01));
}

TEST_CASE("family enumeration: constant field admits exactly the aligned directions") {
    const Box dom{0, 0, 1, 1};
    const VectorField v = VectorField::constant(0.9, dom);
    EnumSpec spec;
    spec.domain = dom;
    spec.max_len = 0.1;
    spec.len_levels = 1;
    spec.wid_levels = 2;
    Sampler s;
    s.seed = 2;
    const RectFamily fam = build_rect_family(v, 1.0, spec, s);
    REQUIRE(!fam.empty());
    for (size_t i = 0; i < fam.size(); ++i) {
        CHECK(fam.densities[i] == 1.0);
        CHECK(eccentricity_arc(fam.rects[i]).contains(UnitVec::from_angle(0.9)));
    }
    // independent replication of the candidate lattice for one (L, W) block:
    // every aligned candidate must be present, every member aligned
    const double len = 0.1, wid = 0.05;
    const double ex = wid / len;
    const int m = std::max(4, static_cast<int>(std::ceil(kTwoPi / (spec.orient_factor * ex))));
    const double cp = spec.center_factor * wid;
    const double inset = 0.5 * std::hypot(len, wid);
    const int64_t nxc = static_cast<int64_t>(std::floor((1.0 - 2 * inset) / cp)) + 1;
    const int64_t nyc = nxc;
    int64_t aligned = 0;
    for (int io = 0; io < m; ++io) {
        const double theta = io * (kTwoPi / m);
        if (std::fabs(std::remainder(theta - 0.9, kTwoPi)) <= 0.5 * ex) aligned += nxc * nyc;
    }
    int64_t in_family = 0;
    for (const Rect& r : fam.rects)
        if (r.wid == wid) ++in_family;
    CHECK(in_family == aligned);

    CHECK_THROWS_AS(build_rect_family(v, 0.0, spec, s), std::invalid_argument);
    // delta-independence for constant fields
    const RectFamily f2 = build_rect_family(v, 0.25, spec, s);
    CHECK(f2.size() == fam.size());
}

TEST_CASE("family enumeration: refined-sampler filter agrees off the borderline") {
    const Box dom{0, 0, 1, 1};
    const VectorField v = VectorField::sinusoidal_angle(0.5, 2.0, 0.0, 0.0, 0.0, dom);
    EnumSpec spec;
    spec.domain = {0.4, 0.4, 0.6, 0.6};  // enumeration window inside the field domain
    spec.len_levels = 2;
    spec.wid_levels = 3;
    spec.min_width = 1e-3;
    Sampler s;
    s.seed = 5;
    s.count = 512;
    Sampler refined = s;
    refined.count = 4 * s.count;
    const double delta = 0.25;
    const RectFamily wide = build_rect_family(v, delta - 0.1, spec, s);
    const RectFamily fam = build_rect_family(v, delta, spec, s);
    REQUIRE(fam.size() > 50);
    int checked = 0, borderline = 0;
    for (size_t i = 0; i < wide.size(); ++i) {
        const double dr = vset_density(wide.rects[i], v, refined);
        if (std::fabs(dr - delta) <= 0.05) {
            ++borderline;
            continue;
        }
        ++checked;
        const bool in_fam = fam.find(wide.rects[i].id) != nullptr;
        if (dr >= delta + 0.05) CHECK(in_fam);
        if (dr <= delta - 0.05) CHECK_FALSE(in_fam);
    }
    CHECK(checked > 100);  // the comparison is not vacuous
    MESSAGE("borderline rectangles skipped: ", borderline);
}

TEST_CASE("supremum evaluation equals the per-point double loop bitwise") {
    const int n = 128;
    const double pitch = 1.0 / n;
    const ScalarField f = disc_indicator(n, pitch, {0.5, 0.5}, 0.1);
    Rng rng(21);
    RectFamily fam;
    fam.delta = 0.5;
    fam.nu = 0.3;
    for (int i = 0; i < 50; ++i) {
        Rect r = oracles::random_rect(rng, {0.1, 0.1, 0.9, 0.9}, 0.05, 0.3, i);
        r.center = {0.5 + (r.center.x - 0.5) * 0.6, 0.5 + (r.center.y - 0.5) * 0.6};
        fam.rects.push_back(r);
        fam.densities.push_back(1.0);
    }
    const MaxField fast = eval_M_v_delta(f, fam, 1);
    const MaxField brute = oracles::brute_force_rect_supremum(f, fam);
    CHECK(fast == brute);
    // threaded evaluation has the same merge semantics
    const MaxField fast4 = eval_M_v_delta(f, fam, 4);
    CHECK(fast4 == brute);
}

TEST_CASE("positive homogeneity with a power-of-two factor is exact") {
    const int n = 64;
    const ScalarField f = disc_indicator(n, 1.0 / n, {0.5, 0.5}, 0.2);
    ScalarField cf(n, n, 1.0 / n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) cf.set(i, j, 4.0 * f.at(i, j));
    Rng rng(9);
    RectFamily fam;
    fam.delta = 0.5;
    for (int i = 0; i < 20; ++i) {
        fam.rects.push_back(oracles::random_rect(rng, {0.2, 0.2, 0.8, 0.8}, 0.05, 0.25, i));
        fam.densities.push_back(1.0);
    }
    const MaxField a = eval_M_v_delta(f, fam, 1);
    const MaxField b = eval_M_v_delta(cf, fam, 1);
    CHECK(a.witness == b.witness);
    for (size_t ix = 0; ix < a.values.size(); ++ix) CHECK(4.0 * a.values[ix] == b.values[ix]);
}

TEST_CASE("family monotonicity and delta monotonicity") {
    const Box dom{0, 0, 1, 1};
    const VectorField v = VectorField::sinusoidal_angle(0.5, 8.0, 0.0, 0.0, 0.0, dom);
    EnumSpec spec;
    spec.domain = {0.45, 0.45, 0.55, 0.55};
    spec.len_levels = 2;
    spec.wid_levels = 2;
    Sampler s;
    s.seed = 1;
    const RectFamily lo = build_rect_family(v, 0.125, spec, s);
    const RectFamily hi = lo.filtered(0.5);
    CHECK(hi.size() <= lo.size());
    // filtered family members keep ids and densities
    for (size_t i = 0; i < hi.size(); ++i) {
        const int idx = lo.index_of(hi.rects[i].id);
        REQUIRE(idx >= 0);
        CHECK(lo.densities[static_cast<size_t>(idx)] == hi.densities[i]);
    }
    REQUIRE(!hi.empty());
    const ScalarField f = disc_indicator(64, 1.0 / 64, {0.5, 0.5}, 0.1);
    const MaxField mlo = eval_M_v_delta(f, lo, 1);
    const MaxField mhi = eval_M_v_delta(f, hi, 1);
    for (size_t ix = 0; ix < mlo.values.size(); ++ix) CHECK(mhi.values[ix] <= mlo.values[ix]);
}

TEST_CASE("constant-field collapse: family and outputs are delta-independent") {
    const Box dom{0, 0, 1, 1};
    const VectorField v = VectorField::constant(0.4, dom);
    EnumSpec spec;
    spec.domain = dom;
    spec.len_levels = 2;
    spec.wid_levels = 2;
    Sampler s;
    s.seed = 14;
    const ScalarField f = disc_indicator(64, 1.0 / 64, {0.5, 0.5}, 0.12);
    const RectFamily f1 = build_rect_family(v, 0.1, spec, s);
    REQUIRE(!f1.empty());
    const MaxField m1 = eval_M_v_delta(f, f1, 1);
    for (double delta : {0.5, 1.0}) {
        const RectFamily fd = build_rect_family(v, delta, spec, s);
        CHECK(fd.size() == f1.size());
        CHECK(eval_M_v_delta(f, fd, 1) == m1);
    }
}

TEST_CASE("kappa maximal function") {
    const int n = 48;
    const double pitch = 1.0 / n;
    const ScalarField one = ones(n, pitch);
    const MaxField m1 = eval_M_kappa(one, 8, 1);
    for (double v : m1.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));

    // horizontal strip: along the horizontal direction the average is large
    ScalarField strip(n, n, pitch);
    for (int j = n / 2 - 2; j <= n / 2 + 2; ++j)
        for (int i = 0; i < n; ++i) strip.set(i, j, 1.0);
    const MaxField ms = eval_M_kappa(strip, 16, 1);
    const Vec2 inside = strip.cell_center(n / 2, n / 2);
    // direct quadrature along the horizontal at a dyadic scale
    const double s = 0.25;
    const double direct = oracles::direct_segment_mean(strip, inside, {1, 0}, s, 4096);
    const size_t idx = ms.idx(n / 2, n / 2);
    CHECK(ms.values[idx] >= direct * (1 - 0.02));

    // dominates the square averages everywhere
    for (int j = 0; j < n; j += 5)
        for (int i = 0; i < n; i += 5) {
            const Vec2 x = strip.cell_center(i, j);
            double sq = 0.0;
            for (double sc = pitch; sc <= 1.0; sc *= 2)
                sq = std::max(sq, strip.box_mean({x.x - sc / 2, x.y - sc / 2},
                                                 {x.x + sc / 2, x.y + sc / 2}));
            CHECK(ms.values[ms.idx(i, j)] >= sq - 1e-12);
        }

    CHECK_THROWS_AS(eval_M_kappa(one, 4, 1), std::invalid_argument);
}

TEST_CASE("eccentricity-floor maximal function") {
    const int n = 48;
    const double pitch = 1.0 / n;
    EnumSpec spec;
    spec.domain = {0, 0, 1, 1};
    spec.max_len = 0.2;
    spec.len_levels = 2;
    spec.wid_levels = 3;
    spec.min_width = 0.01;

    // eps = 1 keeps only aspect-1 rectangles
    const RectFamily squares = build_eccentricity_family(1.0, spec);
    REQUIRE(!squares.empty());
    for (const Rect& r : squares.rects) CHECK(r.wid == r.len);

    const ScalarField one = ones(n, pitch);
    const MaxField m1 = eval_M_K_eps(one, 1.0, spec, 1);
    size_t covered = 0;
    for (size_t ix = 0; ix < m1.values.size(); ++ix)
        if (m1.witness[ix] >= 0) {
            CHECK(m1.values[ix] == 1.0);
            ++covered;
        }
    CHECK(covered > 0);

    // halving eps enlarges the family and the output pointwise
    const ScalarField d = disc_indicator(n, pitch, {0.5, 0.5}, 0.15);
    const MaxField coarse = eval_M_K_eps(d, 0.5, spec, 1);
    const MaxField fine = eval_M_K_eps(d, 0.25, spec, 1);
    for (size_t ix = 0; ix < coarse.values.size(); ++ix)
        CHECK(fine.values[ix] >= coarse.values[ix]);

    CHECK_THROWS_AS(eval_M_K_eps(d, 0.0, spec, 1), std::invalid_argument);
}

TEST_CASE("field-segment maximal function") {
    const int n = 48;
    const double pitch = 1.0 / n;
    const Box dom{0, 0, 1, 1};
    const ScalarField one = ones(n, pitch);
    const VectorField horiz = VectorField::constant(0.0, dom);
    const MaxField m1 = eval_M_v(one, horiz, 1);
    // interior points see the constant exactly at the smallest scale
    for (int j = 8; j < n - 8; ++j)
        for (int i = 8; i < n - 8; ++i) CHECK(m1.values[m1.idx(i, j)] == 1.0);

    // vertical strip of width w around x=0.5, horizontal field: compare the
    // best dyadic scale against direct quadrature
    ScalarField strip(n, n, pitch);
    for (int j = 0; j < n; ++j)
        for (int i = n / 2 - 2; i <= n / 2 + 2; ++i) strip.set(i, j, 1.0);
    const MaxField ms = eval_M_v(strip, horiz, 1);
    const Vec2 inside = strip.cell_center(n / 2, n / 2);
    double best = 0.0;
    for (double t = 2 * pitch; t <= std::sqrt(2.0); t *= 2)
        best = std::max(best, oracles::direct_segment_mean(strip, inside, {1, 0}, t, 8192));
    CHECK(ms.values[ms.idx(n / 2, n / 2)] == doctest::Approx(best).epsilon(0.02));

    // zero away from the support line
    ScalarField spot(n, n, pitch);
    spot.set(2, n - 3, 1.0);
    const MaxField mz = eval_M_v(spot, horiz, 1);
    CHECK(mz.values[mz.idx(n / 2, 3)] == 0.0);
}

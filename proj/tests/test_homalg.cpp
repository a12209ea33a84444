#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "cychom/spectral.hpp"
#include "oracle.hpp"

using namespace cychom;

namespace {

// Bar complex of Z/2 with trivial rational coefficients, built by hand: a
// basis of C_n is the 2^n tuples in {0,1}^n, read as binary numbers.
ChainComplex z2_bar(int top) {
    std::vector<std::size_t> dims;
    std::vector<Mat> diffs;
    for (int n = 0; n <= top; ++n) {
        dims.push_back(std::size_t{1} << n);
        if (n == 0) {
            diffs.emplace_back(0, 1);
            continue;
        }
        std::vector<Triplet> t;
        for (std::size_t s = 0; s < dims.back(); ++s) {
            std::vector<int> g(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = (s >> (n - 1 - i)) & 1;
            for (int i = 0; i <= n; ++i) {
                std::vector<int> f;
                if (i == 0)
                    f.assign(g.begin() + 1, g.end());
                else if (i == n)
                    f.assign(g.begin(), g.end() - 1);
                else {
                    f.assign(g.begin(), g.end());
                    f[static_cast<std::size_t>(i - 1)] ^= f[static_cast<std::size_t>(i)];
                    f.erase(f.begin() + i);
                }
                std::size_t r = 0;
                for (int b : f) r = 2 * r + static_cast<std::size_t>(b);
                t.push_back({static_cast<Index>(r), static_cast<Index>(s), i % 2 ? -1 : 1});
            }
        }
        diffs.push_back(Mat::from_triplets(dims[static_cast<std::size_t>(n - 1)], dims.back(), std::move(t)));
    }
    return ChainComplex(0, dims, std::move(diffs), true);
}

// (B,b) bicomplex of the ground field: every column is Q with b alternating
// 0 and 1, and B equal to 2(n+1) on even degrees n and 0 on odd ones.
DoubleComplex ground_field_bb(int top) {
    DoubleComplex dc(top, true);
    for (int p = 0; p <= top; ++p)
        for (int q = p; p + q <= top; ++q) dc.set_dim(p, q, 1);
    for (int p = 0; p <= top; ++p)
        for (int q = p; p + q <= top; ++q) {
            const int deg = q - p;
            if (deg >= 1) {
                const int b = deg % 2 == 0 ? 1 : 0;
                dc.set_vertical(p, q, Mat::from_rows({{p % 2 ? -b : b}}));
            }
            if (p >= 1 && q - 1 >= p - 1) {
                const int src_deg = deg;
                dc.set_horizontal(p, q, Mat::from_rows({{src_deg % 2 == 0 ? 2 * (src_deg + 1) : 0}}));
            }
        }
    return dc;
}

ChainComplex random_complex(std::mt19937& rng, std::size_t len) {
    std::vector<std::size_t> dims;
    for (std::size_t i = 0; i < len; ++i) dims.push_back(1 + rng() % 6);
    std::vector<Mat> diffs{Mat(0, dims[0])};
    // d_n = A_n P_n where P_n projects onto a complement of ker-ish data; build
    // via d_n = X_n Y_n with Y_n d_{n+1} = 0 by choosing Y_n from coker of d_{n+1}.
    std::vector<Mat> ds(len);
    for (std::size_t n = len - 1; n >= 1; --n) {
        Mat m = oracle::random_mat(rng, dims[n - 1], dims[n], 0.5);
        if (n + 1 < len) {
            // Kill the image of d_{n+1}: m := m * (projection along im d_{n+1}).
            const Subspace img = image(ds[n + 1]);
            std::vector<SparseVec> cols;
            for (std::size_t j = 0; j < dims[n]; ++j) cols.push_back(m.apply(img.residue(unit_vec(static_cast<Index>(j)))));
            m = Mat::from_columns(dims[n - 1], std::move(cols));
        }
        ds[n] = m;
    }
    for (std::size_t n = 1; n < len; ++n) diffs.push_back(ds[n]);
    return ChainComplex(0, dims, std::move(diffs), false);
}

}  // namespace

TEST_CASE("homology of tiny complexes") {
    const ChainComplex point(0, {1}, {Mat(0, 1)}, false);
    CHECK(homology(point, 0).dim() == 1);
    const ChainComplex iso(0, {1, 1}, {Mat(0, 1), Mat::identity(1)}, false);
    CHECK(homology_dims(iso) == std::vector<std::size_t>{0, 0});
    CHECK(homology(iso, 1).dim() == 0);
    CHECK_THROWS_AS(homology(iso, 2), std::out_of_range);
    CHECK_THROWS(ChainComplex(0, {1, 1, 1}, {Mat(0, 1), Mat::identity(1), Mat::identity(1)}, false));
}

TEST_CASE("bar complex of Z/2 with rational coefficients") {
    const ChainComplex c = z2_bar(5);
    CHECK(homology_dims(c) == std::vector<std::size_t>{1, 0, 0, 0, 0});
    std::vector<std::size_t> dims;
    std::vector<Mat> ds;
    for (int n = 0; n <= 5; ++n) dims.push_back(c.dim(n));
    for (int n = 1; n <= 5; ++n) ds.push_back(c.diff(n));
    const auto h = oracle::homology(dims, ds);
    CHECK(std::vector<std::size_t>(h.begin(), h.end()) == std::vector<std::size_t>{1, 0, 0, 0, 0});
    const HomologyClassSpace h0 = homology(c, 0);
    REQUIRE(h0.dim() == 1);
    CHECK(h0.is_cycle(h0.cycle_reps()[0]));
}

TEST_CASE("totalization of the ground-field (B,b) bicomplex") {
    const DoubleComplex dc = ground_field_bb(7);
    dc.check();
    const ChainComplex tot = totalize(dc);
    CHECK(homology_dims(tot) == std::vector<std::size_t>{1, 0, 1, 0, 1, 0, 1});
    CHECK(homology_dims(totalize(transpose(dc))) == homology_dims(tot));
}

TEST_CASE("one-column double complex totalizes to its column") {
    DoubleComplex dc(3, false);
    for (int q = 0; q <= 3; ++q) dc.set_dim(0, q, 2);
    const Mat d = Mat::from_rows({{0, 1}, {0, 0}});
    for (int q = 1; q <= 3; ++q) dc.set_vertical(0, q, d);
    const ChainComplex tot = totalize(dc);
    for (int q = 1; q <= 3; ++q) CHECK(tot.diff(q) == d);
}

TEST_CASE("induced maps") {
    const ChainComplex c = totalize(ground_field_bb(5));
    ChainMap id{&c, &c, 0, {}};
    ChainMap zero{&c, &c, 0, {}};
    for (int n = 0; n <= c.hi(); ++n) {
        id.maps[n] = Mat::identity(c.dim(n));
        zero.maps[n] = Mat(c.dim(n), c.dim(n));
    }
    id.check();
    for (int n = 0; n <= c.valid_hi(); ++n) {
        CHECK(induced_map(id, n).is_identity());
        CHECK(induced_map(zero, n).is_zero());
    }
    // Column 0 inclusion at degree 0 is an isomorphism Q -> Q.
    const ChainComplex col(0, {1, 1, 1}, {Mat(0, 1), Mat::from_rows({{0}}), Mat::from_rows({{1}})}, true);
    ChainMap incl{&col, &c, 0, {}};
    const TotalLayout lay = total_layout(ground_field_bb(5));
    for (int n = 0; n <= 2; ++n) {
        std::vector<Triplet> t{{static_cast<Index>(lay.offset[static_cast<std::size_t>(n)].at(0)), 0, 1}};
        incl.maps[n] = Mat::from_triplets(c.dim(n), 1, t);
    }
    incl.check();
    const Mat m = induced_map(incl, 0);
    CHECK(m.rows() == 1);
    CHECK(m.cols() == 1);
    CHECK_FALSE(m.is_zero());
    ChainMap bad = id;
    bad.maps[1] = Mat(c.dim(1), c.dim(1));
    bad.maps[2] = Mat::identity(c.dim(2)).scaled(2);
    CHECK_THROWS(bad.check());
}

TEST_CASE("exactness checks") {
    const Mat id = Mat::identity(2);
    const std::vector<ExactNode> good{{"0", 0, Mat(2, 0)}, {"V", 2, id}, {"V", 2, Mat(0, 2)}, {"0", 0, {}}};
    CHECK(check_exact(good).all_exact());
    const std::vector<ExactNode> bad{{"0", 0, Mat(2, 0)}, {"V", 2, Mat(0, 2)}, {"0", 0, {}}};
    const ExactnessReport rep = check_exact(bad);
    CHECK_FALSE(rep.all_exact());
    REQUIRE(rep.nodes.size() == 1);
    CHECK(rep.nodes[0].dim_kernel_out == 2);
    CHECK(rep.nodes[0].dim_image_in == 0);
    CHECK_THROWS(check_exact({{"V", 2, Mat(1, 3)}, {"W", 1, {}}}));
}

TEST_CASE("short exact sequence of complexes and its connecting map") {
    // 0 -> A -> B -> C -> 0 with B = cone of id on Q: B_1 = Q, B_0 = Q, d = 1.
    // A = Q in degree 0, C = Q in degree 1; the connecting map H_1(C) -> H_0(A) is an iso.
    const ChainComplex a(0, {1, 0}, {Mat(0, 1), Mat(1, 0)}, false);
    const ChainComplex b(0, {1, 1}, {Mat(0, 1), Mat::identity(1)}, false);
    const ChainComplex c(0, {0, 1}, {Mat(0, 0), Mat(0, 1)}, false);
    ChainMap i{&a, &b, 0, {{0, Mat::identity(1)}, {1, Mat(1, 0)}}};
    ChainMap p{&b, &c, 0, {{0, Mat(0, 1)}, {1, Mat::identity(1)}}};
    i.check();
    p.check();
    const Mat delta = connecting_map(i, p, 1, homology(c, 1), homology(a, 0));
    CHECK(rank(delta) == 1);
}

TEST_CASE("homology dims are independent of basis order and satisfy the Euler characteristic") {
    std::mt19937 rng(17);
    for (int it = 0; it < 40; ++it) {
        const ChainComplex c = random_complex(rng, 2 + rng() % 4);
        const auto h = homology_dims(c);
        long chi_c = 0, chi_h = 0;
        for (int n = c.lo(); n <= c.hi(); ++n) {
            chi_c += (n % 2 ? -1 : 1) * static_cast<long>(c.dim(n));
            chi_h += (n % 2 ? -1 : 1) * static_cast<long>(h[static_cast<std::size_t>(n)]);
            CHECK(homology(c, n).dim() == h[static_cast<std::size_t>(n)]);
        }
        CHECK(chi_c == chi_h);
        std::vector<std::vector<Index>> perm;
        for (int n = 0; n <= c.hi(); ++n) {
            std::vector<Index> p(c.dim(n));
            std::iota(p.begin(), p.end(), 0);
            std::shuffle(p.begin(), p.end(), rng);
            perm.push_back(p);
        }
        std::vector<std::size_t> dims;
        std::vector<Mat> ds{Mat(0, c.dim(0))};
        for (int n = 0; n <= c.hi(); ++n) dims.push_back(c.dim(n));
        for (int n = 1; n <= c.hi(); ++n)
            ds.push_back(permuted(c.diff(n), perm[static_cast<std::size_t>(n - 1)], perm[static_cast<std::size_t>(n)]));
        CHECK(homology_dims(ChainComplex(0, dims, std::move(ds), false)) == h);
    }
}

TEST_CASE("homology class coordinates") {
    const ChainComplex c = z2_bar(3);
    const HomologyClassSpace h0 = homology(c, 0);
    CHECK(h0.coords(unit_vec(0, 3)) == unit_vec(0, 3));
    const HomologyClassSpace h1 = homology(c, 1);
    CHECK(h1.dim() == 0);
    CHECK(h1.coords(unit_vec(1)).empty());
    // The string (e, g) has boundary (g) - (g) + (e), so it is not a cycle.
    CHECK_THROWS(homology(c, 2).coords(unit_vec(1)));
}

TEST_CASE("spectral sequence of a single position") {
    DoubleComplex dc(3, false);
    dc.set_dim(1, 1, 3);
    const SpectralSequence ss = spectral_sequence(dc, 3);
    for (const auto& pg : ss.pages) {
        CHECK(pg.at(1, 1) == 3);
        CHECK(pg.d.empty());
    }
    CHECK(ss.abutment_holds());
    CHECK(ss.page_consistency_error().empty());
}

TEST_CASE("spectral sequence of the ground-field (B,b) bicomplex") {
    const DoubleComplex dc = ground_field_bb(6);
    const SpectralSequence ss = spectral_sequence(dc, 3);
    // E^1 is the column homology: Q at the bottom of every column.
    for (int p = 0; p <= 2; ++p) {
        CHECK(ss.pages[1].at(p, p) == 1);
        CHECK(ss.pages[1].at(p, p + 1) == 0);
    }
    CHECK(ss.abutment_holds());
    CHECK(ss.page_consistency_error().empty());
}

TEST_CASE("spectral sequence with a nonzero higher differential") {
    // Zig-zag (2,0) -> (1,0) <- (1,1) -> (0,1): column 1 is acyclic, so d_2
    // links the survivors at (2,0) and (0,1) and the total complex is acyclic.
    DoubleComplex dc(3, false);
    for (const auto& [p, q] : std::vector<Bidegree>{{0, 1}, {1, 0}, {1, 1}, {2, 0}}) dc.set_dim(p, q, 1);
    dc.set_horizontal(2, 0, Mat::identity(1));
    dc.set_horizontal(1, 1, Mat::identity(1));
    dc.set_vertical(1, 1, Mat::identity(1));
    dc.check();
    const SpectralSequence ss = spectral_sequence(dc, 4);
    CHECK(ss.total_homology == std::vector<std::size_t>{0, 0, 0, 0});
    CHECK(ss.pages[1].entries == std::map<Bidegree, std::size_t>{{{0, 1}, 1}, {{2, 0}, 1}});
    CHECK(ss.pages[1].d.empty());
    REQUIRE(ss.pages[2].d.count({2, 0}) == 1);
    CHECK(rank(ss.pages[2].d.at({2, 0})) == 1);
    CHECK(ss.pages[3].entries.empty());
    CHECK(ss.e_inf.empty());
    CHECK(ss.collapse_page == 3);
    CHECK(ss.abutment_holds());
    CHECK(ss.page_consistency_error().empty());
}

#include <doctest.h>

#include <random>

#include "cychom/gsheaf.hpp"
#include "cychom/linalg.hpp"
#include "oracle.hpp"

using namespace cychom;

namespace {

// Right regular representation of a one-object groupoid: e_x . g = e_{xg}.
GSheaf regular_rep(const FiniteGroupoid& g) {
    GSheaf a;
    const std::size_t n = g.num_arrows();
    a.stalk_dim = {n};
    for (ArrowId h = 0; h < static_cast<ArrowId>(n); ++h) {
        std::vector<SparseVec> cols;
        for (ArrowId x = 0; x < static_cast<ArrowId>(n); ++x) cols.push_back(unit_vec(g.compose(x, h)));
        a.act.push_back(Mat::from_columns(n, std::move(cols)));
    }
    return a;
}

GSheaf sign_rep_z2(const FiniteGroupoid& z2) {
    GSheaf a;
    a.stalk_dim = {1};
    for (ArrowId h = 0; h < 2; ++h) a.act.push_back(Mat::identity(1).scaled(Scalar(z2.is_unit(h) ? 1 : -1)));
    return a;
}

ArrowId non_unit(const FiniteGroupoid& g) {
    for (ArrowId h = 0; h < static_cast<ArrowId>(g.num_arrows()); ++h)
        if (!g.is_unit(h)) return h;
    return kNone;
}

std::vector<std::size_t> homology_by_oracle(const ChainComplex& c) {
    std::vector<std::size_t> dims;
    std::vector<Mat> d;
    for (int n = 0; n <= c.hi(); ++n) {
        dims.push_back(c.dim(n));
        if (n >= 1) d.push_back(c.diff(n));
    }
    auto h = oracle::homology(dims, d);
    h.resize(static_cast<std::size_t>(c.valid_hi() + 1));
    return h;
}

}  // namespace

TEST_CASE("bar complex of the trivial groupoid alternates zero and identity") {
    const auto g = trivial_groupoid();
    const ChainComplex c = bar_complex(g, constant_sheaf(g), 6);
    for (int n = 0; n <= 6; ++n) CHECK(c.dim(n) == 1);
    for (int n = 1; n <= 6; ++n) {
        if (n % 2) CHECK(c.diff(n).is_zero());
        else CHECK(c.diff(n).is_identity());
    }
    CHECK(homology_dims(c) == std::vector<std::size_t>{1, 0, 0, 0, 0, 0});
}

TEST_CASE("bar complex dimensions and homology of Z/2") {
    const auto z2 = cyclic_group(2);
    const ChainComplex c = bar_complex(z2, constant_sheaf(z2), 5);
    for (int n = 0; n <= 5; ++n) CHECK(c.dim(n) == (std::size_t{1} << n));
    for (int n = 2; n <= 5; ++n) CHECK((c.diff(n - 1) * c.diff(n)).is_zero());
    CHECK(homology_dims(c) == std::vector<std::size_t>{1, 0, 0, 0, 0});
    CHECK(homology_dims(c) == homology_by_oracle(c));
}

TEST_CASE("sign representation has no homology") {
    const auto z2 = cyclic_group(2);
    const GSheaf sign = sign_rep_z2(z2);
    REQUIRE(validate(z2, sign).ok());
    CHECK(groupoid_homology(z2, sign, 0, 1).dim() == 0);
    const ChainComplex c = bar_complex(z2, sign, 5);
    CHECK(homology_dims(c) == std::vector<std::size_t>{0, 0, 0, 0, 0});
    CHECK(homology_dims(c) == homology_by_oracle(c));
}

TEST_CASE("groupoid homology examples") {
    SUBCASE("discrete groupoid") {
        const auto g = discrete_groupoid(3);
        CHECK(groupoid_homology_dims(g, constant_sheaf(g), 4) == std::vector<std::size_t>{3, 0, 0, 0});
    }
    SUBCASE("pair groupoid") {
        const auto g = pair_groupoid(2);
        CHECK(groupoid_homology(g, constant_sheaf(g), 0, 1).dim() == 1);
        const ChainComplex c = bar_complex(g, constant_sheaf(g), 4);
        CHECK(homology_dims(c) == std::vector<std::size_t>{1, 0, 0, 0});
        CHECK(homology_dims(c) == homology_by_oracle(c));
    }
    SUBCASE("S3") {
        const auto g = symmetric_group(3);
        CHECK(groupoid_homology_dims(g, constant_sheaf(g), 5) == std::vector<std::size_t>{1, 0, 0, 0, 0});
    }
    SUBCASE("regular representation is induced, so only H_0 survives") {
        const auto g = cyclic_group(3);
        CHECK(groupoid_homology_dims(g, regular_rep(g), 4) == std::vector<std::size_t>{1, 0, 0, 0});
    }
}

TEST_CASE("window must exceed the requested degree") {
    const auto g = cyclic_group(2);
    CHECK_THROWS_AS(groupoid_homology(g, constant_sheaf(g), 2, 2), std::out_of_range);
    CHECK_NOTHROW(groupoid_homology(g, constant_sheaf(g), 2, 3));
}

TEST_CASE("non-functorial sheaves are rejected") {
    const auto z3 = cyclic_group(3);
    GSheaf bad = constant_sheaf(z3);
    bad.act[static_cast<std::size_t>(non_unit(z3))] = Mat::identity(1).scaled(Scalar(-1));
    const auto rep = validate(z3, bad);
    CHECK_FALSE(rep.ok());
    CHECK_THROWS_AS(bar_complex(z3, bad, 3), std::invalid_argument);

    GSheaf bad_unit = constant_sheaf(z3);
    bad_unit.act[static_cast<std::size_t>(z3.unit(0))] = Mat::identity(1).scaled(Scalar(2));
    CHECK_FALSE(validate(z3, bad_unit).ok());
}

TEST_CASE("homology is invariant under change of stalk basis") {
    std::mt19937 rng(7);
    const auto g = symmetric_group(3);
    const GSheaf a = direct_sum(regular_rep(g), constant_sheaf(g, 2));
    REQUIRE(validate(g, a).ok());
    const GSheaf b = change_basis(g, a, {oracle::random_invertible(rng, a.stalk(0))});
    REQUIRE(validate(g, b).ok());
    CHECK(groupoid_homology_dims(g, a, 3) == groupoid_homology_dims(g, b, 3));
    CHECK(groupoid_homology_dims(g, a, 3) == std::vector<std::size_t>{3, 0, 0});
}

TEST_CASE("homology agrees with the skeleton") {
    const auto s3 = symmetric_group(3);
    const auto conj = action_groupoid(loops(s3).gset, s3);
    const FiniteGroupoid& g = conj.groupoid;
    const Skeleton sk = skeleton(g);
    REQUIRE(sk.essential_equivalence);
    REQUIRE(sk.representatives.size() == 3);

    const int top = 4;
    const ChainComplex whole = bar_complex(g, constant_sheaf(g), top);
    const ChainComplex small = bar_complex(sk.disjoint_union, constant_sheaf(sk.disjoint_union), top);
    const auto dims = homology_dims(whole);
    CHECK(dims == homology_dims(small));
    CHECK(dims == std::vector<std::size_t>{3, 0, 0, 0});

    std::vector<std::size_t> summed(static_cast<std::size_t>(top), 0);
    for (const auto& iso : sk.isotropy) {
        const auto h = groupoid_homology_dims(iso, constant_sheaf(iso), top);
        for (std::size_t n = 0; n < h.size(); ++n) summed[n] += h[n];
    }
    CHECK(dims == summed);

    // The inclusion induces an isomorphism in every trusted degree.
    const Functor inc = sk.inclusion(g);
    REQUIRE(inc.check().ok());
    const std::vector<Mat> ones(sk.disjoint_union.num_objects(), Mat::identity(1));
    const ChainMap f = bar_chain_map(inc, constant_sheaf(sk.disjoint_union), constant_sheaf(g), ones, small, whole);
    CHECK_NOTHROW(f.check());
    for (int n = 0; n < top; ++n) {
        const Mat m = induced_map(f, n);
        CHECK(m.rows() == m.cols());
        CHECK(rank(m) == m.cols());
    }
}

TEST_CASE("coinvariants of the theta action") {
    SUBCASE("trivial theta leaves the sheaf unchanged") {
        const auto g = symmetric_group(3);
        const CyclicGroupoid cg = with_trivial_theta(g);
        const Localization loc = localize(cg);
        const GSheaf a = direct_sum(regular_rep(g), constant_sheaf(g));
        const PushforwardSheaf p = coinvariant_pushforward(cg, loc, a);
        CHECK(loc.quotient == g);
        CHECK(p.sheaf.stalk_dim == a.stalk_dim);
        CHECK(p.sheaf.act == a.act);
    }
    const auto z2 = cyclic_group(2);
    const CyclicGroupoid cg{z2, {non_unit(z2)}};
    REQUIRE(validate(cg).ok());
    const Localization loc = localize(cg);
    SUBCASE("regular representation collapses to a line") {
        const PushforwardSheaf p = coinvariant_pushforward(cg, loc, regular_rep(z2));
        CHECK(p.sheaf.stalk_dim == std::vector<std::size_t>{1});
        CHECK(validate(loc.quotient, p.sheaf).ok());
        const Coinvariants& q = p.quotient;
        CHECK((q.project[0] * q.lift[0]).is_identity());
        // e_u and e_sigma become equal.
        CHECK(q.project[0].col(0) == q.project[0].col(1));
    }
    SUBCASE("sign representation dies") {
        const PushforwardSheaf p = coinvariant_pushforward(cg, loc, sign_rep_z2(z2));
        CHECK(p.sheaf.stalk_dim == std::vector<std::size_t>{0});
    }
}

TEST_CASE("pushforward to the localization preserves homology") {
    SUBCASE("Z/4 regular representation with theta of order two") {
        const auto z4 = cyclic_group(4);
        const CyclicGroupoid cg{z4, {z4.find_arrow("g2")}};
        REQUIRE(validate(cg).ok());
        const Localization loc = localize(cg);
        const GSheaf a = regular_rep(z4);
        const PushforwardSheaf p = coinvariant_pushforward(cg, loc, a);
        CHECK(p.sheaf.stalk(0) == 2);
        CHECK(groupoid_homology_dims(z4, a, 4) == groupoid_homology_dims(loc.quotient, p.sheaf, 4));
    }
    SUBCASE("loop groupoid of S3 for every component") {
        const auto s3 = symmetric_group(3);
        const LoopCyclicGroupoid lc = loop_cyclic_groupoid(s3);
        const Localization loc = localize(lc.cyclic);
        const FiniteGroupoid& base = lc.cyclic.base;
        const GSheaf a = constant_sheaf(base, 2);
        const PushforwardSheaf p = coinvariant_pushforward(lc.cyclic, loc, a);
        CHECK(validate(loc.quotient, p.sheaf).ok());
        CHECK(groupoid_homology_dims(base, a, 3) == groupoid_homology_dims(loc.quotient, p.sheaf, 3));
    }
}

TEST_CASE("standard cyclic sheaf") {
    SUBCASE("trivial groupoid gives the ground field in every degree") {
        const auto g = trivial_groupoid();
        const ThetaCyclicSheaf a = standard_cyclic_sheaf(g, 4);
        CHECK(validate(with_trivial_theta(g), a).ok());
        for (int n = 0; n <= 4; ++n) {
            CHECK(a.levels[static_cast<std::size_t>(n)].stalk(0) == 1);
            CHECK(a.stalks[0].cyclic[static_cast<std::size_t>(n)].is_identity());
        }
    }
    SUBCASE("Z/2 level one has four strings") {
        const auto g = cyclic_group(2);
        const ThetaCyclicSheaf a = standard_cyclic_sheaf(g, 3);
        CHECK(a.levels[1].stalk(0) == 4);
        CHECK(validate(with_trivial_theta(g), a).ok());
    }
    SUBCASE("Z/3 is a resolution") {
        const auto g = cyclic_group(3);
        const ThetaCyclicSheaf a = standard_cyclic_sheaf(g, 4);
        CHECK(validate(with_trivial_theta(g), a).ok());
        const ChainComplex c = stalk_complex(a, 0);
        CHECK(homology_dims(c) == std::vector<std::size_t>{1, 0, 0, 0});
        CHECK(homology_dims(c) == homology_by_oracle(c));
    }
    SUBCASE("groupoids with several objects") {
        for (const auto& g : {pair_groupoid(2), discrete_groupoid(2), symmetric_group(3)}) {
            const ThetaCyclicSheaf a = standard_cyclic_sheaf(g, 3);
            CHECK(validate(with_trivial_theta(g), a).ok());
            for (ObjId c = 0; c < static_cast<ObjId>(g.num_objects()); ++c) {
                CHECK(homology_dims(stalk_complex(a, c)) == std::vector<std::size_t>{1, 0, 0});
                for (int n = 0; n <= 3; ++n) {
                    const Mat& t = a.stalks[static_cast<std::size_t>(c)].cyclic[static_cast<std::size_t>(n)];
                    CHECK(t.power(static_cast<unsigned>(n + 1)).is_identity());
                }
            }
        }
    }
    SUBCASE("a broken cyclic operator is caught") {
        const auto g = cyclic_group(2);
        ThetaCyclicSheaf a = standard_cyclic_sheaf(g, 2);
        a.stalks[0].cyclic[1] = Mat::identity(4);
        CHECK_FALSE(validate(with_trivial_theta(g), a).ok());
    }
}

TEST_CASE("pushforward of a cyclic sheaf is cyclic for the localization") {
    const auto z2 = cyclic_group(2);
    const CyclicGroupoid triv = with_trivial_theta(z2);
    const ThetaCyclicSheaf a = standard_cyclic_sheaf(z2, 3);
    const Localization loc = localize(triv);
    const ThetaCyclicSheaf p = coinvariant_pushforward(triv, loc, a);
    CHECK(validate(with_trivial_theta(loc.quotient), p).ok());
    CHECK(p.levels[2].stalk(0) == a.levels[2].stalk(0));
}

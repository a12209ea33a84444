#include <doctest.h>

#include <algorithm>
#include <set>

#include "cychom/groupoid.hpp"

using namespace cychom;

namespace {

// Z/2 acting on a finite set of points by a given involution.
GSet involution_set(const FiniteGroupoid& z2, const std::vector<int>& swap) {
    GSet x;
    const std::size_t na = z2.num_arrows();
    x.action.assign(swap.size() * na, kNone);
    for (std::size_t p = 0; p < swap.size(); ++p) {
        x.points.push_back("p" + std::to_string(p));
        x.moment.push_back(0);
        x.action[p * na + static_cast<std::size_t>(z2.unit(0))] = static_cast<int>(p);
        const ArrowId s = z2.unit(0) == 0 ? 1 : 0;
        x.action[p * na + static_cast<std::size_t>(s)] = swap[p];
    }
    return x;
}

std::size_t brute_force_strings(const FiniteGroupoid& g, int n) {
    if (n == 0) return g.num_objects();
    std::vector<std::vector<ArrowId>> cur;
    for (ArrowId a = 0; a < static_cast<ArrowId>(g.num_arrows()); ++a) cur.push_back({a});
    for (int k = 1; k < n; ++k) {
        std::vector<std::vector<ArrowId>> next;
        for (const auto& s : cur)
            for (ArrowId a = 0; a < static_cast<ArrowId>(g.num_arrows()); ++a)
                if (g.composable(s.back(), a)) {
                    next.push_back(s);
                    next.back().push_back(a);
                }
        cur = std::move(next);
    }
    return cur.size();
}

}  // namespace

TEST_CASE("validation of small groupoids") {
    CHECK(validate(trivial_groupoid()).ok());
    CHECK(validate(cyclic_group(3)).ok());
    CHECK(validate(symmetric_group(3)).ok());
    CHECK(validate(pair_groupoid(3)).ok());
    CHECK(validate(discrete_groupoid(4)).ok());
}

TEST_CASE("broken associativity is located") {
    // Z/3 table with g*g2 and g2*g swapped to g.
    std::vector<std::vector<int>> mult{{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};
    mult[1][2] = 1;
    mult[2][1] = 1;
    const FiniteGroupoid bad = group_groupoid({"e", "g", "g2"}, mult);
    const ValidationReport rep = validate(bad);
    CHECK_FALSE(rep.ok());
    const bool located = std::any_of(rep.violations.begin(), rep.violations.end(), [](const std::string& v) {
        return v.find("associativity fails on (") != std::string::npos;
    });
    CHECK(located);
}

TEST_CASE("units and inverses come from the table") {
    const FiniteGroupoid s3 = symmetric_group(3);
    CHECK(s3.arrow(s3.unit(0)).name == "e");
    for (ArrowId g = 0; g < 6; ++g) CHECK(s3.compose(g, s3.inverse(g)) == s3.unit(0));
    CHECK(s3.find_arrow("(123)") != kNone);
    CHECK(arrow_order(s3, s3.find_arrow("(123)")) == 3);
    CHECK_THROWS(pair_groupoid(2).compose(1, 1));
}

TEST_CASE("nerve sizes") {
    const FiniteGroupoid z3 = cyclic_group(3);
    for (int n = 0; n <= 4; ++n) {
        std::size_t expect = 1;
        for (int k = 0; k < n; ++k) expect *= 3;
        CHECK(Nerve(z3, n).size() == expect);
    }
    CHECK(Nerve(discrete_groupoid(3), 2).size() == 3);
    CHECK(Nerve(pair_groupoid(2), 2).size() == 8);
    for (const FiniteGroupoid& g : {pair_groupoid(3), symmetric_group(3), discrete_groupoid(2)})
        for (int n = 0; n <= 3; ++n) CHECK(Nerve(g, n).size() == brute_force_strings(g, n));
}

TEST_CASE("nerve enumeration is lexicographic and indexed") {
    const FiniteGroupoid g = pair_groupoid(2);
    const Nerve nv(g, 3);
    const auto strings = nerve(g, 3);
    CHECK(std::is_sorted(strings.begin(), strings.end()));
    for (std::size_t i = 0; i < nv.size(); ++i) {
        CHECK(nv.find(nv.at(i)) == static_cast<std::int64_t>(i));
        CHECK(nv.anchor(i) == g.tgt(nv.at(i)[0]));
        for (int k = 0; k + 1 < 3; ++k) CHECK(g.composable(nv.at(i)[static_cast<std::size_t>(k)], nv.at(i)[static_cast<std::size_t>(k + 1)]));
    }
    const std::vector<ArrowId> bad{1, 1, 1};
    CHECK(nv.find(bad) == kNone);
    CHECK(Nerve(g, 0).find_object(1) == 1);
}

TEST_CASE("action groupoids") {
    const FiniteGroupoid z2 = cyclic_group(2);
    const ActionGroupoid swap = action_groupoid(involution_set(z2, {1, 0}), z2);
    CHECK(swap.groupoid.num_arrows() == 4);
    CHECK(validate(swap.groupoid).ok());
    for (ObjId a = 0; a < 2; ++a)
        for (ObjId b = 0; b < 2; ++b) CHECK(swap.groupoid.hom(a, b).size() == 1);
    const ActionGroupoid fixed = action_groupoid(involution_set(z2, {0}), z2);
    CHECK(fixed.groupoid.num_arrows() == 2);
    CHECK(fixed.groupoid.num_objects() == 1);
    const FiniteGroupoid triv = trivial_groupoid();
    GSet three{{"a", "b", "c"}, {0, 0, 0}, {0, 1, 2}};
    const ActionGroupoid disc = action_groupoid(three, triv);
    CHECK(disc.groupoid.num_arrows() == 3);
    for (ArrowId a = 0; a < 3; ++a) CHECK(disc.groupoid.src(a) == disc.groupoid.tgt(a));
    GSet broken = involution_set(z2, {1, 1});
    CHECK_THROWS(action_groupoid(broken, z2));
}

TEST_CASE("loops") {
    CHECK(loops(pair_groupoid(2)).loops.size() == 2);
    const FiniteGroupoid s3 = symmetric_group(3);
    const LoopSpace ls = loops(s3);
    CHECK(ls.loops.size() == 6);
    CHECK(validate_action(ls.gset, s3).ok());
    const FiniteGroupoid z2 = cyclic_group(2);
    const ActionGroupoid swap = action_groupoid(involution_set(z2, {1, 0}), z2);
    const LoopSpace sl = loops(swap.groupoid);
    CHECK(sl.loops.size() == 2);
    for (ArrowId l : sl.loops) CHECK(swap.groupoid.is_unit(l));
}

TEST_CASE("invariant components") {
    const FiniteGroupoid z2 = cyclic_group(2);
    CHECK(invariant_components(loops(z2), z2).size() == 2);
    const FiniteGroupoid s3 = symmetric_group(3);
    const auto comps = invariant_components(loops(s3), s3);
    REQUIRE(comps.size() == 3);
    std::multiset<std::size_t> sizes;
    for (const auto& c : comps) sizes.insert(c.size());
    CHECK(sizes == std::multiset<std::size_t>{1, 2, 3});
    const ActionGroupoid swap = action_groupoid(involution_set(z2, {1, 0}), z2);
    CHECK(invariant_components(loops(swap.groupoid), swap.groupoid).size() == 1);
}

TEST_CASE("loop components of an action groupoid match classes with fixed points") {
    // S_3 acting on {1,2,3}: every class has a fixed point except the 3-cycles.
    const FiniteGroupoid s3 = symmetric_group(3);
    GSet x;
    x.points = {"1", "2", "3"};
    x.moment = {0, 0, 0};
    x.action.assign(3 * 6, kNone);
    // Right action x.g = g^{-1}(x) built from the arrow names' cycle notation.
    for (ArrowId g = 0; g < 6; ++g) {
        const ArrowId inv = s3.inverse(g);
        std::vector<int> img{0, 1, 2};
        const std::string& nm = s3.arrow(inv).name;
        for (std::size_t i = 0; i < nm.size(); ++i) {
            if (nm[i] != '(') continue;
            const std::size_t close = nm.find(')', i);
            const std::string cyc = nm.substr(i + 1, close - i - 1);
            for (std::size_t k = 0; k < cyc.size(); ++k) img[static_cast<std::size_t>(cyc[k] - '1')] = cyc[(k + 1) % cyc.size()] - '1';
        }
        for (int p = 0; p < 3; ++p) x.action[static_cast<std::size_t>(p) * 6 + static_cast<std::size_t>(g)] = img[static_cast<std::size_t>(p)];
    }
    REQUIRE(validate_action(x, s3).ok());
    const ActionGroupoid ag = action_groupoid(x, s3);
    const auto comps = invariant_components(loops(ag.groupoid), ag.groupoid);
    CHECK(comps.size() == 2);
    std::multiset<std::size_t> sizes;
    for (const auto& c : comps) sizes.insert(c.size());
    // Identity at 3 points, and each transposition fixes one point.
    CHECK(sizes == std::multiset<std::size_t>{3, 3});
}

TEST_CASE("loop cyclic groupoid") {
    const LoopCyclicGroupoid triv = loop_cyclic_groupoid(trivial_groupoid());
    CHECK(triv.cyclic.base.num_objects() == 1);
    CHECK(triv.cyclic.base.is_unit(triv.cyclic.theta[0]));
    const FiniteGroupoid z2 = cyclic_group(2);
    const LoopCyclicGroupoid lz = loop_cyclic_groupoid(z2);
    CHECK(lz.cyclic.base.num_objects() == 2);
    CHECK(validate(lz.cyclic).ok());
    CHECK(lz.cyclic.base.arrow(lz.cyclic.theta[0]).name == "(e,e)");
    CHECK(lz.cyclic.base.arrow(lz.cyclic.theta[1]).name == "(g,g)");
    const FiniteGroupoid s3 = symmetric_group(3);
    const LoopCyclicGroupoid ls = loop_cyclic_groupoid(s3);
    CHECK(ls.cyclic.base.num_objects() == 6);
    CHECK(validate(ls.cyclic).ok());
    for (std::size_t i = 0; i < 6; ++i) CHECK(arrow_order(ls.cyclic.base, ls.cyclic.theta[i]) == arrow_order(s3, ls.loops[i]));
}

TEST_CASE("classification") {
    const Classification c = classify(loop_cyclic_groupoid(symmetric_group(3)).cyclic);
    CHECK(c.kind == CyclicKind::elliptic);
    CHECK(std::set<int>(c.theta_orders.begin(), c.theta_orders.end()) == std::set<int>{1, 2, 3});
    const Classification t = classify(with_trivial_theta(pair_groupoid(2)));
    CHECK(t.theta_orders == std::vector<int>{1, 1});
    CHECK_THROWS_AS(euler_class(with_trivial_theta(cyclic_group(2))), std::domain_error);
}

TEST_CASE("localization") {
    const FiniteGroupoid s3 = symmetric_group(3);
    const Localization same = localize(with_trivial_theta(s3));
    CHECK(same.quotient.num_arrows() == s3.num_arrows());
    CHECK(validate(same.quotient).ok());
    CyclicGroupoid z4{cyclic_group(4), {2}};
    const Localization q = localize(z4);
    CHECK(q.quotient.num_arrows() == 2);
    CHECK(validate(q.quotient).ok());
    CHECK(q.projection(z4).check().ok());
    const LoopCyclicGroupoid lz = loop_cyclic_groupoid(cyclic_group(2));
    const Localization n = localize(lz.cyclic);
    CHECK(n.quotient.automorphisms(1).size() == 1);
    CHECK(n.quotient.automorphisms(0).size() == 2);
    CyclicGroupoid bad{s3, {s3.find_arrow("(12)")}};
    CHECK_FALSE(validate(bad).ok());
    CHECK_THROWS(localize(bad));
}

TEST_CASE("theta permutes each hom-set and trivial theta localizes to the identity") {
    for (const FiniteGroupoid& g : {symmetric_group(3), cyclic_group(4), pair_groupoid(2)}) {
        const LoopCyclicGroupoid l = loop_cyclic_groupoid(g);
        const FiniteGroupoid& z = l.cyclic.base;
        for (ObjId a = 0; a < static_cast<ObjId>(z.num_objects()); ++a)
            for (ObjId b = 0; b < static_cast<ObjId>(z.num_objects()); ++b) {
                const auto hs = z.hom(a, b);
                std::set<ArrowId> moved;
                for (ArrowId h : hs) moved.insert(z.compose(l.cyclic.theta[static_cast<std::size_t>(b)], h));
                CHECK(moved == std::set<ArrowId>(hs.begin(), hs.end()));
            }
        CHECK(localize(with_trivial_theta(g)).quotient == g);
    }
}

TEST_CASE("centralizers and normalizers") {
    const FiniteGroupoid s3 = symmetric_group(3);
    const auto comps = invariant_components(loops(s3), s3);
    const std::vector<ArrowId> units{s3.unit(0)};
    const CentralizerNormalizer cu = centralizer_normalizer(s3, units);
    CHECK(cu.centralizer.cyclic.base.num_arrows() == 6);
    CHECK(cu.normalizer.quotient.num_arrows() == 6);
    const std::vector<ArrowId> transpositions{s3.find_arrow("(12)"), s3.find_arrow("(13)"), s3.find_arrow("(23)")};
    const CentralizerNormalizer ct = centralizer_normalizer(s3, transpositions);
    CHECK(ct.centralizer.cyclic.base.num_objects() == 3);
    for (ObjId c = 0; c < 3; ++c) {
        CHECK(ct.centralizer.cyclic.base.automorphisms(c).size() == 2);
        CHECK(ct.normalizer.quotient.automorphisms(c).size() == 1);
    }
    const std::vector<ArrowId> not_invariant{s3.find_arrow("(12)")};
    CHECK_THROWS(centralizer_normalizer(s3, not_invariant));
}

TEST_CASE("comma groupoids") {
    const FiniteGroupoid s3 = symmetric_group(3);
    const CommaGroupoid idc = comma_groupoid(identity_functor(s3), 0);
    CHECK(idc.groupoid.num_objects() == 6);
    CHECK(validate(idc.groupoid).ok());
    for (ObjId a = 0; a < 6; ++a)
        for (ObjId b = 0; b < 6; ++b) CHECK(idc.groupoid.hom(a, b).size() == 1);
    const FiniteGroupoid t = trivial_groupoid();
    CHECK(comma_groupoid(identity_functor(t), 0).groupoid.num_arrows() == 1);
    const FiniteGroupoid z2 = cyclic_group(2);
    const Functor collapse{&z2, &t, {0}, {0, 0}};
    const CommaGroupoid cc = comma_groupoid(collapse, 0);
    CHECK(cc.groupoid.num_objects() == 1);
    CHECK(cc.groupoid.automorphisms(0).size() == 2);
    const Functor bad{&t, &z2, {0}, {1}};
    CHECK_FALSE(bad.check().ok());
    CHECK_THROWS(comma_groupoid(bad, 0));
}

TEST_CASE("skeletons") {
    const Skeleton sp = skeleton(pair_groupoid(3));
    CHECK(sp.representatives.size() == 1);
    CHECK(sp.isotropy[0].num_arrows() == 1);
    CHECK(sp.essential_equivalence);
    const FiniteGroupoid d = discrete_groupoid(3);
    const Skeleton sd = skeleton(d);
    CHECK(sd.representatives.size() == 3);
    CHECK(sd.essential_equivalence);
    const FiniteGroupoid z2 = cyclic_group(2);
    const ActionGroupoid two = action_groupoid(involution_set(z2, {0, 1}), z2);
    const Skeleton s2 = skeleton(two.groupoid);
    CHECK(s2.representatives.size() == 2);
    for (const auto& iso : s2.isotropy) CHECK(iso.num_arrows() == 2);
    CHECK(s2.essential_equivalence);
    CHECK(s2.inclusion(two.groupoid).check().ok());
    const LoopCyclicGroupoid l = loop_cyclic_groupoid(symmetric_group(3));
    const Skeleton sl = skeleton(l.cyclic.base);
    CHECK(sl.representatives.size() == 3);
    CHECK(sl.essential_equivalence);
}

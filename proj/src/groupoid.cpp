#include "cychom/groupoid.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace cychom {

namespace {

std::string pair_str(const std::string& a, const std::string& b) { return "(" + a + "," + b + ")"; }

}  // namespace

FiniteGroupoid::FiniteGroupoid(std::vector<std::string> objects, std::vector<Arrow> arrows,
                               std::span<const ComposeRow> table)
    : objects_(std::move(objects)), arrows_(std::move(arrows)) {
    const std::size_t na = arrows_.size();
    const auto no = static_cast<int>(objects_.size());
    for (const auto& a : arrows_)
        if (a.src < 0 || a.src >= no || a.tgt < 0 || a.tgt >= no)
            throw std::invalid_argument("arrow " + a.name + " has an unknown source or target");
    table_.assign(na * na, kNone);
    for (const auto& row : table) {
        const auto n = static_cast<ArrowId>(na);
        if (row.g < 0 || row.g >= n || row.h < 0 || row.h >= n || row.gh < 0 || row.gh >= n)
            throw std::invalid_argument("composition table refers to an unknown arrow");
        table_[static_cast<std::size_t>(row.g) * na + static_cast<std::size_t>(row.h)] = row.gh;
    }
    // A unit at c is an endo-arrow acting trivially on both sides wherever the table is defined.
    unit_.assign(objects_.size(), kNone);
    for (ArrowId e = 0; e < static_cast<ArrowId>(na); ++e) {
        const ObjId c = src(e);
        if (tgt(e) != c || unit_[static_cast<std::size_t>(c)] != kNone) continue;
        bool ok = true;
        for (ArrowId g = 0; g < static_cast<ArrowId>(na) && ok; ++g) {
            if (tgt(g) == c && compose_or_none(e, g) != g) ok = false;
            if (src(g) == c && compose_or_none(g, e) != g) ok = false;
        }
        if (ok) unit_[static_cast<std::size_t>(c)] = e;
    }
    inverse_.assign(na, kNone);
    for (ArrowId g = 0; g < static_cast<ArrowId>(na); ++g) {
        const ArrowId ut = unit_[static_cast<std::size_t>(tgt(g))];
        const ArrowId us = unit_[static_cast<std::size_t>(src(g))];
        if (ut == kNone || us == kNone) continue;
        for (ArrowId h : hom(tgt(g), src(g)))
            if (compose_or_none(g, h) == ut && compose_or_none(h, g) == us) {
                inverse_[static_cast<std::size_t>(g)] = h;
                break;
            }
    }
}

ArrowId FiniteGroupoid::compose(ArrowId g, ArrowId h) const {
    if (!composable(g, h))
        throw std::invalid_argument("arrows " + arrow(g).name + " and " + arrow(h).name + " are not composable");
    const ArrowId gh = compose_or_none(g, h);
    if (gh == kNone) throw std::logic_error("composition table has no entry for " + pair_str(arrow(g).name, arrow(h).name));
    return gh;
}

ArrowId FiniteGroupoid::compose_all(std::span<const ArrowId> gs) const {
    if (gs.empty()) throw std::invalid_argument("empty product has no defined object");
    ArrowId acc = gs.front();
    for (std::size_t i = 1; i < gs.size(); ++i) acc = compose(acc, gs[i]);
    return acc;
}

ArrowId FiniteGroupoid::unit(ObjId c) const {
    const ArrowId u = unit_.at(static_cast<std::size_t>(c));
    if (u == kNone) throw std::logic_error("object " + object_name(c) + " has no unit");
    return u;
}

ArrowId FiniteGroupoid::inverse(ArrowId g) const {
    const ArrowId h = inverse_.at(static_cast<std::size_t>(g));
    if (h == kNone) throw std::logic_error("arrow " + arrow(g).name + " has no inverse");
    return h;
}

std::vector<ArrowId> FiniteGroupoid::hom(ObjId from, ObjId to) const {
    std::vector<ArrowId> out;
    for (ArrowId g = 0; g < static_cast<ArrowId>(arrows_.size()); ++g)
        if (src(g) == from && tgt(g) == to) out.push_back(g);
    return out;
}

std::vector<FiniteGroupoid::ComposeRow> FiniteGroupoid::table_rows() const {
    std::vector<ComposeRow> rows;
    const auto na = static_cast<ArrowId>(arrows_.size());
    for (ArrowId g = 0; g < na; ++g)
        for (ArrowId h = 0; h < na; ++h)
            if (const ArrowId gh = compose_or_none(g, h); gh != kNone) rows.push_back({g, h, gh});
    return rows;
}

ObjId FiniteGroupoid::find_object(const std::string& name) const {
    auto it = std::find(objects_.begin(), objects_.end(), name);
    return it == objects_.end() ? kNone : static_cast<ObjId>(it - objects_.begin());
}

ArrowId FiniteGroupoid::find_arrow(const std::string& name) const {
    auto it = std::find_if(arrows_.begin(), arrows_.end(), [&](const Arrow& a) { return a.name == name; });
    return it == arrows_.end() ? kNone : static_cast<ArrowId>(it - arrows_.begin());
}

bool operator==(const FiniteGroupoid& a, const FiniteGroupoid& b) {
    if (a.objects_ != b.objects_ || a.table_ != b.table_ || a.arrows_.size() != b.arrows_.size()) return false;
    for (std::size_t i = 0; i < a.arrows_.size(); ++i) {
        const Arrow& x = a.arrows_[i];
        const Arrow& y = b.arrows_[i];
        if (x.name != y.name || x.src != y.src || x.tgt != y.tgt) return false;
    }
    return true;
}

ValidationReport validate(const FiniteGroupoid& g) {
    ValidationReport rep;
    auto& v = rep.violations;
    const auto na = static_cast<ArrowId>(g.num_arrows());
    const auto& nm = [&](ArrowId a) -> const std::string& { return g.arrow(a).name; };
    for (ArrowId x = 0; x < na; ++x)
        for (ArrowId y = 0; y < na; ++y) {
            const ArrowId xy = g.compose_or_none(x, y);
            if (!g.composable(x, y)) {
                if (xy != kNone) v.push_back("composition defined on non-composable pair " + pair_str(nm(x), nm(y)));
                continue;
            }
            if (xy == kNone) {
                v.push_back("composition missing for " + pair_str(nm(x), nm(y)));
                continue;
            }
            if (g.src(xy) != g.src(y) || g.tgt(xy) != g.tgt(x))
                v.push_back("product of " + pair_str(nm(x), nm(y)) + " has the wrong source or target");
        }
    for (ObjId c = 0; c < static_cast<ObjId>(g.num_objects()); ++c) {
        try {
            (void)g.unit(c);
        } catch (const std::logic_error&) {
            v.push_back("object " + g.object_name(c) + " has no two-sided unit");
        }
    }
    for (ArrowId x = 0; x < na; ++x) {
        try {
            (void)g.inverse(x);
        } catch (const std::logic_error&) {
            v.push_back("arrow " + nm(x) + " has no inverse");
        }
    }
    for (ArrowId x = 0; x < na; ++x)
        for (ArrowId y = 0; y < na; ++y) {
            if (!g.composable(x, y)) continue;
            const ArrowId xy = g.compose_or_none(x, y);
            if (xy == kNone) continue;
            for (ArrowId z = 0; z < na; ++z) {
                if (!g.composable(y, z)) continue;
                const ArrowId yz = g.compose_or_none(y, z);
                if (yz == kNone) continue;
                const ArrowId l = g.compose_or_none(xy, z);
                const ArrowId r = g.compose_or_none(x, yz);
                if (l != r) v.push_back("associativity fails on (" + nm(x) + "," + nm(y) + "," + nm(z) + ")");
            }
        }
    return rep;
}

FiniteGroupoid group_groupoid(const std::vector<std::string>& names, const std::vector<std::vector<int>>& mult,
                              const std::string& object) {
    const std::size_t n = names.size();
    if (mult.size() != n) throw std::invalid_argument("multiplication table has the wrong number of rows");
    std::vector<Arrow> arrows;
    for (const auto& s : names) arrows.push_back({s, 0, 0});
    std::vector<FiniteGroupoid::ComposeRow> rows;
    for (std::size_t a = 0; a < n; ++a) {
        if (mult[a].size() != n) throw std::invalid_argument("multiplication table row has the wrong length");
        for (std::size_t b = 0; b < n; ++b)
            rows.push_back({static_cast<ArrowId>(a), static_cast<ArrowId>(b), mult[a][b]});
    }
    return FiniteGroupoid({object}, std::move(arrows), rows);
}

FiniteGroupoid cyclic_group(int n) {
    if (n < 1) throw std::invalid_argument("cyclic group order must be positive");
    std::vector<std::string> names;
    std::vector<std::vector<int>> mult(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n)));
    for (int a = 0; a < n; ++a) {
        names.push_back(a == 0 ? "e" : a == 1 ? "g" : "g" + std::to_string(a));
        for (int b = 0; b < n; ++b) mult[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = (a + b) % n;
    }
    return group_groupoid(names, mult);
}

FiniteGroupoid symmetric_group(int n) {
    if (n < 1 || n > 5) throw std::invalid_argument("symmetric group degree must be in 1..5");
    std::vector<std::vector<int>> perms;
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    do perms.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    std::map<std::vector<int>, int> where;
    for (std::size_t i = 0; i < perms.size(); ++i) where[perms[i]] = static_cast<int>(i);
    // Cycle notation on 1..n, identity as "e".
    auto name = [n](const std::vector<int>& q) {
        std::string s;
        std::vector<bool> seen(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            if (seen[static_cast<std::size_t>(i)] || q[static_cast<std::size_t>(i)] == i) continue;
            s += "(";
            for (int j = i; !seen[static_cast<std::size_t>(j)]; j = q[static_cast<std::size_t>(j)]) {
                seen[static_cast<std::size_t>(j)] = true;
                s += std::to_string(j + 1);
            }
            s += ")";
        }
        return s.empty() ? std::string("e") : s;
    };
    std::vector<std::string> names;
    std::vector<std::vector<int>> mult(perms.size(), std::vector<int>(perms.size()));
    for (std::size_t a = 0; a < perms.size(); ++a) {
        names.push_back(name(perms[a]));
        for (std::size_t b = 0; b < perms.size(); ++b) {
            std::vector<int> c(static_cast<std::size_t>(n));
            for (std::size_t i = 0; i < c.size(); ++i) c[i] = perms[a][static_cast<std::size_t>(perms[b][i])];
            mult[a][b] = where.at(c);
        }
    }
    return group_groupoid(names, mult);
}

FiniteGroupoid trivial_groupoid() { return cyclic_group(1); }

FiniteGroupoid discrete_groupoid(int k) {
    if (k < 0) throw std::invalid_argument("negative object count");
    std::vector<std::string> objs;
    std::vector<Arrow> arrows;
    std::vector<FiniteGroupoid::ComposeRow> rows;
    for (int i = 0; i < k; ++i) {
        objs.push_back("x" + std::to_string(i));
        arrows.push_back({"1_x" + std::to_string(i), i, i});
        rows.push_back({i, i, i});
    }
    return FiniteGroupoid(std::move(objs), std::move(arrows), rows);
}

FiniteGroupoid pair_groupoid(int k) {
    if (k < 0) throw std::invalid_argument("negative object count");
    std::vector<std::string> objs;
    for (int i = 0; i < k; ++i) objs.push_back("x" + std::to_string(i));
    // Arrow (i <- j) has target i and source j; id = i*k + j.
    std::vector<Arrow> arrows;
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) arrows.push_back({"x" + std::to_string(i) + "<-x" + std::to_string(j), j, i});
    std::vector<FiniteGroupoid::ComposeRow> rows;
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            for (int l = 0; l < k; ++l) rows.push_back({i * k + j, j * k + l, i * k + l});
    return FiniteGroupoid(std::move(objs), std::move(arrows), rows);
}

ValidationReport Functor::check() const {
    ValidationReport rep;
    auto& v = rep.violations;
    if (src == nullptr || dst == nullptr) {
        v.push_back("functor has no source or target groupoid");
        return rep;
    }
    if (on_objects.size() != src->num_objects() || on_arrows.size() != src->num_arrows()) {
        v.push_back("functor tables have the wrong size");
        return rep;
    }
    const auto no = static_cast<ObjId>(dst->num_objects());
    const auto na = static_cast<ArrowId>(dst->num_arrows());
    for (ObjId c : on_objects)
        if (c < 0 || c >= no) v.push_back("functor sends an object outside the target");
    for (ArrowId a : on_arrows)
        if (a < 0 || a >= na) v.push_back("functor sends an arrow outside the target");
    if (!v.empty()) return rep;
    for (ArrowId g = 0; g < static_cast<ArrowId>(src->num_arrows()); ++g) {
        const ArrowId fg = on_arrows[static_cast<std::size_t>(g)];
        if (dst->src(fg) != on_objects[static_cast<std::size_t>(src->src(g))] ||
            dst->tgt(fg) != on_objects[static_cast<std::size_t>(src->tgt(g))])
            v.push_back("functor does not respect source and target of " + src->arrow(g).name);
    }
    for (ObjId c = 0; c < static_cast<ObjId>(src->num_objects()); ++c)
        if (on_arrows[static_cast<std::size_t>(src->unit(c))] != dst->unit(on_objects[static_cast<std::size_t>(c)]))
            v.push_back("functor does not preserve the unit at " + src->object_name(c));
    for (const auto& row : src->table_rows()) {
        const ArrowId fg = on_arrows[static_cast<std::size_t>(row.g)];
        const ArrowId fh = on_arrows[static_cast<std::size_t>(row.h)];
        if (!dst->composable(fg, fh) || dst->compose_or_none(fg, fh) != on_arrows[static_cast<std::size_t>(row.gh)])
            v.push_back("functor does not preserve the product " + pair_str(src->arrow(row.g).name, src->arrow(row.h).name));
    }
    return rep;
}

Functor identity_functor(const FiniteGroupoid& g) {
    Functor f{&g, &g, {}, {}};
    f.on_objects.resize(g.num_objects());
    std::iota(f.on_objects.begin(), f.on_objects.end(), 0);
    f.on_arrows.resize(g.num_arrows());
    std::iota(f.on_arrows.begin(), f.on_arrows.end(), 0);
    return f;
}

ValidationReport validate_action(const GSet& x, const FiniteGroupoid& g) {
    ValidationReport rep;
    auto& v = rep.violations;
    const std::size_t na = g.num_arrows();
    if (x.moment.size() != x.size() || x.action.size() != x.size() * na) {
        v.push_back("G-set tables have the wrong size");
        return rep;
    }
    for (int p = 0; p < static_cast<int>(x.size()); ++p) {
        const ObjId m = x.moment[static_cast<std::size_t>(p)];
        if (m < 0 || m >= static_cast<ObjId>(g.num_objects())) {
            v.push_back("point " + x.points[static_cast<std::size_t>(p)] + " lies over no object");
            continue;
        }
        for (ArrowId a = 0; a < static_cast<ArrowId>(na); ++a) {
            const int q = x.act(p, a, na);
            if (g.tgt(a) != m) {
                if (q != kNone) v.push_back("action defined on non-composable pair at " + x.points[static_cast<std::size_t>(p)]);
                continue;
            }
            if (q < 0 || q >= static_cast<int>(x.size())) {
                v.push_back("action of " + g.arrow(a).name + " on " + x.points[static_cast<std::size_t>(p)] + " is missing");
                continue;
            }
            if (x.moment[static_cast<std::size_t>(q)] != g.src(a))
                v.push_back("moment of " + x.points[static_cast<std::size_t>(p)] + "*" + g.arrow(a).name + " is not the source");
        }
        if (x.act(p, g.unit(m), na) != p) v.push_back("unit does not fix " + x.points[static_cast<std::size_t>(p)]);
    }
    if (!v.empty()) return rep;
    for (int p = 0; p < static_cast<int>(x.size()); ++p)
        for (const auto& row : g.table_rows()) {
            if (g.tgt(row.g) != x.moment[static_cast<std::size_t>(p)]) continue;
            if (x.act(x.act(p, row.g, na), row.h, na) != x.act(p, row.gh, na))
                v.push_back("action is not associative at " + x.points[static_cast<std::size_t>(p)]);
        }
    return rep;
}

GSet restrict_gset(const GSet& x, const FiniteGroupoid& g, std::span<const int> points) {
    const std::size_t na = g.num_arrows();
    std::vector<int> where(x.size(), kNone);
    for (std::size_t i = 0; i < points.size(); ++i) where[static_cast<std::size_t>(points[i])] = static_cast<int>(i);
    GSet out;
    out.action.assign(points.size() * na, kNone);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const int p = points[i];
        out.points.push_back(x.points[static_cast<std::size_t>(p)]);
        out.moment.push_back(x.moment[static_cast<std::size_t>(p)]);
        for (std::size_t a = 0; a < na; ++a) {
            const int q = x.act(p, static_cast<ArrowId>(a), na);
            if (q == kNone) continue;
            if (where[static_cast<std::size_t>(q)] == kNone)
                throw std::invalid_argument("subset is not invariant: " + x.points[static_cast<std::size_t>(p)] + " moves outside");
            out.action[i * na + a] = where[static_cast<std::size_t>(q)];
        }
    }
    return out;
}

ArrowId ActionGroupoid::arrow_of(int x, ArrowId g) const {
    return index[static_cast<std::size_t>(x) * base_arrows + static_cast<std::size_t>(g)];
}

GSet permutation_set(const FiniteGroupoid& group, const std::vector<std::vector<int>>& image) {
    if (group.num_objects() != 1) throw std::invalid_argument("permutation actions need a one-object groupoid");
    if (image.size() != group.num_arrows()) throw std::invalid_argument("one permutation per group element is required");
    const std::size_t k = image.empty() ? 0 : image.front().size();
    GSet x;
    for (std::size_t p = 0; p < k; ++p) {
        x.points.push_back(std::to_string(p));
        x.moment.push_back(0);
    }
    x.action.assign(k * group.num_arrows(), kNone);
    for (std::size_t g = 0; g < image.size(); ++g) {
        if (image[g].size() != k) throw std::invalid_argument("permutations have different lengths");
        for (std::size_t p = 0; p < k; ++p) x.action[p * group.num_arrows() + g] = image[g][p];
    }
    return x;
}

ActionGroupoid action_groupoid(const GSet& x, const FiniteGroupoid& g) {
    if (auto rep = validate_action(x, g); !rep.ok()) throw std::invalid_argument("action axiom violated: " + rep.violations.front());
    const std::size_t na = g.num_arrows();
    ActionGroupoid out;
    out.base_arrows = na;
    out.index.assign(x.size() * na, kNone);
    std::vector<Arrow> arrows;
    for (int p = 0; p < static_cast<int>(x.size()); ++p)
        for (ArrowId a = 0; a < static_cast<ArrowId>(na); ++a) {
            const int q = x.act(p, a, na);
            if (q == kNone) continue;
            out.index[static_cast<std::size_t>(p) * na + static_cast<std::size_t>(a)] = static_cast<ArrowId>(arrows.size());
            arrows.push_back({pair_str(x.points[static_cast<std::size_t>(p)], g.arrow(a).name), q, p});
            out.arrow_point.push_back(p);
            out.arrow_group.push_back(a);
        }
    std::vector<FiniteGroupoid::ComposeRow> rows;
    for (ArrowId u = 0; u < static_cast<ArrowId>(arrows.size()); ++u)
        for (ArrowId w = 0; w < static_cast<ArrowId>(arrows.size()); ++w) {
            if (arrows[static_cast<std::size_t>(u)].src != arrows[static_cast<std::size_t>(w)].tgt) continue;
            const ArrowId gh = g.compose(out.arrow_group[static_cast<std::size_t>(u)], out.arrow_group[static_cast<std::size_t>(w)]);
            rows.push_back({u, w, out.arrow_of(out.arrow_point[static_cast<std::size_t>(u)], gh)});
        }
    out.groupoid = FiniteGroupoid(x.points, std::move(arrows), rows);
    return out;
}

LoopSpace loops(const FiniteGroupoid& g) {
    LoopSpace ls;
    const std::size_t na = g.num_arrows();
    std::vector<int> where(na, kNone);
    for (ArrowId a = 0; a < static_cast<ArrowId>(na); ++a)
        if (g.src(a) == g.tgt(a)) {
            where[static_cast<std::size_t>(a)] = static_cast<int>(ls.loops.size());
            ls.loops.push_back(a);
            ls.gset.points.push_back(g.arrow(a).name);
            ls.gset.moment.push_back(g.src(a));
        }
    ls.gset.action.assign(ls.loops.size() * na, kNone);
    for (std::size_t i = 0; i < ls.loops.size(); ++i) {
        const ArrowId l = ls.loops[i];
        for (ArrowId a = 0; a < static_cast<ArrowId>(na); ++a) {
            if (g.tgt(a) != g.src(l)) continue;
            const ArrowId conj = g.compose(g.inverse(a), g.compose(l, a));
            ls.gset.action[i * na + static_cast<std::size_t>(a)] = where[static_cast<std::size_t>(conj)];
        }
    }
    return ls;
}

std::vector<std::vector<ArrowId>> invariant_components(const LoopSpace& ls, const FiniteGroupoid& g) {
    const std::size_t na = g.num_arrows();
    std::vector<int> comp(ls.loops.size(), kNone);
    std::vector<std::vector<ArrowId>> out;
    for (std::size_t i = 0; i < ls.loops.size(); ++i) {
        if (comp[i] != kNone) continue;
        const int c = static_cast<int>(out.size());
        out.emplace_back();
        std::vector<int> stack{static_cast<int>(i)};
        comp[i] = c;
        while (!stack.empty()) {
            const int p = stack.back();
            stack.pop_back();
            out.back().push_back(ls.loops[static_cast<std::size_t>(p)]);
            for (std::size_t a = 0; a < na; ++a) {
                const int q = ls.gset.act(p, static_cast<ArrowId>(a), na);
                if (q != kNone && comp[static_cast<std::size_t>(q)] == kNone) {
                    comp[static_cast<std::size_t>(q)] = c;
                    stack.push_back(q);
                }
            }
        }
        std::sort(out.back().begin(), out.back().end());
    }
    return out;
}

bool is_invariant(const LoopSpace& ls, const FiniteGroupoid& g, std::span<const ArrowId> subset) {
    const std::size_t na = g.num_arrows();
    std::vector<bool> in(na, false);
    for (ArrowId a : subset) {
        if (a < 0 || a >= static_cast<ArrowId>(na) || g.src(a) != g.tgt(a)) return false;
        in[static_cast<std::size_t>(a)] = true;
    }
    for (std::size_t i = 0; i < ls.loops.size(); ++i) {
        if (!in[static_cast<std::size_t>(ls.loops[i])]) continue;
        for (std::size_t a = 0; a < na; ++a) {
            const int q = ls.gset.act(static_cast<int>(i), static_cast<ArrowId>(a), na);
            if (q != kNone && !in[static_cast<std::size_t>(ls.loops[static_cast<std::size_t>(q)])]) return false;
        }
    }
    return true;
}

ValidationReport validate(const CyclicGroupoid& cg) {
    ValidationReport rep = validate(cg.base);
    if (!rep.ok()) return rep;
    auto& v = rep.violations;
    const FiniteGroupoid& g = cg.base;
    if (cg.theta.size() != g.num_objects()) {
        v.push_back("theta must have one arrow per object");
        return rep;
    }
    for (ObjId c = 0; c < static_cast<ObjId>(g.num_objects()); ++c) {
        const ArrowId t = cg.theta[static_cast<std::size_t>(c)];
        if (t < 0 || t >= static_cast<ArrowId>(g.num_arrows()) || g.src(t) != c || g.tgt(t) != c)
            v.push_back("theta at " + g.object_name(c) + " is not an automorphism of it");
    }
    if (!v.empty()) return rep;
    for (ArrowId a = 0; a < static_cast<ArrowId>(g.num_arrows()); ++a)
        if (g.compose(a, cg.theta[static_cast<std::size_t>(g.src(a))]) != g.compose(cg.theta[static_cast<std::size_t>(g.tgt(a))], a))
            v.push_back("theta is not natural with respect to " + g.arrow(a).name);
    return rep;
}

CyclicGroupoid with_trivial_theta(const FiniteGroupoid& g) {
    CyclicGroupoid cg{g, {}};
    for (ObjId c = 0; c < static_cast<ObjId>(g.num_objects()); ++c) cg.theta.push_back(g.unit(c));
    return cg;
}

int arrow_order(const FiniteGroupoid& g, ArrowId a) {
    if (g.src(a) != g.tgt(a)) throw std::invalid_argument("order is only defined for loops");
    const ArrowId u = g.unit(g.src(a));
    int k = 1;
    for (ArrowId p = a; p != u; p = g.compose(p, a)) {
        if (++k > static_cast<int>(g.num_arrows()) + 1) throw std::logic_error("loop has no finite order");
    }
    return k;
}

Classification classify(const CyclicGroupoid& cg) {
    Classification c;
    for (ArrowId t : cg.theta) c.theta_orders.push_back(arrow_order(cg.base, t));
    c.kind = CyclicKind::elliptic;
    return c;
}

void euler_class(const CyclicGroupoid& cg) {
    const Classification c = classify(cg);
    const int top = c.theta_orders.empty() ? 1 : *std::max_element(c.theta_orders.begin(), c.theta_orders.end());
    throw std::domain_error("the Euler class is defined only for hyperbolic cyclic groupoids; this one is elliptic "
                            "(every theta has finite order, largest " + std::to_string(top) + ")");
}

Functor Localization::projection(const CyclicGroupoid& cg) const {
    Functor f{&cg.base, &quotient, {}, arrow_class};
    f.on_objects.resize(cg.base.num_objects());
    std::iota(f.on_objects.begin(), f.on_objects.end(), 0);
    return f;
}

Localization localize(const CyclicGroupoid& cg) {
    if (auto rep = validate(cg); !rep.ok()) throw std::invalid_argument("not a cyclic groupoid: " + rep.violations.front());
    const FiniteGroupoid& g = cg.base;
    const auto na = static_cast<ArrowId>(g.num_arrows());
    Localization loc;
    loc.arrow_class.assign(g.num_arrows(), kNone);
    std::vector<ArrowId> rep_of;
    std::vector<Arrow> arrows;
    for (ArrowId a = 0; a < na; ++a) {
        if (loc.arrow_class[static_cast<std::size_t>(a)] != kNone) continue;
        const auto cls = static_cast<ArrowId>(arrows.size());
        const ArrowId th = cg.theta[static_cast<std::size_t>(g.tgt(a))];
        int orbit = 0;
        for (ArrowId b = a; loc.arrow_class[static_cast<std::size_t>(b)] == kNone; b = g.compose(th, b), ++orbit)
            loc.arrow_class[static_cast<std::size_t>(b)] = cls;
        // Singleton orbits keep their name, so trivial theta gives back the same groupoid.
        arrows.push_back({orbit == 1 ? g.arrow(a).name : "[" + g.arrow(a).name + "]", g.src(a), g.tgt(a)});
        rep_of.push_back(a);
    }
    std::vector<ArrowId> table(arrows.size() * arrows.size(), kNone);
    for (const auto& row : g.table_rows()) {
        const auto cg_ = static_cast<std::size_t>(loc.arrow_class[static_cast<std::size_t>(row.g)]);
        const auto ch = static_cast<std::size_t>(loc.arrow_class[static_cast<std::size_t>(row.h)]);
        ArrowId& slot = table[cg_ * arrows.size() + ch];
        const ArrowId prod = loc.arrow_class[static_cast<std::size_t>(row.gh)];
        if (slot != kNone && slot != prod) throw std::logic_error("composition is not well defined on theta-orbits");
        slot = prod;
    }
    std::vector<FiniteGroupoid::ComposeRow> rows;
    for (std::size_t i = 0; i < arrows.size(); ++i)
        for (std::size_t j = 0; j < arrows.size(); ++j)
            if (table[i * arrows.size() + j] != kNone)
                rows.push_back({static_cast<ArrowId>(i), static_cast<ArrowId>(j), table[i * arrows.size() + j]});
    loc.quotient = FiniteGroupoid(g.object_names(), std::move(arrows), rows);
    return loc;
}

LoopCyclicGroupoid loop_cyclic_groupoid(const FiniteGroupoid& g) {
    const LoopSpace ls = loops(g);
    return loop_cyclic_groupoid(g, ls.loops);
}

LoopCyclicGroupoid loop_cyclic_groupoid(const FiniteGroupoid& g, std::span<const ArrowId> component) {
    const LoopSpace ls = loops(g);
    if (!is_invariant(ls, g, component)) throw std::invalid_argument("set of loops is not invariant under conjugation");
    std::vector<ArrowId> sorted(component.begin(), component.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<int> pts;
    for (ArrowId a : sorted) pts.push_back(static_cast<int>(std::find(ls.loops.begin(), ls.loops.end(), a) - ls.loops.begin()));
    const GSet sub = restrict_gset(ls.gset, g, pts);
    LoopCyclicGroupoid out;
    out.action = action_groupoid(sub, g);
    out.loops = sorted;
    out.cyclic.base = out.action.groupoid;
    for (std::size_t i = 0; i < sorted.size(); ++i) out.cyclic.theta.push_back(out.action.arrow_of(static_cast<int>(i), sorted[i]));
    return out;
}

CentralizerNormalizer centralizer_normalizer(const FiniteGroupoid& g, std::span<const ArrowId> component) {
    CentralizerNormalizer out;
    out.centralizer = loop_cyclic_groupoid(g, component);
    out.normalizer = localize(out.centralizer.cyclic);
    return out;
}

CommaGroupoid comma_groupoid(const Functor& phi, ObjId d) {
    if (auto rep = phi.check(); !rep.ok()) throw std::invalid_argument("not a functor: " + rep.violations.front());
    const FiniteGroupoid& src = *phi.src;
    const FiniteGroupoid& dst = *phi.dst;
    CommaGroupoid out;
    std::vector<std::string> objs;
    std::map<std::pair<ArrowId, ObjId>, ObjId> where;
    for (ObjId c = 0; c < static_cast<ObjId>(src.num_objects()); ++c)
        for (ArrowId k : dst.hom(d, phi.on_objects[static_cast<std::size_t>(c)])) {
            where[{k, c}] = static_cast<ObjId>(objs.size());
            objs.push_back(pair_str(dst.arrow(k).name, src.object_name(c)));
            out.object_base.push_back(c);
            out.object_arrow.push_back(k);
        }
    std::vector<Arrow> arrows;
    for (ObjId o = 0; o < static_cast<ObjId>(objs.size()); ++o) {
        const ObjId c = out.object_base[static_cast<std::size_t>(o)];
        const ArrowId k = out.object_arrow[static_cast<std::size_t>(o)];
        for (ArrowId a = 0; a < static_cast<ArrowId>(src.num_arrows()); ++a) {
            if (src.src(a) != c) continue;
            const ArrowId k2 = dst.compose(phi.on_arrows[static_cast<std::size_t>(a)], k);
            const ObjId o2 = where.at({k2, src.tgt(a)});
            arrows.push_back({src.arrow(a).name + "@" + objs[static_cast<std::size_t>(o)], o, o2});
            out.arrow_base.push_back(a);
        }
    }
    // (g', o') after (g, o) is g' g at o.
    std::map<std::pair<ArrowId, ObjId>, ArrowId> arrow_at;
    for (ArrowId i = 0; i < static_cast<ArrowId>(arrows.size()); ++i)
        arrow_at[{out.arrow_base[static_cast<std::size_t>(i)], arrows[static_cast<std::size_t>(i)].src}] = i;
    std::vector<FiniteGroupoid::ComposeRow> rows;
    for (ArrowId i = 0; i < static_cast<ArrowId>(arrows.size()); ++i)
        for (ArrowId j = 0; j < static_cast<ArrowId>(arrows.size()); ++j) {
            if (arrows[static_cast<std::size_t>(i)].src != arrows[static_cast<std::size_t>(j)].tgt) continue;
            const ArrowId prod = src.compose(out.arrow_base[static_cast<std::size_t>(i)], out.arrow_base[static_cast<std::size_t>(j)]);
            rows.push_back({i, j, arrow_at.at({prod, arrows[static_cast<std::size_t>(j)].src})});
        }
    out.groupoid = FiniteGroupoid(std::move(objs), std::move(arrows), rows);
    return out;
}

Skeleton skeleton(const FiniteGroupoid& g) {
    Skeleton sk;
    const auto no = static_cast<ObjId>(g.num_objects());
    std::vector<int> orbit(g.num_objects(), kNone);
    for (ObjId c = 0; c < no; ++c) {
        if (orbit[static_cast<std::size_t>(c)] != kNone) continue;
        const int k = static_cast<int>(sk.representatives.size());
        sk.representatives.push_back(c);
        for (ArrowId a = 0; a < static_cast<ArrowId>(g.num_arrows()); ++a)
            if (g.tgt(a) == c) orbit[static_cast<std::size_t>(g.src(a))] = k;
    }
    std::vector<std::string> objs;
    std::vector<Arrow> arrows;
    std::vector<ArrowId> incl;
    std::vector<FiniteGroupoid::ComposeRow> rows;
    for (std::size_t k = 0; k < sk.representatives.size(); ++k) {
        const ObjId c = sk.representatives[k];
        const std::vector<ArrowId> aut = g.automorphisms(c);
        std::vector<std::string> names;
        std::vector<std::vector<int>> mult(aut.size(), std::vector<int>(aut.size()));
        const auto base = static_cast<ArrowId>(arrows.size());
        for (std::size_t i = 0; i < aut.size(); ++i) {
            names.push_back(g.arrow(aut[i]).name);
            arrows.push_back({g.arrow(aut[i]).name, static_cast<ObjId>(k), static_cast<ObjId>(k)});
            incl.push_back(aut[i]);
            for (std::size_t j = 0; j < aut.size(); ++j) {
                const auto pos = static_cast<int>(std::find(aut.begin(), aut.end(), g.compose(aut[i], aut[j])) - aut.begin());
                mult[i][j] = pos;
                rows.push_back({base + static_cast<ArrowId>(i), base + static_cast<ArrowId>(j), base + pos});
            }
        }
        sk.isotropy.push_back(group_groupoid(names, mult, g.object_name(c)));
        objs.push_back(g.object_name(c));
    }
    sk.disjoint_union = FiniteGroupoid(std::move(objs), std::move(arrows), rows);
    sk.inclusion_arrows = std::move(incl);

    const Functor f = sk.inclusion(g);
    bool ok = f.check().ok();
    for (ObjId c = 0; c < no && ok; ++c) ok = !g.hom(c, sk.representatives[static_cast<std::size_t>(orbit[static_cast<std::size_t>(c)])]).empty();
    for (ObjId x = 0; x < static_cast<ObjId>(sk.representatives.size()) && ok; ++x)
        for (ObjId y = 0; y < static_cast<ObjId>(sk.representatives.size()) && ok; ++y) {
            std::vector<ArrowId> image;
            for (ArrowId a : sk.disjoint_union.hom(x, y)) image.push_back(f.on_arrows[static_cast<std::size_t>(a)]);
            std::sort(image.begin(), image.end());
            ok = image == g.hom(sk.representatives[static_cast<std::size_t>(x)], sk.representatives[static_cast<std::size_t>(y)]);
        }
    sk.essential_equivalence = ok;
    return sk;
}

Functor Skeleton::inclusion(const FiniteGroupoid& original) const {
    return Functor{&disjoint_union, &original, representatives, inclusion_arrows};
}

Nerve::Nerve(const FiniteGroupoid& g, int n) : n_(n), arrows_(g.num_arrows()) {
    if (n < 0) throw std::invalid_argument("nerve degree must be non-negative");
    if (n == 0) {
        for (ObjId c = 0; c < static_cast<ObjId>(g.num_objects()); ++c) {
            where_[static_cast<std::uint64_t>(c)] = c;
            anchor_.push_back(c);
        }
        return;
    }
    // Keys are base-|arrows| numerals; refuse sizes that would overflow them.
    long double cap = 1;
    for (int i = 0; i < n; ++i) cap *= static_cast<long double>(arrows_ + 1);
    if (cap > 1.8e19L) throw std::length_error("nerve degree too large to index");
    std::vector<std::vector<ArrowId>> ending_at(g.num_objects());
    for (ArrowId a = 0; a < static_cast<ArrowId>(arrows_); ++a) ending_at[static_cast<std::size_t>(g.tgt(a))].push_back(a);
    std::vector<ArrowId> cur(static_cast<std::size_t>(n));
    auto rec = [&](auto&& self, int depth) -> void {
        if (depth == n) {
            where_[key(cur)] = static_cast<std::int64_t>(anchor_.size());
            anchor_.push_back(g.tgt(cur[0]));
            flat_.insert(flat_.end(), cur.begin(), cur.end());
            return;
        }
        if (depth == 0) {
            for (ArrowId a = 0; a < static_cast<ArrowId>(arrows_); ++a) {
                cur[0] = a;
                self(self, 1);
            }
            return;
        }
        for (ArrowId a : ending_at[static_cast<std::size_t>(g.src(cur[static_cast<std::size_t>(depth - 1)]))]) {
            cur[static_cast<std::size_t>(depth)] = a;
            self(self, depth + 1);
        }
    };
    rec(rec, 0);
}

std::uint64_t Nerve::key(std::span<const ArrowId> s) const {
    std::uint64_t k = 0;
    for (ArrowId a : s) k = k * (arrows_ + 1) + static_cast<std::uint64_t>(a) + 1;
    return k;
}

std::int64_t Nerve::find(std::span<const ArrowId> s) const {
    if (static_cast<int>(s.size()) != n_ || n_ == 0) return kNone;
    for (ArrowId a : s)
        if (a < 0 || a >= static_cast<ArrowId>(arrows_)) return kNone;
    auto it = where_.find(key(s));
    return it == where_.end() ? kNone : it->second;
}

std::int64_t Nerve::find_object(ObjId c) const {
    if (n_ != 0) return kNone;
    auto it = where_.find(static_cast<std::uint64_t>(c));
    return it == where_.end() ? kNone : it->second;
}

std::vector<std::vector<ArrowId>> nerve(const FiniteGroupoid& g, int n) {
    const Nerve nv(g, n);
    std::vector<std::vector<ArrowId>> out;
    out.reserve(nv.size());
    if (n == 0) {
        for (ObjId c = 0; c < static_cast<ObjId>(g.num_objects()); ++c) out.push_back({g.unit(c)});
        return out;
    }
    for (std::size_t i = 0; i < nv.size(); ++i) out.emplace_back(nv.at(i).begin(), nv.at(i).end());
    return out;
}

}  // namespace cychom

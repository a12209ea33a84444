#include "cychom/crossed.hpp"

#include <algorithm>
#include <future>
#include <numeric>
#include <stdexcept>

#include "cychom/linalg.hpp"

namespace cychom {

namespace {

std::size_t uz(int v) { return static_cast<std::size_t>(v); }
std::size_t uz(std::int64_t v) { return static_cast<std::size_t>(v); }

std::size_t product_of(std::span<const std::size_t> dims) {
    return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

Mat kron_power(const Mat& m, int copies) {
    Mat out = Mat::identity(1);
    for (int i = 0; i < copies; ++i) out = kron(out, m);
    return out;
}

// Moves the last tensor factor to the front.
Mat rotation(std::span<const std::size_t> dims) {
    const std::size_t total = product_of(dims);
    const std::size_t last = dims.back();
    const std::size_t head = total / std::max<std::size_t>(last, 1);
    std::vector<SparseVec> cols;
    cols.reserve(total);
    for (std::size_t i = 0; i < total; ++i) cols.push_back(unit_vec(static_cast<Index>((i % last) * head + i / last)));
    return Mat::from_columns(total, std::move(cols));
}

// Block-sparse operator: block i of the source lands in one target block.
struct BlockTarget {
    std::size_t offset;
    Mat map;
};

template <class F>
Mat assemble(std::size_t rows, std::span<const std::size_t> offsets, F&& target_of) {
    std::vector<SparseVec> cols;
    cols.reserve(offsets.back());
    for (std::size_t i = 0; i + 1 < offsets.size(); ++i) {
        const BlockTarget t = target_of(i);
        for (std::size_t j = 0; j < t.map.cols(); ++j) cols.push_back(shifted(t.map.col(j), static_cast<Index>(t.offset)));
    }
    return Mat::from_columns(rows, std::move(cols));
}

struct CrossedLayout {
    std::vector<BurgheleaSpace> spaces;
    std::vector<std::vector<std::size_t>> offsets;
    std::vector<std::size_t> dims;
};

CrossedLayout crossed_layout(const GAlgebraSheaf& a, const FiniteGroupoid& g, int top,
                             std::span<const ArrowId> const* component) {
    CrossedLayout out;
    for (int n = 0; n <= top; ++n) {
        out.spaces.push_back(component ? BurgheleaSpace(g, n, *component) : BurgheleaSpace(g, n));
        const BurgheleaSpace& sp = out.spaces.back();
        std::vector<std::size_t> off{0};
        for (std::size_t i = 0; i < sp.size(); ++i) {
            std::size_t d = 1;
            for (ArrowId x : sp.at(i)) d *= a.sheaf.stalk(g.src(x));
            off.push_back(off.back() + d);
        }
        out.dims.push_back(off.back());
        out.offsets.push_back(std::move(off));
    }
    return out;
}

CyclicModule build_crossed(const GAlgebraSheaf& a, const FiniteGroupoid& g, int top, std::span<const ArrowId> const* component) {
    if (top < 0) throw std::invalid_argument("window must be non-negative");
    if (auto rep = validate(g, a); !rep.ok()) throw std::invalid_argument("invalid algebra sheaf: " + rep.violations.front());
    const CrossedLayout lay = crossed_layout(a, g, top, component);
    // Multiplication after transport: x (x) y -> (x . h) y for y over src h.
    std::vector<Mat> transported_product;
    for (ArrowId h = 0; h < static_cast<ArrowId>(g.num_arrows()); ++h) {
        const FinAlgebra& alg = a.algebra(g.src(h));
        transported_product.push_back(alg.product() * kron(a.sheaf.action(h), Mat::identity(alg.dim())));
    }
    std::vector<Mat> unit_col;
    for (ObjId c = 0; c < static_cast<ObjId>(g.num_objects()); ++c)
        unit_col.push_back(Mat::from_columns(a.algebra(c).dim(), {a.algebra(c).unit()}));

    CyclicModule cm{1, CyclicOperators::shaped(lay.dims)};
    std::vector<ArrowId> buf;
    std::vector<std::size_t> fdims;
    auto factor_dims = [&](std::span<const ArrowId> s) {
        fdims.clear();
        for (ArrowId x : s) fdims.push_back(a.sheaf.stalk(g.src(x)));
        return std::span<const std::size_t>(fdims);
    };
    auto locate = [&](int n) {
        const std::int64_t k = lay.spaces[uz(n)].find(buf);
        if (k < 0) throw std::logic_error("crossed module: string left the Burghelea space");
        return lay.offsets[uz(n)][uz(k)];
    };
    for (int n = 0; n <= top; ++n) {
        const BurgheleaSpace& sp = lay.spaces[uz(n)];
        const auto& off = lay.offsets[uz(n)];
        cm.ops.cyclic[uz(n)] = assemble(lay.dims[uz(n)], off, [&](std::size_t i) {
            const auto s = sp.at(i);
            buf.assign(s.begin(), s.end());
            std::rotate(buf.begin(), buf.end() - 1, buf.end());
            return BlockTarget{locate(n), rotation(factor_dims(s))};
        });
        for (int f = 0; f < n; ++f) {
            cm.ops.faces[uz(n)].push_back(assemble(lay.dims[uz(n - 1)], off, [&](std::size_t i) {
                const auto s = sp.at(i);
                const auto d = factor_dims(s);
                const std::size_t left = product_of(d.first(uz(f)));
                const std::size_t right = product_of(d.subspan(uz(f) + 2));
                buf.assign(s.begin(), s.end());
                buf[uz(f)] = g.compose(s[uz(f)], s[uz(f) + 1]);
                buf.erase(buf.begin() + f + 1);
                return BlockTarget{locate(n - 1), kron_between(left, transported_product[uz(s[uz(f) + 1])], right)};
            }));
        }
        if (n >= 1) cm.ops.faces[uz(n)].push_back(cm.ops.faces[uz(n)][0] * cm.ops.cyclic[uz(n)]);
        for (int e = 0; n < top && e <= n; ++e) {
            cm.ops.degens[uz(n)].push_back(assemble(lay.dims[uz(n + 1)], off, [&](std::size_t i) {
                const auto s = sp.at(i);
                const auto d = factor_dims(s);
                const ObjId at = g.src(s[uz(e)]);
                buf.assign(s.begin(), s.end());
                buf.insert(buf.begin() + e + 1, g.unit(at));
                return BlockTarget{locate(n + 1),
                                   kron_between(product_of(d.first(uz(e) + 1)), unit_col[uz(at)], product_of(d.subspan(uz(e) + 1)))};
            }));
        }
    }
    return cm;
}

std::size_t loop_point(const LoopCyclicGroupoid& lcg, ArrowId loop) {
    const auto it = std::lower_bound(lcg.loops.begin(), lcg.loops.end(), loop);
    if (it == lcg.loops.end() || *it != loop) throw std::logic_error("loop outside the loop groupoid");
    return static_cast<std::size_t>(it - lcg.loops.begin());
}

}  // namespace

bool is_unital_morphism(const FinAlgebra& from, const FinAlgebra& to, const Mat& f) {
    if (f.rows() != to.dim() || f.cols() != from.dim()) return false;
    if (f.apply(from.unit()) != to.unit()) return false;
    return f * from.product() == to.product() * kron(f, f);
}

ValidationReport validate(const FiniteGroupoid& g, const GAlgebraSheaf& a) {
    ValidationReport rep = validate(g, a.sheaf);
    if (!rep.ok()) return rep;
    if (a.algebras.size() != g.num_objects()) {
        rep.violations.push_back("one algebra per object is required");
        return rep;
    }
    for (ObjId c = 0; c < static_cast<ObjId>(g.num_objects()); ++c) {
        const FinAlgebra& alg = a.algebra(c);
        if (alg.dim() != a.sheaf.stalk(c)) rep.violations.push_back("algebra at " + g.object_name(c) + " has the wrong dimension");
        else if (auto r = validate(alg); !r.ok())
            rep.violations.push_back("algebra at " + g.object_name(c) + ": " + r.violations.front());
    }
    if (!rep.ok()) return rep;
    for (ArrowId x = 0; x < static_cast<ArrowId>(g.num_arrows()); ++x)
        if (!is_unital_morphism(a.algebra(g.tgt(x)), a.algebra(g.src(x)), a.sheaf.action(x)))
            rep.violations.push_back("arrow " + g.arrow(x).name + " does not act by a unital algebra morphism");
    return rep;
}

GAlgebraSheaf scalar_algebra_sheaf(const FiniteGroupoid& g) {
    return GAlgebraSheaf{constant_sheaf(g, 1), std::vector<FinAlgebra>(g.num_objects(), ground_field())};
}

GAlgebraSheaf uniform_algebra_sheaf(const FiniteGroupoid& g, const FinAlgebra& a, std::vector<Mat> act) {
    GAlgebraSheaf out{GSheaf{std::vector<std::size_t>(g.num_objects(), a.dim()), std::move(act)},
                      std::vector<FinAlgebra>(g.num_objects(), a)};
    return out;
}

FinAlgebra crossed_product_algebra(const GAlgebraSheaf& a, const FiniteGroupoid& g) {
    if (auto rep = validate(g, a); !rep.ok()) throw std::invalid_argument("invalid algebra sheaf: " + rep.violations.front());
    const std::size_t na = g.num_arrows();
    std::vector<std::size_t> offset{0};
    std::vector<std::string> labels;
    for (ArrowId x = 0; x < static_cast<ArrowId>(na); ++x) {
        const FinAlgebra& alg = a.algebra(g.src(x));
        for (const auto& l : alg.labels()) labels.push_back(l + "@" + g.arrow(x).name);
        offset.push_back(offset.back() + alg.dim());
    }
    const std::size_t dim = offset.back();
    std::vector<SparseVec> cols;
    cols.reserve(dim * dim);
    for (ArrowId x = 0; x < static_cast<ArrowId>(na); ++x)
        for (std::size_t p = 0; p < a.sheaf.stalk(g.src(x)); ++p)
            for (ArrowId y = 0; y < static_cast<ArrowId>(na); ++y)
                for (std::size_t q = 0; q < a.sheaf.stalk(g.src(y)); ++q) {
                    if (!g.composable(x, y)) {
                        cols.emplace_back();
                        continue;
                    }
                    const SparseVec moved = a.sheaf.action(y).apply(unit_vec(static_cast<Index>(p)));
                    const SparseVec prod = a.algebra(g.src(y)).multiply(moved, unit_vec(static_cast<Index>(q)));
                    cols.push_back(shifted(prod, static_cast<Index>(offset[uz(g.compose(x, y))])));
                }
    std::vector<Entry> one;
    for (ObjId c = 0; c < static_cast<ObjId>(g.num_objects()); ++c)
        for (const auto& e : a.algebra(c).unit()) one.push_back({static_cast<Index>(offset[uz(g.unit(c))] + e.idx), e.val});
    FinAlgebra out(std::move(labels), Mat::from_columns(dim, std::move(cols)), normalize(std::move(one)));
    if (auto rep = validate(out); !rep.ok()) throw std::invalid_argument("crossed product: " + rep.violations.front());
    return out;
}

BurgheleaSpace::BurgheleaSpace(const FiniteGroupoid& g, int n) : n_(n), base_(g.num_arrows()) {
    if (n < 0) throw std::invalid_argument("degree must be non-negative");
    enumerate(g, nullptr);
}

BurgheleaSpace::BurgheleaSpace(const FiniteGroupoid& g, int n, std::span<const ArrowId> component)
    : n_(n), base_(g.num_arrows()) {
    if (n < 0) throw std::invalid_argument("degree must be non-negative");
    if (!is_invariant(loops(g), g, component)) throw std::invalid_argument("loop set is not invariant under conjugation");
    std::vector<bool> keep(g.num_arrows(), false);
    for (ArrowId x : component) keep.at(uz(x)) = true;
    enumerate(g, &keep);
}

void BurgheleaSpace::enumerate(const FiniteGroupoid& g, const std::vector<bool>* keep) {
    const auto na = static_cast<ArrowId>(g.num_arrows());
    std::vector<ArrowId> s(len());
    // Depth-first in lexicographic order; position k must satisfy tgt s_k = src s_{k-1}.
    auto rec = [&](auto&& self, std::size_t k) -> void {
        if (k == len()) {
            if (g.tgt(s[0]) != g.src(s.back())) return;
            if (keep && !(*keep)[uz(g.compose_all(s))]) return;
            where_.emplace(find_key(s), static_cast<std::int64_t>(size()));
            flat_.insert(flat_.end(), s.begin(), s.end());
            return;
        }
        for (ArrowId x = 0; x < na; ++x) {
            if (k > 0 && g.tgt(x) != g.src(s[k - 1])) continue;
            s[k] = x;
            self(self, k + 1);
        }
    };
    rec(rec, 0);
}

std::uint64_t BurgheleaSpace::find_key(std::span<const ArrowId> s) const {
    std::uint64_t k = 0;
    for (ArrowId x : s) k = k * base_ + static_cast<std::uint64_t>(x);
    return k;
}

std::int64_t BurgheleaSpace::find(std::span<const ArrowId> s) const {
    if (s.size() != len()) return kNone;
    const auto it = where_.find(find_key(s));
    return it == where_.end() ? kNone : it->second;
}

ValidationReport check_partition(const FiniteGroupoid& g, int n) {
    ValidationReport rep;
    const BurgheleaSpace full(g, n);
    std::vector<int> hits(full.size(), 0);
    for (const auto& comp : invariant_components(loops(g), g)) {
        const BurgheleaSpace part(g, n, comp);
        for (std::size_t i = 0; i < part.size(); ++i) {
            const std::int64_t k = full.find(part.at(i));
            if (k < 0) {
                rep.violations.push_back("component string missing from the full space");
                return rep;
            }
            ++hits[uz(k)];
        }
    }
    for (std::size_t i = 0; i < hits.size(); ++i)
        if (hits[i] != 1) {
            rep.violations.push_back("string " + std::to_string(i) + " lies in " + std::to_string(hits[i]) + " components");
            break;
        }
    return rep;
}

CyclicModule crossed_cyclic_module(const GAlgebraSheaf& a, const FiniteGroupoid& g, int top) {
    return build_crossed(a, g, top, nullptr);
}

CyclicModule crossed_cyclic_module(const GAlgebraSheaf& a, const FiniteGroupoid& g, int top, std::span<const ArrowId> component) {
    return build_crossed(a, g, top, &component);
}

LoopSheaf loop_sheaf(const GAlgebraSheaf& a, const FiniteGroupoid& g, int top) {
    return loop_sheaf(a, g, top, loops(g).loops);
}

LoopSheaf loop_sheaf(const GAlgebraSheaf& a, const FiniteGroupoid& g, int top, std::span<const ArrowId> component) {
    if (auto rep = validate(g, a); !rep.ok()) throw std::invalid_argument("invalid algebra sheaf: " + rep.violations.front());
    LoopSheaf out{loop_cyclic_groupoid(g, component), {}};
    const ActionGroupoid& act = out.groupoid.action;
    const FiniteGroupoid& z = act.groupoid;
    for (ArrowId loop : out.groupoid.loops) {
        const ObjId c = g.src(loop);
        out.sheaf.stalks.push_back(algebra_cyclic_module(a.algebra(c), a.sheaf.action(loop), top).ops);
    }
    for (int n = 0; n <= top; ++n) {
        GSheaf level;
        for (std::size_t p = 0; p < out.groupoid.loops.size(); ++p) level.stalk_dim.push_back(out.sheaf.stalks[p].dims[uz(n)]);
        for (ArrowId w = 0; w < static_cast<ArrowId>(z.num_arrows()); ++w)
            level.act.push_back(kron_power(a.sheaf.action(act.arrow_group[uz(w)]), n + 1));
        out.sheaf.levels.push_back(std::move(level));
    }
    return out;
}

std::vector<Mat> redcross_map(const GAlgebraSheaf& a, const FiniteGroupoid& g, int top) {
    const CrossedLayout lay = crossed_layout(a, g, top, nullptr);
    const LoopSheaf ls = loop_sheaf(a, g, top);
    const LoopCyclicGroupoid& lcg = ls.groupoid;
    const FiniteGroupoid& z = lcg.action.groupoid;
    std::vector<Mat> out;
    std::vector<ArrowId> rotated, zs, suffix;
    for (int n = 0; n <= top; ++n) {
        const Nerve nerve(z, n);
        std::vector<std::size_t> zoff{0};
        for (std::size_t i = 0; i < nerve.size(); ++i) zoff.push_back(zoff.back() + ls.sheaf.levels[uz(n)].stalk(nerve.anchor(i)));
        const BurgheleaSpace& sp = lay.spaces[uz(n)];
        out.push_back(assemble(zoff.back(), lay.offsets[uz(n)], [&](std::size_t i) {
            const auto s = sp.at(i);
            rotated.assign(s.begin() + 1, s.end());
            rotated.push_back(s[0]);
            const ArrowId loop = g.compose_all(rotated);
            auto point = static_cast<ObjId>(loop_point(lcg, loop));
            const ObjId first = point;
            zs.clear();
            for (int k = 1; k <= n; ++k) {
                const ArrowId w = lcg.action.arrow_of(point, s[uz(k)]);
                zs.push_back(w);
                point = z.src(w);
            }
            const std::int64_t at = n == 0 ? nerve.find_object(first) : nerve.find(zs);
            if (at < 0) throw std::logic_error("redcross: string missing from the loop nerve");
            // a_i moves by x_{i+1} ... x_n x_0.
            suffix.assign(uz(n) + 1, s[0]);
            for (int k = n - 1; k >= 0; --k) suffix[uz(k)] = g.compose(s[uz(k) + 1], suffix[uz(k) + 1]);
            Mat local = Mat::identity(1);
            for (int k = 0; k <= n; ++k) local = kron(local, a.sheaf.action(suffix[uz(k)]));
            return BlockTarget{zoff[uz(at)], std::move(local)};
        }));
    }
    return out;
}

IsoReport check_isomorphism(const CyclicModule& src, const CyclicModule& dst, const std::vector<Mat>& phi) {
    IsoReport rep;
    rep.source_dims = src.ops.dims;
    rep.target_dims = dst.ops.dims;
    const int top = src.top();
    if (dst.top() != top || static_cast<int>(phi.size()) != top + 1) {
        rep.failures.push_back("windows differ");
        return rep;
    }
    rep.bijective = true;
    for (int n = 0; n <= top; ++n) {
        const Mat& p = phi[uz(n)];
        if (p.rows() != dst.dim(n) || p.cols() != src.dim(n)) {
            rep.bijective = false;
            rep.failures.push_back("map in degree " + std::to_string(n) + " has the wrong shape");
            return rep;
        }
        if (p.rows() != p.cols() || rank(p) != p.cols()) rep.bijective = false;
    }
    auto fail = [&](const std::string& what, int n, int i) {
        rep.failures.push_back(what + "_" + std::to_string(i) + " in degree " + std::to_string(n));
    };
    for (int n = 0; n <= top; ++n) {
        const Mat& p = phi[uz(n)];
        if (p * src.ops.cyclic[uz(n)] != dst.ops.cyclic[uz(n)] * p) fail("t", n, n);
        for (int i = 0; n >= 1 && i <= n; ++i)
            if (phi[uz(n - 1)] * src.ops.faces[uz(n)][uz(i)] != dst.ops.faces[uz(n)][uz(i)] * p) fail("d", n, i);
        for (int i = 0; n < top && i <= n; ++i)
            if (phi[uz(n + 1)] * src.ops.degens[uz(n)][uz(i)] != dst.ops.degens[uz(n)][uz(i)] * p) fail("s", n, i);
    }
    return rep;
}

IsoReport redcross_iso(const GAlgebraSheaf& a, const FiniteGroupoid& g, int top) {
    const CyclicModule src = crossed_cyclic_module(a, g, top);
    const LoopSheaf ls = loop_sheaf(a, g, top);
    const CyclicModule dst = diagonal_cyclic(ls.groupoid.cyclic, ls.sheaf);
    return check_isomorphism(src, dst, redcross_map(a, g, top));
}

HomologySummary summarize(const CyclicModule& cm) {
    HomologySummary out;
    const MixedComplex mc = mixed(cm);
    out.hh = hh_dims(mc);
    out.hc = hc_dims(mc);
    for (int parity = 0; parity <= 1 && cm.top() >= parity + 5; ++parity) out.hp.push_back(hp(mc, parity));
    return out;
}

DecompositionReport decomposition_check(const GAlgebraSheaf& a, const FiniteGroupoid& g, int top) {
    DecompositionReport rep;
    rep.window = top;
    rep.components = invariant_components(loops(g), g);
    auto total = std::async(std::launch::async, [&] {
        const CyclicModule cm = crossed_cyclic_module(a, g, top);
        return std::make_pair(cm.ops.dims, summarize(cm));
    });
    std::vector<std::future<std::pair<std::vector<std::size_t>, HomologySummary>>> parts;
    for (const auto& comp : rep.components)
        parts.push_back(std::async(std::launch::async, [&a, &g, top, &comp] {
            const CyclicModule cm = crossed_cyclic_module(a, g, top, comp);
            return std::make_pair(cm.ops.dims, summarize(cm));
        }));
    std::tie(rep.module_dims, rep.total) = total.get();
    for (auto& f : parts) {
        auto [dims, summary] = f.get();
        rep.component_module_dims.push_back(std::move(dims));
        rep.parts.push_back(std::move(summary));
    }
    rep.spaces_partition = true;
    for (int n = 0; n <= top; ++n) {
        std::size_t sum = 0;
        for (const auto& d : rep.component_module_dims) sum += d[uz(n)];
        if (sum != rep.module_dims[uz(n)]) rep.spaces_partition = false;
        if (!check_partition(g, n).ok()) rep.spaces_partition = false;
    }
    auto sums_match = [&](auto field) {
        const std::vector<std::size_t>& whole = rep.total.*field;
        for (std::size_t k = 0; k < whole.size(); ++k) {
            std::size_t sum = 0;
            for (const auto& p : rep.parts) sum += (p.*field).at(k);
            if (sum != whole[k]) return false;
        }
        return true;
    };
    rep.hh_equal = sums_match(&HomologySummary::hh);
    rep.hc_equal = sums_match(&HomologySummary::hc);
    if (!rep.total.hp.empty()) {
        bool eq = true;
        for (std::size_t k = 0; k < rep.total.hp.size(); ++k) {
            std::size_t sum = 0;
            bool stable = true;
            for (const auto& p : rep.parts) {
                sum += p.hp[k].dim;
                stable = stable && p.hp[k].stabilized;
            }
            if (sum != rep.total.hp[k].dim || stable != rep.total.hp[k].stabilized) eq = false;
        }
        rep.hp_equal = eq;
    }
    return rep;
}

EllipticReport elliptic_theorem_check(const GAlgebraSheaf& a, const FiniteGroupoid& g, std::span<const ArrowId> component,
                                      int top) {
    EllipticReport rep;
    rep.component.assign(component.begin(), component.end());
    const CyclicModule left = crossed_cyclic_module(a, g, top, component);
    const MixedComplex lmc = mixed(left);
    rep.hh_crossed = hh_dims(lmc);
    rep.hc_crossed = hc_dims(lmc);

    const LoopSheaf ls = loop_sheaf(a, g, top, component);
    const Localization loc = localize(ls.groupoid.cyclic);
    const ThetaCyclicSheaf pushed = coinvariant_pushforward(ls.groupoid.cyclic, loc, ls.sheaf);
    const CyclicModule right = diagonal_cyclic(with_trivial_theta(loc.quotient), pushed);
    const MixedComplex rmc = mixed(right);
    rep.hh_normalizer = hh_dims(rmc);
    rep.hc_normalizer = hc_dims(rmc);
    rep.equal = rep.hh_crossed == rep.hh_normalizer && rep.hc_crossed == rep.hc_normalizer;
    return rep;
}

}  // namespace cychom

#include "cychom/gsheaf.hpp"

#include <stdexcept>
#include <string>

#include "cychom/linalg.hpp"

namespace cychom {

namespace {

std::size_t uz(int v) { return static_cast<std::size_t>(v); }

}  // namespace

ValidationReport validate(const FiniteGroupoid& g, const GSheaf& a) {
    ValidationReport rep;
    auto& v = rep.violations;
    if (a.stalk_dim.size() != g.num_objects() || a.act.size() != g.num_arrows()) {
        v.push_back("sheaf needs one stalk per object and one action per arrow");
        return rep;
    }
    for (ArrowId x = 0; x < static_cast<ArrowId>(g.num_arrows()); ++x) {
        const Mat& m = a.action(x);
        if (m.rows() != a.stalk(g.src(x)) || m.cols() != a.stalk(g.tgt(x)))
            v.push_back("action of " + g.arrow(x).name + " has the wrong shape");
    }
    if (!v.empty()) return rep;
    for (ObjId c = 0; c < static_cast<ObjId>(g.num_objects()); ++c)
        if (!a.action(g.unit(c)).is_identity()) v.push_back("unit at " + g.object_name(c) + " does not act as the identity");
    for (const auto& row : g.table_rows())
        if (a.action(row.gh) != a.action(row.h) * a.action(row.g))
            v.push_back("action is not functorial on (" + g.arrow(row.g).name + "," + g.arrow(row.h).name + ")");
    return rep;
}

GSheaf constant_sheaf(const FiniteGroupoid& g, std::size_t dim) {
    GSheaf a;
    a.stalk_dim.assign(g.num_objects(), dim);
    a.act.assign(g.num_arrows(), Mat::identity(dim));
    return a;
}

GSheaf pullback(const Functor& f, const GSheaf& a) {
    GSheaf out;
    for (ObjId c : f.on_objects) out.stalk_dim.push_back(a.stalk(c));
    for (ArrowId x : f.on_arrows) out.act.push_back(a.action(x));
    return out;
}

GSheaf direct_sum(const GSheaf& a, const GSheaf& b) {
    if (a.stalk_dim.size() != b.stalk_dim.size() || a.act.size() != b.act.size())
        throw std::invalid_argument("direct sum of sheaves on different groupoids");
    GSheaf out;
    for (std::size_t c = 0; c < a.stalk_dim.size(); ++c) out.stalk_dim.push_back(a.stalk_dim[c] + b.stalk_dim[c]);
    for (std::size_t x = 0; x < a.act.size(); ++x) {
        const std::vector<Mat> parts{a.act[x], b.act[x]};
        out.act.push_back(direct_sum(parts));
    }
    return out;
}

GSheaf change_basis(const FiniteGroupoid& g, const GSheaf& a, const std::vector<Mat>& per_object) {
    if (per_object.size() != g.num_objects()) throw std::invalid_argument("one basis change per object is required");
    std::vector<Mat> inv;
    for (const Mat& p : per_object) inv.push_back(inverse(p));
    GSheaf out;
    out.stalk_dim = a.stalk_dim;
    for (ArrowId x = 0; x < static_cast<ArrowId>(g.num_arrows()); ++x)
        out.act.push_back(per_object[uz(g.src(x))] * a.action(x) * inv[uz(g.tgt(x))]);
    return out;
}

BarLayout::BarLayout(const FiniteGroupoid& g, const GSheaf& a, int top) {
    if (top < 0) throw std::invalid_argument("bar complex window must be non-negative");
    for (int n = 0; n <= top; ++n) {
        nerves_.emplace_back(g, n);
        const Nerve& nv = nerves_.back();
        std::vector<std::size_t> off{0};
        off.reserve(nv.size() + 1);
        for (std::size_t i = 0; i < nv.size(); ++i) off.push_back(off.back() + a.stalk(nv.anchor(i)));
        offsets_.push_back(std::move(off));
    }
}

ChainComplex bar_complex(const FiniteGroupoid& g, const GSheaf& a, int top) {
    if (auto rep = validate(g, a); !rep.ok()) throw std::invalid_argument("invalid sheaf: " + rep.violations.front());
    const BarLayout lay(g, a, top);
    std::vector<std::size_t> dims;
    std::vector<Mat> diffs;
    for (int n = 0; n <= top; ++n) {
        dims.push_back(lay.dim(n));
        if (n == 0) {
            diffs.emplace_back(0, lay.dim(0));
            continue;
        }
        const Nerve& nv = lay.nerve(n);
        const Nerve& below = lay.nerve(n - 1);
        std::vector<SparseVec> cols;
        cols.reserve(lay.dim(n));
        std::vector<ArrowId> face(uz(n - 1));
        // Position of a face string (or object, in degree 0) in the layout below.
        auto block_of = [&](std::span<const ArrowId> s, ObjId obj) -> std::size_t {
            const std::int64_t k = n == 1 ? below.find_object(obj) : below.find(s);
            if (k < 0) throw std::logic_error("bar complex: face string missing from the nerve");
            return lay.offset(n - 1, static_cast<std::size_t>(k));
        };
        for (std::size_t i = 0; i < nv.size(); ++i) {
            const auto s = nv.at(i);
            const ObjId c = nv.anchor(i);
            const std::size_t k = a.stalk(c);
            // d_0 acts by g_1 and drops it.
            std::copy(s.begin() + 1, s.end(), face.begin());
            const std::size_t off0 = block_of(face, g.src(s[0]));
            std::vector<std::size_t> mids;
            for (int m = 1; m < n; ++m) {
                std::size_t w = 0;
                for (int p = 0; p < n; ++p) {
                    if (p == m) continue;
                    face[w++] = p == m - 1 ? g.compose(s[uz(m - 1)], s[uz(m)]) : s[uz(p)];
                }
                mids.push_back(block_of(face, kNone));
            }
            std::copy(s.begin(), s.end() - 1, face.begin());
            const std::size_t offn = block_of(face, c);
            const Mat& act = a.action(s[0]);
            for (std::size_t j = 0; j < k; ++j) {
                std::vector<Entry> raw;
                for (const auto& e : act.col(j)) raw.push_back({static_cast<Index>(off0 + e.idx), e.val});
                for (std::size_t m = 0; m < mids.size(); ++m)
                    raw.push_back({static_cast<Index>(mids[m] + j), Scalar((m + 1) % 2 ? -1 : 1)});
                raw.push_back({static_cast<Index>(offn + j), Scalar(n % 2 ? -1 : 1)});
                cols.push_back(normalize(std::move(raw)));
            }
        }
        diffs.push_back(Mat::from_columns(lay.dim(n - 1), std::move(cols)));
    }
    return ChainComplex(0, std::move(dims), std::move(diffs), true);
}

HomologyClassSpace groupoid_homology(const FiniteGroupoid& g, const GSheaf& a, int n, int top) {
    if (n < 0 || top < n + 1)
        throw std::out_of_range("groupoid homology in degree " + std::to_string(n) + " needs a window of at least " +
                                std::to_string(n + 1));
    return homology(bar_complex(g, a, top), n);
}

std::vector<std::size_t> groupoid_homology_dims(const FiniteGroupoid& g, const GSheaf& a, int top) {
    return homology_dims(bar_complex(g, a, top));
}

ChainMap bar_chain_map(const Functor& f, const GSheaf& a, const GSheaf& b, const std::vector<Mat>& phi,
                       const ChainComplex& src, const ChainComplex& dst) {
    if (auto rep = f.check(); !rep.ok()) throw std::invalid_argument("not a functor: " + rep.violations.front());
    if (phi.size() != f.src->num_objects()) throw std::invalid_argument("one stalk map per object is required");
    const int top = std::min(src.hi(), dst.hi());
    const BarLayout ls(*f.src, a, top);
    const BarLayout ld(*f.dst, b, top);
    ChainMap out{&src, &dst, 0, {}};
    for (int n = 0; n <= top; ++n) {
        const Nerve& nv = ls.nerve(n);
        std::vector<SparseVec> cols;
        std::vector<ArrowId> image(uz(n));
        for (std::size_t i = 0; i < nv.size(); ++i) {
            const ObjId c = nv.anchor(i);
            std::int64_t k;
            if (n == 0) {
                k = ld.nerve(0).find_object(f.on_objects[uz(c)]);
            } else {
                for (int p = 0; p < n; ++p) image[uz(p)] = f.on_arrows[uz(nv.at(i)[uz(p)])];
                k = ld.nerve(n).find(image);
            }
            const std::size_t off = ld.offset(n, static_cast<std::size_t>(k));
            const Mat& m = phi[uz(c)];
            if (m.cols() != a.stalk(c) || m.rows() != b.stalk(f.on_objects[uz(c)]))
                throw std::invalid_argument("stalk map has the wrong shape");
            for (std::size_t j = 0; j < m.cols(); ++j) cols.push_back(shifted(m.col(j), static_cast<Index>(off)));
        }
        out.maps[n] = Mat::from_columns(ld.dim(n), std::move(cols));
    }
    return out;
}

Coinvariants coinvariants(const CyclicGroupoid& cg, const GSheaf& a) {
    Coinvariants q;
    for (ObjId c = 0; c < static_cast<ObjId>(cg.base.num_objects()); ++c) {
        const std::size_t k = a.stalk(c);
        const Mat rel = Mat::identity(k) - a.action(cg.theta[uz(c)]);
        const Subspace span = image(rel);
        std::vector<bool> pivot(k, false);
        for (Index p : span.pivots()) pivot[p] = true;
        std::vector<Index> free;
        for (std::size_t i = 0; i < k; ++i)
            if (!pivot[i]) free.push_back(static_cast<Index>(i));
        std::vector<Index> where(k, 0);
        for (std::size_t i = 0; i < free.size(); ++i) where[free[i]] = static_cast<Index>(i);
        std::vector<SparseVec> proj;
        for (std::size_t i = 0; i < k; ++i) {
            SparseVec r = span.residue(unit_vec(static_cast<Index>(i)));
            for (auto& e : r) e.idx = where[e.idx];
            proj.push_back(std::move(r));
        }
        std::vector<SparseVec> lift;
        for (Index f : free) lift.push_back(unit_vec(f));
        q.project.push_back(Mat::from_columns(free.size(), std::move(proj)));
        q.lift.push_back(Mat::from_columns(k, std::move(lift)));
    }
    return q;
}

PushforwardSheaf coinvariant_pushforward(const CyclicGroupoid& cg, const Localization& loc, const GSheaf& a) {
    if (auto rep = validate(cg.base, a); !rep.ok()) throw std::invalid_argument("invalid sheaf: " + rep.violations.front());
    PushforwardSheaf out;
    out.quotient = coinvariants(cg, a);
    const FiniteGroupoid& g = cg.base;
    for (ObjId c = 0; c < static_cast<ObjId>(g.num_objects()); ++c) out.sheaf.stalk_dim.push_back(out.quotient.project[uz(c)].rows());
    std::vector<bool> seen(loc.quotient.num_arrows(), false);
    out.sheaf.act.resize(loc.quotient.num_arrows());
    for (ArrowId x = 0; x < static_cast<ArrowId>(g.num_arrows()); ++x) {
        const ObjId s = g.src(x), t = g.tgt(x);
        const Mat through = out.quotient.project[uz(s)] * a.action(x);
        const Mat rel = Mat::identity(a.stalk(t)) - a.action(cg.theta[uz(t)]);
        if (!(through * rel).is_zero())
            throw std::logic_error("action of " + g.arrow(x).name + " does not descend to coinvariants");
        Mat m = through * out.quotient.lift[uz(t)];
        const auto cls = uz(loc.arrow_class[uz(x)]);
        if (!seen[cls]) {
            out.sheaf.act[cls] = std::move(m);
            seen[cls] = true;
        } else if (out.sheaf.act[cls] != m) {
            throw std::logic_error("induced action depends on the representative of " + loc.quotient.arrow(static_cast<ArrowId>(cls)).name);
        }
    }
    return out;
}

ValidationReport validate(const CyclicGroupoid& cg, const ThetaCyclicSheaf& a) {
    ValidationReport rep;
    auto& v = rep.violations;
    const FiniteGroupoid& g = cg.base;
    if (a.stalks.size() != g.num_objects()) {
        v.push_back("cyclic sheaf needs one stalk per object");
        return rep;
    }
    for (std::size_t n = 0; n < a.levels.size(); ++n) {
        for (auto& msg : validate(g, a.levels[n]).violations) v.push_back("level " + std::to_string(n) + ": " + msg);
        for (ObjId c = 0; c < static_cast<ObjId>(g.num_objects()); ++c)
            if (a.stalks[uz(c)].dims.size() != a.levels.size() || a.stalks[uz(c)].dims[n] != a.levels[n].stalk(c))
                v.push_back("stalk dimensions disagree at " + g.object_name(c));
    }
    if (!v.empty()) return rep;
    for (ObjId c = 0; c < static_cast<ObjId>(g.num_objects()); ++c) {
        std::vector<Mat> twist;
        for (const GSheaf& lvl : a.levels) twist.push_back(lvl.action(cg.theta[uz(c)]));
        for (auto& msg : check_cyclic_identities(a.stalks[uz(c)], 1, twist).violations)
            v.push_back("at " + g.object_name(c) + ": " + msg);
    }
    if (!v.empty()) return rep;
    const int top = a.top();
    for (ArrowId x = 0; x < static_cast<ArrowId>(g.num_arrows()); ++x) {
        const CyclicOperators& at_s = a.stalks[uz(g.src(x))];
        const CyclicOperators& at_t = a.stalks[uz(g.tgt(x))];
        auto act = [&](int n) -> const Mat& { return a.levels[uz(n)].action(x); };
        bool ok = true;
        for (int n = 0; n <= top && ok; ++n) {
            ok = at_s.cyclic[uz(n)] * act(n) == act(n) * at_t.cyclic[uz(n)];
            for (int i = 0; n >= 1 && i <= n && ok; ++i)
                ok = at_s.faces[uz(n)][uz(i)] * act(n) == act(n - 1) * at_t.faces[uz(n)][uz(i)];
            for (int i = 0; n < top && i <= n && ok; ++i)
                ok = at_s.degens[uz(n)][uz(i)] * act(n) == act(n + 1) * at_t.degens[uz(n)][uz(i)];
        }
        if (!ok) v.push_back("structure maps do not commute with the action of " + g.arrow(x).name);
    }
    return rep;
}

ThetaCyclicSheaf coinvariant_pushforward(const CyclicGroupoid& cg, const Localization& loc, const ThetaCyclicSheaf& a) {
    ThetaCyclicSheaf out;
    std::vector<Coinvariants> q;
    for (const GSheaf& lvl : a.levels) {
        PushforwardSheaf p = coinvariant_pushforward(cg, loc, lvl);
        out.levels.push_back(std::move(p.sheaf));
        q.push_back(std::move(p.quotient));
    }
    const int top = a.top();
    for (ObjId c = 0; c < static_cast<ObjId>(cg.base.num_objects()); ++c) {
        const CyclicOperators& src = a.stalks[uz(c)];
        std::vector<std::size_t> dims;
        for (const GSheaf& lvl : out.levels) dims.push_back(lvl.stalk(c));
        CyclicOperators ops = CyclicOperators::shaped(std::move(dims));
        auto pass = [&](int from, int to, const Mat& m) { return q[uz(to)].project[uz(c)] * m * q[uz(from)].lift[uz(c)]; };
        for (int n = 0; n <= top; ++n) {
            ops.cyclic[uz(n)] = pass(n, n, src.cyclic[uz(n)]);
            if (n >= 1)
                for (const Mat& f : src.faces[uz(n)]) ops.faces[uz(n)].push_back(pass(n, n - 1, f));
            if (n < top)
                for (const Mat& s : src.degens[uz(n)]) ops.degens[uz(n)].push_back(pass(n, n + 1, s));
        }
        out.stalks.push_back(std::move(ops));
    }
    return out;
}

ThetaCyclicSheaf standard_cyclic_sheaf(const FiniteGroupoid& g, int top) {
    if (top < 0) throw std::invalid_argument("window must be non-negative");
    const std::size_t no = g.num_objects();
    ThetaCyclicSheaf out;
    std::vector<Nerve> nerves;
    // local[n][i]: position of nerve string i inside the stalk at its anchor.
    std::vector<std::vector<Index>> local;
    std::vector<std::vector<std::size_t>> dims(no);
    for (int n = 0; n <= top; ++n) {
        nerves.emplace_back(g, n + 1);
        const Nerve& nv = nerves.back();
        std::vector<std::size_t> count(no, 0);
        std::vector<Index> loc(nv.size());
        for (std::size_t i = 0; i < nv.size(); ++i) loc[i] = static_cast<Index>(count[uz(nv.anchor(i))]++);
        local.push_back(std::move(loc));
        for (std::size_t c = 0; c < no; ++c) dims[c].push_back(count[c]);
    }
    for (std::size_t c = 0; c < no; ++c) out.stalks.push_back(CyclicOperators::shaped(dims[c]));

    // Builds the per-object matrices of a map sending string i of degree n to a
    // string of degree m, for strings anchored at each object.
    auto per_object = [&](int n, int m, auto&& image) {
        std::vector<std::vector<SparseVec>> cols(no);
        const Nerve& nv = nerves[uz(n)];
        for (std::size_t i = 0; i < nv.size(); ++i) {
            const std::vector<ArrowId> img = image(nv.at(i));
            const std::int64_t k = nerves[uz(m)].find(img);
            if (k < 0) throw std::logic_error("standard resolution: image string is not composable");
            cols[uz(nv.anchor(i))].push_back(unit_vec(local[uz(m)][static_cast<std::size_t>(k)]));
        }
        std::vector<Mat> mats;
        for (std::size_t c = 0; c < no; ++c) mats.push_back(Mat::from_columns(dims[c][uz(m)], std::move(cols[c])));
        return mats;
    };

    for (int n = 0; n <= top; ++n) {
        const Nerve& nv = nerves[uz(n)];
        GSheaf lvl;
        for (std::size_t c = 0; c < no; ++c) lvl.stalk_dim.push_back(dims[c][uz(n)]);
        // Stalk ordering: strings at each object in nerve order.
        std::vector<std::vector<std::size_t>> members(no);
        for (std::size_t i = 0; i < nv.size(); ++i) members[uz(nv.anchor(i))].push_back(i);
        for (ArrowId h = 0; h < static_cast<ArrowId>(g.num_arrows()); ++h) {
            const ArrowId hinv = g.inverse(h);
            std::vector<SparseVec> cols;
            std::vector<ArrowId> img(uz(n + 1));
            for (std::size_t i : members[uz(g.tgt(h))]) {
                const auto s = nv.at(i);
                std::copy(s.begin(), s.end(), img.begin());
                img[0] = g.compose(hinv, s[0]);
                cols.push_back(unit_vec(local[uz(n)][static_cast<std::size_t>(nv.find(img))]));
            }
            lvl.act.push_back(Mat::from_columns(dims[uz(g.src(h))][uz(n)], std::move(cols)));
        }
        out.levels.push_back(std::move(lvl));

        auto cyc = per_object(n, n, [&](std::span<const ArrowId> s) {
            std::vector<ArrowId> r(s.size());
            if (s.size() == 1) return std::vector<ArrowId>(s.begin(), s.end());
            const ArrowId tail = g.compose_all(s.subspan(1));
            r[0] = g.compose(s[0], tail);
            r[1] = g.inverse(tail);
            for (std::size_t p = 2; p < s.size(); ++p) r[p] = s[p - 1];
            return r;
        });
        for (std::size_t c = 0; c < no; ++c) out.stalks[c].cyclic[uz(n)] = std::move(cyc[c]);
        for (int i = 0; n >= 1 && i <= n; ++i) {
            auto face = per_object(n, n - 1, [&](std::span<const ArrowId> s) {
                std::vector<ArrowId> r;
                for (int p = 0; p <= n; ++p) {
                    if (i < n && p == i + 1) continue;
                    if (i == n && p == n) continue;
                    r.push_back(i < n && p == i ? g.compose(s[uz(i)], s[uz(i + 1)]) : s[uz(p)]);
                }
                return r;
            });
            for (std::size_t c = 0; c < no; ++c) out.stalks[c].faces[uz(n)].push_back(std::move(face[c]));
        }
        for (int i = 0; n < top && i <= n; ++i) {
            auto degen = per_object(n, n + 1, [&](std::span<const ArrowId> s) {
                std::vector<ArrowId> r(s.begin(), s.end());
                r.insert(r.begin() + i + 1, g.unit(g.src(s[uz(i)])));
                return r;
            });
            for (std::size_t c = 0; c < no; ++c) out.stalks[c].degens[uz(n)].push_back(std::move(degen[c]));
        }
    }
    return out;
}

ChainComplex stalk_complex(const ThetaCyclicSheaf& a, ObjId c) {
    const CyclicOperators& ops = a.stalks.at(uz(c));
    std::vector<Mat> diffs{Mat(0, ops.dims[0])};
    for (int n = 1; n <= ops.top(); ++n) {
        Mat b(ops.dims[uz(n - 1)], ops.dims[uz(n)]);
        for (int i = 0; i <= n; ++i) b = b + (i % 2 ? ops.faces[uz(n)][uz(i)].scaled(Scalar(-1)) : ops.faces[uz(n)][uz(i)]);
        diffs.push_back(std::move(b));
    }
    return ChainComplex(0, ops.dims, std::move(diffs), true);
}

}  // namespace cychom

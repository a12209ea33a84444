#include "cychom/cyclic.hpp"

#include <stdexcept>
#include <string>

#include "cychom/linalg.hpp"

namespace cychom {

namespace {

std::size_t uz(int v) { return static_cast<std::size_t>(v); }

Mat alternating_sum(const std::vector<Mat>& faces, int count) {
    Mat out(faces.front().rows(), faces.front().cols());
    for (int j = 0; j < count; ++j) out = out + (j % 2 ? faces[uz(j)].scaled(Scalar(-1)) : faces[uz(j)]);
    return out;
}

Mat hochschild_b(const CyclicOperators& ops, int n) {
    if (n == 0) return Mat(0, ops.dims[0]);
    return alternating_sum(ops.faces[uz(n)], n + 1);
}

std::size_t power_of(std::size_t base, int exp) {
    std::size_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

}  // namespace

ValidationReport validate(const CyclicModule& cm) {
    if (cm.order < 0) return ValidationReport{{"cyclic order must be positive or infinite"}};
    return check_cyclic_identities(cm.ops, cm.order);
}

const CyclicModule& require_valid(const CyclicModule& cm) {
    if (auto rep = validate(cm); !rep.ok()) throw std::invalid_argument("not a cyclic module: " + rep.violations.front());
    return cm;
}

DerivedOperators::DerivedOperators(const CyclicModule& cm) : top_(cm.top()) {
    const CyclicOperators& ops = cm.ops;
    for (int n = 0; n <= top_; ++n) {
        if (n == 0) {
            b_.emplace_back(0, ops.dims[0]);
            bp_.emplace_back(0, ops.dims[0]);
        } else {
            bp_.push_back(alternating_sum(ops.faces[uz(n)], n));
            b_.push_back(hochschild_b(ops, n));
        }
        tau_.push_back(n % 2 ? ops.cyclic[uz(n)].scaled(Scalar(-1)) : ops.cyclic[uz(n)]);
    }
    for (int n = 0; n < top_; ++n) extra_.push_back(ops.cyclic[uz(n + 1)] * ops.degens[uz(n)][uz(n)]);
    if (cm.order == kInfiniteOrder) return;
    for (int n = 0; n <= top_; ++n) {
        const Mat id = Mat::identity(ops.dims[uz(n)]);
        Mat acc = id;
        Mat p = id;
        for (int j = 1; j < cm.order * (n + 1); ++j) {
            p = tau_[uz(n)] * p;
            acc = acc + p;
        }
        norm_.push_back(std::move(acc));
    }
    for (int n = 0; n < top_; ++n) {
        const Mat one_minus = Mat::identity(ops.dims[uz(n + 1)]) - tau_[uz(n + 1)];
        connes_.push_back(one_minus * (extra_[uz(n)] * norm_[uz(n)]));
    }
}

const Mat& DerivedOperators::norm(int n) const {
    if (!finite()) throw std::domain_error("the norm operator needs a finite cyclic order");
    return norm_.at(idx(n));
}

const Mat& DerivedOperators::connes(int n) const {
    if (!finite()) throw std::domain_error("Connes' operator needs a finite cyclic order");
    return connes_.at(idx(n));
}

ValidationReport DerivedOperators::check() const {
    ValidationReport rep;
    for (int n = 0; n < top_; ++n) {
        Mat h = bp_[idx(n + 1)] * extra_[idx(n)];
        if (n > 0) h = h + extra_[idx(n - 1)] * bp_[idx(n)];
        if (!h.is_identity()) rep.violations.push_back("extra degeneracy does not contract b' in degree " + std::to_string(n));
    }
    if (!finite()) return rep;
    for (int n = 0; n <= top_; ++n) {
        const Mat one_minus = Mat::identity(tau_[idx(n)].rows()) - tau_[idx(n)];
        if (!(norm_[idx(n)] * one_minus).is_zero() || !(one_minus * norm_[idx(n)]).is_zero())
            rep.violations.push_back("N and 1 - tau do not annihilate each other in degree " + std::to_string(n));
    }
    return rep;
}

ValidationReport validate(const MixedComplex& mc) {
    ValidationReport rep;
    const int top = mc.top();
    if (mc.b.size() != mc.dims.size() || mc.B.size() + 1 != mc.dims.size()) {
        rep.violations.push_back("mixed complex needs b in every degree and B below the top");
        return rep;
    }
    for (int n = 2; n <= top; ++n)
        if (!(mc.b[uz(n - 1)] * mc.b[uz(n)]).is_zero()) rep.violations.push_back("b^2 != 0 in degree " + std::to_string(n));
    for (int n = 0; n + 2 <= top; ++n)
        if (!(mc.B[uz(n + 1)] * mc.B[uz(n)]).is_zero()) rep.violations.push_back("B^2 != 0 in degree " + std::to_string(n));
    for (int n = 0; n < top; ++n) {
        Mat s = mc.b[uz(n + 1)] * mc.B[uz(n)];
        if (n > 0) s = s + mc.B[uz(n - 1)] * mc.b[uz(n)];
        if (!s.is_zero()) rep.violations.push_back("bB + Bb != 0 in degree " + std::to_string(n));
    }
    return rep;
}

MixedComplex mixed(const CyclicModule& cm) {
    if (cm.order != 1) throw std::invalid_argument("a mixed complex needs a 1-cyclic module");
    const DerivedOperators d(cm);
    MixedComplex mc;
    mc.dims = cm.ops.dims;
    for (int n = 0; n <= cm.top(); ++n) mc.b.push_back(d.b(n));
    for (int n = 0; n < cm.top(); ++n) mc.B.push_back(d.connes(n));
    return mc;
}

ChainComplex hochschild_complex(const MixedComplex& mc) { return ChainComplex(0, mc.dims, mc.b, true); }

ChainComplex hochschild_complex(const CyclicModule& cm) {
    std::vector<Mat> b;
    for (int n = 0; n <= cm.top(); ++n) b.push_back(hochschild_b(cm.ops, n));
    return ChainComplex(0, cm.ops.dims, std::move(b), true);
}

DoubleComplex connes_bicomplex(const MixedComplex& mc) {
    const int top = mc.top();
    DoubleComplex dc(top, true);
    for (int p = 0; 2 * p <= top; ++p)
        for (int q = p; p + q <= top; ++q) {
            const int deg = q - p;
            dc.set_dim(p, q, mc.dims[uz(deg)]);
            if (deg >= 1) dc.set_vertical(p, q, p % 2 ? mc.b[uz(deg)].scaled(Scalar(-1)) : mc.b[uz(deg)]);
            if (p >= 1) dc.set_horizontal(p, q, mc.B[uz(deg)]);
        }
    return dc;
}

DoubleComplex cyclic_bicomplex(const CyclicModule& cm) {
    if (cm.order != 1) throw std::invalid_argument("the cyclic bicomplex needs a 1-cyclic module");
    const DerivedOperators d(cm);
    const int top = cm.top();
    DoubleComplex dc(top, true);
    for (int p = 0; p <= top; ++p)
        for (int q = 0; p + q <= top; ++q) {
            dc.set_dim(p, q, cm.dim(q));
            if (q >= 1) dc.set_vertical(p, q, p % 2 ? d.b_prime(q) : d.b(q));
            if (p >= 1)
                dc.set_horizontal(p, q, p % 2 ? Mat::identity(cm.dim(q)) - d.tau(q) : d.norm(q));
        }
    dc.check();
    return dc;
}

namespace {

void require_window(int top, int n) {
    if (n < 0 || top < n + 1)
        throw std::out_of_range("degree " + std::to_string(n) + " needs a window of at least " + std::to_string(n + 1));
}

}  // namespace

HomologyClassSpace hh(const MixedComplex& mc, int n) {
    require_window(mc.top(), n);
    return homology(hochschild_complex(mc), n);
}

HomologyClassSpace hh(const CyclicModule& cm, int n) {
    require_window(cm.top(), n);
    return homology(hochschild_complex(cm), n);
}

HomologyClassSpace hc(const MixedComplex& mc, int n) {
    require_window(mc.top(), n);
    return homology(totalize(connes_bicomplex(mc)), n);
}

HomologyClassSpace hc(const CyclicModule& cm, int n) { return hc(mixed(cm), n); }

std::vector<std::size_t> hh_dims(const MixedComplex& mc) { return homology_dims(hochschild_complex(mc)); }
std::vector<std::size_t> hh_dims(const CyclicModule& cm) { return homology_dims(hochschild_complex(cm)); }
std::vector<std::size_t> hc_dims(const MixedComplex& mc) { return homology_dims(totalize(connes_bicomplex(mc))); }
std::vector<std::size_t> hc_dims(const CyclicModule& cm) { return hc_dims(mixed(cm)); }

std::vector<std::size_t> hc_dims_cyclic_bicomplex(const CyclicModule& cm) {
    return homology_dims(totalize(cyclic_bicomplex(cm)));
}

ChainMap column_inclusion(const ChainComplex& hoch, const ChainComplex& tot, const DoubleComplex& dc) {
    const TotalLayout lay = total_layout(dc);
    ChainMap f{&hoch, &tot, 0, {}};
    for (int n = 0; n <= std::min(hoch.hi(), tot.hi()); ++n) {
        const auto it = lay.offset[uz(n)].find(0);
        const std::size_t off = it == lay.offset[uz(n)].end() ? 0 : it->second;
        std::vector<SparseVec> cols;
        for (std::size_t j = 0; j < hoch.dim(n); ++j) cols.push_back(unit_vec(static_cast<Index>(off + j)));
        f.maps[n] = Mat::from_columns(tot.dim(n), std::move(cols));
    }
    return f;
}

ChainMap periodicity(const ChainComplex& tot, const DoubleComplex& dc, int k) {
    const TotalLayout lay = total_layout(dc);
    ChainMap f{&tot, &tot, -2 * k, {}};
    for (int n = 2 * k; n <= tot.hi(); ++n) {
        std::vector<Triplet> t;
        for (const auto& [p, off] : lay.offset[uz(n)]) {
            if (p < k) continue;
            const std::size_t to = lay.offset[uz(n - 2 * k)].at(p - k);
            for (std::size_t j = 0; j < dc.dim(p, n - p); ++j)
                t.push_back({static_cast<Index>(to + j), static_cast<Index>(off + j), Scalar(1)});
        }
        f.maps[n] = Mat::from_triplets(tot.dim(n - 2 * k), tot.dim(n), std::move(t));
    }
    return f;
}

PeriodicResult hp(const MixedComplex& mc, int parity) {
    if (parity != 0 && parity != 1) throw std::invalid_argument("parity must be 0 or 1");
    const DoubleComplex dc = connes_bicomplex(mc);
    const ChainComplex tot = totalize(dc);
    const ChainMap s = periodicity(tot, dc, 1);
    const int valid = tot.valid_hi();
    PeriodicResult res;
    res.parity = parity;
    if (valid < parity) return res;
    std::map<int, HomologyClassSpace> spaces;
    for (int n = parity; n <= std::min(valid, parity + 4); n += 2) spaces.emplace(n, homology(tot, n));
    // S : HC_n -> HC_{n-2}
    auto shift_at = [&](int n) { return induced_map(s, n, spaces.at(n), spaces.at(n - 2)); };
    res.dim = spaces.at(parity).dim();
    if (valid >= parity + 2) {
        const Mat s1 = shift_at(parity + 2);
        res.observed.push_back(rank(s1));
        res.dim = res.observed.back();
        if (valid >= parity + 4) {
            const Mat s2 = shift_at(parity + 4);
            res.observed.push_back(rank(s1 * s2));
            res.observed.push_back(rank(s2));
            res.dim = res.observed[1];
            res.stabilized = res.observed[0] == res.observed[1] && res.observed[2] == res.observed[1];
        }
    }
    return res;
}

SBIReport sbi(const MixedComplex& mc) {
    if (mc.top() < 3) throw std::out_of_range("the SBI sequence needs a window of at least 3");
    const ChainComplex hoch = hochschild_complex(mc);
    const DoubleComplex dc = connes_bicomplex(mc);
    const ChainComplex tot = totalize(dc);
    const ChainMap inc = column_inclusion(hoch, tot, dc);
    const ChainMap s = periodicity(tot, dc, 1);
    inc.check();
    s.check();
    const int m = tot.valid_hi();
    std::vector<HomologyClassSpace> hh_sp, hc_sp;
    for (int n = 0; n <= m; ++n) {
        hh_sp.push_back(homology(hoch, n));
        hc_sp.push_back(homology(tot, n));
    }
    SBIReport rep;
    for (int n = 0; n <= m; ++n) {
        rep.inclusion[n] = induced_map(inc, n, hh_sp[uz(n)], hc_sp[uz(n)]);
        if (n >= 2) {
            rep.shift[n] = induced_map(s, n, hc_sp[uz(n)], hc_sp[uz(n - 2)]);
            if (n - 1 <= m) rep.boundary[n] = connecting_map(inc, s, n, hc_sp[uz(n - 2)], hh_sp[uz(n - 1)]);
        } else {
            rep.shift[n] = Mat(0, hc_sp[uz(n)].dim());
        }
    }
    auto label = [](const char* what, int n) { return std::string(what) + "_" + std::to_string(n); };
    for (int n = m; n >= 0; --n) {
        rep.nodes.push_back({label("HH", n), hh_sp[uz(n)].dim(), rep.inclusion[n]});
        rep.nodes.push_back({label("HC", n), hc_sp[uz(n)].dim(), rep.shift[n]});
        if (n >= 2) {
            rep.nodes.push_back({label("HC", n - 2), hc_sp[uz(n - 2)].dim(), rep.boundary[n]});
        } else {
            rep.nodes.push_back({label("HC", n - 2), 0, Mat(n >= 1 ? hh_sp[uz(n - 1)].dim() : 0, 0)});
        }
    }
    // The trailing zero node closes the sequence; drop the dangling map after it.
    rep.nodes.back().out = Mat(0, 0);
    rep.exactness = check_exact(rep.nodes);
    return rep;
}

CyclicModule algebra_cyclic_module(const FinAlgebra& a, const Mat& alpha, int top) {
    if (top < 0) throw std::invalid_argument("window must be non-negative");
    if (auto rep = validate(a); !rep.ok()) throw std::invalid_argument("invalid algebra: " + rep.violations.front());
    if (!is_endomorphism(a, alpha)) throw std::invalid_argument("twist is not a unital algebra endomorphism");
    const int order = automorphism_order(alpha);
    const std::size_t m = a.dim();
    std::vector<std::size_t> dims;
    for (int n = 0; n <= top; ++n) dims.push_back(power_of(m, n + 1));
    CyclicModule cm{order, CyclicOperators::shaped(dims)};
    const Mat unit = Mat::from_columns(m, {a.unit()});
    for (int n = 0; n <= top; ++n) {
        const std::size_t tail = power_of(m, n);
        std::vector<SparseVec> cols;
        cols.reserve(dims[uz(n)]);
        for (std::size_t i = 0; i < dims[uz(n)]; ++i) {
            SparseVec c;
            for (const auto& e : alpha.col(i % m)) c.push_back({static_cast<Index>(e.idx * tail + i / m), e.val});
            cols.push_back(std::move(c));
        }
        cm.ops.cyclic[uz(n)] = Mat::from_columns(dims[uz(n)], std::move(cols));
        for (int i = 0; i < n; ++i) cm.ops.faces[uz(n)].push_back(kron_between(power_of(m, i), a.product(), power_of(m, n - 1 - i)));
        if (n >= 1) cm.ops.faces[uz(n)].push_back(cm.ops.faces[uz(n)][0] * cm.ops.cyclic[uz(n)]);
        if (n < top)
            for (int i = 0; i <= n; ++i) cm.ops.degens[uz(n)].push_back(kron_between(power_of(m, i + 1), unit, power_of(m, n - i)));
    }
    return cm;
}

CyclicModule algebra_cyclic_module(const FinAlgebra& a, int top) {
    return algebra_cyclic_module(a, Mat::identity(a.dim()), top);
}

CyclicModule diagonal_cyclic(const CyclicGroupoid& cg, const ThetaCyclicSheaf& a) {
    if (auto rep = validate(cg, a); !rep.ok()) throw std::invalid_argument("invalid cyclic sheaf: " + rep.violations.front());
    const FiniteGroupoid& g = cg.base;
    const int top = a.top();
    std::vector<Nerve> nerves;
    std::vector<std::vector<std::size_t>> offsets;
    std::vector<std::size_t> dims;
    for (int n = 0; n <= top; ++n) {
        nerves.emplace_back(g, n);
        std::vector<std::size_t> off{0};
        for (std::size_t i = 0; i < nerves.back().size(); ++i)
            off.push_back(off.back() + a.levels[uz(n)].stalk(nerves.back().anchor(i)));
        dims.push_back(off.back());
        offsets.push_back(std::move(off));
    }
    CyclicModule cm{1, CyclicOperators::shaped(dims)};
    // Offset of a string (or an object, in degree 0) of degree n.
    auto where = [&](int n, std::span<const ArrowId> s, ObjId obj) -> std::size_t {
        const std::int64_t k = n == 0 ? nerves[0].find_object(obj) : nerves[uz(n)].find(s);
        if (k < 0) throw std::logic_error("diagonal module: string missing from the nerve");
        return offsets[uz(n)][static_cast<std::size_t>(k)];
    };
    auto stalk_ops = [&](ObjId c) -> const CyclicOperators& { return a.stalks[uz(c)]; };
    for (int n = 0; n <= top; ++n) {
        const Nerve& nv = nerves[uz(n)];
        // Each operator sends the block of a string to one block, by a stalk map.
        struct Target {
            std::size_t offset;
            Mat map;
        };
        auto build = [&](std::size_t rows, auto&& target_of) {
            std::vector<SparseVec> cols;
            cols.reserve(dims[uz(n)]);
            for (std::size_t i = 0; i < nv.size(); ++i) {
                const Target t = target_of(i);
                for (std::size_t j = 0; j < t.map.cols(); ++j) cols.push_back(shifted(t.map.col(j), static_cast<Index>(t.offset)));
            }
            return Mat::from_columns(rows, std::move(cols));
        };
        std::vector<ArrowId> buf;
        for (int f = 0; n >= 1 && f <= n; ++f) {
            cm.ops.faces[uz(n)].push_back(build(dims[uz(n - 1)], [&](std::size_t i) {
                const auto s = nv.at(i);
                const ObjId c = nv.anchor(i);
                const Mat& face = stalk_ops(c).faces[uz(n)][uz(f)];
                buf.clear();
                if (f == 0) {
                    buf.assign(s.begin() + 1, s.end());
                    return Target{where(n - 1, buf, g.src(s[0])), a.levels[uz(n - 1)].action(s[0]) * face};
                }
                if (f == n) {
                    buf.assign(s.begin(), s.end() - 1);
                    return Target{where(n - 1, buf, c), face};
                }
                for (int k = 0; k < n; ++k) {
                    if (k == f) continue;
                    buf.push_back(k == f - 1 ? g.compose(s[uz(f - 1)], s[uz(f)]) : s[uz(k)]);
                }
                return Target{where(n - 1, buf, kNone), face};
            }));
        }
        for (int d = 0; n < top && d <= n; ++d) {
            cm.ops.degens[uz(n)].push_back(build(dims[uz(n + 1)], [&](std::size_t i) {
                const auto s = nv.at(i);
                const ObjId c = nv.anchor(i);
                buf.assign(s.begin(), s.end());
                const ObjId at = d == 0 ? c : g.src(s[uz(d - 1)]);
                buf.insert(buf.begin() + d, g.unit(at));
                return Target{where(n + 1, buf, kNone), stalk_ops(c).degens[uz(n)][uz(d)]};
            }));
        }
        cm.ops.cyclic[uz(n)] = build(dims[uz(n)], [&](std::size_t i) {
            const auto s = nv.at(i);
            const ObjId c = nv.anchor(i);
            const ArrowId prod = n == 0 ? g.unit(c) : g.compose_all(s);
            const ArrowId theta = cg.theta[uz(c)];
            const ArrowId twist = g.compose(g.inverse(theta), prod);
            const Mat m = a.levels[uz(n)].action(twist) * stalk_ops(c).cyclic[uz(n)];
            if (n == 0) return Target{where(0, buf, c), m};
            buf.assign({g.compose(g.inverse(prod), theta)});
            buf.insert(buf.end(), s.begin(), s.end() - 1);
            return Target{where(n, buf, kNone), m};
        });
    }
    return cm;
}

ValidationReport validate(const BicyclicModule& c) {
    ValidationReport rep;
    auto& v = rep.violations;
    const int top = c.top();
    if (c.columns.size() != c.rows.size()) {
        v.push_back("bicyclic module needs as many columns as rows");
        return rep;
    }
    for (int q = 0; q <= top; ++q)
        for (auto& msg : check_cyclic_identities(c.rows[uz(q)], 1).violations) v.push_back("row " + std::to_string(q) + ": " + msg);
    for (int p = 0; p <= top; ++p)
        for (auto& msg : check_cyclic_identities(c.columns[uz(p)], 1).violations) v.push_back("column " + std::to_string(p) + ": " + msg);
    for (int p = 0; p <= top; ++p)
        for (int q = 0; q <= top; ++q)
            if (c.rows[uz(q)].dims[uz(p)] != c.columns[uz(p)].dims[uz(q)]) v.push_back("row and column dimensions disagree");
    if (!v.empty()) return rep;

    // An operator is (kind, index); kind 0 face, 1 degeneracy, 2 cyclic.
    struct Op {
        int kind;
        int index;
    };
    auto ops_at = [](const CyclicOperators& o, int n) {
        std::vector<Op> out;
        if (n >= 1)
            for (int i = 0; i <= n; ++i) out.push_back({0, i});
        if (n < o.top())
            for (int i = 0; i <= n; ++i) out.push_back({1, i});
        out.push_back({2, 0});
        return out;
    };
    auto apply = [](const CyclicOperators& o, Op op, int n) -> std::pair<const Mat*, int> {
        if (op.kind == 0) return {&o.faces[uz(n)][uz(op.index)], n - 1};
        if (op.kind == 1) return {&o.degens[uz(n)][uz(op.index)], n + 1};
        return {&o.cyclic[uz(n)], n};
    };
    for (int p = 0; p <= top; ++p)
        for (int q = 0; q <= top; ++q)
            for (Op h : ops_at(c.rows[uz(q)], p))
                for (Op w : ops_at(c.columns[uz(p)], q)) {
                    const auto [hm, p2] = apply(c.rows[uz(q)], h, p);
                    const auto [wm, q2] = apply(c.columns[uz(p)], w, q);
                    const Mat* h_after = apply(c.rows[uz(q2)], h, p).first;
                    const Mat* w_after = apply(c.columns[uz(p2)], w, q).first;
                    if ((*h_after) * (*wm) != (*w_after) * (*hm)) {
                        v.push_back("horizontal and vertical operators do not commute at (" + std::to_string(p) + "," +
                                    std::to_string(q) + ")");
                        return rep;
                    }
                }
    return rep;
}

BicyclicModule tensor_bicyclic(const CyclicModule& x, const CyclicModule& y) {
    const int top = std::min(x.top(), y.top());
    BicyclicModule c;
    auto lift = [top](const CyclicOperators& o, auto&& wrap) {
        std::vector<std::size_t> dims;
        for (int n = 0; n <= top; ++n) dims.push_back(wrap(Mat::identity(o.dims[uz(n)])).rows());
        CyclicOperators out = CyclicOperators::shaped(std::move(dims));
        for (int n = 0; n <= top; ++n) {
            out.cyclic[uz(n)] = wrap(o.cyclic[uz(n)]);
            if (n >= 1)
                for (const Mat& f : o.faces[uz(n)]) out.faces[uz(n)].push_back(wrap(f));
            if (n < top)
                for (const Mat& s : o.degens[uz(n)]) out.degens[uz(n)].push_back(wrap(s));
        }
        return out;
    };
    for (int q = 0; q <= top; ++q)
        c.rows.push_back(lift(x.ops, [&](const Mat& m) { return kron_between(1, m, y.dim(q)); }));
    for (int p = 0; p <= top; ++p)
        c.columns.push_back(lift(y.ops, [&](const Mat& m) { return kron_between(x.dim(p), m, 1); }));
    return c;
}

CyclicModule diagonal(const BicyclicModule& c) {
    const int top = c.top();
    std::vector<std::size_t> dims;
    for (int n = 0; n <= top; ++n) dims.push_back(c.dim(n, n));
    CyclicModule cm{1, CyclicOperators::shaped(dims)};
    for (int n = 0; n <= top; ++n) {
        cm.ops.cyclic[uz(n)] = c.rows[uz(n)].cyclic[uz(n)] * c.columns[uz(n)].cyclic[uz(n)];
        for (int i = 0; n >= 1 && i <= n; ++i)
            cm.ops.faces[uz(n)].push_back(c.rows[uz(n - 1)].faces[uz(n)][uz(i)] * c.columns[uz(n)].faces[uz(n)][uz(i)]);
        for (int i = 0; n < top && i <= n; ++i)
            cm.ops.degens[uz(n)].push_back(c.rows[uz(n + 1)].degens[uz(n)][uz(i)] * c.columns[uz(n)].degens[uz(n)][uz(i)]);
    }
    return cm;
}

DoubleComplex hochschild_bicomplex(const BicyclicModule& c) {
    const int top = c.top();
    DoubleComplex dc(top, true);
    for (int p = 0; p <= top; ++p)
        for (int q = 0; p + q <= top; ++q) {
            dc.set_dim(p, q, c.dim(p, q));
            if (p >= 1) dc.set_horizontal(p, q, hochschild_b(c.rows[uz(q)], p));
            if (q >= 1) dc.set_vertical(p, q, hochschild_b(c.columns[uz(p)], q));
        }
    dc.check();
    return dc;
}

EZReport ez_diagonal(const BicyclicModule& c) {
    if (auto rep = validate(c); !rep.ok()) throw std::invalid_argument("invalid bicyclic module: " + rep.violations.front());
    EZReport rep{diagonal(c), {}, {}, false};
    require_valid(rep.diagonal);
    rep.hh_diagonal = hh_dims(rep.diagonal);
    rep.total = homology_dims(totalize(hochschild_bicomplex(c)));
    rep.equal = rep.hh_diagonal == rep.total;
    return rep;
}

}  // namespace cychom

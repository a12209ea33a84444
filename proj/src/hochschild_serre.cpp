#include "cychom/hochschild_serre.hpp"

#include <stdexcept>
#include <algorithm>
#include <map>
#include <string>

#include "cychom/linalg.hpp"

namespace cychom {

namespace {

std::size_t uz(int v) { return static_cast<std::size_t>(v); }

Functor forget(const CommaGroupoid& c, const FiniteGroupoid& source) {
    return Functor{&c.groupoid, &source, c.object_base, c.arrow_base};
}

// Precomposition with h : d' -> d, as a functor d/phi -> d'/phi.
Functor precompose(const FiniteGroupoid& target, ArrowId h, const CommaGroupoid& from, const CommaGroupoid& to) {
    std::map<std::pair<ArrowId, ObjId>, ObjId> where;
    for (std::size_t o = 0; o < to.object_base.size(); ++o)
        where[{to.object_arrow[o], to.object_base[o]}] = static_cast<ObjId>(o);
    std::map<std::pair<ArrowId, ObjId>, ArrowId> arrow_at;
    for (ArrowId a = 0; a < static_cast<ArrowId>(to.groupoid.num_arrows()); ++a)
        arrow_at[{to.arrow_base[uz(a)], to.groupoid.src(a)}] = a;
    Functor f{&from.groupoid, &to.groupoid, {}, {}};
    for (std::size_t o = 0; o < from.object_base.size(); ++o)
        f.on_objects.push_back(where.at({target.compose(from.object_arrow[o], h), from.object_base[o]}));
    for (ArrowId a = 0; a < static_cast<ArrowId>(from.groupoid.num_arrows()); ++a)
        f.on_arrows.push_back(arrow_at.at({from.arrow_base[uz(a)], f.on_objects[uz(from.groupoid.src(a))]}));
    return f;
}

}  // namespace

CommaBars::CommaBars(const Functor& phi, const GSheaf& s, int top) : target_(phi.dst), top_(top) {
    if (auto rep = phi.check(); !rep.ok()) throw std::invalid_argument("not a functor: " + rep.violations.front());
    if (auto rep = validate(*phi.src, s); !rep.ok()) throw std::invalid_argument("invalid sheaf: " + rep.violations.front());
    const FiniteGroupoid& h = *phi.dst;
    const std::size_t nd = h.num_objects();
    // Chain maps point into these vectors, so they must never reallocate.
    commas_.reserve(nd);
    sheaves_.reserve(nd);
    bars_.reserve(nd);
    for (ObjId d = 0; d < static_cast<ObjId>(nd); ++d) {
        commas_.push_back(comma_groupoid(phi, d));
        sheaves_.push_back(pullback(forget(commas_.back(), *phi.src), s));
        bars_.push_back(bar_complex(commas_.back().groupoid, sheaves_.back(), top));
    }
    for (ArrowId a = 0; a < static_cast<ArrowId>(h.num_arrows()); ++a) {
        const auto from = uz(h.tgt(a)), to = uz(h.src(a));
        const Functor f = precompose(h, a, commas_[from], commas_[to]);
        std::vector<Mat> ids;
        for (ObjId o = 0; o < static_cast<ObjId>(commas_[from].groupoid.num_objects()); ++o)
            ids.push_back(Mat::identity(sheaves_[from].stalk(o)));
        maps_.push_back(bar_chain_map(f, sheaves_[from], sheaves_[to], ids, bars_[from], bars_[to]));
    }
}

GSheaf CommaBars::derived_pushforward(int q) const {
    if (q < 0 || q >= top_) throw std::out_of_range("derived pushforward needs q below the window");
    std::vector<HomologyClassSpace> spaces;
    GSheaf l;
    for (const ChainComplex& b : bars_) {
        spaces.push_back(homology(b, q));
        l.stalk_dim.push_back(spaces.back().dim());
    }
    for (ArrowId a = 0; a < static_cast<ArrowId>(target_->num_arrows()); ++a)
        l.act.push_back(induced_map(maps_[uz(a)], q, spaces[uz(target_->tgt(a))], spaces[uz(target_->src(a))]));
    return l;
}

DoubleComplex bar_of_bar(const CommaBars& bars) {
    const int top = bars.top();
    const FiniteGroupoid& h = bars.target();
    DoubleComplex dc(top, true);
    std::vector<Nerve> nerves;
    // offsets[p][q][i]: start of string i's block at (p,q).
    std::vector<std::vector<std::vector<std::size_t>>> offsets;
    for (int p = 0; p <= top; ++p) {
        nerves.emplace_back(h, p);
        const Nerve& nv = nerves.back();
        offsets.emplace_back();
        for (int q = 0; p + q <= top; ++q) {
            std::vector<std::size_t> off{0};
            for (std::size_t i = 0; i < nv.size(); ++i) off.push_back(off.back() + bars.bar(nv.anchor(i)).dim(q));
            dc.set_dim(p, q, off.back());
            offsets.back().push_back(std::move(off));
        }
    }
    for (int p = 0; p <= top; ++p) {
        const Nerve& nv = nerves[uz(p)];
        for (int q = 1; p + q <= top; ++q) {
            std::vector<Mat> parts;
            for (std::size_t i = 0; i < nv.size(); ++i) parts.push_back(bars.bar(nv.anchor(i)).diff(q));
            dc.set_vertical(p, q, direct_sum(parts));
        }
        if (p == 0) continue;
        const Nerve& below = nerves[uz(p - 1)];
        std::vector<ArrowId> face(uz(p - 1));
        auto index_below = [&](ObjId obj) -> std::size_t {
            const std::int64_t k = p == 1 ? below.find_object(obj) : below.find(face);
            if (k < 0) throw std::logic_error("bar of bar: face string missing");
            return static_cast<std::size_t>(k);
        };
        for (int q = 0; p + q <= top; ++q) {
            std::vector<Triplet> entries;
            auto place = [&](std::size_t row0, std::size_t col0, const Mat& m, const Scalar& sign) {
                for (std::size_t j = 0; j < m.cols(); ++j)
                    for (const auto& e : m.col(j)) entries.push_back({static_cast<Index>(row0 + e.idx), static_cast<Index>(col0 + j), e.val * sign});
            };
            for (std::size_t i = 0; i < nv.size(); ++i) {
                const auto s = nv.at(i);
                const std::size_t col0 = offsets[uz(p)][uz(q)][i];
                const Mat& restrict0 = bars.restriction(s[0]).maps.at(q);
                std::copy(s.begin() + 1, s.end(), face.begin());
                place(offsets[uz(p - 1)][uz(q)][index_below(h.src(s[0]))], col0, restrict0, Scalar(1));
                const Mat id = Mat::identity(bars.bar(nv.anchor(i)).dim(q));
                for (int m = 1; m < p; ++m) {
                    std::size_t w = 0;
                    for (int k = 0; k < p; ++k) {
                        if (k == m) continue;
                        face[w++] = k == m - 1 ? h.compose(s[uz(m - 1)], s[uz(m)]) : s[uz(k)];
                    }
                    place(offsets[uz(p - 1)][uz(q)][index_below(kNone)], col0, id, Scalar(m % 2 ? -1 : 1));
                }
                std::copy(s.begin(), s.end() - 1, face.begin());
                place(offsets[uz(p - 1)][uz(q)][index_below(nv.anchor(i))], col0, id, Scalar(p % 2 ? -1 : 1));
            }
            dc.set_horizontal(p, q, Mat::from_triplets(dc.dim(p - 1, q), dc.dim(p, q), std::move(entries)));
        }
    }
    dc.check();
    return dc;
}

HochschildSerreReport hochschild_serre(const Functor& phi, const GSheaf& s, int window) {
    if (window < 1) throw std::invalid_argument("window must be at least 1");
    const CommaBars bars(phi, s, window);
    const FiniteGroupoid& h = bars.target();
    HochschildSerreReport rep;
    rep.window = window;
    rep.higher_vanish = true;
    for (int q = 0; q < window; ++q) {
        rep.derived.push_back(bars.derived_pushforward(q));
        if (auto v = validate(h, rep.derived.back()); !v.ok())
            throw std::logic_error("derived pushforward is not a sheaf: " + v.violations.front());
        if (q >= 1)
            for (std::size_t d : rep.derived.back().stalk_dim) rep.higher_vanish = rep.higher_vanish && d == 0;
        const auto hp = groupoid_homology_dims(h, rep.derived.back(), window - q);
        for (std::size_t p = 0; p < hp.size(); ++p) rep.e2_expected[{static_cast<int>(p), q}] = hp[p];
    }

    const SpectralSequence ss = spectral_sequence(bar_of_bar(bars), window + 2);
    const SSPage& page2 = ss.pages.at(2);
    rep.e2_matches = true;
    for (const auto& [pos, dim] : rep.e2_expected) {
        if (page2.untrusted.count(pos)) continue;
        rep.e2[pos] = page2.at(pos.first, pos.second);
        rep.e2_matches = rep.e2_matches && rep.e2[pos] == dim;
    }
    rep.source_homology = groupoid_homology_dims(*phi.src, s, window);
    rep.abutment = ss.total_homology;
    rep.abutment_holds = ss.abutment_holds();
    for (std::size_t n = 0; n < rep.abutment.size() && n < rep.source_homology.size(); ++n)
        rep.abutment_holds = rep.abutment_holds && rep.abutment[n] == rep.source_homology[n];
    if (rep.higher_vanish) {
        const auto lhs = groupoid_homology_dims(h, rep.derived.front(), window);
        rep.degenerate_agreement = lhs == rep.source_homology;
    }
    return rep;
}

}  // namespace cychom

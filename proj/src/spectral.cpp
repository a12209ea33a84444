#include "cychom/spectral.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <tuple>

namespace cychom {

std::size_t SSPage::at(int p, int q) const {
    auto it = entries.find({p, q});
    return it == entries.end() ? 0 : it->second;
}

namespace {

SparseVec slice(std::span<const Entry> v, std::size_t begin, std::size_t end) {
    SparseVec out;
    for (const auto& e : v)
        if (e.idx >= begin && e.idx < end) out.push_back({static_cast<Index>(e.idx - begin), e.val});
    return out;
}

// Z^r, B^r and the lifts needed for d_r, computed on demand and cached.
class Filtration {
public:
    explicit Filtration(const DoubleComplex& dc) : dc_(dc), lay_(total_layout(dc)), tot_(totalize(dc)) {}

    int valid_top() const { return tot_.valid_hi(); }
    const ChainComplex& total() const { return tot_; }

    std::size_t begin(int n, int p) const {
        if (n < 0 || n > dc_.top()) return 0;
        const auto& off = lay_.offset[static_cast<std::size_t>(n)];
        auto it = off.lower_bound(p);
        return it == off.end() ? lay_.dim[static_cast<std::size_t>(n)] : it->second;
    }
    // End of F_p inside Tot_n.
    std::size_t end(int n, int p) const { return begin(n, p + 1); }

    // Vectors x in F_p Tot_n with d x in F_{p-r}.
    const Subspace& admissible(int p, int q, int r) {
        const int n = p + q;
        r = std::min(r, p + 1);
        auto key = std::make_tuple(p, q, r);
        if (auto it = adm_.find(key); it != adm_.end()) return it->second;
        const std::size_t cols = end(n, p);
        const Mat dn = tot_.diff(n);
        std::vector<Index> cidx(cols);
        for (std::size_t j = 0; j < cols; ++j) cidx[j] = static_cast<Index>(j);
        Mat m = select_cols(dn, cidx);
        std::vector<Index> ridx;
        if (n >= 1)
            for (std::size_t i = begin(n - 1, p - r + 1); i < end(n - 1, p); ++i) ridx.push_back(static_cast<Index>(i));
        return adm_.emplace(key, kernel(select_rows(m, ridx))).first->second;
    }

    const Subquotient& page(int p, int q, int r) {
        auto key = std::make_tuple(p, q, std::min(r, std::max(p + 1, q + 2)));
        if (auto it = pages_.find(key); it != pages_.end()) return it->second;
        const int n = p + q;
        const std::size_t b0 = begin(n, p);
        const std::size_t b1 = end(n, p);
        std::vector<SparseVec> zs;
        for (const auto& x : admissible(p, q, r).basis()) zs.push_back(slice(x, b0, b1));
        Subspace z = Subspace::span(b1 - b0, zs);
        std::vector<SparseVec> bs;
        if (r > 0) {
            const Subspace& img = boundaries_from(n + 1, p + r - 1);
            for (const auto& v : img.basis())
                if (v.back().idx < b1) bs.push_back(slice(v, b0, b1));
        }
        Subspace b = Subspace::span(b1 - b0, bs);
        return pages_.emplace(key, Subquotient(std::move(z), std::move(b))).first->second;
    }

    // d_r applied to the class of z at (p,q), as a vector in block p-r of Tot_{n-1}.
    SparseVec differential(int p, int q, int r, std::span<const Entry> z) {
        const int n = p + q;
        const Subspace& adm = admissible(p, q, r);
        const std::size_t b0 = begin(n, p);
        const std::size_t b1 = end(n, p);
        std::vector<SparseVec> proj;
        for (const auto& x : adm.basis()) proj.push_back(slice(x, b0, b1));
        const Mat pm = Mat::from_columns(b1 - b0, std::move(proj));
        auto coeff = solve(pm, z);
        if (!coeff) throw std::logic_error("spectral sequence: representative does not lift");
        SparseVec x;
        for (const auto& e : *coeff) x = axpy(x, -e.val, adm.basis()[e.idx]);
        const SparseVec dx = tot_.diff(n).apply(x);
        return slice(dx, begin(n - 1, p - r), end(n - 1, p - r));
    }

private:
    const Subspace& boundaries_from(int n, int pmax) {
        pmax = std::min(pmax, n);
        auto key = std::make_pair(n, pmax);
        if (auto it = bnd_.find(key); it != bnd_.end()) return it->second;
        const std::size_t cols = pmax < 0 ? 0 : end(n, pmax);
        const Mat dn = tot_.diff(n);
        std::vector<Index> cidx(cols);
        for (std::size_t j = 0; j < cols; ++j) cidx[j] = static_cast<Index>(j);
        return bnd_.emplace(key, image(select_cols(dn, cidx))).first->second;
    }

    const DoubleComplex& dc_;
    TotalLayout lay_;
    ChainComplex tot_;
    std::map<std::tuple<int, int, int>, Subspace> adm_;
    std::map<std::tuple<int, int, int>, Subquotient> pages_;
    std::map<std::pair<int, int>, Subspace> bnd_;
};

}  // namespace

SpectralSequence spectral_sequence(const DoubleComplex& dc, int r_max) {
    if (r_max < 0) throw std::invalid_argument("spectral sequence: negative page index");
    Filtration filt(dc);
    const int trusted_top = filt.valid_top();
    const int r_inf = dc.top() + 2;
    SpectralSequence ss;
    ss.total_homology = homology_dims(filt.total());

    auto trusted = [&](int p, int q) { return p >= 0 && q >= 0 && p + q <= trusted_top; };
    auto build_page = [&](int r) {
        SSPage pg;
        pg.r = r;
        for (int n = 0; n <= dc.top(); ++n)
            for (int p = 0; p <= n; ++p) {
                const int q = n - p;
                if (!trusted(p, q)) {
                    pg.untrusted.insert({p, q});
                    continue;
                }
                if (dc.dim(p, q) == 0) continue;
                const std::size_t d = filt.page(p, q, r).dim();
                if (d > 0) pg.entries[{p, q}] = d;
            }
        for (const auto& [pq, d] : pg.entries) {
            const auto [p, q] = pq;
            const int tp = p - r;
            const int tq = q + r - 1;
            if (!trusted(tp, tq) || pg.at(tp, tq) == 0) continue;
            const Subquotient& src = filt.page(p, q, r);
            const Subquotient& dst = filt.page(tp, tq, r);
            std::vector<SparseVec> cols;
            for (const auto& z : src.reps()) cols.push_back(dst.coords(filt.differential(p, q, r, z)));
            Mat m = Mat::from_columns(dst.dim(), std::move(cols));
            if (!m.is_zero()) pg.d[{p, q}] = std::move(m);
        }
        return pg;
    };

    std::vector<SSPage> all;
    for (int r = 0; r <= std::max(r_max, r_inf); ++r) all.push_back(build_page(r));
    ss.e_inf = all[static_cast<std::size_t>(r_inf)].entries;
    // One past the last nonzero differential, and the first page equal to E^inf.
    for (int r = 0; r <= r_inf; ++r) {
        const SSPage& pg = all[static_cast<std::size_t>(r)];
        if (!pg.d.empty()) ss.collapse_page = r + 1;
        if (pg.entries != ss.e_inf) ss.stable_page = r + 1;
    }
    all.resize(static_cast<std::size_t>(r_max) + 1);
    ss.pages = std::move(all);
    return ss;
}

bool SpectralSequence::abutment_holds() const {
    for (std::size_t n = 0; n < total_homology.size(); ++n) {
        std::size_t sum = 0;
        for (const auto& [pq, d] : e_inf)
            if (static_cast<std::size_t>(pq.first + pq.second) == n) sum += d;
        if (sum != total_homology[n]) return false;
    }
    return true;
}

std::string SpectralSequence::page_consistency_error() const {
    for (std::size_t k = 0; k + 1 < pages.size(); ++k) {
        const SSPage& pg = pages[k];
        const SSPage& next = pages[k + 1];
        const int r = pg.r;
        auto trusted = [&](int p, int q) { return p >= 0 && q >= 0 && !pg.untrusted.count({p, q}); };
        std::set<Bidegree> positions;
        for (const auto& [pq, d] : pg.entries) positions.insert(pq);
        for (const auto& [pq, d] : next.entries) positions.insert(pq);
        for (const auto& [p, q] : positions) {
            if (q - r + 1 >= 0 && !trusted(p + r, q - r + 1)) continue;
            if (p - r >= 0 && !trusted(p - r, q + r - 1)) continue;
            auto out_it = pg.d.find({p, q});
            auto in_it = pg.d.find({p + r, q - r + 1});
            const std::size_t ker = pg.at(p, q) - (out_it == pg.d.end() ? 0 : rank(out_it->second));
            const std::size_t im = in_it == pg.d.end() ? 0 : rank(in_it->second);
            if (out_it != pg.d.end() && in_it != pg.d.end() && !(out_it->second * in_it->second).is_zero())
                return "d_" + std::to_string(r) + " does not square to zero at (" + std::to_string(p) + "," +
                       std::to_string(q) + ")";
            if (ker - im != next.at(p, q))
                return "E^" + std::to_string(r + 1) + " at (" + std::to_string(p) + "," + std::to_string(q) +
                       ") is not the homology of E^" + std::to_string(r);
        }
    }
    return {};
}

}  // namespace cychom

#include "cychom/linalg.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace cychom {

namespace {

void normalize_lead(SparseVec& v) {
    const Scalar lead = v.back().val;
    if (lead.is_one()) return;
    const Scalar inv = lead.inverse();
    for (auto& e : v) e.val *= inv;
}

// Low-pivot row reduction of m (rows as vectors over the columns). Returns the
// pivot column of each independent row. Rows flagged in skip are ignored.
std::vector<Index> row_pivots(const Mat& m, const std::vector<char>* skip, std::vector<Index>* pivot_rows) {
    Mat t = m.transpose();
    Echelon ech(m.cols());
    std::vector<Index> piv;
    for (std::size_t r = 0; r < t.cols(); ++r) {
        if (skip != nullptr && (*skip)[r]) continue;
        SparseVec v = t.col(r);
        if (v.empty()) continue;
        if (auto p = ech.insert(std::move(v))) {
            piv.push_back(*p);
            if (pivot_rows != nullptr) pivot_rows->push_back(static_cast<Index>(r));
        }
    }
    return piv;
}

SparseVec reversed(std::span<const Entry> v, std::size_t n) {
    SparseVec r;
    r.reserve(v.size());
    for (auto it = v.rbegin(); it != v.rend(); ++it) r.push_back({static_cast<Index>(n - 1 - it->idx), it->val});
    return r;
}

}  // namespace

void Echelon::reduce_low(SparseVec& v) const {
    while (!v.empty()) {
        const int s = slot_[v.back().idx];
        if (s < 0) return;
        const Scalar f = v.back().val;
        v = axpy(v, f, vecs_[static_cast<std::size_t>(s)]);
    }
}

void Echelon::reduce_below(SparseVec& v, std::size_t bound) const {
    // Entries above a processed pivot never change, so scan downward once.
    std::size_t k = static_cast<std::size_t>(
        std::lower_bound(v.begin(), v.end(), bound, [](const Entry& e, std::size_t b) { return e.idx < b; }) -
        v.begin());
    while (k > 0) {
        --k;
        const Index i = v[k].idx;
        const int s = slot_[i];
        if (s < 0) continue;
        const Scalar f = v[k].val;
        v = axpy(v, f, vecs_[static_cast<std::size_t>(s)]);
        k = static_cast<std::size_t>(
            std::lower_bound(v.begin(), v.end(), i, [](const Entry& e, Index b) { return e.idx < b; }) - v.begin());
    }
}

std::optional<Index> Echelon::insert(SparseVec v) {
    reduce_low(v);
    if (v.empty()) return std::nullopt;
    normalize_lead(v);
    const Index p = v.back().idx;
    slot_[p] = static_cast<int>(vecs_.size());
    vecs_.push_back(std::move(v));
    return p;
}

void Echelon::make_reduced() {
    std::sort(vecs_.begin(), vecs_.end(), [](const SparseVec& a, const SparseVec& b) { return a.back().idx < b.back().idx; });
    for (std::size_t k = 0; k < vecs_.size(); ++k) slot_[vecs_[k].back().idx] = static_cast<int>(k);
    for (auto& v : vecs_) {
        SparseVec w = std::move(v);
        reduce_below(w, w.back().idx);
        v = std::move(w);
    }
}

Subspace Subspace::zero(std::size_t ambient) { return Subspace(Echelon(ambient)); }

Subspace Subspace::full(std::size_t ambient) {
    Echelon e(ambient);
    for (std::size_t i = 0; i < ambient; ++i) e.insert(unit_vec(static_cast<Index>(i)));
    return Subspace(std::move(e));
}

Subspace Subspace::span(std::size_t ambient, std::span<const SparseVec> vectors) {
    Echelon e(ambient);
    for (const auto& v : vectors) {
        if (!v.empty() && v.back().idx >= ambient) throw std::out_of_range("vector outside ambient space");
        e.insert(v);
    }
    e.make_reduced();
    return Subspace(std::move(e));
}

std::vector<Index> Subspace::pivots() const {
    std::vector<Index> p;
    p.reserve(dim());
    for (const auto& v : basis()) p.push_back(v.back().idx);
    return p;
}

SparseVec Subspace::residue(SparseVec v) const {
    ech_.reduce_full(v);
    return v;
}

bool Subspace::contains(std::span<const Entry> v) const {
    SparseVec w(v.begin(), v.end());
    ech_.reduce_low(w);
    return w.empty();
}

bool Subspace::contains(const Subspace& other) const {
    if (other.ambient_dim() != ambient_dim()) return false;
    return std::all_of(other.basis().begin(), other.basis().end(), [&](const SparseVec& v) { return contains(v); });
}

Subspace Subspace::operator+(const Subspace& other) const {
    if (other.ambient_dim() != ambient_dim()) throw std::invalid_argument("subspace sum of different ambients");
    std::vector<SparseVec> all(basis());
    all.insert(all.end(), other.basis().begin(), other.basis().end());
    return span(ambient_dim(), all);
}

std::size_t rank(const Mat& m) {
    if (m.rows() < m.cols()) return row_pivots(m, nullptr, nullptr).size();
    Echelon ech(m.rows());
    std::size_t r = 0;
    for (const auto& c : m.columns())
        if (!c.empty() && ech.insert(c)) ++r;
    return r;
}

Subspace kernel(const Mat& m) {
    // Leading-pivot reduced row echelon form, obtained by reversing the
    // coordinate order; its kernel basis is already canonical.
    const std::size_t n = m.cols();
    Mat t = m.transpose();
    Echelon ech(n);
    for (const auto& row : t.columns())
        if (!row.empty()) ech.insert(reversed(row, n));
    ech.make_reduced();
    std::vector<char> is_pivot(n, 0);
    std::vector<std::vector<Entry>> kern_raw(n);
    for (const auto& rv : ech.vectors()) {
        const Index lead = static_cast<Index>(n - 1 - rv.back().idx);
        is_pivot[lead] = 1;
        for (const auto& e : rv) {
            const Index j = static_cast<Index>(n - 1 - e.idx);
            if (j != lead) kern_raw[j].push_back({lead, -e.val});
        }
    }
    std::vector<SparseVec> basis;
    for (std::size_t j = 0; j < n; ++j) {
        if (is_pivot[j]) continue;
        auto& raw = kern_raw[j];
        raw.push_back({static_cast<Index>(j), Scalar(1)});
        basis.push_back(normalize(std::move(raw)));
    }
    return Subspace::span(n, basis);
}

Subspace image(const Mat& m) {
    std::vector<Index> piv = row_pivots(m, nullptr, nullptr);
    std::sort(piv.begin(), piv.end());
    std::vector<SparseVec> cols;
    cols.reserve(piv.size());
    for (Index j : piv) cols.push_back(m.col(j));
    return Subspace::span(m.rows(), cols);
}

std::size_t quotient_dim(const Subspace& big, const Subspace& small) {
    if (!big.contains(small)) throw std::invalid_argument("quotient_dim: subspace is not contained in the larger one");
    return big.dim() - small.dim();
}

std::vector<std::size_t> complex_ranks(std::span<const Mat* const> maps) {
    std::vector<std::size_t> ranks;
    std::vector<char> cleared;
    for (std::size_t k = 0; k < maps.size(); ++k) {
        const Mat& m = *maps[k];
        if (k > 0 && maps[k - 1]->cols() != m.rows()) throw std::invalid_argument("complex_ranks: maps not composable");
        std::vector<char> skip(m.rows(), 0);
        if (cleared.size() == m.rows()) skip = cleared;
        const auto piv = row_pivots(m, &skip, nullptr);
        ranks.push_back(piv.size());
        cleared.assign(m.cols(), 0);
        for (Index p : piv) cleared[p] = 1;
    }
    return ranks;
}

Preimage::Preimage(const Mat& m) : rows_(m.rows()), ech_(m.rows()) {
    // Track each basis vector as a combination of the original columns.
    for (std::size_t j = 0; j < m.cols(); ++j) {
        SparseVec v = m.col(j);
        SparseVec c = unit_vec(static_cast<Index>(j));
        while (!v.empty() && ech_.is_pivot(v.back().idx)) {
            const std::size_t s = ech_.slot(v.back().idx);
            const Scalar f = v.back().val;
            v = axpy(v, f, ech_.vectors()[s]);
            c = axpy(c, f, combos_[s]);
        }
        if (v.empty()) continue;
        const Scalar inv = v.back().val.inverse();
        ech_.insert(scaled(v, inv));
        combos_.push_back(scaled(c, inv));
    }
}

std::optional<SparseVec> Preimage::operator()(std::span<const Entry> rhs) const {
    if (!rhs.empty() && rhs.back().idx >= rows_) throw std::out_of_range("preimage: right-hand side too long");
    SparseVec r(rhs.begin(), rhs.end());
    SparseVec x;
    while (!r.empty()) {
        const Index p = r.back().idx;
        if (!ech_.is_pivot(p)) return std::nullopt;
        const Scalar f = r.back().val;
        const std::size_t s = ech_.slot(p);
        r = axpy(r, f, ech_.vectors()[s]);
        x = axpy(x, -f, combos_[s]);
    }
    return x;
}

std::optional<SparseVec> solve(const Mat& m, std::span<const Entry> rhs) { return Preimage(m)(rhs); }

Scalar dot(std::span<const Entry> a, std::span<const Entry> b) {
    Scalar s;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].idx < b[j].idx) {
            ++i;
        } else if (b[j].idx < a[i].idx) {
            ++j;
        } else {
            s = Scalar::sub_mul(s, -a[i].val, b[j].val);
            ++i;
            ++j;
        }
    }
    return s;
}

Subquotient::Subquotient(Subspace cycles, Subspace boundaries)
    : cycles_(std::move(cycles)), boundaries_(std::move(boundaries)) {
    if (!cycles_.contains(boundaries_)) throw std::invalid_argument("subquotient: boundaries not inside cycles");
    Echelon h(cycles_.ambient_dim());
    for (const auto& z : cycles_.basis()) {
        SparseVec r = boundaries_.residue(z);
        if (!r.empty()) h.insert(std::move(r));
    }
    h.make_reduced();
    reps_ = h.vectors();
    for (const auto& v : reps_) rep_pivot_.push_back(v.back().idx);
}

SparseVec Subquotient::coords(std::span<const Entry> v) const {
    SparseVec r = boundaries_.residue(SparseVec(v.begin(), v.end()));
    SparseVec c;
    SparseVec check = r;
    for (std::size_t k = 0; k < reps_.size(); ++k) {
        Scalar a = value_at(r, rep_pivot_[k]);
        if (a.is_zero()) continue;
        check = axpy(check, a, reps_[k]);
        c.push_back({static_cast<Index>(k), std::move(a)});
    }
    if (!check.empty()) throw std::invalid_argument("subquotient coordinates requested for a non-cycle");
    return c;
}

Mat restrict_to_quotient(const Mat& m, const Subquotient& src, const Subquotient& dst) {
    if (m.cols() != src.ambient_dim() || m.rows() != dst.ambient_dim())
        throw std::invalid_argument("restrict_to_quotient: dimension mismatch");
    for (const auto& b : src.boundaries().basis())
        if (!dst.boundaries().contains(m.apply(b)))
            throw std::invalid_argument("restrict_to_quotient: boundaries not carried to boundaries");
    std::vector<SparseVec> cols;
    cols.reserve(src.dim());
    for (const auto& z : src.reps()) {
        const SparseVec img = m.apply(z);
        if (!dst.cycles().contains(img))
            throw std::invalid_argument("restrict_to_quotient: cycles not carried to cycles");
        cols.push_back(dst.coords(img));
    }
    return Mat::from_columns(dst.dim(), std::move(cols));
}

}  // namespace cychom

namespace cychom {

std::vector<SparseVec> cohomology_basis(const Mat& d_in, const Mat& d_out) {
    if (d_in.rows() != d_out.cols()) throw std::invalid_argument("cohomology_basis: maps not composable");
    const std::size_t n = d_out.cols();
    std::vector<char> cleared(n, 0);
    for (Index p : row_pivots(d_out, nullptr, nullptr)) cleared[p] = 1;
    const Mat rows = d_in.transpose();
    Echelon ech(d_in.cols());
    std::vector<SparseVec> combos;
    std::vector<SparseVec> out;
    for (std::size_t j = 0; j < n; ++j) {
        if (cleared[j]) continue;
        SparseVec v = rows.col(j);
        SparseVec c = unit_vec(static_cast<Index>(j));
        while (!v.empty() && ech.is_pivot(v.back().idx)) {
            const std::size_t s = ech.slot(v.back().idx);
            const Scalar f = v.back().val;
            v = axpy(v, f, ech.vectors()[s]);
            c = axpy(c, f, combos[s]);
        }
        if (v.empty()) {
            out.push_back(std::move(c));
            continue;
        }
        const Scalar inv = v.back().val.inverse();
        ech.insert(scaled(v, inv));
        combos.push_back(scaled(c, inv));
    }
    return out;
}

}  // namespace cychom

namespace cychom {

Mat inverse(const Mat& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("inverse of a non-square matrix");
    const Preimage pre(m);
    std::vector<SparseVec> cols;
    cols.reserve(m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j) {
        auto x = pre(unit_vec(static_cast<Index>(j)));
        if (!x) throw std::invalid_argument("inverse of a singular matrix");
        cols.push_back(std::move(*x));
    }
    return Mat::from_columns(m.cols(), std::move(cols));
}

}  // namespace cychom

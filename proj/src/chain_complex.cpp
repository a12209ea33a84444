#include "cychom/chain_complex.hpp"

#include <stdexcept>

namespace cychom {

ChainComplex::ChainComplex(int lo, std::vector<std::size_t> dims, std::vector<Mat> diffs, bool truncated)
    : lo_(lo), dims_(std::move(dims)), d_(std::move(diffs)), truncated_(truncated) {
    if (d_.size() != dims_.size()) throw std::invalid_argument("chain complex: one differential per degree expected");
    for (std::size_t k = 0; k < d_.size(); ++k) {
        const std::size_t below = k == 0 ? 0 : dims_[k - 1];
        if (d_[k].cols() != dims_[k] || d_[k].rows() != below)
            throw std::invalid_argument("chain complex: differential of degree " + std::to_string(lo_ + static_cast<int>(k)) +
                                        " has the wrong shape");
    }
    for (std::size_t k = 2; k < d_.size(); ++k)
        if (!(d_[k - 1] * d_[k]).is_zero())
            throw std::invalid_argument("chain complex: d o d != 0 at degree " + std::to_string(lo_ + static_cast<int>(k)));
}

std::size_t ChainComplex::dim(int n) const { return in_range(n) ? dims_[static_cast<std::size_t>(n - lo_)] : 0; }

Mat ChainComplex::diff(int n) const {
    if (in_range(n)) return d_[static_cast<std::size_t>(n - lo_)];
    return Mat(dim(n - 1), dim(n));
}

const Mat& ChainComplex::stored_diff(int n) const {
    if (!in_range(n)) throw std::out_of_range("no stored differential at degree " + std::to_string(n));
    return d_[static_cast<std::size_t>(n - lo_)];
}

HomologyClassSpace::HomologyClassSpace(int degree, Mat boundary_out, std::vector<SparseVec> cycle_reps,
                                       std::vector<SparseVec> cocycles, Mat pairing_inverse)
    : degree_(degree),
      d_(std::move(boundary_out)),
      reps_(std::move(cycle_reps)),
      cocycles_(std::move(cocycles)),
      pinv_(std::move(pairing_inverse)) {}

namespace {

SparseVec pair_with(const std::vector<SparseVec>& cocycles, std::span<const Entry> v) {
    SparseVec p;
    for (std::size_t i = 0; i < cocycles.size(); ++i) {
        Scalar s = dot(cocycles[i], v);
        if (!s.is_zero()) p.push_back({static_cast<Index>(i), std::move(s)});
    }
    return p;
}

}  // namespace

SparseVec HomologyClassSpace::coords(std::span<const Entry> cycle) const {
    if (!is_cycle(cycle)) throw std::invalid_argument("homology coordinates requested for a non-cycle");
    if (reps_.empty()) return {};
    return pinv_.apply(pair_with(cocycles_, cycle));
}

HomologyClassSpace homology(const ChainComplex& c, int n) {
    if (n < c.lo() || n > c.valid_hi())
        throw std::out_of_range("homology at degree " + std::to_string(n) + " is outside the valid range [" +
                                std::to_string(c.lo()) + ", " + std::to_string(c.valid_hi()) + "]");
    Mat d_out = c.diff(n);
    const Mat d_in = c.diff(n + 1);
    auto cocycles = cohomology_basis(d_in, d_out);
    const std::size_t h = cocycles.size();
    if (h == 0) return HomologyClassSpace(n, std::move(d_out), {}, {}, Mat());
    // First cycles, in canonical kernel order, whose pairings are independent.
    const Subspace z = kernel(d_out);
    Echelon seen(h);
    std::vector<SparseVec> reps;
    std::vector<SparseVec> pairings;
    for (const auto& v : z.basis()) {
        SparseVec p = pair_with(cocycles, v);
        if (p.empty() || !seen.insert(p)) continue;
        reps.push_back(v);
        pairings.push_back(std::move(p));
        if (reps.size() == h) break;
    }
    if (reps.size() != h) throw std::logic_error("homology: cycle and cocycle counts disagree");
    Mat pinv = inverse(Mat::from_columns(h, std::move(pairings)));
    return HomologyClassSpace(n, std::move(d_out), std::move(reps), std::move(cocycles), std::move(pinv));
}

std::vector<std::size_t> homology_dims(const ChainComplex& c) {
    std::vector<const Mat*> maps;
    for (int n = c.lo() + 1; n <= c.hi(); ++n) maps.push_back(&c.stored_diff(n));
    const auto ranks = complex_ranks(maps);
    auto rank_of = [&](int n) -> std::size_t {
        const int k = n - c.lo() - 1;
        if (k < 0 || k >= static_cast<int>(ranks.size())) return 0;
        return ranks[static_cast<std::size_t>(k)];
    };
    std::vector<std::size_t> out;
    for (int n = c.lo(); n <= c.valid_hi(); ++n) out.push_back(c.dim(n) - rank_of(n) - rank_of(n + 1));
    return out;
}

Mat ChainMap::at(int n) const {
    auto it = maps.find(n);
    if (it != maps.end()) return it->second;
    return Mat(dst->dim(n + shift), src->dim(n));
}

void ChainMap::check() const {
    if (src == nullptr || dst == nullptr) throw std::invalid_argument("chain map without complexes");
    for (const auto& [n, m] : maps)
        if (m.cols() != src->dim(n) || m.rows() != dst->dim(n + shift))
            throw std::invalid_argument("chain map has the wrong shape at degree " + std::to_string(n));
    for (int n = src->lo(); n <= src->hi(); ++n) {
        if (!dst->in_range(n + shift) && !dst->in_range(n - 1 + shift)) continue;
        if (dst->diff(n + shift) * at(n) != at(n - 1) * src->diff(n))
            throw std::invalid_argument("not a chain map: square fails to commute at degree " + std::to_string(n));
    }
}

Mat induced_map(const ChainMap& f, int n, const HomologyClassSpace& src, const HomologyClassSpace& dst) {
    const Mat fn = f.at(n);
    std::vector<SparseVec> cols;
    cols.reserve(src.dim());
    for (const auto& z : src.cycle_reps()) cols.push_back(dst.coords(fn.apply(z)));
    return Mat::from_columns(dst.dim(), std::move(cols));
}

Mat induced_map(const ChainMap& f, int n) {
    f.check();
    return induced_map(f, n, homology(*f.src, n), homology(*f.dst, n + f.shift));
}

Mat connecting_map(const ChainMap& i, const ChainMap& p, int n, const HomologyClassSpace& hc,
                   const HomologyClassSpace& ha) {
    if (i.dst != p.src) throw std::invalid_argument("connecting map: maps do not share the middle complex");
    const ChainComplex& mid = *p.src;
    const Preimage lift(p.at(n));
    const Preimage pull(i.at(n - 1));
    const Mat d = mid.diff(n);
    std::vector<SparseVec> cols;
    cols.reserve(hc.dim());
    for (const auto& c : hc.cycle_reps()) {
        auto b = lift(c);
        if (!b) throw std::invalid_argument("connecting map: quotient map is not surjective");
        auto a = pull(d.apply(*b));
        if (!a) throw std::invalid_argument("connecting map: boundary of the lift leaves the subcomplex");
        cols.push_back(ha.coords(*a));
    }
    return Mat::from_columns(ha.dim(), std::move(cols));
}

bool ExactnessReport::all_exact() const {
    for (const auto& v : nodes)
        if (!v.exact) return false;
    return true;
}

ExactnessReport check_exact(const std::vector<ExactNode>& seq) {
    for (std::size_t k = 0; k + 1 < seq.size(); ++k)
        if (seq[k].out.cols() != seq[k].dim || seq[k].out.rows() != seq[k + 1].dim)
            throw std::invalid_argument("exact sequence: map out of '" + seq[k].label + "' has the wrong shape");
    ExactnessReport rep;
    for (std::size_t k = 1; k + 1 < seq.size(); ++k) {
        const Subspace im = image(seq[k - 1].out);
        const Subspace ker = kernel(seq[k].out);
        rep.nodes.push_back({seq[k].label, seq[k].dim, ker.dim(), im.dim(), im == ker});
    }
    return rep;
}

}  // namespace cychom

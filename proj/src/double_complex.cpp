#include "cychom/double_complex.hpp"

#include <stdexcept>
#include <string>

namespace cychom {

namespace {

std::string at_str(int p, int q) { return "(" + std::to_string(p) + "," + std::to_string(q) + ")"; }

}  // namespace

void DoubleComplex::set_dim(int p, int q, std::size_t d) {
    if (p < 0 || q < 0 || p + q > top_) throw std::out_of_range("double complex position " + at_str(p, q) + " outside window");
    if (d == 0)
        dims_.erase({p, q});
    else
        dims_[{p, q}] = d;
}

void DoubleComplex::set_horizontal(int p, int q, Mat m) {
    if (m.cols() != dim(p, q) || m.rows() != dim(p - 1, q))
        throw std::invalid_argument("horizontal map at " + at_str(p, q) + " has the wrong shape");
    dh_[{p, q}] = std::move(m);
}

void DoubleComplex::set_vertical(int p, int q, Mat m) {
    if (m.cols() != dim(p, q) || m.rows() != dim(p, q - 1))
        throw std::invalid_argument("vertical map at " + at_str(p, q) + " has the wrong shape");
    dv_[{p, q}] = std::move(m);
}

std::size_t DoubleComplex::dim(int p, int q) const {
    auto it = dims_.find({p, q});
    return it == dims_.end() ? 0 : it->second;
}

Mat DoubleComplex::horizontal(int p, int q) const {
    auto it = dh_.find({p, q});
    if (it != dh_.end()) return it->second;
    return Mat(dim(p - 1, q), dim(p, q));
}

Mat DoubleComplex::vertical(int p, int q) const {
    auto it = dv_.find({p, q});
    if (it != dv_.end()) return it->second;
    return Mat(dim(p, q - 1), dim(p, q));
}

void DoubleComplex::check() const {
    for (const auto& [pq, d] : dims_) {
        const auto [p, q] = pq;
        if (!(horizontal(p - 1, q) * horizontal(p, q)).is_zero())
            throw std::invalid_argument("double complex: horizontal maps do not square to zero at " + at_str(p, q));
        if (!(vertical(p, q - 1) * vertical(p, q)).is_zero())
            throw std::invalid_argument("double complex: vertical maps do not square to zero at " + at_str(p, q));
        if (horizontal(p, q - 1) * vertical(p, q) != vertical(p - 1, q) * horizontal(p, q))
            throw std::invalid_argument("double complex: square at " + at_str(p, q) + " does not commute");
    }
}

TotalLayout total_layout(const DoubleComplex& dc) {
    TotalLayout lay;
    lay.offset.resize(static_cast<std::size_t>(dc.top()) + 1);
    lay.dim.assign(static_cast<std::size_t>(dc.top()) + 1, 0);
    for (int n = 0; n <= dc.top(); ++n)
        for (int p = 0; p <= n; ++p) {
            const std::size_t d = dc.dim(p, n - p);
            if (d == 0) continue;
            lay.offset[static_cast<std::size_t>(n)][p] = lay.dim[static_cast<std::size_t>(n)];
            lay.dim[static_cast<std::size_t>(n)] += d;
        }
    return lay;
}

ChainComplex totalize(const DoubleComplex& dc) {
    const TotalLayout lay = total_layout(dc);
    std::vector<Mat> diffs;
    for (int n = 0; n <= dc.top(); ++n) {
        const auto un = static_cast<std::size_t>(n);
        if (n == 0) {
            diffs.emplace_back(0, lay.dim[0]);
            continue;
        }
        std::vector<std::vector<Entry>> cols(lay.dim[un]);
        for (const auto& [p, off] : lay.offset[un]) {
            const int q = n - p;
            auto emit = [&](const Mat& m, std::size_t row_off) {
                for (std::size_t j = 0; j < m.cols(); ++j)
                    for (const auto& e : m.col(j)) cols[off + j].push_back({static_cast<Index>(e.idx + row_off), e.val});
            };
            const auto& below = lay.offset[un - 1];
            if (auto it = below.find(p - 1); it != below.end()) emit(dc.horizontal(p, q), it->second);
            if (auto it = below.find(p); it != below.end()) {
                Mat v = dc.vertical(p, q);
                emit(p % 2 == 0 ? v : v.scaled(Scalar(-1)), it->second);
            }
        }
        std::vector<SparseVec> norm;
        norm.reserve(cols.size());
        for (auto& c : cols) norm.push_back(normalize(std::move(c)));
        diffs.push_back(Mat::from_columns(lay.dim[un - 1], std::move(norm)));
    }
    return ChainComplex(0, lay.dim, std::move(diffs), dc.truncated());
}

DoubleComplex transpose(const DoubleComplex& dc) {
    DoubleComplex t(dc.top(), dc.truncated());
    for (const auto& [pq, d] : dc.dims()) t.set_dim(pq.second, pq.first, d);
    for (const auto& [pq, d] : dc.dims()) {
        const auto [p, q] = pq;
        t.set_horizontal(q, p, dc.vertical(p, q));
        t.set_vertical(q, p, dc.horizontal(p, q));
    }
    return t;
}

}  // namespace cychom

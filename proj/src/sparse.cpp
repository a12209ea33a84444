#include "cychom/sparse.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>
#include <string>

namespace cychom {

SparseVec normalize(std::vector<Entry> raw) {
    std::sort(raw.begin(), raw.end(), [](const Entry& a, const Entry& b) { return a.idx < b.idx; });
    SparseVec out;
    out.reserve(raw.size());
    for (auto& e : raw) {
        if (!out.empty() && out.back().idx == e.idx) {
            out.back().val += e.val;
            if (out.back().val.is_zero()) out.pop_back();
        } else if (!e.val.is_zero()) {
            out.push_back(std::move(e));
        }
    }
    return out;
}

SparseVec unit_vec(Index i, Scalar v) {
    SparseVec out;
    if (!v.is_zero()) out.push_back({i, std::move(v)});
    return out;
}

Scalar value_at(std::span<const Entry> v, Index i) {
    auto it = std::lower_bound(v.begin(), v.end(), i, [](const Entry& e, Index k) { return e.idx < k; });
    if (it != v.end() && it->idx == i) return it->val;
    return Scalar{};
}

SparseVec axpy(std::span<const Entry> v, const Scalar& f, std::span<const Entry> w) {
    SparseVec r;
    r.reserve(v.size() + w.size());
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < v.size() || j < w.size()) {
        if (j == w.size() || (i < v.size() && v[i].idx < w[j].idx)) {
            r.push_back(v[i++]);
        } else if (i == v.size() || w[j].idx < v[i].idx) {
            r.push_back({w[j].idx, Scalar::sub_mul(Scalar{}, f, w[j].val)});
            ++j;
        } else {
            Scalar s = Scalar::sub_mul(v[i].val, f, w[j].val);
            if (!s.is_zero()) r.push_back({v[i].idx, std::move(s)});
            ++i;
            ++j;
        }
    }
    return r;
}

SparseVec add(std::span<const Entry> v, std::span<const Entry> w) { return axpy(v, Scalar(-1), w); }

SparseVec scaled(std::span<const Entry> v, const Scalar& f) {
    SparseVec r;
    if (f.is_zero()) return r;
    r.reserve(v.size());
    for (const auto& e : v) r.push_back({e.idx, e.val * f});
    return r;
}

SparseVec shifted(std::span<const Entry> v, Index offset) {
    SparseVec r(v.begin(), v.end());
    for (auto& e : r) e.idx += offset;
    return r;
}

std::vector<Scalar> to_dense(std::span<const Entry> v, std::size_t n) {
    std::vector<Scalar> d(n);
    for (const auto& e : v) d.at(e.idx) = e.val;
    return d;
}

SparseVec from_dense(std::span<const Scalar> v) {
    SparseVec r;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!v[i].is_zero()) r.push_back({static_cast<Index>(i), v[i]});
    return r;
}

Mat Mat::identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t j = 0; j < n; ++j) m.col_[j].push_back({static_cast<Index>(j), Scalar(1)});
    return m;
}

Mat Mat::from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> entries) {
    std::vector<std::vector<Entry>> raw(cols);
    for (auto& t : entries) {
        if (t.row >= rows || t.col >= cols) throw std::out_of_range("triplet index outside matrix bounds");
        raw[t.col].push_back({t.row, std::move(t.val)});
    }
    Mat m(rows, cols);
    for (std::size_t j = 0; j < cols; ++j) m.col_[j] = normalize(std::move(raw[j]));
    return m;
}

Mat Mat::from_columns(std::size_t rows, std::vector<SparseVec> columns) {
    Mat m(rows, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) m.set_col(j, std::move(columns[j]));
    return m;
}

Mat Mat::from_rows(const std::vector<std::vector<Scalar>>& rows, std::size_t cols) {
    Mat m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols) throw std::invalid_argument("ragged dense matrix");
        for (std::size_t j = 0; j < cols; ++j)
            if (!rows[i][j].is_zero()) m.col_[j].push_back({static_cast<Index>(i), rows[i][j]});
    }
    return m;
}

std::size_t Mat::nnz() const noexcept {
    std::size_t n = 0;
    for (const auto& c : col_) n += c.size();
    return n;
}

Scalar Mat::at(std::size_t i, std::size_t j) const {
    if (i >= rows_ || j >= cols_) throw std::out_of_range("matrix index");
    return value_at(col_[j], static_cast<Index>(i));
}

bool Mat::is_zero() const noexcept {
    return std::all_of(col_.begin(), col_.end(), [](const SparseVec& c) { return c.empty(); });
}

bool Mat::is_identity() const {
    if (rows_ != cols_) return false;
    for (std::size_t j = 0; j < cols_; ++j)
        if (col_[j].size() != 1 || col_[j][0].idx != j || !col_[j][0].val.is_one()) return false;
    return true;
}

void Mat::set_col(std::size_t j, SparseVec v) {
    if (j >= cols_) throw std::out_of_range("column index");
    Index prev = 0;
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (v[k].idx >= rows_) throw std::out_of_range("row index " + std::to_string(v[k].idx) + " outside matrix");
        if (v[k].val.is_zero()) throw std::invalid_argument("stored zero in sparse column");
        if (k > 0 && v[k].idx <= prev) throw std::invalid_argument("unsorted sparse column");
        prev = v[k].idx;
    }
    col_[j] = std::move(v);
}

Mat Mat::transpose() const {
    Mat t(cols_, rows_);
    std::vector<std::size_t> count(rows_, 0);
    for (const auto& c : col_)
        for (const auto& e : c) ++count[e.idx];
    for (std::size_t i = 0; i < rows_; ++i) t.col_[i].reserve(count[i]);
    for (std::size_t j = 0; j < cols_; ++j)
        for (const auto& e : col_[j]) t.col_[e.idx].push_back({static_cast<Index>(j), e.val});
    return t;
}

namespace {

// Dense scatter accumulator reused across columns.
class Accumulator {
public:
    explicit Accumulator(std::size_t n) : vals_(n), live_(n, 0) {}
    void add(Index i, const Scalar& a, const Scalar& b) {
        if (!live_[i]) {
            live_[i] = 1;
            touched_.push_back(i);
            vals_[i] = a * b;
        } else {
            vals_[i] = Scalar::sub_mul(vals_[i], -a, b);
        }
    }
    SparseVec flush() {
        std::sort(touched_.begin(), touched_.end());
        SparseVec out;
        out.reserve(touched_.size());
        for (Index i : touched_) {
            if (!vals_[i].is_zero()) out.push_back({i, std::move(vals_[i])});
            vals_[i] = Scalar{};
            live_[i] = 0;
        }
        touched_.clear();
        return out;
    }

private:
    std::vector<Scalar> vals_;
    std::vector<char> live_;
    std::vector<Index> touched_;
};

}  // namespace

SparseVec Mat::apply(std::span<const Entry> v) const {
    Accumulator acc(rows_);
    for (const auto& e : v) {
        if (e.idx >= cols_) throw std::out_of_range("vector longer than matrix domain");
        for (const auto& x : col_[e.idx]) acc.add(x.idx, x.val, e.val);
    }
    return acc.flush();
}

Mat Mat::scaled(const Scalar& f) const {
    Mat m(rows_, cols_);
    for (std::size_t j = 0; j < cols_; ++j) m.col_[j] = cychom::scaled(col_[j], f);
    return m;
}

Mat Mat::power(unsigned k) const {
    if (rows_ != cols_) throw std::invalid_argument("power of a non-square matrix");
    Mat result = identity(rows_);
    Mat base = *this;
    while (k > 0) {
        if (k & 1U) result = result * base;
        k >>= 1U;
        if (k > 0) base = base * base;
    }
    return result;
}

std::vector<std::vector<Scalar>> Mat::dense() const {
    std::vector<std::vector<Scalar>> d(rows_, std::vector<Scalar>(cols_));
    for (std::size_t j = 0; j < cols_; ++j)
        for (const auto& e : col_[j]) d[e.idx][j] = e.val;
    return d;
}

Mat operator+(const Mat& a, const Mat& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("matrix sum dimension mismatch");
    Mat m(a.rows_, a.cols_);
    for (std::size_t j = 0; j < a.cols_; ++j) m.col_[j] = add(a.col_[j], b.col_[j]);
    return m;
}

Mat operator-(const Mat& a, const Mat& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("matrix difference dimension mismatch");
    Mat m(a.rows_, a.cols_);
    for (std::size_t j = 0; j < a.cols_; ++j) m.col_[j] = axpy(a.col_[j], Scalar(1), b.col_[j]);
    return m;
}

Mat operator*(const Mat& a, const Mat& b) {
    if (a.cols_ != b.rows_)
        throw std::invalid_argument("matrix product dimension mismatch: " + std::to_string(a.rows_) + "x" +
                                    std::to_string(a.cols_) + " times " + std::to_string(b.rows_) + "x" +
                                    std::to_string(b.cols_));
    Mat m(a.rows_, b.cols_);
    Accumulator acc(a.rows_);
    for (std::size_t j = 0; j < b.cols_; ++j) {
        const auto& bc = b.col_[j];
        if (bc.size() == 1 && bc[0].val.is_one()) {
            m.col_[j] = a.col_[bc[0].idx];
            continue;
        }
        for (const auto& e : bc)
            for (const auto& x : a.col_[e.idx]) acc.add(x.idx, x.val, e.val);
        m.col_[j] = acc.flush();
    }
    return m;
}

bool operator==(const Mat& a, const Mat& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.col_ == b.col_;
}

Mat compose(const Mat& a, const Mat& b) { return a * b; }

Mat block(std::span<const std::size_t> row_dims, std::span<const std::size_t> col_dims,
          const std::vector<std::vector<const Mat*>>& grid) {
    if (grid.size() != row_dims.size()) throw std::invalid_argument("block grid row count mismatch");
    std::vector<std::size_t> row_off(row_dims.size() + 1, 0);
    for (std::size_t i = 0; i < row_dims.size(); ++i) row_off[i + 1] = row_off[i] + row_dims[i];
    std::size_t total_cols = 0;
    for (auto c : col_dims) total_cols += c;
    std::vector<SparseVec> cols(total_cols);
    std::size_t col_base = 0;
    for (std::size_t bj = 0; bj < col_dims.size(); ++bj) {
        for (std::size_t bi = 0; bi < row_dims.size(); ++bi) {
            if (grid[bi].size() != col_dims.size()) throw std::invalid_argument("block grid column count mismatch");
            const Mat* m = grid[bi][bj];
            if (m == nullptr) continue;
            if (m->rows() != row_dims[bi] || m->cols() != col_dims[bj])
                throw std::invalid_argument("block has wrong shape");
            for (std::size_t j = 0; j < m->cols(); ++j) {
                auto& dst = cols[col_base + j];
                for (const auto& e : m->col(j)) dst.push_back({static_cast<Index>(e.idx + row_off[bi]), e.val});
            }
        }
        col_base += col_dims[bj];
    }
    // Blocks were appended in increasing row-block order, so columns are sorted.
    return Mat::from_columns(row_off.back(), std::move(cols));
}

Mat direct_sum(std::span<const Mat> parts) {
    std::size_t r = 0;
    std::size_t c = 0;
    for (const auto& p : parts) {
        r += p.rows();
        c += p.cols();
    }
    std::vector<SparseVec> cols;
    cols.reserve(c);
    std::size_t roff = 0;
    for (const auto& p : parts) {
        for (std::size_t j = 0; j < p.cols(); ++j) cols.push_back(shifted(p.col(j), static_cast<Index>(roff)));
        roff += p.rows();
    }
    return Mat::from_columns(r, std::move(cols));
}

Mat kron(const Mat& a, const Mat& b) {
    std::vector<SparseVec> cols(a.cols() * b.cols());
    for (std::size_t ja = 0; ja < a.cols(); ++ja)
        for (std::size_t jb = 0; jb < b.cols(); ++jb) {
            auto& dst = cols[ja * b.cols() + jb];
            for (const auto& ea : a.col(ja))
                for (const auto& eb : b.col(jb))
                    dst.push_back({static_cast<Index>(ea.idx * b.rows() + eb.idx), ea.val * eb.val});
        }
    return Mat::from_columns(a.rows() * b.rows(), std::move(cols));
}

Mat kron_between(std::size_t left, const Mat& op, std::size_t right) {
    std::vector<SparseVec> cols;
    cols.reserve(left * op.cols() * right);
    const std::size_t block = op.rows() * right;
    for (std::size_t l = 0; l < left; ++l)
        for (std::size_t j = 0; j < op.cols(); ++j)
            for (std::size_t r = 0; r < right; ++r) {
                SparseVec c;
                c.reserve(op.col(j).size());
                for (const auto& e : op.col(j))
                    c.push_back({static_cast<Index>(l * block + e.idx * right + r), e.val});
                cols.push_back(std::move(c));
            }
    return Mat::from_columns(left * block, std::move(cols));
}

Mat select_rows(const Mat& m, std::span<const Index> rows) {
    std::vector<std::int64_t> where(m.rows(), -1);
    for (std::size_t k = 0; k < rows.size(); ++k) where.at(rows[k]) = static_cast<std::int64_t>(k);
    std::vector<SparseVec> cols(m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j) {
        std::vector<Entry> raw;
        for (const auto& e : m.col(j))
            if (where[e.idx] >= 0) raw.push_back({static_cast<Index>(where[e.idx]), e.val});
        cols[j] = normalize(std::move(raw));
    }
    return Mat::from_columns(rows.size(), std::move(cols));
}

Mat select_cols(const Mat& m, std::span<const Index> cols) {
    std::vector<SparseVec> out;
    out.reserve(cols.size());
    for (Index j : cols) out.push_back(m.col(j));
    return Mat::from_columns(m.rows(), std::move(out));
}

Mat permuted(const Mat& m, std::span<const Index> row_perm, std::span<const Index> col_perm) {
    if (row_perm.size() != m.rows() || col_perm.size() != m.cols()) throw std::invalid_argument("permutation size");
    std::vector<SparseVec> cols(m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j) {
        std::vector<Entry> raw;
        for (const auto& e : m.col(j)) raw.push_back({row_perm[e.idx], e.val});
        cols[col_perm[j]] = normalize(std::move(raw));
    }
    return Mat::from_columns(m.rows(), std::move(cols));
}

std::ostream& operator<<(std::ostream& os, const Mat& m) {
    const auto d = m.dense();
    os << '[';
    for (std::size_t i = 0; i < d.size(); ++i) {
        os << (i ? "; " : "");
        for (std::size_t j = 0; j < d[i].size(); ++j) os << (j ? " " : "") << d[i][j];
    }
    return os << ']';
}

}  // namespace cychom

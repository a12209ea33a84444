#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "cychom/scalar.hpp"

namespace cychom {

using Index = std::uint32_t;

struct Entry {
    Index idx;
    Scalar val;
    friend bool operator==(const Entry&, const Entry&) = default;
};

// Sorted by index, no stored zeros.
using SparseVec = std::vector<Entry>;

struct Triplet {
    Index row;
    Index col;
    Scalar val;
};

// Sorts, merges duplicates and drops zeros.
SparseVec normalize(std::vector<Entry> raw);
SparseVec unit_vec(Index i, Scalar v = 1);
Scalar value_at(std::span<const Entry> v, Index i);
// v - f*w
SparseVec axpy(std::span<const Entry> v, const Scalar& f, std::span<const Entry> w);
SparseVec add(std::span<const Entry> v, std::span<const Entry> w);
SparseVec scaled(std::span<const Entry> v, const Scalar& f);
SparseVec shifted(std::span<const Entry> v, Index offset);
std::vector<Scalar> to_dense(std::span<const Entry> v, std::size_t n);
SparseVec from_dense(std::span<const Scalar> v);

// Sparse column-major matrix over Q.
class Mat {
public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), col_(cols) {}

    static Mat identity(std::size_t n);
    static Mat zero(std::size_t rows, std::size_t cols) { return Mat(rows, cols); }
    static Mat from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> entries);
    static Mat from_columns(std::size_t rows, std::vector<SparseVec> columns);
    // Row-major dense input, the natural shape for hand-written examples.
    static Mat from_rows(const std::vector<std::vector<Scalar>>& rows, std::size_t cols);
    static Mat from_rows(const std::vector<std::vector<Scalar>>& rows) {
        return from_rows(rows, rows.empty() ? 0 : rows.front().size());
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t nnz() const noexcept;
    const SparseVec& col(std::size_t j) const { return col_.at(j); }
    const std::vector<SparseVec>& columns() const noexcept { return col_; }
    Scalar at(std::size_t i, std::size_t j) const;
    bool is_zero() const noexcept;
    bool is_identity() const;

    // Replaces column j; the vector must already be normalized.
    void set_col(std::size_t j, SparseVec v);

    Mat transpose() const;
    SparseVec apply(std::span<const Entry> v) const;
    Mat scaled(const Scalar& f) const;
    Mat power(unsigned k) const;
    std::vector<std::vector<Scalar>> dense() const;

    friend Mat operator+(const Mat& a, const Mat& b);
    friend Mat operator-(const Mat& a, const Mat& b);
    friend Mat operator*(const Mat& a, const Mat& b);
    friend bool operator==(const Mat& a, const Mat& b);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<SparseVec> col_;
};

Mat compose(const Mat& a, const Mat& b);  // a after b
// Block matrix from a grid; null entries are zero blocks. Block sizes come
// from row_dims and col_dims.
Mat block(std::span<const std::size_t> row_dims, std::span<const std::size_t> col_dims,
          const std::vector<std::vector<const Mat*>>& grid);
Mat direct_sum(std::span<const Mat> parts);
Mat kron(const Mat& a, const Mat& b);
// I_left (x) op (x) I_right without forming the identities.
Mat kron_between(std::size_t left, const Mat& op, std::size_t right);
// Keeps the listed rows or columns, renumbered in list order.
Mat select_rows(const Mat& m, std::span<const Index> rows);
Mat select_cols(const Mat& m, std::span<const Index> cols);
// Conjugation by basis permutations: result(p[i], q[j]) = m(i, j).
Mat permuted(const Mat& m, std::span<const Index> row_perm, std::span<const Index> col_perm);

std::ostream& operator<<(std::ostream& os, const Mat& m);

}  // namespace cychom

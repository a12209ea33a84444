#include "cychom/algebra.hpp"

#include <stdexcept>

#include "cychom/linalg.hpp"

namespace cychom {

FinAlgebra::FinAlgebra(std::vector<std::string> labels, Mat product, SparseVec unit)
    : labels_(std::move(labels)), product_(std::move(product)), unit_(std::move(unit)) {
    const std::size_t n = labels_.size();
    if (product_.rows() != n || product_.cols() != n * n) throw std::invalid_argument("structure constants have the wrong shape");
    if (!unit_.empty() && unit_.back().idx >= n) throw std::invalid_argument("unit vector out of range");
}

SparseVec FinAlgebra::multiply(std::span<const Entry> u, std::span<const Entry> v) const {
    std::vector<Entry> raw;
    for (const auto& a : u)
        for (const auto& b : v)
            for (const auto& e : product_.col(a.idx * dim() + b.idx)) raw.push_back({e.idx, a.val * b.val * e.val});
    return normalize(std::move(raw));
}

Mat FinAlgebra::left(std::span<const Entry> u) const {
    std::vector<SparseVec> cols;
    for (std::size_t j = 0; j < dim(); ++j) cols.push_back(multiply(u, unit_vec(static_cast<Index>(j))));
    return Mat::from_columns(dim(), std::move(cols));
}

Mat FinAlgebra::right(std::span<const Entry> u) const {
    std::vector<SparseVec> cols;
    for (std::size_t j = 0; j < dim(); ++j) cols.push_back(multiply(unit_vec(static_cast<Index>(j)), u));
    return Mat::from_columns(dim(), std::move(cols));
}

ValidationReport validate(const FinAlgebra& a) {
    ValidationReport rep;
    const std::size_t n = a.dim();
    const Mat& m = a.product();
    const Mat lhs = m * kron_between(1, m, n);
    const Mat rhs = m * kron_between(n, m, 1);
    for (std::size_t c = 0; c < lhs.cols(); ++c) {
        if (lhs.col(c) == rhs.col(c)) continue;
        const std::size_t i = c / (n * n), j = (c / n) % n, k = c % n;
        rep.violations.push_back("associativity fails on (" + a.labels()[i] + "," + a.labels()[j] + "," + a.labels()[k] + ")");
        break;
    }
    for (std::size_t j = 0; j < n; ++j) {
        const SparseVec e = unit_vec(static_cast<Index>(j));
        if (a.multiply(a.unit(), e) != e || a.multiply(e, a.unit()) != e) {
            rep.violations.push_back("unit fails on " + a.labels()[j]);
            break;
        }
    }
    return rep;
}

FinAlgebra ground_field() { return FinAlgebra({"1"}, Mat::identity(1), unit_vec(0)); }

FinAlgebra zero_algebra() { return FinAlgebra({}, Mat(0, 0), {}); }

FinAlgebra group_algebra(const FiniteGroupoid& group) {
    if (group.num_objects() != 1) throw std::invalid_argument("group algebra needs a one-object groupoid");
    const std::size_t n = group.num_arrows();
    std::vector<std::string> labels;
    std::vector<SparseVec> cols;
    for (ArrowId g = 0; g < static_cast<ArrowId>(n); ++g) {
        labels.push_back(group.arrow(g).name);
        for (ArrowId h = 0; h < static_cast<ArrowId>(n); ++h) cols.push_back(unit_vec(static_cast<Index>(group.compose(g, h))));
    }
    return FinAlgebra(std::move(labels), Mat::from_columns(n, std::move(cols)), unit_vec(static_cast<Index>(group.unit(0))));
}

FinAlgebra function_algebra(std::size_t k) {
    std::vector<std::string> labels;
    std::vector<SparseVec> cols;
    for (std::size_t i = 0; i < k; ++i) {
        labels.push_back("d" + std::to_string(i));
        for (std::size_t j = 0; j < k; ++j) cols.push_back(i == j ? unit_vec(static_cast<Index>(i)) : SparseVec{});
    }
    std::vector<Entry> one;
    for (std::size_t i = 0; i < k; ++i) one.push_back({static_cast<Index>(i), Scalar(1)});
    return FinAlgebra(std::move(labels), Mat::from_columns(k, std::move(cols)), std::move(one));
}

FinAlgebra matrix_algebra(std::size_t k) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) labels.push_back("E" + std::to_string(i) + std::to_string(j));
    const std::size_t n = k * k;
    std::vector<SparseVec> cols;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            cols.push_back(a % k == b / k ? unit_vec(static_cast<Index>((a / k) * k + b % k)) : SparseVec{});
    std::vector<Entry> one;
    for (std::size_t i = 0; i < k; ++i) one.push_back({static_cast<Index>(i * k + i), Scalar(1)});
    return FinAlgebra(std::move(labels), Mat::from_columns(n, std::move(cols)), std::move(one));
}

FinAlgebra tensor(const FinAlgebra& a, const FinAlgebra& b) {
    const std::size_t na = a.dim(), nb = b.dim();
    std::vector<std::string> labels;
    for (const auto& x : a.labels())
        for (const auto& y : b.labels()) labels.push_back(x + "*" + y);
    // (a1 b1)(a2 b2) = a1 a2 (x) b1 b2: reorder the four factors, then multiply.
    std::vector<SparseVec> cols;
    for (std::size_t i = 0; i < na * nb; ++i)
        for (std::size_t j = 0; j < na * nb; ++j) {
            const SparseVec& pa = a.product().col((i / nb) * na + j / nb);
            const SparseVec& pb = b.product().col((i % nb) * nb + j % nb);
            std::vector<Entry> raw;
            for (const auto& x : pa)
                for (const auto& y : pb) raw.push_back({static_cast<Index>(x.idx * nb + y.idx), x.val * y.val});
            cols.push_back(normalize(std::move(raw)));
        }
    std::vector<Entry> one;
    for (const auto& x : a.unit())
        for (const auto& y : b.unit()) one.push_back({static_cast<Index>(x.idx * nb + y.idx), x.val * y.val});
    return FinAlgebra(std::move(labels), Mat::from_columns(na * nb, std::move(cols)), normalize(std::move(one)));
}

bool is_endomorphism(const FinAlgebra& a, const Mat& alpha) {
    if (alpha.rows() != a.dim() || alpha.cols() != a.dim()) return false;
    if (alpha.apply(a.unit()) != a.unit()) return false;
    return alpha * a.product() == a.product() * kron(alpha, alpha);
}

int automorphism_order(const Mat& alpha, int bound) {
    if (alpha.rows() != alpha.cols()) throw std::invalid_argument("automorphism must be square");
    Mat p = alpha;
    for (int r = 1; r <= bound; ++r) {
        if (p.is_identity()) return r;
        p = p * alpha;
    }
    throw std::domain_error("automorphism has no finite order up to " + std::to_string(bound));
}

std::size_t commutator_quotient_dim(const FinAlgebra& a) {
    std::vector<SparseVec> comm;
    const std::size_t n = a.dim();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            comm.push_back(axpy(a.product().col(i * n + j), Scalar(1), a.product().col(j * n + i)));
    return n - Subspace::span(n, comm).dim();
}

std::size_t center_dim(const FinAlgebra& a) {
    // z is central iff (L_{e_i} - R_{e_i}) z = 0 for every basis vector.
    const std::size_t n = a.dim();
    std::vector<Mat> blocks;
    for (std::size_t i = 0; i < n; ++i) blocks.push_back(a.left(unit_vec(static_cast<Index>(i))) - a.right(unit_vec(static_cast<Index>(i))));
    std::vector<std::vector<const Mat*>> grid;
    std::vector<std::size_t> rows(n, n);
    const std::vector<std::size_t> cols{n};
    for (const Mat& b : blocks) grid.push_back({&b});
    return n - rank(block(rows, cols, grid));
}

}  // namespace cychom

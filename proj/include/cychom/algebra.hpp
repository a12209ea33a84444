#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cychom/groupoid.hpp"
#include "cychom/sparse.hpp"

namespace cychom {

// Finite-dimensional algebra over Q given by structure constants. The
// product is a linear map A (x) A -> A on the Kronecker basis e_i (x) e_j at
// index i * dim + j.
class FinAlgebra {
public:
    FinAlgebra() = default;
    FinAlgebra(std::vector<std::string> labels, Mat product, SparseVec unit);

    std::size_t dim() const noexcept { return labels_.size(); }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    const Mat& product() const noexcept { return product_; }
    const SparseVec& unit() const noexcept { return unit_; }

    SparseVec multiply(std::span<const Entry> u, std::span<const Entry> v) const;
    // Left and right multiplication by u as matrices.
    Mat left(std::span<const Entry> u) const;
    Mat right(std::span<const Entry> u) const;

    friend bool operator==(const FinAlgebra&, const FinAlgebra&) = default;

private:
    std::vector<std::string> labels_;
    Mat product_;
    SparseVec unit_;
};

// Associativity on all basis triples and the two-sided unit.
ValidationReport validate(const FinAlgebra& a);

FinAlgebra ground_field();
FinAlgebra zero_algebra();
// Q[G] on a one-object groupoid, basis in arrow order.
FinAlgebra group_algebra(const FiniteGroupoid& group);
// Pointwise functions on k points.
FinAlgebra function_algebra(std::size_t k);
// k x k matrices, basis E_ij at index i * k + j.
FinAlgebra matrix_algebra(std::size_t k);
FinAlgebra tensor(const FinAlgebra& a, const FinAlgebra& b);

// alpha multiplicative and unital.
bool is_endomorphism(const FinAlgebra& a, const Mat& alpha);
// Smallest r >= 1 with alpha^r = id; throws std::domain_error if none up to bound.
int automorphism_order(const Mat& alpha, int bound = 4096);

// Dimension of A / [A, A].
std::size_t commutator_quotient_dim(const FinAlgebra& a);
std::size_t center_dim(const FinAlgebra& a);

}  // namespace cychom

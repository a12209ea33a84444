#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "cychom/sparse.hpp"

namespace cychom {

// Vectors with pairwise distinct pivots, where the pivot of a vector is its
// largest nonzero index and carries coefficient 1.
class Echelon {
public:
    explicit Echelon(std::size_t ambient) : ambient_(ambient), slot_(ambient, -1) {}

    std::size_t ambient_dim() const noexcept { return ambient_; }
    std::size_t size() const noexcept { return vecs_.size(); }
    const std::vector<SparseVec>& vectors() const noexcept { return vecs_; }
    bool is_pivot(Index i) const { return slot_[i] >= 0; }
    std::size_t slot(Index pivot) const { return static_cast<std::size_t>(slot_[pivot]); }
    const SparseVec& at_pivot(Index i) const { return vecs_[slot(i)]; }

    // Eliminates until the last entry of v is not a pivot (or v is zero).
    void reduce_low(SparseVec& v) const;
    // Eliminates every pivot coordinate of v strictly below bound.
    void reduce_below(SparseVec& v, std::size_t bound) const;
    void reduce_full(SparseVec& v) const { reduce_below(v, ambient_); }
    // Low-reduces v and keeps it if nonzero. Returns the new pivot, if any.
    std::optional<Index> insert(SparseVec v);
    // Back-substitution: afterwards each vector vanishes at all other pivots,
    // and vectors are ordered by increasing pivot.
    void make_reduced();

private:
    std::size_t ambient_;
    std::vector<SparseVec> vecs_;
    std::vector<int> slot_;
};

// A subspace of Q^n held in its canonical reduced echelon basis.
class Subspace {
public:
    Subspace() = default;
    static Subspace zero(std::size_t ambient);
    static Subspace full(std::size_t ambient);
    static Subspace span(std::size_t ambient, std::span<const SparseVec> vectors);

    std::size_t ambient_dim() const noexcept { return ech_.ambient_dim(); }
    std::size_t dim() const noexcept { return ech_.size(); }
    const std::vector<SparseVec>& basis() const noexcept { return ech_.vectors(); }
    std::vector<Index> pivots() const;

    // The unique representative of v + this subspace vanishing at all pivots.
    SparseVec residue(SparseVec v) const;
    bool contains(std::span<const Entry> v) const;
    bool contains(const Subspace& other) const;
    Subspace operator+(const Subspace& other) const;
    friend bool operator==(const Subspace& a, const Subspace& b) {
        return a.ambient_dim() == b.ambient_dim() && a.basis() == b.basis();
    }

private:
    explicit Subspace(Echelon e) : ech_(std::move(e)) {}
    Echelon ech_{0};
};

std::size_t rank(const Mat& m);
Subspace kernel(const Mat& m);
Subspace image(const Mat& m);
std::size_t quotient_dim(const Subspace& big, const Subspace& small);

// Ranks of the maps of a complex given lowest degree first, so that
// maps[i] composed after maps[i+1] vanishes. Pivots found for maps[i] let the
// corresponding rows of maps[i+1] be skipped.
std::vector<std::size_t> complex_ranks(std::span<const Mat* const> maps);

// Reduces the columns of m once, then answers preimage queries.
class Preimage {
public:
    explicit Preimage(const Mat& m);
    // Some x with m x = rhs, if one exists.
    std::optional<SparseVec> operator()(std::span<const Entry> rhs) const;

private:
    std::size_t rows_;
    Echelon ech_;
    std::vector<SparseVec> combos_;
};

std::optional<SparseVec> solve(const Mat& m, std::span<const Entry> rhs);
Scalar dot(std::span<const Entry> a, std::span<const Entry> b);

// cycles / boundaries with canonical representatives.
class Subquotient {
public:
    Subquotient() = default;
    Subquotient(Subspace cycles, Subspace boundaries);

    std::size_t dim() const noexcept { return reps_.size(); }
    std::size_t ambient_dim() const noexcept { return cycles_.ambient_dim(); }
    const Subspace& cycles() const noexcept { return cycles_; }
    const Subspace& boundaries() const noexcept { return boundaries_; }
    const std::vector<SparseVec>& reps() const noexcept { return reps_; }

    // Coordinates of the class of v; throws if v is not in the cycle space.
    SparseVec coords(std::span<const Entry> v) const;
    bool is_zero_class(std::span<const Entry> v) const { return boundaries_.contains(v); }

private:
    Subspace cycles_;
    Subspace boundaries_;
    std::vector<SparseVec> reps_;  // reduced echelon, pivots disjoint from the boundary pivots
    std::vector<Index> rep_pivot_;
};

// Induced map src -> dst of m. Throws if m does not carry cycles to cycles
// and boundaries to boundaries.
Mat restrict_to_quotient(const Mat& m, const Subquotient& src, const Subquotient& dst);

// Cocycle representatives, as vectors over the basis of the middle space, of
// a basis of the cohomology of C_{n+1} --d_in--> C_n --d_out--> C_{n-1} at C_n.
// Uses the pivots of d_out to skip rows of d_in known to be coboundaries.
std::vector<SparseVec> cohomology_basis(const Mat& d_in, const Mat& d_out);

// Inverse of a square invertible matrix; throws if singular.
Mat inverse(const Mat& m);

}  // namespace cychom

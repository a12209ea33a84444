#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "cychom/linalg.hpp"
#include "cychom/sparse.hpp"

namespace cychom {

// Graded space C_lo..C_hi with d_n : C_n -> C_{n-1}. When the complex is a
// window cut out of a longer one, homology is only trusted below the top.
class ChainComplex {
public:
    ChainComplex() = default;
    // diffs[k] is d_{lo+k}; d_lo must have zero rows. Checks d o d = 0.
    ChainComplex(int lo, std::vector<std::size_t> dims, std::vector<Mat> diffs, bool truncated);

    int lo() const noexcept { return lo_; }
    int hi() const noexcept { return lo_ + static_cast<int>(dims_.size()) - 1; }
    bool truncated() const noexcept { return truncated_; }
    // Highest degree whose homology is determined by the stored data.
    int valid_hi() const noexcept { return truncated_ ? hi() - 1 : hi(); }
    bool in_range(int n) const noexcept { return n >= lo_ && n <= hi(); }

    std::size_t dim(int n) const;
    // d_n for any n; zero maps outside the stored range.
    Mat diff(int n) const;
    const Mat& stored_diff(int n) const;

private:
    int lo_ = 0;
    std::vector<std::size_t> dims_;
    std::vector<Mat> d_;
    bool truncated_ = false;
};

// Homology at one degree with cycle representatives. Classes are read off by
// pairing with cocycles, so boundaries never need to be materialized.
class HomologyClassSpace {
public:
    HomologyClassSpace() = default;
    HomologyClassSpace(int degree, Mat boundary_out, std::vector<SparseVec> cycle_reps,
                       std::vector<SparseVec> cocycles, Mat pairing_inverse);

    int degree() const noexcept { return degree_; }
    std::size_t dim() const noexcept { return reps_.size(); }
    std::size_t ambient_dim() const noexcept { return d_.cols(); }
    const std::vector<SparseVec>& cycle_reps() const noexcept { return reps_; }
    const std::vector<SparseVec>& cocycles() const noexcept { return cocycles_; }

    bool is_cycle(std::span<const Entry> v) const { return d_.apply(v).empty(); }
    // Coordinates of the class of a cycle in the rep basis; throws otherwise.
    SparseVec coords(std::span<const Entry> cycle) const;

private:
    int degree_ = 0;
    Mat d_;
    std::vector<SparseVec> reps_;
    std::vector<SparseVec> cocycles_;
    Mat pinv_;
};

HomologyClassSpace homology(const ChainComplex& c, int n);
// dim H_n for every n in [lo, valid_hi], indexed from lo.
std::vector<std::size_t> homology_dims(const ChainComplex& c);

// f_n : C_n -> D_{n+shift} commuting strictly with the differentials.
struct ChainMap {
    const ChainComplex* src = nullptr;
    const ChainComplex* dst = nullptr;
    int shift = 0;
    std::map<int, Mat> maps;

    // Zero outside the stored entries.
    Mat at(int n) const;
    // Throws naming the first degree where the square fails to commute.
    void check() const;
};

Mat induced_map(const ChainMap& f, int n, const HomologyClassSpace& src, const HomologyClassSpace& dst);
Mat induced_map(const ChainMap& f, int n);

// Boundary map H_n(C) -> H_{n-1}(A) of 0 -> A -i-> B -p-> C -> 0, by lifting
// along p, applying d, and pulling back along i.
Mat connecting_map(const ChainMap& i, const ChainMap& p, int n, const HomologyClassSpace& hc,
                   const HomologyClassSpace& ha);

struct ExactNode {
    std::string label;
    std::size_t dim = 0;
    Mat out;  // to the next node; ignored on the last node
};

struct ExactnessVerdict {
    std::string label;
    std::size_t dim = 0;
    std::size_t dim_kernel_out = 0;
    std::size_t dim_image_in = 0;
    bool exact = false;
};

struct ExactnessReport {
    std::vector<ExactnessVerdict> nodes;  // interior nodes only
    bool all_exact() const;
};

ExactnessReport check_exact(const std::vector<ExactNode>& seq);

}  // namespace cychom

#pragma once

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "cychom/chain_complex.hpp"

namespace cychom {

using Bidegree = std::pair<int, int>;

// First-quadrant double complex with commuting squares, stored on the
// positions p, q >= 0 with p + q <= top. Missing positions are zero.
// The sign (-1)^p on the vertical maps is introduced only by totalize.
class DoubleComplex {
public:
    DoubleComplex() = default;
    DoubleComplex(int top, bool truncated) : top_(top), truncated_(truncated) {}

    int top() const noexcept { return top_; }
    bool truncated() const noexcept { return truncated_; }

    void set_dim(int p, int q, std::size_t d);
    // (p,q) -> (p-1,q)
    void set_horizontal(int p, int q, Mat m);
    // (p,q) -> (p,q-1)
    void set_vertical(int p, int q, Mat m);

    std::size_t dim(int p, int q) const;
    Mat horizontal(int p, int q) const;
    Mat vertical(int p, int q) const;
    const std::map<Bidegree, std::size_t>& dims() const noexcept { return dims_; }

    // Throws on the first failing identity: d_h^2, d_v^2, or d_h d_v = d_v d_h.
    void check() const;

private:
    int top_ = 0;
    bool truncated_ = true;
    std::map<Bidegree, std::size_t> dims_;
    std::map<Bidegree, Mat> dh_;
    std::map<Bidegree, Mat> dv_;
};

// Blocks of Tot_n ordered by increasing p.
struct TotalLayout {
    // offset[n][p] is the start of block (p, n-p) inside Tot_n.
    std::vector<std::map<int, std::size_t>> offset;
    std::vector<std::size_t> dim;
};

TotalLayout total_layout(const DoubleComplex& dc);
ChainComplex totalize(const DoubleComplex& dc);
DoubleComplex transpose(const DoubleComplex& dc);

}  // namespace cychom

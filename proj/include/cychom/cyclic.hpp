#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "cychom/algebra.hpp"
#include "cychom/chain_complex.hpp"
#include "cychom/double_complex.hpp"
#include "cychom/gsheaf.hpp"
#include "cychom/simplicial.hpp"

namespace cychom {

inline constexpr int kInfiniteOrder = 0;

// r-cyclic vector space on degrees 0..top: t_n^{r(n+1)} = 1 for finite r.
struct CyclicModule {
    int order = 1;
    CyclicOperators ops;

    int top() const noexcept { return ops.top(); }
    std::size_t dim(int n) const { return ops.dims.at(static_cast<std::size_t>(n)); }
};

ValidationReport validate(const CyclicModule& cm);
// Throws std::invalid_argument naming the first violation.
const CyclicModule& require_valid(const CyclicModule& cm);

// b' = sum_{j<n} (-1)^j d_j, b = b' + (-1)^n d_n, tau = (-1)^n t_n,
// extra degeneracy s_{-1} = t_{n+1} s_n, N = sum of tau^j over r(n+1) terms,
// B = (1 - tau) s_{-1} N.
class DerivedOperators {
public:
    explicit DerivedOperators(const CyclicModule& cm);

    int top() const noexcept { return top_; }
    bool finite() const noexcept { return !norm_.empty(); }
    const Mat& b(int n) const { return b_.at(idx(n)); }
    const Mat& b_prime(int n) const { return bp_.at(idx(n)); }
    const Mat& tau(int n) const { return tau_.at(idx(n)); }
    // X_n -> X_{n+1}, n < top.
    const Mat& extra_degeneracy(int n) const { return extra_.at(idx(n)); }
    // Both throw std::domain_error for infinite order.
    const Mat& norm(int n) const;
    const Mat& connes(int n) const;

    // s_{-1} contracts b', and N (1 - tau) = (1 - tau) N = 0.
    ValidationReport check() const;

private:
    static std::size_t idx(int n) { return static_cast<std::size_t>(n); }
    int top_;
    std::vector<Mat> b_, bp_, tau_, extra_, norm_, connes_;
};

struct MixedComplex {
    std::vector<std::size_t> dims;
    std::vector<Mat> b;  // b[n] : X_n -> X_{n-1}, b[0] has no rows
    std::vector<Mat> B;  // B[n] : X_n -> X_{n+1}, n < top

    int top() const noexcept { return static_cast<int>(dims.size()) - 1; }
};

// b^2 = B^2 = bB + Bb = 0.
ValidationReport validate(const MixedComplex& mc);
// Requires order 1.
MixedComplex mixed(const CyclicModule& cm);

ChainComplex hochschild_complex(const MixedComplex& mc);
ChainComplex hochschild_complex(const CyclicModule& cm);
// Position (p,q) holds X_{q-p}; vertical maps (-1)^p b, horizontal maps B,
// so the total differential is b + B.
DoubleComplex connes_bicomplex(const MixedComplex& mc);
// Columns b, b' alternating, joined by 1 - tau and N.
DoubleComplex cyclic_bicomplex(const CyclicModule& cm);

HomologyClassSpace hh(const MixedComplex& mc, int n);
HomologyClassSpace hh(const CyclicModule& cm, int n);
HomologyClassSpace hc(const MixedComplex& mc, int n);
HomologyClassSpace hc(const CyclicModule& cm, int n);
// Degrees 0..top-1.
std::vector<std::size_t> hh_dims(const MixedComplex& mc);
std::vector<std::size_t> hh_dims(const CyclicModule& cm);
std::vector<std::size_t> hc_dims(const MixedComplex& mc);
std::vector<std::size_t> hc_dims(const CyclicModule& cm);
std::vector<std::size_t> hc_dims_cyclic_bicomplex(const CyclicModule& cm);

// Inclusion of the column p = 0 and the shift dropping it, on Tot of the
// (B,b) bicomplex. The shift has degree -2k for k columns.
ChainMap column_inclusion(const ChainComplex& hoch, const ChainComplex& tot, const DoubleComplex& dc);
ChainMap periodicity(const ChainComplex& tot, const DoubleComplex& dc, int k);

struct PeriodicResult {
    int parity = 0;
    std::size_t dim = 0;
    bool stabilized = false;
    // rank of S^k : HC_{deg + 2k} -> HC_deg for (deg, k) = (parity, 1), (parity, 2), (parity + 2, 1)
    std::vector<std::size_t> observed;
};

// The eventual image of the tower HC_{parity+2k} -> HC_parity. Stabilized when
// S and S^2 have images of equal dimension at the parity degree and S has the
// same image dimension two degrees up. Needs top >= parity + 5 for the flag.
PeriodicResult hp(const MixedComplex& mc, int parity);

struct SBIReport {
    std::vector<ExactNode> nodes;  // HH_m, HC_m, HC_{m-2}, HH_{m-1}, ..., HH_0, HC_0, 0
    ExactnessReport exactness;
    std::map<int, Mat> inclusion;    // I : HH_n -> HC_n
    std::map<int, Mat> shift;        // S : HC_n -> HC_{n-2}
    std::map<int, Mat> boundary;     // B : HC_{n-2} -> HH_{n-1}, keyed by n
};

// Exactness on degrees 0..top-1; top >= 3.
SBIReport sbi(const MixedComplex& mc);

// X_n = A^{(x)(n+1)} in Kronecker order with d_i, s_i, t for the twist alpha.
CyclicModule algebra_cyclic_module(const FinAlgebra& a, const Mat& alpha, int top);
CyclicModule algebra_cyclic_module(const FinAlgebra& a, int top);

// Degree n is the sum over strings (g_1..g_n) of (A_n) at tgt(g_1); the
// cyclic operator untwists theta so the result is 1-cyclic.
CyclicModule diagonal_cyclic(const CyclicGroupoid& cg, const ThetaCyclicSheaf& a);

// Bicyclic space on p, q <= top: rows[q] acts in the p direction, columns[p]
// in the q direction, and the two families commute.
struct BicyclicModule {
    std::vector<CyclicOperators> rows;
    std::vector<CyclicOperators> columns;

    int top() const noexcept { return static_cast<int>(rows.size()) - 1; }
    std::size_t dim(int p, int q) const { return rows.at(static_cast<std::size_t>(q)).dims.at(static_cast<std::size_t>(p)); }
};

ValidationReport validate(const BicyclicModule& c);
BicyclicModule tensor_bicyclic(const CyclicModule& x, const CyclicModule& y);
CyclicModule diagonal(const BicyclicModule& c);
// (p,q) with vertical b of the columns and horizontal b of the rows.
DoubleComplex hochschild_bicomplex(const BicyclicModule& c);

struct EZReport {
    CyclicModule diagonal;
    std::vector<std::size_t> hh_diagonal;
    std::vector<std::size_t> total;
    bool equal = false;
};

EZReport ez_diagonal(const BicyclicModule& c);

}  // namespace cychom

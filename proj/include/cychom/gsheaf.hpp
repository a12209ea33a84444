#pragma once

#include <cstddef>
#include <vector>

#include "cychom/chain_complex.hpp"
#include "cychom/groupoid.hpp"
#include "cychom/simplicial.hpp"

namespace cychom {

// Coefficient system on a finite groupoid: a stalk per object and, for each
// arrow g, the right action act[g] : A_{tgt g} -> A_{src g}.
struct GSheaf {
    std::vector<std::size_t> stalk_dim;
    std::vector<Mat> act;

    std::size_t stalk(ObjId c) const { return stalk_dim.at(static_cast<std::size_t>(c)); }
    const Mat& action(ArrowId g) const { return act.at(static_cast<std::size_t>(g)); }
};

// Units act trivially and act(g h) = act(h) act(g).
ValidationReport validate(const FiniteGroupoid& g, const GSheaf& a);
GSheaf constant_sheaf(const FiniteGroupoid& g, std::size_t dim = 1);
// Stalk at c is the stalk of a at f(c).
GSheaf pullback(const Functor& f, const GSheaf& a);
GSheaf direct_sum(const GSheaf& a, const GSheaf& b);
// Same sheaf in new stalk bases: act'(g) = P_{src} act(g) P_{tgt}^{-1}.
GSheaf change_basis(const FiniteGroupoid& g, const GSheaf& a, const std::vector<Mat>& per_object);

// Chains on the nerve with coefficients: block order follows the nerve, and
// inside a block the stalk basis at tgt(g_1).
class BarLayout {
public:
    BarLayout(const FiniteGroupoid& g, const GSheaf& a, int top);

    int top() const noexcept { return static_cast<int>(nerves_.size()) - 1; }
    const Nerve& nerve(int n) const { return nerves_.at(static_cast<std::size_t>(n)); }
    std::size_t dim(int n) const { return offsets_.at(static_cast<std::size_t>(n)).back(); }
    std::size_t offset(int n, std::size_t string) const { return offsets_[static_cast<std::size_t>(n)][string]; }

private:
    std::vector<Nerve> nerves_;
    std::vector<std::vector<std::size_t>> offsets_;
};

// Degrees 0..top, flagged truncated so homology is trusted below top.
ChainComplex bar_complex(const FiniteGroupoid& g, const GSheaf& a, int top);
HomologyClassSpace groupoid_homology(const FiniteGroupoid& g, const GSheaf& a, int n, int top);
std::vector<std::size_t> groupoid_homology_dims(const FiniteGroupoid& g, const GSheaf& a, int top);

// Chain map between bar complexes induced by a functor f together with stalk
// maps phi_c : A_c -> B_{f(c)} compatible with the actions.
ChainMap bar_chain_map(const Functor& f, const GSheaf& a, const GSheaf& b, const std::vector<Mat>& phi,
                       const ChainComplex& src, const ChainComplex& dst);

// Quotient of each stalk by the span of v - v.theta_c, with the quotient
// basis given by the non-pivot coordinates of that span.
struct Coinvariants {
    std::vector<Mat> project;  // stalk -> quotient
    std::vector<Mat> lift;     // quotient -> stalk, a section of project
};

Coinvariants coinvariants(const CyclicGroupoid& cg, const GSheaf& a);

struct PushforwardSheaf {
    GSheaf sheaf;  // on the localized groupoid
    Coinvariants quotient;
};

// Induced actions are checked to be independent of the orbit representative.
PushforwardSheaf coinvariant_pushforward(const CyclicGroupoid& cg, const Localization& loc, const GSheaf& a);

// Cyclic G-sheaf whose cyclic operator at c satisfies t^{n+1} = act(theta_c).
struct ThetaCyclicSheaf {
    std::vector<GSheaf> levels;            // degree n
    std::vector<CyclicOperators> stalks;  // per object

    int top() const noexcept { return static_cast<int>(levels.size()) - 1; }
};

ValidationReport validate(const CyclicGroupoid& cg, const ThetaCyclicSheaf& a);
// Levels pushed forward to coinvariants, with every operator passed to the quotient.
ThetaCyclicSheaf coinvariant_pushforward(const CyclicGroupoid& cg, const Localization& loc, const ThetaCyclicSheaf& a);

// Strings (g_0..g_n) with tgt(g_0) = c form the stalk at c; an arrow h acts by
// replacing g_0 with h^{-1} g_0.
ThetaCyclicSheaf standard_cyclic_sheaf(const FiniteGroupoid& g, int top);
// The stalk at c with the alternating sum of all faces, degrees 0..top.
ChainComplex stalk_complex(const ThetaCyclicSheaf& a, ObjId c);

}  // namespace cychom

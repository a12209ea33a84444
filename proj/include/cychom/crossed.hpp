#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "cychom/algebra.hpp"
#include "cychom/cyclic.hpp"
#include "cychom/groupoid.hpp"
#include "cychom/gsheaf.hpp"

namespace cychom {

// A G-sheaf whose stalks are algebras and whose arrows act by unital algebra
// morphisms A_{tgt g} -> A_{src g}.
struct GAlgebraSheaf {
    GSheaf sheaf;
    std::vector<FinAlgebra> algebras;  // per object

    const FinAlgebra& algebra(ObjId c) const { return algebras.at(static_cast<std::size_t>(c)); }
};

ValidationReport validate(const FiniteGroupoid& g, const GAlgebraSheaf& a);
// The ground field at every object with trivial actions.
GAlgebraSheaf scalar_algebra_sheaf(const FiniteGroupoid& g);
// One algebra at every object; act[g] must be an automorphism of it.
GAlgebraSheaf uniform_algebra_sheaf(const FiniteGroupoid& g, const FinAlgebra& a, std::vector<Mat> act);
bool is_unital_morphism(const FinAlgebra& from, const FinAlgebra& to, const Mat& f);

// Sum over arrows g of A_{src g}; the block of g is spanned by the basis of
// A_{src g}. (u * v)(g) = sum over g1 g2 = g of (u(g1) . g2) v(g2).
// Throws std::invalid_argument if the result is not a unital associative algebra.
FinAlgebra crossed_product_algebra(const GAlgebraSheaf& a, const FiniteGroupoid& g);

// Strings (x_0..x_n) with src x_i = tgt x_{i+1} and tgt x_0 = src x_n, in
// lexicographic order, optionally restricted to composites x_0 x_1 ... x_n in
// a conjugation-invariant set of loops.
class BurgheleaSpace {
public:
    BurgheleaSpace(const FiniteGroupoid& g, int n);
    // Throws std::invalid_argument if the loop set is not invariant.
    BurgheleaSpace(const FiniteGroupoid& g, int n, std::span<const ArrowId> component);

    int degree() const noexcept { return n_; }
    std::size_t size() const noexcept { return flat_.size() / len(); }
    std::span<const ArrowId> at(std::size_t i) const { return {flat_.data() + i * len(), len()}; }
    // kNone if absent.
    std::int64_t find(std::span<const ArrowId> s) const;

private:
    std::size_t len() const noexcept { return static_cast<std::size_t>(n_) + 1; }
    void enumerate(const FiniteGroupoid& g, const std::vector<bool>* keep);
    std::uint64_t find_key(std::span<const ArrowId> s) const;
    int n_;
    std::size_t base_;
    std::vector<ArrowId> flat_;
    std::unordered_map<std::uint64_t, std::int64_t> where_;
};

// Every string lies in exactly one component space.
ValidationReport check_partition(const FiniteGroupoid& g, int n);

// Degree n is the sum over Burghelea strings of A_{src x_0} (x) ... (x) A_{src x_n}
// in Kronecker order; faces multiply neighbours after transporting the left
// factor, t rotates the last factor to the front.
CyclicModule crossed_cyclic_module(const GAlgebraSheaf& a, const FiniteGroupoid& g, int top);
CyclicModule crossed_cyclic_module(const GAlgebraSheaf& a, const FiniteGroupoid& g, int top,
                                   std::span<const ArrowId> component);

struct LoopSheaf {
    LoopCyclicGroupoid groupoid;
    ThetaCyclicSheaf sheaf;
};

// On the loop groupoid, the stalk at a loop x over c is the cyclic module of
// A_c twisted by the action of x; arrows act factorwise.
LoopSheaf loop_sheaf(const GAlgebraSheaf& a, const FiniteGroupoid& g, int top);
LoopSheaf loop_sheaf(const GAlgebraSheaf& a, const FiniteGroupoid& g, int top, std::span<const ArrowId> component);

struct IsoReport {
    std::vector<std::size_t> source_dims;
    std::vector<std::size_t> target_dims;
    bool bijective = false;
    std::vector<std::string> failures;  // operator and degree of each non-commuting square

    bool ok() const noexcept { return bijective && failures.empty(); }
};

// Maps (a | x_0..x_n) of the crossed module to the loop x_1...x_n x_0 with the
// loop-groupoid string over x_1..x_n, transporting a_i by x_{i+1}...x_n x_0.
// Bijectivity of every phi_n and commutation with every face, degeneracy and t.
IsoReport check_isomorphism(const CyclicModule& src, const CyclicModule& dst, const std::vector<Mat>& phi);
std::vector<Mat> redcross_map(const GAlgebraSheaf& a, const FiniteGroupoid& g, int top);
IsoReport redcross_iso(const GAlgebraSheaf& a, const FiniteGroupoid& g, int top);

struct HomologySummary {
    std::vector<std::size_t> hh;
    std::vector<std::size_t> hc;
    std::vector<PeriodicResult> hp;  // parities 0 and 1 when the window allows
};

HomologySummary summarize(const CyclicModule& cm);

struct DecompositionReport {
    int window = 0;
    std::vector<std::vector<ArrowId>> components;
    std::vector<std::size_t> module_dims;
    std::vector<std::vector<std::size_t>> component_module_dims;
    HomologySummary total;
    std::vector<HomologySummary> parts;
    bool spaces_partition = false;
    bool hh_equal = false;
    bool hc_equal = false;
    std::optional<bool> hp_equal;  // unset when the window is too short for HP

    bool ok() const noexcept { return spaces_partition && hh_equal && hc_equal && hp_equal.value_or(true); }
};

// Components are computed concurrently.
DecompositionReport decomposition_check(const GAlgebraSheaf& a, const FiniteGroupoid& g, int top);

struct EllipticReport {
    std::vector<ArrowId> component;
    std::vector<std::size_t> hh_crossed, hc_crossed;
    std::vector<std::size_t> hh_normalizer, hc_normalizer;
    bool equal = false;
};

// Localized crossed module against the diagonal module of the normalizer
// groupoid with the coinvariants of the restricted loop sheaf.
EllipticReport elliptic_theorem_check(const GAlgebraSheaf& a, const FiniteGroupoid& g, std::span<const ArrowId> component,
                                      int top);

}  // namespace cychom

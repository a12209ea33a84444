#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace cychom {

using ObjId = int;
using ArrowId = int;
constexpr int kNone = -1;

struct Arrow {
    std::string name;
    ObjId src = kNone;
    ObjId tgt = kNone;
};

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const noexcept { return violations.empty(); }
};

// Finite groupoid with an explicit composition table. compose(g, h) is "g
// after h" and is defined when src(g) == tgt(h). Units and inverses are read
// off the table; construction never throws on axiom violations so that
// validate can report them.
class FiniteGroupoid {
public:
    struct ComposeRow {
        ArrowId g;
        ArrowId h;
        ArrowId gh;
    };

    FiniteGroupoid() = default;
    FiniteGroupoid(std::vector<std::string> objects, std::vector<Arrow> arrows, std::span<const ComposeRow> table);

    std::size_t num_objects() const noexcept { return objects_.size(); }
    std::size_t num_arrows() const noexcept { return arrows_.size(); }
    const std::string& object_name(ObjId c) const { return objects_.at(static_cast<std::size_t>(c)); }
    const std::vector<std::string>& object_names() const noexcept { return objects_; }
    const Arrow& arrow(ArrowId a) const { return arrows_.at(static_cast<std::size_t>(a)); }
    const std::vector<Arrow>& arrows() const noexcept { return arrows_; }
    ObjId src(ArrowId a) const { return arrows_[static_cast<std::size_t>(a)].src; }
    ObjId tgt(ArrowId a) const { return arrows_[static_cast<std::size_t>(a)].tgt; }

    bool composable(ArrowId g, ArrowId h) const { return src(g) == tgt(h); }
    // kNone when the table has no entry.
    ArrowId compose_or_none(ArrowId g, ArrowId h) const {
        return table_[static_cast<std::size_t>(g) * arrows_.size() + static_cast<std::size_t>(h)];
    }
    // Throws if g, h are not composable or the table has no entry.
    ArrowId compose(ArrowId g, ArrowId h) const;
    // Left-to-right product g_0 g_1 ... g_k.
    ArrowId compose_all(std::span<const ArrowId> gs) const;
    ArrowId unit(ObjId c) const;
    ArrowId inverse(ArrowId g) const;
    bool is_unit(ArrowId g) const { return unit(src(g)) == g; }

    std::vector<ArrowId> hom(ObjId from, ObjId to) const;
    std::vector<ArrowId> automorphisms(ObjId c) const { return hom(c, c); }
    std::vector<ComposeRow> table_rows() const;
    ObjId find_object(const std::string& name) const;
    ArrowId find_arrow(const std::string& name) const;

    friend bool operator==(const FiniteGroupoid& a, const FiniteGroupoid& b);

private:
    std::vector<std::string> objects_;
    std::vector<Arrow> arrows_;
    std::vector<ArrowId> table_;
    std::vector<ArrowId> unit_;
    std::vector<ArrowId> inverse_;
};

ValidationReport validate(const FiniteGroupoid& g);

// One-object groupoid from a multiplication table mult[a][b] = ab, with
// element 0 not assumed to be the identity.
FiniteGroupoid group_groupoid(const std::vector<std::string>& names, const std::vector<std::vector<int>>& mult,
                              const std::string& object = "*");
FiniteGroupoid cyclic_group(int n);
// Permutations of {1..n} in lexicographic order, composed as functions.
FiniteGroupoid symmetric_group(int n);
FiniteGroupoid trivial_groupoid();
FiniteGroupoid discrete_groupoid(int k);
// Exactly one arrow between any two of k objects.
FiniteGroupoid pair_groupoid(int k);

// Functor between finite groupoids.
struct Functor {
    const FiniteGroupoid* src = nullptr;
    const FiniteGroupoid* dst = nullptr;
    std::vector<ObjId> on_objects;
    std::vector<ArrowId> on_arrows;

    ValidationReport check() const;
};

Functor identity_functor(const FiniteGroupoid& g);

// Finite right G-set with moment map; act(x, g) is defined when
// moment(x) == tgt(g) and lands over src(g).
struct GSet {
    std::vector<std::string> points;
    std::vector<ObjId> moment;
    std::vector<int> action;  // points x arrows, kNone where undefined

    std::size_t size() const noexcept { return points.size(); }
    int act(int x, ArrowId g, std::size_t num_arrows) const {
        return action[static_cast<std::size_t>(x) * num_arrows + static_cast<std::size_t>(g)];
    }
};

ValidationReport validate_action(const GSet& x, const FiniteGroupoid& g);
// Right action of a one-object groupoid on points 0..k-1 with x.g = image[g][x].
GSet permutation_set(const FiniteGroupoid& group, const std::vector<std::vector<int>>& image);
// Restriction to a union of orbits, with points listed in the given order.
GSet restrict_gset(const GSet& x, const FiniteGroupoid& g, std::span<const int> points);

// Arrows (x, g) with moment(x) = tgt(g), src = x g, tgt = x, listed
// lexicographically; composition (x, g)(x g, h) = (x, g h).
struct ActionGroupoid {
    FiniteGroupoid groupoid;
    std::vector<int> arrow_point;      // x of each arrow
    std::vector<ArrowId> arrow_group;  // g of each arrow
    ArrowId arrow_of(int x, ArrowId g) const;
    std::vector<ArrowId> index;  // point * num_base_arrows + g -> arrow, kNone if absent
    std::size_t base_arrows = 0;
};

ActionGroupoid action_groupoid(const GSet& x, const FiniteGroupoid& g);

// Loops with the conjugation action g^{-1} loop g; points are loop arrows.
struct LoopSpace {
    std::vector<ArrowId> loops;
    GSet gset;
};

LoopSpace loops(const FiniteGroupoid& g);
// Orbits of the conjugation action, as lists of loop arrows, each sorted and
// ordered by smallest member.
std::vector<std::vector<ArrowId>> invariant_components(const LoopSpace& ls, const FiniteGroupoid& g);
bool is_invariant(const LoopSpace& ls, const FiniteGroupoid& g, std::span<const ArrowId> subset);

// Groupoid with a central automorphism theta_c at each object.
struct CyclicGroupoid {
    FiniteGroupoid base;
    std::vector<ArrowId> theta;
};

ValidationReport validate(const CyclicGroupoid& cg);
CyclicGroupoid with_trivial_theta(const FiniteGroupoid& g);

enum class CyclicKind { elliptic, hyperbolic };

struct Classification {
    CyclicKind kind = CyclicKind::elliptic;
    std::vector<int> theta_orders;  // per object
};

Classification classify(const CyclicGroupoid& cg);
int arrow_order(const FiniteGroupoid& g, ArrowId a);
// The Euler class only exists for hyperbolic cyclic groupoids, which have
// infinite-order loops; always throws for finite input.
[[noreturn]] void euler_class(const CyclicGroupoid& cg);

struct Localization {
    FiniteGroupoid quotient;
    std::vector<ArrowId> arrow_class;  // base arrow -> quotient arrow
    Functor projection(const CyclicGroupoid& cg) const;
};

// Quotient by the relations theta_c = id: arrows are orbits of g -> theta g.
Localization localize(const CyclicGroupoid& cg);

struct LoopCyclicGroupoid {
    CyclicGroupoid cyclic;
    ActionGroupoid action;  // the loop action groupoid backing cyclic.base
    std::vector<ArrowId> loops;  // object index -> loop arrow of the base groupoid
};

LoopCyclicGroupoid loop_cyclic_groupoid(const FiniteGroupoid& g);
// Restriction to an invariant set of loops.
LoopCyclicGroupoid loop_cyclic_groupoid(const FiniteGroupoid& g, std::span<const ArrowId> component);

struct CentralizerNormalizer {
    LoopCyclicGroupoid centralizer;
    Localization normalizer;
};

CentralizerNormalizer centralizer_normalizer(const FiniteGroupoid& g, std::span<const ArrowId> component);

// Objects (k : d -> phi(c), c); arrows g : (k,c) -> (k',c') with phi(g) k = k'.
struct CommaGroupoid {
    FiniteGroupoid groupoid;
    std::vector<ObjId> object_base;    // c of each object
    std::vector<ArrowId> object_arrow;  // k of each object
    std::vector<ArrowId> arrow_base;   // g of each arrow
};

CommaGroupoid comma_groupoid(const Functor& phi, ObjId d);

struct Skeleton {
    std::vector<ObjId> representatives;
    std::vector<FiniteGroupoid> isotropy;  // one group per representative
    FiniteGroupoid disjoint_union;
    std::vector<ArrowId> inclusion_arrows;  // disjoint_union arrow -> original arrow
    bool essential_equivalence = false;     // surjective on orbits, bijective on hom-sets

    Functor inclusion(const FiniteGroupoid& original) const;
};

Skeleton skeleton(const FiniteGroupoid& g);

// Composable strings (g_1..g_n), src(g_i) = tgt(g_{i+1}), in lexicographic
// order; for n = 0 one empty string per object.
class Nerve {
public:
    Nerve(const FiniteGroupoid& g, int n);

    int degree() const noexcept { return n_; }
    std::size_t size() const noexcept { return anchor_.size(); }
    std::span<const ArrowId> at(std::size_t i) const {
        return {flat_.data() + i * static_cast<std::size_t>(n_), static_cast<std::size_t>(n_)};
    }
    // tgt(g_1), or the object itself in degree 0.
    ObjId anchor(std::size_t i) const { return anchor_[i]; }
    // Position of a string, or kNone.
    std::int64_t find(std::span<const ArrowId> s) const;
    std::int64_t find_object(ObjId c) const;

private:
    std::uint64_t key(std::span<const ArrowId> s) const;
    int n_;
    std::size_t arrows_;
    std::vector<ArrowId> flat_;
    std::vector<ObjId> anchor_;
    std::unordered_map<std::uint64_t, std::int64_t> where_;
};

std::vector<std::vector<ArrowId>> nerve(const FiniteGroupoid& g, int n);

}  // namespace cychom

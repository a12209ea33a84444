#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "cychom/double_complex.hpp"
#include "cychom/gsheaf.hpp"
#include "cychom/spectral.hpp"

namespace cychom {

// Per object d of the target: the comma groupoid d/phi, the pulled back
// coefficients and their bar complex; per target arrow h : d' -> d the chain
// map B(d/phi) -> B(d'/phi) given by precomposing with h.
class CommaBars {
public:
    CommaBars(const Functor& phi, const GSheaf& s, int top);

    CommaBars(const CommaBars&) = delete;
    CommaBars& operator=(const CommaBars&) = delete;

    int top() const noexcept { return top_; }
    const FiniteGroupoid& target() const noexcept { return *target_; }
    const CommaGroupoid& comma(ObjId d) const { return commas_.at(static_cast<std::size_t>(d)); }
    const GSheaf& coefficients(ObjId d) const { return sheaves_.at(static_cast<std::size_t>(d)); }
    const ChainComplex& bar(ObjId d) const { return bars_.at(static_cast<std::size_t>(d)); }
    const ChainMap& restriction(ArrowId h) const { return maps_.at(static_cast<std::size_t>(h)); }

    // Stalkwise homology H_q(d/phi; S) with the induced right action of the target.
    GSheaf derived_pushforward(int q) const;

private:
    const FiniteGroupoid* target_;
    int top_;
    std::vector<CommaGroupoid> commas_;
    std::vector<GSheaf> sheaves_;
    std::vector<ChainComplex> bars_;
    std::vector<ChainMap> maps_;
};

// (p,q) = sum over target strings sigma of B_q(anchor(sigma)/phi; S).
// Vertical maps are the comma bar differentials, horizontal maps the bar
// differential of the target with d_0 acting through restriction.
DoubleComplex bar_of_bar(const CommaBars& bars);

struct HochschildSerreReport {
    int window = 0;
    std::vector<GSheaf> derived;                       // L_q, q = 0..window-1
    std::map<Bidegree, std::size_t> e2;                // from the spectral sequence, trusted positions
    std::map<Bidegree, std::size_t> e2_expected;       // H_p(target; L_q)
    std::vector<std::size_t> source_homology;          // H_n(source; S)
    std::vector<std::size_t> abutment;                 // H_n(Tot)
    bool e2_matches = false;
    bool abutment_holds = false;
    bool higher_vanish = false;                        // L_q = 0 for 1 <= q < window
    // H_p(target; L_0) = H_p(source; S), checked only when higher_vanish.
    std::optional<bool> degenerate_agreement;

    bool ok() const { return e2_matches && abutment_holds && degenerate_agreement.value_or(true); }
};

HochschildSerreReport hochschild_serre(const Functor& phi, const GSheaf& s, int window);

}  // namespace cychom

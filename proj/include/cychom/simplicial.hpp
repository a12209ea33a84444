#pragma once

#include <cstddef>
#include <vector>

#include "cychom/groupoid.hpp"
#include "cychom/sparse.hpp"

namespace cychom {

// Faces, degeneracies and the cyclic operator of a cyclic vector space on
// degrees 0..top. faces[n][i] : X_n -> X_{n-1} (n >= 1, 0 <= i <= n),
// degens[n][i] : X_n -> X_{n+1} (n < top), cyclic[n] : X_n -> X_n.
struct CyclicOperators {
    std::vector<std::size_t> dims;
    std::vector<std::vector<Mat>> faces;
    std::vector<std::vector<Mat>> degens;
    std::vector<Mat> cyclic;

    int top() const noexcept { return static_cast<int>(dims.size()) - 1; }
    // Empty operator lists of the right lengths.
    static CyclicOperators shaped(std::vector<std::size_t> dims);
};

// Simplicial identities, both families relating faces and degeneracies to
// the cyclic operator, and the cyclic relation t_n^{power*(n+1)} = target_n.
// power == 0 skips the cyclic relation; an empty target means the identity.
ValidationReport check_cyclic_identities(const CyclicOperators& ops, int power, const std::vector<Mat>& target = {});

// Applies a degreewise change of basis: every operator X_n -> X_m becomes
// P_m o op o P_n^{-1}.
CyclicOperators conjugate(const CyclicOperators& ops, const std::vector<Mat>& basis_change);

}  // namespace cychom

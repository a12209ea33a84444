#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "cychom/double_complex.hpp"

namespace cychom {

// One page of the spectral sequence of the column filtration.
struct SSPage {
    int r = 0;
    std::map<Bidegree, std::size_t> entries;  // nonzero dims at trusted positions
    std::map<Bidegree, Mat> d;                // d_r : (p,q) -> (p-r, q+r-1), nonzero maps only
    std::set<Bidegree> untrusted;             // positions the window cannot determine

    std::size_t at(int p, int q) const;
};

struct SpectralSequence {
    std::vector<SSPage> pages;              // pages 0..r_max
    std::map<Bidegree, std::size_t> e_inf;  // trusted positions only
    int stable_page = 0;                    // E^r = E^inf everywhere trusted from here on
    int collapse_page = 0;                  // every d_r with r >= this vanishes
    std::vector<std::size_t> total_homology;  // dims H_n(Tot) for n <= valid top

    // Sum of E^inf over p+q = n against H_n(Tot), for every trusted n.
    bool abutment_holds() const;
    // dim E^{r+1}(p,q) = dim ker d_r - rank d_r at every position whose
    // neighbours are trusted. Returns a description of the first failure.
    std::string page_consistency_error() const;
};

SpectralSequence spectral_sequence(const DoubleComplex& dc, int r_max);

}  // namespace cychom

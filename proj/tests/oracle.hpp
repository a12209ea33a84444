#pragma once

// Independent reference implementations used to check the library.

#include <gmpxx.h>

#include <cstddef>
#include <random>
#include <vector>

#include "cychom/sparse.hpp"

namespace oracle {

using Dense = std::vector<std::vector<mpq_class>>;

inline Dense dense(const cychom::Mat& m) {
    Dense d(m.rows(), std::vector<mpq_class>(m.cols()));
    for (std::size_t j = 0; j < m.cols(); ++j)
        for (const auto& e : m.col(j)) d[e.idx][j] = e.val.to_mpq();
    return d;
}

// Textbook Gaussian elimination on a dense copy.
inline std::size_t rank(Dense a) {
    const std::size_t rows = a.size();
    const std::size_t cols = rows ? a[0].size() : 0;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && a[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(a[p], a[r]);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c] == 0) continue;
            const mpq_class f = a[i][c] / a[r][c];
            for (std::size_t k = c; k < cols; ++k) a[i][k] -= f * a[r][k];
        }
        ++r;
    }
    return r;
}

inline std::size_t rank(const cychom::Mat& m) { return rank(dense(m)); }

// Homology dims of a complex given as d_1..d_top (d_k : C_k -> C_{k-1}).
inline std::vector<std::size_t> homology(const std::vector<std::size_t>& dims, const std::vector<cychom::Mat>& d) {
    std::vector<std::size_t> rk(dims.size() + 1, 0);
    for (std::size_t k = 1; k < dims.size(); ++k) rk[k] = oracle::rank(d[k - 1]);
    std::vector<std::size_t> h;
    for (std::size_t n = 0; n + 1 < dims.size(); ++n) h.push_back(dims[n] - rk[n] - rk[n + 1]);
    return h;
}

inline cychom::Mat random_mat(std::mt19937& rng, std::size_t rows, std::size_t cols, double density = 0.5,
                              int range = 3) {
    std::uniform_real_distribution<double> coin(0, 1);
    std::uniform_int_distribution<int> val(-range, range);
    std::vector<cychom::Triplet> t;
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            if (coin(rng) < density) t.push_back({static_cast<cychom::Index>(i), static_cast<cychom::Index>(j), val(rng)});
    return cychom::Mat::from_triplets(rows, cols, std::move(t));
}

// Product of two random matrices, so the rank is usually below min(rows, cols).
inline cychom::Mat random_low_rank(std::mt19937& rng, std::size_t rows, std::size_t cols, std::size_t inner) {
    return random_mat(rng, rows, inner, 0.6) * random_mat(rng, inner, cols, 0.6);
}

inline cychom::Mat random_invertible(std::mt19937& rng, std::size_t n) {
    for (;;) {
        cychom::Mat m = random_mat(rng, n, n, 0.7);
        if (oracle::rank(m) == n) return m;
    }
}

}  // namespace oracle

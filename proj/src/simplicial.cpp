#include "cychom/simplicial.hpp"

#include <stdexcept>
#include <string>

#include "cychom/linalg.hpp"

namespace cychom {

CyclicOperators CyclicOperators::shaped(std::vector<std::size_t> dims) {
    CyclicOperators ops;
    ops.dims = std::move(dims);
    const std::size_t n = ops.dims.size();
    ops.faces.resize(n);
    ops.degens.resize(n);
    ops.cyclic.resize(n);
    return ops;
}

namespace {

std::string at(const char* what, int n, int i, int j) {
    return std::string(what) + " in degree " + std::to_string(n) + " (i=" + std::to_string(i) + ", j=" + std::to_string(j) + ")";
}

}  // namespace

ValidationReport check_cyclic_identities(const CyclicOperators& ops, int power, const std::vector<Mat>& target) {
    ValidationReport rep;
    auto& v = rep.violations;
    const int top = ops.top();
    auto dim = [&](int n) { return ops.dims[static_cast<std::size_t>(n)]; };
    auto d = [&](int n, int i) -> const Mat& { return ops.faces[static_cast<std::size_t>(n)][static_cast<std::size_t>(i)]; };
    auto s = [&](int n, int i) -> const Mat& { return ops.degens[static_cast<std::size_t>(n)][static_cast<std::size_t>(i)]; };
    auto t = [&](int n) -> const Mat& { return ops.cyclic[static_cast<std::size_t>(n)]; };

    // Shapes first; everything below assumes them.
    if (ops.faces.size() != ops.dims.size() || ops.degens.size() != ops.dims.size() || ops.cyclic.size() != ops.dims.size()) {
        v.push_back("operator lists do not match the number of degrees");
        return rep;
    }
    for (int n = 0; n <= top; ++n) {
        if (t(n).rows() != dim(n) || t(n).cols() != dim(n)) v.push_back("cyclic operator has the wrong shape in degree " + std::to_string(n));
        if (n >= 1) {
            if (ops.faces[static_cast<std::size_t>(n)].size() != static_cast<std::size_t>(n + 1)) {
                v.push_back("wrong number of faces in degree " + std::to_string(n));
                continue;
            }
            for (int i = 0; i <= n; ++i)
                if (d(n, i).rows() != dim(n - 1) || d(n, i).cols() != dim(n)) v.push_back(at("face has the wrong shape", n, i, i));
        }
        if (n < top) {
            if (ops.degens[static_cast<std::size_t>(n)].size() != static_cast<std::size_t>(n + 1)) {
                v.push_back("wrong number of degeneracies in degree " + std::to_string(n));
                continue;
            }
            for (int i = 0; i <= n; ++i)
                if (s(n, i).rows() != dim(n + 1) || s(n, i).cols() != dim(n)) v.push_back(at("degeneracy has the wrong shape", n, i, i));
        }
    }
    if (!v.empty()) return rep;

    for (int n = 2; n <= top; ++n)
        for (int j = 1; j <= n; ++j)
            for (int i = 0; i < j; ++i)
                if (d(n - 1, i) * d(n, j) != d(n - 1, j - 1) * d(n, i)) v.push_back(at("d_i d_j != d_{j-1} d_i", n, i, j));
    for (int n = 0; n + 2 <= top; ++n)
        for (int j = 0; j <= n; ++j)
            for (int i = 0; i <= j; ++i)
                if (s(n + 1, i) * s(n, j) != s(n + 1, j + 1) * s(n, i)) v.push_back(at("s_i s_j != s_{j+1} s_i", n, i, j));
    for (int n = 0; n + 1 <= top; ++n)
        for (int j = 0; j <= n; ++j)
            for (int i = 0; i <= n + 1; ++i) {
                const Mat lhs = d(n + 1, i) * s(n, j);
                bool ok;
                if (i < j)
                    ok = lhs == s(n - 1, j - 1) * d(n, i);
                else if (i == j || i == j + 1)
                    ok = lhs.is_identity();
                else
                    ok = lhs == s(n - 1, j) * d(n, i - 1);
                if (!ok) v.push_back(at("d_i s_j identity fails", n, i, j));
            }
    for (int n = 1; n <= top; ++n) {
        if (d(n, 0) * t(n) != d(n, n)) v.push_back(at("d_0 t != d_n", n, 0, 0));
        for (int i = 1; i <= n; ++i)
            if (d(n, i) * t(n) != t(n - 1) * d(n, i - 1)) v.push_back(at("d_i t != t d_{i-1}", n, i, i));
    }
    for (int n = 0; n + 1 <= top; ++n) {
        if (s(n, 0) * t(n) != t(n + 1) * t(n + 1) * s(n, n)) v.push_back(at("s_0 t != t^2 s_n", n, 0, 0));
        for (int i = 1; i <= n; ++i)
            if (s(n, i) * t(n) != t(n + 1) * s(n, i - 1)) v.push_back(at("s_i t != t s_{i-1}", n, i, i));
    }
    if (power > 0)
        for (int n = 0; n <= top; ++n) {
            const Mat p = t(n).power(static_cast<unsigned>(power * (n + 1)));
            const bool ok = target.empty() ? p.is_identity() : p == target[static_cast<std::size_t>(n)];
            if (!ok) v.push_back("cyclic relation fails in degree " + std::to_string(n));
        }
    return rep;
}

CyclicOperators conjugate(const CyclicOperators& ops, const std::vector<Mat>& basis_change) {
    if (basis_change.size() != ops.dims.size()) throw std::invalid_argument("one basis change per degree is required");
    std::vector<Mat> inv;
    for (const Mat& p : basis_change) inv.push_back(inverse(p));
    CyclicOperators out = CyclicOperators::shaped(ops.dims);
    for (std::size_t n = 0; n < ops.dims.size(); ++n) {
        out.cyclic[n] = basis_change[n] * ops.cyclic[n] * inv[n];
        for (const Mat& f : ops.faces[n]) out.faces[n].push_back(basis_change[n - 1] * f * inv[n]);
        for (const Mat& s : ops.degens[n]) out.degens[n].push_back(basis_change[n + 1] * s * inv[n]);
    }
    return out;
}

}  // namespace cychom

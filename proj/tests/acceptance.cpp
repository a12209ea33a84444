// Prints one PASS/FAIL line per acceptance criterion; exits nonzero on any FAIL.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cychom/crossed.hpp"
#include "cychom/cyclic.hpp"
#include "cychom/hochschild_serre.hpp"
#include "cychom/io.hpp"
#include "cychom/spectral.hpp"
#include "oracle.hpp"

using namespace cychom;

namespace {

std::size_t uz(int v) { return static_cast<std::size_t>(v); }

struct Example {
    std::string name;
    GroupoidDocument doc;
    GAlgebraSheaf coeffs;
};

std::vector<Example> load_examples(const std::vector<std::string>& names) {
    std::vector<Example> out;
    for (const auto& n : names) {
        GroupoidDocument doc = load_groupoid(std::string(CYCHOM_DATA_DIR) + "/" + n + ".groupoid");
        GAlgebraSheaf a = doc.algebra_sheaf();
        out.push_back({n, std::move(doc), std::move(a)});
    }
    return out;
}

// Collects failure notes; a criterion passes when none are recorded.
class Ledger {
public:
    void expect(bool ok, const std::string& what) {
        if (!ok) failures_.push_back(what);
    }
    template <class T>
    void expect_eq(const T& got, const T& want, const std::string& what) {
        if (!(got == want)) failures_.push_back(what);
    }
    void note_checks(std::size_t k) { checks_ += k; }
    bool ok() const { return failures_.empty(); }
    std::size_t checks() const { return checks_; }
    const std::vector<std::string>& failures() const { return failures_; }

private:
    std::vector<std::string> failures_;
    std::size_t checks_ = 0;
};

std::string dims(const std::vector<std::size_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return "(" + s + ")";
}

std::vector<std::size_t> prefix(std::vector<std::size_t> v, std::size_t n) {
    if (v.size() > n) v.resize(n);
    return v;
}

// ---- independent oracles -------------------------------------------------

// Conjugacy classes by orbit enumeration on the multiplication table.
std::size_t class_count(const FiniteGroupoid& g) {
    std::set<ArrowId> seen;
    std::size_t classes = 0;
    const auto n = static_cast<ArrowId>(g.num_arrows());
    for (ArrowId x = 0; x < n; ++x) {
        if (seen.count(x)) continue;
        ++classes;
        for (ArrowId a = 0; a < n; ++a) seen.insert(g.compose(g.compose(g.inverse(a), x), a));
    }
    return classes;
}

// dim Q[G] / [Q[G], Q[G]] by dense rank of the commutators gh - hg.
std::size_t commutator_quotient(const FiniteGroupoid& g) {
    const std::size_t n = g.num_arrows();
    oracle::Dense rows;
    for (ArrowId x = 0; x < static_cast<ArrowId>(n); ++x)
        for (ArrowId y = 0; y < static_cast<ArrowId>(n); ++y) {
            std::vector<mpq_class> r(n, 0);
            r[uz(g.compose(x, y))] += 1;
            r[uz(g.compose(y, x))] -= 1;
            rows.push_back(std::move(r));
        }
    return n - oracle::rank(rows);
}

// Right regular coefficients: the stalk at c is spanned by arrows leaving c.
GSheaf regular_sheaf(const FiniteGroupoid& g) {
    GSheaf s;
    std::vector<std::vector<ArrowId>> leaving(g.num_objects());
    for (ArrowId h = 0; h < static_cast<ArrowId>(g.num_arrows()); ++h) leaving[uz(g.src(h))].push_back(h);
    for (const auto& l : leaving) s.stalk_dim.push_back(l.size());
    for (ArrowId a = 0; a < static_cast<ArrowId>(g.num_arrows()); ++a) {
        const auto& from = leaving[uz(g.tgt(a))];
        const auto& to = leaving[uz(g.src(a))];
        std::vector<SparseVec> cols;
        for (ArrowId h : from) {
            const ArrowId ha = g.compose(h, a);
            const auto pos = std::find(to.begin(), to.end(), ha) - to.begin();
            cols.push_back({{static_cast<Index>(pos), Scalar(1)}});
        }
        s.act.push_back(Mat::from_columns(to.size(), std::move(cols)));
    }
    return s;
}

// Sign of the regular permutation action: a one-dimensional character.
GSheaf sign_sheaf(const FiniteGroupoid& g) {
    const GSheaf reg = regular_sheaf(g);
    GSheaf s = constant_sheaf(g, 1);
    for (std::size_t a = 0; a < reg.act.size(); ++a) {
        const Mat& m = reg.act[a];
        std::vector<std::size_t> perm(m.cols());
        for (std::size_t j = 0; j < m.cols(); ++j) perm[j] = m.col(j).front().idx;
        int sign = 1;
        std::vector<bool> done(perm.size(), false);
        for (std::size_t j = 0; j < perm.size(); ++j) {
            std::size_t len = 0;
            for (std::size_t k = j; !done[k]; k = perm[k], ++len) done[k] = true;
            if (len > 0 && len % 2 == 0) sign = -sign;
        }
        s.act[a] = Mat::identity(1).scaled(Scalar(sign));
    }
    return s;
}

// Strings of length six times the stalk size bound the top bar degree.
bool regular_fits(const FiniteGroupoid& g) {
    double strings = static_cast<double>(g.num_objects());
    for (int n = 0; n < 6; ++n) strings *= static_cast<double>(g.num_arrows()) / static_cast<double>(g.num_objects());
    return strings * static_cast<double>(g.num_arrows()) < 60000;
}

GSheaf random_sheaf(std::mt19937& rng, const FiniteGroupoid& g) {
    GSheaf s = rng() % 2 ? constant_sheaf(g, 1) : sign_sheaf(g);
    if (regular_fits(g)) {
        s = direct_sum(s, regular_sheaf(g));
    } else {
        s = direct_sum(s, rng() % 2 ? constant_sheaf(g, 1) : sign_sheaf(g));
    }
    std::vector<Mat> change;
    for (std::size_t d : s.stalk_dim) change.push_back(oracle::random_invertible(rng, d));
    return change_basis(g, s, change);
}

// Functions on the arrows leaving each object, permuted by the regular action.
GAlgebraSheaf regular_function_algebras(const FiniteGroupoid& g) {
    GAlgebraSheaf a;
    a.sheaf = regular_sheaf(g);
    for (std::size_t d : a.sheaf.stalk_dim) a.algebras.push_back(function_algebra(d));
    return a;
}

bool squares_to_zero(const ChainComplex& c) {
    for (int n = c.lo() + 1; n <= c.hi(); ++n)
        if (!(c.diff(n - 1) * c.diff(n)).is_zero()) return false;
    return true;
}

void axioms_of(const CyclicModule& cm, Ledger& led, const std::string& tag) {
    const auto v = validate(cm);
    led.expect(v.ok(), tag + ": " + (v.ok() ? "" : v.violations.front()));
    const DerivedOperators ops(cm);
    const auto w = ops.check();
    led.expect(w.ok(), tag + ": " + (w.ok() ? "" : w.violations.front()));
    const MixedComplex mc = mixed(cm);
    const auto m = validate(mc);
    led.expect(m.ok(), tag + ": " + (m.ok() ? "" : m.violations.front()));
    led.expect(squares_to_zero(hochschild_complex(mc)), tag + ": b o b != 0");
    led.note_checks(4);
}

// ---- criteria --------------------------------------------------------------

const std::vector<std::string> kShipped{"trivial", "z2", "z3", "s3", "pair2", "swap2", "triv2", "rot3"};

void axiom_suite(Ledger& led) {
    constexpr int window = 6;
    for (const auto& ex : load_examples(kShipped)) {
        const FiniteGroupoid& g = ex.doc.groupoid;
        led.expect(validate(g).ok(), ex.name + ": groupoid axioms");
        led.expect(validate(g, ex.coeffs).ok(), ex.name + ": algebra sheaf axioms");
        led.expect(squares_to_zero(bar_complex(g, ex.doc.sheaf, window)), ex.name + ": bar d o d != 0");
        axioms_of(crossed_cyclic_module(ex.coeffs, g, window), led, ex.name);
    }
    // Randomized coefficients on the shipped groupoids.
    std::mt19937 rng(20240611);
    const auto examples = load_examples(kShipped);
    for (int trial = 0; trial < 20; ++trial) {
        const Example& ex = examples[uz(trial) % examples.size()];
        const FiniteGroupoid& g = ex.doc.groupoid;
        const std::string tag = ex.name + " random #" + std::to_string(trial);
        const GSheaf s = random_sheaf(rng, g);
        led.expect(validate(g, s).ok(), tag + ": sheaf axioms");
        led.expect(squares_to_zero(bar_complex(g, s, window)), tag + ": bar d o d != 0");
        // Regular function algebras keep the crossed module small enough only on tiny groupoids.
        if (g.num_arrows() <= 4) {
            const GAlgebraSheaf a = regular_function_algebras(g);
            led.expect(validate(g, a).ok(), tag + ": algebra sheaf axioms");
            axioms_of(crossed_cyclic_module(a, g, g.num_arrows() <= 2 ? window : 4), led, tag + " (function algebras)");
        }
        led.note_checks(2);
    }
}

void group_algebra_oracle(Ledger& led) {
    for (const auto& ex : load_examples({"z2", "z3", "z4", "s3"})) {
        const FiniteGroupoid& g = ex.doc.groupoid;
        const std::size_t classes = class_count(g);
        led.expect_eq(commutator_quotient(g), classes, ex.name + ": commutator quotient vs classes");
        const MixedComplex mc = mixed(crossed_cyclic_module(ex.coeffs, g, 6));
        std::vector<std::size_t> want(6, 0);
        want[0] = classes;
        const auto got = hh_dims(mc);
        led.expect_eq(prefix(got, 6), want, ex.name + ": HH " + dims(got));
        const PeriodicResult even = hp(mc, 0), odd = hp(mc, 1);
        led.expect(even.stabilized && even.dim == classes, ex.name + ": HP_0 = " + std::to_string(even.dim));
        led.expect(odd.stabilized && odd.dim == 0, ex.name + ": HP_1 = " + std::to_string(odd.dim));
        led.note_checks(4);
    }
}

void sbi_exactness(Ledger& led) {
    for (const auto& ex : load_examples(kShipped)) {
        const SBIReport rep = sbi(mixed(crossed_cyclic_module(ex.coeffs, ex.doc.groupoid, 5)));
        led.expect(rep.exactness.all_exact(), ex.name + ": SBI not exact");
        led.note_checks(rep.nodes.size());
    }
}

void decomposition(Ledger& led) {
    for (const auto& ex : load_examples(kShipped)) {
        const DecompositionReport rep = decomposition_check(ex.coeffs, ex.doc.groupoid, 6);
        led.expect(rep.spaces_partition, ex.name + ": Burghelea spaces not partitioned");
        led.expect(rep.hh_equal, ex.name + ": HH sum");
        led.expect(rep.hc_equal, ex.name + ": HC sum");
        led.note_checks(3);
    }
}

void elliptic(Ledger& led) {
    for (const auto& ex : load_examples(kShipped)) {
        const FiniteGroupoid& g = ex.doc.groupoid;
        for (const auto& comp : invariant_components(loops(g), g)) {
            const EllipticReport rep = elliptic_theorem_check(ex.coeffs, g, comp, 5);
            led.expect(rep.equal, ex.name + "[" + g.arrow(comp.front()).name + "]: " + dims(rep.hc_crossed) + " vs " +
                                      dims(rep.hc_normalizer));
            led.note_checks(1);
        }
    }
}

void redcross(Ledger& led) {
    for (const auto& ex : load_examples(kShipped)) {
        const IsoReport rep = redcross_iso(ex.coeffs, ex.doc.groupoid, 4);
        led.expect(rep.bijective, ex.name + ": not bijective");
        led.expect(rep.failures.empty(), ex.name + ": " + (rep.failures.empty() ? "" : rep.failures.front()));
        led.note_checks(2);
    }
}

void hc_pipelines(Ledger& led) {
    auto names = kShipped;
    names.push_back("z4");
    names.push_back("s3-action");
    names.push_back("swap-matrix");
    for (const auto& ex : load_examples(names)) {
        const CyclicModule cm = crossed_cyclic_module(ex.coeffs, ex.doc.groupoid, 6);
        const auto a = hc_dims(cm), b = hc_dims_cyclic_bicomplex(cm);
        led.expect_eq(prefix(a, 6), prefix(b, 6), ex.name + ": " + dims(a) + " vs " + dims(b));
        led.expect(a.size() >= 6 && b.size() >= 6, ex.name + ": window too short");
        led.note_checks(1);
    }
}

void eilenberg_zilber(Ledger& led) {
    const auto ex = load_examples({"trivial", "z2", "z3", "pair2"});
    const std::vector<std::pair<int, int>> pairs{{1, 1}, {1, 2}, {2, 1}, {0, 3}, {3, 1}};
    for (const auto& [i, j] : pairs) {
        const auto& x = ex[uz(i)];
        const auto& y = ex[uz(j)];
        const BicyclicModule bc = tensor_bicyclic(crossed_cyclic_module(x.coeffs, x.doc.groupoid, 5),
                                                  crossed_cyclic_module(y.coeffs, y.doc.groupoid, 5));
        const std::string tag = x.name + " (x) " + y.name;
        led.expect(validate(bc).ok(), tag + ": bicyclic identities");
        const EZReport rep = ez_diagonal(bc);
        led.expect(rep.hh_diagonal.size() >= 5 && rep.total.size() >= 5, tag + ": window too short");
        led.expect_eq(prefix(rep.hh_diagonal, 5), prefix(rep.total, 5), tag + ": " + dims(rep.hh_diagonal) + " vs " + dims(rep.total));
        led.note_checks(2);
    }
}

void abutment(Ledger& led) {
    for (const auto& ex : load_examples(kShipped)) {
        // The filtration pages are costly, so the largest groupoid uses a shorter window.
        const int top = ex.doc.groupoid.num_arrows() > 4 ? 4 : 6;
        const SpectralSequence ss = spectral_sequence(connes_bicomplex(mixed(crossed_cyclic_module(ex.coeffs, ex.doc.groupoid, top))), top + 1);
        led.expect(ss.abutment_holds(), ex.name + ": E_inf vs H(Tot)");
        led.expect(ss.page_consistency_error().empty(), ex.name + ": " + ss.page_consistency_error());
        led.note_checks(2);
    }
    const GroupoidDocument plain = load_groupoid(std::string(CYCHOM_DATA_DIR) + "/z2.groupoid");
    const GroupoidDocument sign = load_groupoid(std::string(CYCHOM_DATA_DIR) + "/z2-sign.groupoid");
    const FiniteGroupoid point = trivial_groupoid();
    for (const GroupoidDocument* doc : {&plain, &sign}) {
        const Functor to_point{&doc->groupoid, &point, {0}, std::vector<ArrowId>(doc->groupoid.num_arrows(), 0)};
        const HochschildSerreReport hs = hochschild_serre(to_point, doc->sheaf, 6);
        led.expect(hs.abutment_holds, doc->name + ": bar-of-bar abutment");
        led.expect(hs.e2_matches, doc->name + ": bar-of-bar E2");
        led.note_checks(2);
    }
    // The identity functor has contractible commas, so only L_0 survives.
    const FiniteGroupoid& g = plain.groupoid;
    std::vector<ArrowId> arrows(g.num_arrows());
    for (std::size_t k = 0; k < arrows.size(); ++k) arrows[k] = static_cast<ArrowId>(k);
    const HochschildSerreReport id = hochschild_serre(Functor{&g, &g, {0}, arrows}, plain.sheaf, 5);
    led.expect(id.ok() && id.higher_vanish, "z2 identity: bar-of-bar");
}

void skeleton_invariance(Ledger& led) {
    auto names = kShipped;
    names.push_back("s3-action");
    names.push_back("z2-sign");
    for (const std::string& n : names) {
        const GroupoidDocument doc = load_groupoid(std::string(CYCHOM_DATA_DIR) + "/" + n + ".groupoid");
        const Skeleton sk = skeleton(doc.groupoid);
        const auto direct = groupoid_homology_dims(doc.groupoid, doc.sheaf, 5);
        const auto via = groupoid_homology_dims(sk.disjoint_union, pullback(sk.inclusion(doc.groupoid), doc.sheaf), 5);
        led.expect_eq(prefix(direct, 5), prefix(via, 5), n + ": " + dims(direct) + " vs " + dims(via));
        led.expect(direct.size() >= 5, n + ": window too short");
        led.note_checks(1);
    }
    const auto swap = load_examples({"swap-matrix"});
    const auto crossed = hh_dims(mixed(crossed_cyclic_module(swap[0].coeffs, swap[0].doc.groupoid, 5)));
    const auto matrices = hh_dims(mixed(algebra_cyclic_module(matrix_algebra(2), 5)));
    led.expect(crossed.at(0) == 1 && matrices.at(0) == 1, "swap-matrix HH_0 = " + std::to_string(crossed.at(0)));
    led.expect_eq(crossed, matrices, "swap-matrix HH " + dims(crossed) + " vs M2 " + dims(matrices));
    led.note_checks(2);
}

struct Criterion {
    int id;
    const char* title;
    double limit_seconds;  // 0 when unbounded
    std::function<void(Ledger&)> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "axiom suite at window 6", 60, axiom_suite},
        {2, "group algebra oracle", 120, group_algebra_oracle},
        {3, "SBI exactness through degree 4", 60, sbi_exactness},
        {4, "decomposition over loop components", 0, decomposition},
        {5, "elliptic comparison per component", 0, elliptic},
        {6, "redcross isomorphism", 0, redcross},
        {7, "HC pipelines agree", 0, hc_pipelines},
        {8, "Eilenberg-Zilber", 0, eilenberg_zilber},
        {9, "spectral sequence abutment", 0, abutment},
        {10, "skeleton and Morita invariance", 0, skeleton_invariance},
    };
    bool all = true;
    for (const Criterion& c : criteria) {
        Ledger led;
        const auto start = std::chrono::steady_clock::now();
        std::string crash;
        try {
            c.run(led);
        } catch (const std::exception& e) {
            crash = e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = c.limit_seconds == 0 || secs < c.limit_seconds;
        const bool ok = crash.empty() && led.ok() && in_time;
        all = all && ok;
        std::ostringstream line;
        line << (ok ? "PASS" : "FAIL") << "  criterion " << c.id << ": " << c.title << "  (" << led.checks() << " checks, ";
        line.precision(2);
        line << std::fixed << secs << " s";
        if (c.limit_seconds > 0) line << " of " << c.limit_seconds << " s";
        line << ")";
        std::cout << line.str() << "\n";
        if (!crash.empty()) std::cout << "      exception: " << crash << "\n";
        if (!in_time) std::cout << "      over the time limit\n";
        for (std::size_t k = 0; k < led.failures().size() && k < 5; ++k) std::cout << "      " << led.failures()[k] << "\n";
        std::cout.flush();
    }
    return all ? 0 : 1;
}

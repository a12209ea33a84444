#include "cychom/report.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <functional>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>

#include "cychom/crossed.hpp"
#include "cychom/cyclic.hpp"
#include "cychom/hochschild_serre.hpp"
#include "cychom/spectral.hpp"

namespace cychom {

namespace {

std::size_t uz(int v) { return static_cast<std::size_t>(v); }

const char* status_word(Status s) {
    switch (s) {
        case Status::pass: return "PASS";
        case Status::fail: return "FAIL";
        case Status::unstabilized: return "UNSTABILIZED";
    }
    return "FAIL";
}

Status status_of(const std::string& w) {
    if (w == "PASS") return Status::pass;
    if (w == "UNSTABILIZED") return Status::unstabilized;
    if (w == "FAIL") return Status::fail;
    throw std::invalid_argument("unknown verdict status " + w);
}

std::string first_or_empty(const ValidationReport& rep) { return rep.ok() ? std::string() : rep.violations.front(); }

std::string dims_str(const std::vector<std::size_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return "(" + s + ")";
}

struct Context {
    const GroupoidDocument& doc;
    const CommandOptions& opts;
    Report& out;

    const FiniteGroupoid& g() const { return doc.groupoid; }

    std::optional<std::vector<ArrowId>> component() const {
        if (!opts.component) return std::nullopt;
        const ArrowId loop = g().find_arrow(*opts.component);
        if (loop == kNone) throw std::invalid_argument("unknown arrow '" + *opts.component + "'");
        if (g().src(loop) != g().tgt(loop)) throw std::invalid_argument("'" + *opts.component + "' is not a loop");
        for (auto& comp : invariant_components(loops(g()), g()))
            if (std::find(comp.begin(), comp.end(), loop) != comp.end()) return comp;
        throw std::logic_error("loop lies in no component");
    }

    std::string component_label(const std::vector<ArrowId>& comp) const { return "[" + g().arrow(comp.front()).name + "]"; }

    CyclicModule module(int top) const {
        const GAlgebraSheaf a = doc.algebra_sheaf();
        if (const auto comp = component()) return crossed_cyclic_module(a, g(), top, *comp);
        return crossed_cyclic_module(a, g(), top);
    }
};

void cmd_hh(Context& c) {
    const CyclicModule cm = c.module(c.opts.window);
    c.out.verdict("cyclic identities", validate(cm).ok(), first_or_empty(validate(cm)));
    const MixedComplex mc = mixed(cm);
    c.out.verdict("mixed complex identities", validate(mc).ok(), first_or_empty(validate(mc)));
    c.out.series.push_back({"HH", hh_dims(mc)});
}

void cmd_hc(Context& c) {
    const CyclicModule cm = c.module(c.opts.window);
    const std::vector<std::size_t> bb = hc_dims(cm);
    const std::vector<std::size_t> cyc = hc_dims_cyclic_bicomplex(cm);
    c.out.series.push_back({"HC", bb});
    c.out.series.push_back({"HC via cyclic bicomplex", cyc});
    c.out.verdict("HC pipelines agree", bb == cyc, bb == cyc ? "" : dims_str(bb) + " vs " + dims_str(cyc));
}

void add_periodic(Report& out, const std::string& prefix, const std::vector<PeriodicResult>& hp) {
    for (const PeriodicResult& p : hp) {
        const std::string name = prefix + "HP_" + std::to_string(p.parity);
        out.periodic.push_back({name, p.parity, p.dim, p.stabilized});
    }
}

void cmd_hp(Context& c) {
    const CyclicModule cm = c.module(c.opts.window);
    const MixedComplex mc = mixed(cm);
    for (int parity = 0; parity <= 1; ++parity) {
        const PeriodicResult p = hp(mc, parity);
        add_periodic(c.out, "", {p});
        Verdict v{"HP_" + std::to_string(parity) + " stabilized", p.stabilized ? Status::pass : Status::unstabilized,
                  "S-tower ranks " + dims_str(p.observed)};
        c.out.verdicts.push_back(std::move(v));
    }
}

void cmd_sbi(Context& c) {
    const CyclicModule cm = c.module(c.opts.window);
    const MixedComplex mc = mixed(cm);
    const SBIReport rep = sbi(mc);
    c.out.series.push_back({"HH", hh_dims(mc)});
    c.out.series.push_back({"HC", hc_dims(mc)});
    std::string bad;
    for (const auto& n : rep.exactness.nodes)
        if (!n.exact && bad.empty()) bad = "not exact at " + n.label;
    c.out.verdict("SBI sequence exact", rep.exactness.all_exact(), bad);
}

void cmd_decompose(Context& c) {
    if (c.opts.component) throw std::invalid_argument("decompose always runs over every component");
    const DecompositionReport rep = decomposition_check(c.doc.algebra_sheaf(), c.g(), c.opts.window);
    c.out.series.push_back({"HH", rep.total.hh});
    c.out.series.push_back({"HC", rep.total.hc});
    for (std::size_t k = 0; k < rep.components.size(); ++k) {
        const std::string lab = c.component_label(rep.components[k]);
        c.out.series.push_back({"HH" + lab, rep.parts[k].hh});
        c.out.series.push_back({"HC" + lab, rep.parts[k].hc});
        add_periodic(c.out, lab, rep.parts[k].hp);
    }
    add_periodic(c.out, "", rep.total.hp);
    c.out.verdict("components partition the Burghelea spaces", rep.spaces_partition);
    c.out.verdict("HH is the sum over components", rep.hh_equal);
    c.out.verdict("HC is the sum over components", rep.hc_equal);
    if (rep.hp_equal) c.out.verdict("HP is the sum over components", *rep.hp_equal);
    c.out.verdict("component count", true, std::to_string(rep.components.size()) + " components");
}

void cmd_elliptic(Context& c) {
    std::vector<std::vector<ArrowId>> comps;
    if (auto comp = c.component()) comps.push_back(*comp);
    else comps = invariant_components(loops(c.g()), c.g());
    const GAlgebraSheaf a = c.doc.algebra_sheaf();
    for (const auto& comp : comps) {
        const EllipticReport rep = elliptic_theorem_check(a, c.g(), comp, c.opts.window);
        const std::string lab = c.component_label(comp);
        c.out.series.push_back({"HH crossed" + lab, rep.hh_crossed});
        c.out.series.push_back({"HH normalizer" + lab, rep.hh_normalizer});
        c.out.series.push_back({"HC crossed" + lab, rep.hc_crossed});
        c.out.series.push_back({"HC normalizer" + lab, rep.hc_normalizer});
        c.out.verdict("elliptic comparison" + lab, rep.equal);
    }
}

void cmd_redcross(Context& c) {
    if (c.opts.component) throw std::invalid_argument("redcross-check runs on the whole loop groupoid");
    const IsoReport rep = redcross_iso(c.doc.algebra_sheaf(), c.g(), c.opts.window);
    c.out.series.push_back({"crossed module", rep.source_dims});
    c.out.series.push_back({"loop module", rep.target_dims});
    c.out.verdict("redcross map bijective", rep.bijective);
    c.out.verdict("redcross map commutes with d, s, t", rep.failures.empty(), rep.failures.empty() ? "" : rep.failures.front());
}

CyclicModule truncate(const CyclicModule& cm, int top) {
    CyclicModule out{cm.order, CyclicOperators::shaped(std::vector<std::size_t>(cm.ops.dims.begin(), cm.ops.dims.begin() + top + 1))};
    for (int n = 0; n <= top; ++n) {
        out.ops.faces[uz(n)] = cm.ops.faces[uz(n)];
        out.ops.cyclic[uz(n)] = cm.ops.cyclic[uz(n)];
        if (n < top) out.ops.degens[uz(n)] = cm.ops.degens[uz(n)];
    }
    return out;
}

void cmd_ez(Context& c) {
    const CyclicModule x = c.module(c.opts.window);
    const GroupoidDocument& other = c.opts.partner ? *c.opts.partner : c.doc;
    const CyclicModule y = crossed_cyclic_module(other.algebra_sheaf(), other.groupoid, c.opts.window);
    // The bicyclic grid holds dim x(p) * dim y(q) for all p, q up to the window.
    int top = c.opts.window;
    auto grid = [&](int t) {
        std::size_t sx = 0, sy = 0;
        for (int n = 0; n <= t; ++n) sx += x.dim(n), sy += y.dim(n);
        return sx * sy;
    };
    while (top > 1 && grid(top) > c.opts.ez_budget) --top;
    c.out.window = top;
    const BicyclicModule bc = tensor_bicyclic(truncate(x, top), truncate(y, top));
    c.out.verdict("bicyclic identities", validate(bc).ok(), first_or_empty(validate(bc)));
    const EZReport rep = ez_diagonal(bc);
    c.out.series.push_back({"HH diagonal", rep.hh_diagonal});
    c.out.series.push_back({"H total", rep.total});
    c.out.verdict("Eilenberg-Zilber", rep.equal,
                  top < c.opts.window ? "window reduced to " + std::to_string(top) + " to bound the grid" : "");
}

bool has_crossed_product(const GroupoidDocument& doc) {
    try {
        (void)doc.algebra_sheaf();
        return true;
    } catch (const std::invalid_argument&) {
        return false;
    }
}

void spectral_connes(Context& c) {
    const CyclicModule full = c.module(c.opts.window);
    // Filtration pages need kernels inside every F_p Tot_n, so the window is
    // bounded by the total size of the module.
    int top = c.opts.window;
    auto size = [&](int t) {
        std::size_t sum = 0;
        for (int n = 0; n <= t; ++n) sum += full.dim(n);
        return sum;
    };
    while (top > 1 && size(top) > c.opts.spectral_budget) --top;
    const CyclicModule cm = top < c.opts.window ? truncate(full, top) : full;
    const DoubleComplex dc = connes_bicomplex(mixed(cm));
    const SpectralSequence ss = spectral_sequence(dc, top + 1);
    std::vector<std::size_t> einf(ss.total_homology.size(), 0);
    for (const auto& [pq, d] : ss.e_inf) {
        const int n = pq.first + pq.second;
        if (n >= 0 && uz(n) < einf.size()) einf[uz(n)] += d;
    }
    c.out.series.push_back({"E_inf by total degree", einf});
    c.out.series.push_back({"H(Tot)", ss.total_homology});
    c.out.verdict("abutment of the (B,b) bicomplex", ss.abutment_holds(),
                  top < c.opts.window ? "window reduced to " + std::to_string(top) + " to bound the filtration" : "");
    const std::string pages = ss.page_consistency_error();
    c.out.verdict("page consistency", pages.empty(), pages);
}

// Summed chain dimensions of the bar complex through degree top.
std::size_t bar_size(const FiniteGroupoid& g, const GSheaf& s, int top) {
    const std::size_t stalk = std::ranges::max(s.stalk_dim);
    std::vector<std::size_t> ending(g.num_objects(), 1);  // strings by the source of their last arrow
    std::size_t total = g.num_objects();
    for (int n = 1; n <= top; ++n) {
        std::vector<std::size_t> next(g.num_objects(), 0);
        for (ArrowId h = 0; h < static_cast<ArrowId>(g.num_arrows()); ++h)
            next[uz(g.src(h))] += ending[uz(g.tgt(h))];
        ending = std::move(next);
        for (std::size_t k : ending) total += k;
    }
    return total * stalk;
}

void spectral_bar_of_bar(Context& c) {
    const FiniteGroupoid point = trivial_groupoid();
    Functor to_point{&c.g(), &point, std::vector<ObjId>(c.g().num_objects(), 0), std::vector<ArrowId>(c.g().num_arrows(), 0)};
    int top = c.opts.window;
    while (top > 1 && bar_size(c.g(), c.doc.sheaf, top) > c.opts.spectral_budget) --top;
    const HochschildSerreReport hs = hochschild_serre(to_point, c.doc.sheaf, top);
    c.out.series.push_back({"H(groupoid)", hs.source_homology});
    c.out.series.push_back({"bar-of-bar H(Tot)", hs.abutment});
    c.out.verdict("bar-of-bar E2 matches H(point; L_q)", hs.e2_matches);
    c.out.verdict("bar-of-bar abutment", hs.abutment_holds,
                  top < c.opts.window ? "window reduced to " + std::to_string(top) + " to bound the filtration" : "");
    if (hs.degenerate_agreement) c.out.verdict("degenerate case agrees with groupoid homology", *hs.degenerate_agreement);
}

// Without an algebra only the groupoid homology side makes sense.
void cmd_spectral(Context& c) {
    if (has_crossed_product(c.doc)) spectral_connes(c);
    spectral_bar_of_bar(c);
}

void cmd_homology(Context& c) {
    const std::vector<std::size_t> direct = groupoid_homology_dims(c.g(), c.doc.sheaf, c.opts.window);
    const Skeleton sk = skeleton(c.g());
    const Functor incl = sk.inclusion(c.g());
    const std::vector<std::size_t> via = groupoid_homology_dims(sk.disjoint_union, pullback(incl, c.doc.sheaf), c.opts.window);
    c.out.series.push_back({"H", direct});
    c.out.series.push_back({"H over the skeleton", via});
    c.out.verdict("skeleton inclusion is an equivalence", sk.essential_equivalence);
    c.out.verdict("homology agrees with the skeleton", direct == via);
}

void cmd_verify(Context& c) {
    c.out.verdict("groupoid axioms", validate(c.g()).ok(), first_or_empty(validate(c.g())));
    c.out.verdict("sheaf axioms", validate(c.g(), c.doc.sheaf).ok(), first_or_empty(validate(c.g(), c.doc.sheaf)));
    const std::vector<std::pair<const char*, void (*)(Context&)>> parts{
        {"hh", cmd_hh},         {"hc", cmd_hc},         {"hp", cmd_hp},     {"sbi", cmd_sbi},
        {"decompose", cmd_decompose}, {"elliptic-check", cmd_elliptic}, {"redcross-check", cmd_redcross},
        {"ez-check", cmd_ez},   {"spectral", cmd_spectral}, {"homology", cmd_homology}};
    const bool crossed = has_crossed_product(c.doc);
    if (crossed) {
        const CyclicModule cm = c.module(c.opts.window);
        const DerivedOperators ops(cm);
        c.out.verdict("derived operators", ops.check().ok(), first_or_empty(ops.check()));
    }
    for (const auto& [name, fn] : parts) {
        if (c.opts.component && (std::string(name) == "decompose" || std::string(name) == "redcross-check")) continue;
        if (!crossed && std::string(name) != "spectral" && std::string(name) != "homology") continue;
        Report sub;
        sub.window = c.opts.window;
        Context inner{c.doc, c.opts, sub};
        fn(inner);
        for (auto& v : sub.verdicts) {
            v.name = std::string(name) + ": " + v.name;
            c.out.verdicts.push_back(std::move(v));
        }
        if (std::string(name) == "hh" || std::string(name) == "hc" || std::string(name) == "homology")
            for (auto& s : sub.series) c.out.series.push_back(std::move(s));
        if (std::string(name) == "hp")
            for (auto& p : sub.periodic) c.out.periodic.push_back(std::move(p));
    }
}

const std::map<std::string, void (*)(Context&)>& registry() {
    static const std::map<std::string, void (*)(Context&)> table{
        {"hh", cmd_hh},          {"hc", cmd_hc},
        {"hp", cmd_hp},          {"sbi", cmd_sbi},
        {"decompose", cmd_decompose}, {"elliptic-check", cmd_elliptic},
        {"redcross-check", cmd_redcross}, {"ez-check", cmd_ez},
        {"spectral", cmd_spectral}, {"homology", cmd_homology},
        {"verify", cmd_verify}};
    return table;
}

}  // namespace

int Report::exit_status() const {
    bool unstable = false;
    for (const auto& v : verdicts) {
        if (v.status == Status::fail) return 2;
        unstable = unstable || v.status == Status::unstabilized;
    }
    return unstable ? 3 : 0;
}

void Report::verdict(std::string name, bool ok, std::string detail) {
    verdicts.push_back({std::move(name), ok ? Status::pass : Status::fail, std::move(detail)});
}

std::string render_table(const Report& r) {
    std::ostringstream os;
    os << "command: " << r.command << "\ninput:   " << r.input << "\nwindow:  " << r.window << "\n";
    if (!r.series.empty()) {
        std::size_t width = 6, cols = 0;
        for (const auto& s : r.series) {
            width = std::max(width, s.name.size() + 2);
            cols = std::max(cols, s.dims.size());
        }
        os << "\n" << std::left << std::setw(static_cast<int>(width)) << "degree";
        for (std::size_t n = 0; n < cols; ++n) os << std::right << std::setw(8) << n;
        os << "\n";
        for (const auto& s : r.series) {
            os << std::left << std::setw(static_cast<int>(width)) << s.name;
            for (std::size_t d : s.dims) os << std::right << std::setw(8) << d;
            os << "\n";
        }
    }
    if (!r.periodic.empty()) {
        os << "\n";
        for (const auto& p : r.periodic)
            os << p.name << " = " << p.dim << (p.stabilized ? "  (stabilized)" : "  (not stabilized)") << "\n";
    }
    os << "\n";
    for (const auto& v : r.verdicts) {
        os << std::left << std::setw(13) << status_word(v.status) << v.name;
        if (!v.detail.empty()) os << "  [" << v.detail << "]";
        os << "\n";
    }
    os << "\nexit status " << r.exit_status() << ", " << std::fixed << std::setprecision(2) << r.seconds << " s\n";
    return os.str();
}

std::string render_json(const Report& r) {
    using nlohmann::json;
    json j;
    j["command"] = r.command;
    j["input"] = r.input;
    j["window"] = r.window;
    j["series"] = json::array();
    for (const auto& s : r.series) j["series"].push_back({{"name", s.name}, {"dims", s.dims}});
    j["periodic"] = json::array();
    for (const auto& p : r.periodic)
        j["periodic"].push_back({{"name", p.name}, {"parity", p.parity}, {"dim", p.dim}, {"stabilized", p.stabilized}});
    j["verdicts"] = json::array();
    for (const auto& v : r.verdicts)
        j["verdicts"].push_back({{"name", v.name}, {"status", status_word(v.status)}, {"detail", v.detail}});
    j["seconds"] = r.seconds;
    j["exit_status"] = r.exit_status();
    return j.dump(2) + "\n";
}

Report parse_report_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    Report r;
    r.command = j.at("command").get<std::string>();
    r.input = j.at("input").get<std::string>();
    r.window = j.at("window").get<int>();
    for (const auto& s : j.at("series")) r.series.push_back({s.at("name"), s.at("dims").get<std::vector<std::size_t>>()});
    for (const auto& p : j.at("periodic"))
        r.periodic.push_back({p.at("name"), p.at("parity").get<int>(), p.at("dim").get<std::size_t>(), p.at("stabilized").get<bool>()});
    for (const auto& v : j.at("verdicts"))
        r.verdicts.push_back({v.at("name"), status_of(v.at("status").get<std::string>()), v.at("detail")});
    r.seconds = j.at("seconds").get<double>();
    return r;
}

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& [k, v] : registry()) out.push_back(k);
        return out;
    }();
    return names;
}

Report run_command(const std::string& command, const GroupoidDocument& doc, const CommandOptions& opts,
                   const std::string& input_label) {
    const auto it = registry().find(command);
    if (it == registry().end()) throw std::invalid_argument("unknown command '" + command + "'");
    if (opts.window < 1) throw std::invalid_argument("the degree window must be at least 1");
    Report r;
    r.command = command;
    r.input = input_label.empty() ? doc.name : input_label;
    r.window = opts.window;
    Context c{doc, opts, r};
    const auto start = std::chrono::steady_clock::now();
    it->second(c);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

}  // namespace cychom

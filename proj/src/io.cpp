#include "cychom/io.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace cychom {

namespace {

std::size_t uz(int v) { return static_cast<std::size_t>(v); }

class Reader {
public:
    explicit Reader(std::string origin) : origin_(std::move(origin)) {}

    [[noreturn]] void fail(const YAML::Node& at, const std::string& what) const {
        const YAML::Mark m = at.Mark();
        throw ParseError(origin_, m.line >= 0 ? m.line + 1 : 0, m.column >= 0 ? m.column + 1 : 0, what);
    }

    std::string text(const YAML::Node& n, const char* what) const {
        if (!n || !n.IsScalar()) fail(n, std::string("expected ") + what);
        return n.Scalar();
    }

    int count(const YAML::Node& n, const char* what) const {
        const std::string s = text(n, what);
        try {
            std::size_t used = 0;
            const int v = std::stoi(s, &used);
            if (used == s.size() && v >= 0) return v;
        } catch (const std::exception&) {
        }
        fail(n, std::string("expected a non-negative integer for ") + what);
    }

    Scalar rational(const YAML::Node& n) const {
        const std::string s = text(n, "a rational entry");
        try {
            return parse_rational(s);
        } catch (const std::invalid_argument&) {
            fail(n, "'" + s + "' is not an exact rational p/q");
        }
    }

    YAML::Node seq(const YAML::Node& n, const char* what) const {
        if (!n || !n.IsSequence()) fail(n, std::string("expected a list of ") + what);
        return n;
    }

    YAML::Node map(const YAML::Node& n, const char* what) const {
        if (!n || !n.IsMap()) fail(n, std::string("expected a mapping for ") + what);
        return n;
    }

    void only_keys(const YAML::Node& n, std::initializer_list<const char*> allowed, const char* where) const {
        for (const auto& kv : n) {
            const std::string key = kv.first.Scalar();
            bool ok = false;
            for (const char* a : allowed) ok = ok || key == a;
            if (!ok) fail(kv.first, "unknown key '" + key + "' in " + where);
        }
    }

private:
    std::string origin_;
};

template <class Names>
int lookup(const Reader& rd, const YAML::Node& n, const Names& names, const char* what) {
    const std::string s = rd.text(n, what);
    const auto it = names.find(s);
    if (it == names.end()) rd.fail(n, std::string("unknown ") + what + " '" + s + "'");
    return it->second;
}

std::string row_str(const std::string& g, const std::string& h, const std::string& gh) {
    return "[" + g + ", " + h + ", " + gh + "]";
}

FiniteGroupoid read_explicit(const Reader& rd, const YAML::Node& root) {
    std::vector<std::string> objects;
    std::map<std::string, int> obj_id;
    for (const auto& o : rd.seq(root["objects"], "object names")) {
        const std::string s = rd.text(o, "an object name");
        if (!obj_id.emplace(s, static_cast<int>(objects.size())).second) rd.fail(o, "duplicate object '" + s + "'");
        objects.push_back(s);
    }
    std::vector<Arrow> arrows;
    std::map<std::string, int> arrow_id;
    for (const auto& a : rd.seq(root["arrows"], "arrows")) {
        YAML::Node name, src, tgt;
        if (a.IsSequence() && a.size() == 3) {
            name = a[0], src = a[1], tgt = a[2];
        } else if (a.IsMap()) {
            rd.only_keys(a, {"name", "src", "tgt"}, "an arrow");
            name = a["name"], src = a["src"], tgt = a["tgt"];
        } else {
            rd.fail(a, "an arrow is [name, src, tgt] or {name, src, tgt}");
        }
        const std::string s = rd.text(name, "an arrow name");
        if (!arrow_id.emplace(s, static_cast<int>(arrows.size())).second) rd.fail(name, "duplicate arrow '" + s + "'");
        arrows.push_back({s, lookup(rd, src, obj_id, "object"), lookup(rd, tgt, obj_id, "object")});
    }
    const YAML::Node compose = rd.seq(root["compose"], "composition rows");
    std::vector<FiniteGroupoid::ComposeRow> rows;
    std::map<std::pair<int, int>, YAML::Node> at;  // (g, h) -> row
    std::map<std::pair<int, int>, YAML::Node> left_product, right_product;  // (g, gh), (h, gh) -> row
    auto name = [&](int a) { return arrows[uz(a)].name; };
    for (const auto& r : compose) {
        if (!r.IsSequence() || r.size() != 3) rd.fail(r, "a composition row is [g, h, gh]");
        const int g = lookup(rd, r[0], arrow_id, "arrow");
        const int h = lookup(rd, r[1], arrow_id, "arrow");
        const int gh = lookup(rd, r[2], arrow_id, "arrow");
        const std::string row = row_str(name(g), name(h), name(gh));
        if (arrows[uz(g)].src != arrows[uz(h)].tgt)
            rd.fail(r, "row " + row + ": " + name(g) + " cannot follow " + name(h) + " (source and target differ)");
        if (arrows[uz(gh)].src != arrows[uz(h)].src || arrows[uz(gh)].tgt != arrows[uz(g)].tgt)
            rd.fail(r, "row " + row + ": the product has the wrong source or target");
        auto clash = [&](std::map<std::pair<int, int>, YAML::Node>& seen, std::pair<int, int> key, const char* why) {
            const auto [it, fresh] = seen.emplace(key, r);
            if (fresh) return;
            const YAML::Node& other = it->second;
            rd.fail(r, "row " + row + " " + why + " row [" + other[0].Scalar() + ", " + other[1].Scalar() + ", " +
                           other[2].Scalar() + "] at line " + std::to_string(other.Mark().line + 1));
        };
        clash(at, {g, h}, "redefines the pair of");
        clash(left_product, {g, gh}, "breaks cancellation against");
        clash(right_product, {h, gh}, "breaks cancellation against");
        rows.push_back({g, h, gh});
    }
    FiniteGroupoid out(std::move(objects), std::move(arrows), rows);
    if (auto rep = validate(out); !rep.ok()) rd.fail(compose, "composition table: " + rep.violations.front());
    return out;
}

FiniteGroupoid read_group(const Reader& rd, const YAML::Node& node) {
    rd.map(node, "group");
    rd.only_keys(node, {"cyclic", "symmetric", "elements", "table"}, "group");
    if (node["cyclic"]) return cyclic_group(std::max(1, rd.count(node["cyclic"], "the cyclic order")));
    if (node["symmetric"]) {
        const int n = rd.count(node["symmetric"], "the symmetric degree");
        if (n < 1 || n > 5) rd.fail(node["symmetric"], "symmetric groups are supported for degrees 1..5");
        return symmetric_group(n);
    }
    std::vector<std::string> names;
    std::map<std::string, int> id;
    for (const auto& e : rd.seq(node["elements"], "group elements")) {
        const std::string s = rd.text(e, "an element name");
        if (!id.emplace(s, static_cast<int>(names.size())).second) rd.fail(e, "duplicate element '" + s + "'");
        names.push_back(s);
    }
    const YAML::Node table = rd.seq(node["table"], "table rows");
    if (table.size() != names.size()) rd.fail(table, "the table needs one row per element");
    std::vector<std::vector<int>> mult;
    for (const auto& row : table) {
        rd.seq(row, "products");
        if (row.size() != names.size()) rd.fail(row, "each table row needs one entry per element");
        mult.emplace_back();
        for (const auto& e : row) mult.back().push_back(lookup(rd, e, id, "element"));
    }
    FiniteGroupoid g = group_groupoid(names, mult);
    if (auto rep = validate(g); !rep.ok()) rd.fail(table, "group table: " + rep.violations.front());
    return g;
}

ActionGroupoid read_action(const Reader& rd, const YAML::Node& node, const FiniteGroupoid& group) {
    rd.map(node, "action");
    rd.only_keys(node, {"points", "generators"}, "action");
    std::vector<std::string> points;
    std::map<std::string, int> pid;
    for (const auto& p : rd.seq(node["points"], "points")) {
        const std::string s = rd.text(p, "a point name");
        if (!pid.emplace(s, static_cast<int>(points.size())).second) rd.fail(p, "duplicate point '" + s + "'");
        points.push_back(s);
    }
    const std::size_t na = group.num_arrows();
    std::vector<std::optional<std::vector<int>>> image(na);
    std::vector<int> ident(points.size());
    for (std::size_t i = 0; i < ident.size(); ++i) ident[i] = static_cast<int>(i);
    image[uz(group.unit(0))] = ident;
    std::vector<ArrowId> gens;
    std::map<ArrowId, std::vector<int>> gen_image;
    for (const auto& kv : rd.map(node["generators"], "generators")) {
        const std::string gname = kv.first.Scalar();
        const ArrowId g = group.find_arrow(gname);
        if (g == kNone) rd.fail(kv.first, "unknown group element '" + gname + "'");
        rd.seq(kv.second, "point images");
        if (kv.second.size() != points.size()) rd.fail(kv.second, "generator " + gname + " needs one image per point");
        std::vector<int> img;
        std::set<int> seen;
        for (const auto& p : kv.second) {
            img.push_back(lookup(rd, p, pid, "point"));
            if (!seen.insert(img.back()).second) rd.fail(p, "generator " + gname + " is not a permutation");
        }
        if (!gen_image.emplace(g, img).second) rd.fail(kv.first, "generator " + gname + " given twice");
        gens.push_back(g);
    }
    // x.(g h) = (x.g).h; closing up under right multiplication by generators.
    std::vector<ArrowId> frontier{group.unit(0)};
    while (!frontier.empty()) {
        const ArrowId g = frontier.back();
        frontier.pop_back();
        for (ArrowId h : gens) {
            const ArrowId gh = group.compose(g, h);
            std::vector<int> img(points.size());
            for (std::size_t x = 0; x < points.size(); ++x) img[x] = gen_image.at(h)[uz((*image[uz(g)])[x])];
            if (!image[uz(gh)]) {
                image[uz(gh)] = img;
                frontier.push_back(gh);
            } else if (*image[uz(gh)] != img) {
                rd.fail(node["generators"], "generator images do not define an action (conflict at " + group.arrow(gh).name + ")");
            }
        }
    }
    std::vector<std::vector<int>> full;
    for (ArrowId g = 0; g < static_cast<ArrowId>(na); ++g) {
        if (!image[uz(g)]) rd.fail(node["generators"], "generators do not reach " + group.arrow(g).name);
        full.push_back(*image[uz(g)]);
    }
    GSet x = permutation_set(group, full);
    x.points = points;
    if (auto rep = validate_action(x, group); !rep.ok()) rd.fail(node, "action: " + rep.violations.front());
    return action_groupoid(x, group);
}

Mat read_matrix(const Reader& rd, const YAML::Node& node, std::size_t rows, std::size_t cols) {
    rd.seq(node, "matrix rows");
    std::vector<std::vector<Scalar>> dense;
    for (const auto& r : node) {
        std::vector<Scalar> row;
        if (r.IsSequence()) {
            for (const auto& e : r) row.push_back(rd.rational(e));
        } else {
            std::istringstream in(rd.text(r, "a matrix row"));
            for (std::string tok; in >> tok;) {
                try {
                    row.push_back(parse_rational(tok));
                } catch (const std::invalid_argument&) {
                    rd.fail(r, "'" + tok + "' is not an exact rational p/q");
                }
            }
        }
        if (row.size() != cols) rd.fail(r, "matrix row has " + std::to_string(row.size()) + " entries, expected " + std::to_string(cols));
        dense.push_back(std::move(row));
    }
    if (dense.size() != rows) rd.fail(node, "matrix has " + std::to_string(dense.size()) + " rows, expected " + std::to_string(rows));
    return Mat::from_rows(dense, cols);
}

FinAlgebra read_algebra(const Reader& rd, const YAML::Node& node) {
    rd.map(node, "algebra");
    if (node["kind"]) {
        rd.only_keys(node, {"kind", "size"}, "algebra");
        const std::string kind = rd.text(node["kind"], "an algebra kind");
        if (kind == "field") return ground_field();
        const int size = node["size"] ? rd.count(node["size"], "the algebra size") : 0;
        if (size < 1) rd.fail(node, "algebra kind '" + kind + "' needs a positive size");
        if (kind == "functions") return function_algebra(uz(size));
        if (kind == "matrices") return matrix_algebra(uz(size));
        rd.fail(node["kind"], "unknown algebra kind '" + kind + "' (field, functions, matrices)");
    }
    rd.only_keys(node, {"basis", "unit", "products"}, "algebra");
    std::vector<std::string> labels;
    std::map<std::string, int> id;
    for (const auto& b : rd.seq(node["basis"], "basis labels")) {
        const std::string s = rd.text(b, "a basis label");
        if (!id.emplace(s, static_cast<int>(labels.size())).second) rd.fail(b, "duplicate basis label '" + s + "'");
        labels.push_back(s);
    }
    auto vec = [&](const YAML::Node& n) {
        std::vector<Entry> raw;
        for (const auto& kv : rd.map(n, "a linear combination"))
            raw.push_back({static_cast<Index>(lookup(rd, kv.first, id, "basis label")), rd.rational(kv.second)});
        return normalize(std::move(raw));
    };
    const std::size_t n = labels.size();
    std::vector<SparseVec> cols(n * n);
    if (node["products"])
        for (const auto& r : rd.seq(node["products"], "products")) {
            if (!r.IsSequence() || r.size() != 3) rd.fail(r, "a product is [x, y, {z: coefficient}]");
            const auto x = uz(lookup(rd, r[0], id, "basis label"));
            const auto y = uz(lookup(rd, r[1], id, "basis label"));
            if (!cols[x * n + y].empty()) rd.fail(r, "product " + labels[x] + "*" + labels[y] + " given twice");
            cols[x * n + y] = vec(r[2]);
        }
    FinAlgebra a(labels, Mat::from_columns(n, std::move(cols)), vec(node["unit"]));
    if (auto rep = validate(a); !rep.ok()) rd.fail(node, "algebra: " + rep.violations.front());
    return a;
}

GSheaf read_sheaf(const Reader& rd, const YAML::Node& node, const FiniteGroupoid& g, const ActionGroupoid* action,
                  const FiniteGroupoid* group, std::size_t default_dim) {
    GSheaf s;
    s.stalk_dim.assign(g.num_objects(), default_dim);
    const std::size_t na = g.num_arrows();
    std::vector<std::optional<Mat>> act(na);
    if (node) {
        rd.map(node, "sheaf");
        rd.only_keys(node, {"stalks", "act"}, "sheaf");
        if (const YAML::Node st = node["stalks"]) {
            if (st.IsScalar()) {
                s.stalk_dim.assign(g.num_objects(), uz(rd.count(st, "the stalk dimension")));
            } else {
                for (const auto& kv : rd.map(st, "stalk dimensions")) {
                    const ObjId c = g.find_object(kv.first.Scalar());
                    if (c == kNone) rd.fail(kv.first, "unknown object '" + kv.first.Scalar() + "'");
                    s.stalk_dim[uz(c)] = uz(rd.count(kv.second, "a stalk dimension"));
                }
            }
        }
        if (const YAML::Node acts = node["act"]) {
            for (const auto& kv : rd.map(acts, "arrow actions")) {
                const std::string key = kv.first.Scalar();
                std::vector<ArrowId> targets;
                if (const ArrowId a = g.find_arrow(key); a != kNone) {
                    targets.push_back(a);
                } else if (action) {
                    // A group element stands for every arrow over it.
                    const ArrowId e = group->find_arrow(key);
                    for (ArrowId a2 = 0; e != kNone && a2 < static_cast<ArrowId>(na); ++a2)
                        if (action->arrow_group[uz(a2)] == e) targets.push_back(a2);
                }
                if (targets.empty()) rd.fail(kv.first, "unknown arrow '" + key + "'");
                for (ArrowId a : targets) {
                    if (act[uz(a)]) rd.fail(kv.first, "action of " + g.arrow(a).name + " given twice");
                    act[uz(a)] = read_matrix(rd, kv.second, s.stalk(g.src(a)), s.stalk(g.tgt(a)));
                }
            }
        }
    }
    for (ObjId c = 0; c < static_cast<ObjId>(g.num_objects()); ++c)
        if (!act[uz(g.unit(c))]) act[uz(g.unit(c))] = Mat::identity(s.stalk(c));
    // Unlisted arrows follow from act(x y) = act(y) act(x). Without any
    // listed actions everything acts trivially.
    const bool any_given = node && node["act"];
    if (!any_given) {
        for (ArrowId a = 0; a < static_cast<ArrowId>(na); ++a)
            if (!act[uz(a)]) {
                if (s.stalk(g.src(a)) != s.stalk(g.tgt(a))) rd.fail(node ? node : YAML::Node(), "arrows between stalks of different dimension need explicit actions");
                act[uz(a)] = Mat::identity(s.stalk(g.src(a)));
            }
    }
    for (bool grew = true; grew;) {
        grew = false;
        for (ArrowId x = 0; x < static_cast<ArrowId>(na); ++x)
            for (ArrowId y = 0; y < static_cast<ArrowId>(na); ++y) {
                if (!act[uz(x)] || !act[uz(y)] || !g.composable(x, y)) continue;
                const ArrowId xy = g.compose(x, y);
                if (act[uz(xy)]) continue;
                act[uz(xy)] = *act[uz(y)] * *act[uz(x)];
                grew = true;
            }
    }
    for (ArrowId a = 0; a < static_cast<ArrowId>(na); ++a) {
        if (!act[uz(a)]) rd.fail(node, "the listed actions do not determine arrow " + g.arrow(a).name);
        s.act.push_back(*act[uz(a)]);
    }
    if (auto rep = validate(g, s); !rep.ok()) rd.fail(node, "sheaf: " + rep.violations.front());
    return s;
}

std::string mat_row(const Mat& m, std::size_t i) {
    std::string out;
    for (std::size_t j = 0; j < m.cols(); ++j) {
        if (j) out += ' ';
        out += m.at(i, j).str();
    }
    return out;
}

}  // namespace

ParseError::ParseError(const std::string& origin, int line, int column, const std::string& what)
    : std::runtime_error(origin + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
      origin_(origin),
      line_(line),
      column_(column),
      message_(what) {}

Scalar parse_rational(const std::string& text) {
    for (char ch : text)
        if (!(std::isdigit(static_cast<unsigned char>(ch)) || ch == '/' || ch == '-' || ch == '+' || ch == ' '))
            throw std::invalid_argument("not an exact rational: " + text);
    return Scalar::parse(text);
}

GAlgebraSheaf GroupoidDocument::algebra_sheaf() const {
    if (algebra) return GAlgebraSheaf{sheaf, std::vector<FinAlgebra>(groupoid.num_objects(), *algebra)};
    const GSheaf trivial = constant_sheaf(groupoid, 1);
    if (sheaf.stalk_dim != trivial.stalk_dim || sheaf.act != trivial.act)
        throw std::invalid_argument("a linear sheaf without an algebra block has no crossed product");
    return scalar_algebra_sheaf(groupoid);
}

GroupoidDocument parse_groupoid(const std::string& text, const std::string& origin) {
    const Reader rd(origin);
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw ParseError(origin, e.mark.line + 1, e.mark.column + 1, e.msg);
    }
    if (!root.IsMap()) rd.fail(root, "a groupoid document is a mapping");
    rd.only_keys(root, {"name", "objects", "arrows", "compose", "group", "action", "sheaf", "algebra"}, "the document");
    GroupoidDocument doc;
    if (root["name"]) doc.name = rd.text(root["name"], "a name");
    std::optional<FiniteGroupoid> group;
    std::optional<ActionGroupoid> action;
    if (root["group"]) {
        for (const char* k : {"objects", "arrows", "compose"})
            if (root[k]) rd.fail(root[k], std::string("'") + k + "' cannot be combined with the group shorthand");
        group = read_group(rd, root["group"]);
        if (root["action"]) {
            action = read_action(rd, root["action"], *group);
            doc.groupoid = action->groupoid;
        } else {
            doc.groupoid = *group;
        }
    } else {
        if (root["action"]) rd.fail(root["action"], "an action needs a group block");
        doc.groupoid = read_explicit(rd, root);
    }
    if (root["algebra"]) doc.algebra = read_algebra(rd, root["algebra"]);
    doc.sheaf = read_sheaf(rd, root["sheaf"], doc.groupoid, action ? &*action : nullptr, group ? &*group : nullptr, doc.algebra ? doc.algebra->dim() : 1);
    if (doc.algebra) {
        if (doc.sheaf.stalk_dim != std::vector<std::size_t>(doc.groupoid.num_objects(), doc.algebra->dim()))
            rd.fail(root["sheaf"], "stalks must have the algebra's dimension");
        if (auto rep = validate(doc.groupoid, doc.algebra_sheaf()); !rep.ok())
            rd.fail(root["sheaf"] ? root["sheaf"] : root["algebra"], rep.violations.front());
    }
    return doc;
}

GroupoidDocument load_groupoid(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_groupoid(buf.str(), path.string());
}

std::string emit_groupoid(const GroupoidDocument& doc) {
    const FiniteGroupoid& g = doc.groupoid;
    YAML::Emitter out;
    out << YAML::BeginMap;
    if (!doc.name.empty()) out << YAML::Key << "name" << YAML::Value << doc.name;
    out << YAML::Key << "objects" << YAML::Value << YAML::Flow << g.object_names();
    out << YAML::Key << "arrows" << YAML::Value << YAML::BeginSeq;
    for (const Arrow& a : g.arrows())
        out << YAML::Flow << std::vector<std::string>{a.name, g.object_name(a.src), g.object_name(a.tgt)};
    out << YAML::EndSeq;
    out << YAML::Key << "compose" << YAML::Value << YAML::BeginSeq;
    for (const auto& r : g.table_rows())
        out << YAML::Flow << std::vector<std::string>{g.arrow(r.g).name, g.arrow(r.h).name, g.arrow(r.gh).name};
    out << YAML::EndSeq;
    if (doc.algebra) {
        const FinAlgebra& a = *doc.algebra;
        const auto& lab = a.labels();
        out << YAML::Key << "algebra" << YAML::Value << YAML::BeginMap;
        out << YAML::Key << "basis" << YAML::Value << YAML::Flow << lab;
        auto combo = [&](const SparseVec& v) {
            out << YAML::Flow << YAML::BeginMap;
            for (const auto& e : v) out << YAML::Key << lab[e.idx] << YAML::Value << e.val.str();
            out << YAML::EndMap;
        };
        out << YAML::Key << "unit" << YAML::Value;
        combo(a.unit());
        out << YAML::Key << "products" << YAML::Value << YAML::BeginSeq;
        for (std::size_t c = 0; c < a.dim() * a.dim(); ++c) {
            if (a.product().col(c).empty()) continue;
            out << YAML::Flow << YAML::BeginSeq << lab[c / a.dim()] << lab[c % a.dim()];
            combo(a.product().col(c));
            out << YAML::EndSeq;
        }
        out << YAML::EndSeq << YAML::EndMap;
    }
    out << YAML::Key << "sheaf" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "stalks" << YAML::Value << YAML::BeginMap;
    for (ObjId c = 0; c < static_cast<ObjId>(g.num_objects()); ++c)
        out << YAML::Key << g.object_name(c) << YAML::Value << doc.sheaf.stalk(c);
    out << YAML::EndMap;
    out << YAML::Key << "act" << YAML::Value << YAML::BeginMap;
    for (ArrowId x = 0; x < static_cast<ArrowId>(g.num_arrows()); ++x) {
        if (g.is_unit(x)) continue;
        const Mat& m = doc.sheaf.action(x);
        out << YAML::Key << g.arrow(x).name << YAML::Value << YAML::BeginSeq;
        for (std::size_t i = 0; i < m.rows(); ++i) out << mat_row(m, i);
        out << YAML::EndSeq;
    }
    out << YAML::EndMap << YAML::EndMap;
    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

}  // namespace cychom

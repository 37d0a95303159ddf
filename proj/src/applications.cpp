#include "vtwalk/applications.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

namespace vtwalk {

namespace {

std::uint64_t ceil_sqrt(std::uint64_t x) {
    if (x == 0)
        return 0;
    auto r = static_cast<std::uint64_t>(std::sqrt(double(x)));
    while (r * r >= x && r > 0)
        --r;
    while (r * r < x)
        ++r;
    return r;
}

double safe_log2(double x) { return std::max(1.0, std::log2(x)); }

} // namespace

std::uint64_t VTSInstance::total_work() const {
    std::uint64_t t = 0;
    for (std::uint32_t ti : times)
        t += std::uint64_t(ti) * ti;
    return t;
}

std::uint32_t VTSInstance::t_max() const {
    std::uint32_t m = 0;
    for (std::uint32_t ti : times)
        m = std::max(m, ti);
    return m;
}

VTSInstance validate_vts(VTSInstance inst) {
    if (inst.times.empty())
        fail(ErrorKind::InvalidParams, "variable-time search needs at least one item");
    if (inst.solutions.size() != inst.times.size())
        fail(ErrorKind::InvalidParams, "solution bits must match the item count");
    for (std::uint32_t t : inst.times)
        if (t == 0)
            fail(ErrorKind::ZeroTime, "item times must be positive");
    return inst;
}

ComputationTree vts_star(const VTSInstance& inst) {
    std::vector<TreeEdge> edges;
    edges.reserve(inst.times.size());
    for (std::size_t i = 0; i < inst.times.size(); ++i)
        edges.push_back(TreeEdge{0, inst.times[i], bool(inst.solutions[i])});
    return build_tree(edges);
}

VTSInstance vts_group_steps(const VTSInstance& inst, std::uint32_t k) {
    if (k == 0)
        fail(ErrorKind::InvalidParams, "grouping factor must be positive");
    VTSInstance out = inst;
    for (std::uint32_t& t : out.times)
        t = (t + k - 1) / k;
    return out;
}

double vts_query_bound(const VTSInstance& inst, bool known_times) {
    const double T = double(inst.total_work());
    if (known_times)
        return std::sqrt(T);
    const double cutoff = double(std::min<std::uint64_t>(inst.n(), inst.t_max()));
    return std::sqrt(T * safe_log2(cutoff));
}

std::uint64_t AuxCost::eval(std::uint64_t n) const {
    switch (kind) {
    case Kind::Linear: return n;
    case Kind::Quadratic: return n * n;
    case Kind::SqrtCeil: return ceil_sqrt(n);
    case Kind::Table: {
        auto it = table.find(n);
        if (it == table.end())
            fail(ErrorKind::InvalidParams, "aux cost table has no entry for " + std::to_string(n));
        return it->second;
    }
    }
    return n;
}

const char* AuxCost::name() const {
    switch (kind) {
    case Kind::Linear: return "linear";
    case Kind::Quadratic: return "quadratic";
    case Kind::SqrtCeil: return "sqrt";
    case Kind::Table: return "table";
    }
    return "?";
}

std::uint32_t DnCSpec::levels() const {
    if (b < 2)
        fail(ErrorKind::InvalidParams, "shrink factor b must be at least 2");
    std::uint32_t d = 0;
    std::uint64_t size = n;
    while (size > 1) {
        if (size % b != 0)
            fail(ErrorKind::InvalidSize, "problem size must be a power of b");
        size /= b;
        ++d;
    }
    return d;
}

ComputationTree dnc_tree(const DnCSpec& spec) {
    if (spec.a < 1)
        fail(ErrorKind::InvalidParams, "branching factor a must be at least 1");
    const std::uint32_t depth = spec.levels();

    std::uint64_t leaves = 1;
    for (std::uint32_t i = 0; i < depth; ++i)
        leaves *= spec.a;
    if (!spec.leaf_marks.empty() && spec.leaf_marks.size() != leaves)
        fail(ErrorKind::InvalidParams, "leaf mark vector must have a^D entries");

    // Zero-time dummy root keeps the level-0 call (time T_aux(n)) a regular
    // vertex of the model.
    std::vector<TreeEdge> edges;
    std::vector<VertexId> level{0};
    std::uint64_t size = spec.n;
    for (std::uint32_t i = 0; i <= depth; ++i) {
        const auto time = static_cast<std::uint32_t>(spec.t_aux.eval(size));
        std::vector<VertexId> next;
        const std::size_t width = i == 0 ? 1 : spec.a;
        for (VertexId parent : level) {
            for (std::size_t c = 0; c < width; ++c) {
                edges.push_back(TreeEdge{parent, time, false});
                next.push_back(static_cast<VertexId>(edges.size()));
            }
        }
        level = std::move(next);
        size /= spec.b;
    }
    if (!spec.leaf_marks.empty()) {
        for (std::size_t i = 0; i < level.size(); ++i)
            edges[level[i] - 1].marked = spec.leaf_marks[i];
    }
    return build_tree(edges);
}

double dnc_recurrence(const DnCSpec& spec) {
    const std::uint32_t depth = spec.levels();
    std::vector<std::uint64_t> sizes;
    std::uint64_t size = spec.n;
    for (std::uint32_t i = 0; i <= depth; ++i) {
        sizes.push_back(size);
        size /= spec.b;
    }
    double tq = double(spec.t_aux.eval(sizes.back())); // T_Q(1) = T_aux(1)
    for (std::size_t i = sizes.size() - 1; i-- > 0;)
        tq = std::sqrt(double(spec.a)) * tq + double(spec.t_aux.eval(sizes[i]));
    return tq;
}

std::uint64_t BombSpec::total_queries() const {
    return std::accumulate(gaps.begin(), gaps.end(), std::uint64_t(0));
}

std::vector<std::uint32_t> BombSpec::step_times() const {
    std::vector<std::uint32_t> times;
    times.reserve(gaps.size());
    for (std::uint64_t d : gaps)
        times.push_back(static_cast<std::uint32_t>(ceil_sqrt(d)));
    return times;
}

ComputationTree bomb_line_tree(const BombSpec& spec) {
    if (spec.gaps.empty())
        fail(ErrorKind::InvalidParams, "bomb spec needs at least one gap");
    for (std::uint64_t d : spec.gaps)
        if (d == 0)
            fail(ErrorKind::InvalidParams, "gaps must be positive");
    std::vector<TreeEdge> edges;
    const auto times = spec.step_times();
    for (std::size_t i = 0; i < times.size(); ++i)
        edges.push_back(TreeEdge{static_cast<VertexId>(i), times[i], i + 1 == times.size()});
    return build_tree(edges);
}

BombBounds bomb_bounds(const BombSpec& spec) {
    const auto times = spec.step_times();
    const double g = double(spec.G());
    double sum = 0.0, sum_sq = 0.0, tmax = 0.0;
    for (std::uint32_t t : times) {
        sum += t;
        sum_sq += double(t) * t;
        tmax = std::max(tmax, double(t));
    }
    BombBounds bounds;
    bounds.step_sum = sum;
    bounds.cauchy_rhs = std::sqrt(sum_sq * g);
    bounds.walk_bound = std::sqrt(sum_sq * g * safe_log2(tmax));
    const double total = double(spec.total_queries());
    bounds.target_bound = std::sqrt(total * g * safe_log2(total));
    return bounds;
}

Line normalize_line(Line line) {
    if (line.a == 0 && line.b == 0)
        fail(ErrorKind::InvalidParams, "line needs a nonzero normal (a, b)");
    long long g = std::gcd(std::gcd(std::abs(line.a), std::abs(line.b)), std::abs(line.c));
    line.a /= g;
    line.b /= g;
    line.c /= g;
    const bool flip = line.a != 0 ? line.a < 0 : line.b < 0;
    if (flip) {
        line.a = -line.a;
        line.b = -line.b;
        line.c = -line.c;
    }
    return line;
}

LineSet make_line_set(std::vector<Line> lines) {
    LineSet set;
    set.lines.reserve(lines.size());
    std::set<Line> seen;
    for (Line line : lines) {
        Line norm = normalize_line(line);
        if (!seen.insert(norm).second)
            fail(ErrorKind::DuplicateLines,
                 "duplicate line " + std::to_string(norm.a) + " " + std::to_string(norm.b) +
                     " " + std::to_string(norm.c));
        set.lines.push_back(norm);
    }
    return set;
}

LineSet parse_line_set(const std::string& text) {
    std::vector<Line> lines;
    std::istringstream in(text);
    std::string row;
    std::size_t lineno = 0;
    while (std::getline(in, row)) {
        ++lineno;
        if (auto hash = row.find('#'); hash != std::string::npos)
            row.erase(hash);
        std::istringstream fields(row);
        Line line;
        if (!(fields >> line.a))
            continue; // blank or comment-only row
        if (!(fields >> line.b >> line.c))
            fail(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": expected \"a b c\"");
        long long extra;
        if (fields >> extra)
            fail(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": trailing fields");
        lines.push_back(line);
    }
    return make_line_set(std::move(lines));
}

std::string format_line_set(const LineSet& set) {
    std::ostringstream out;
    out << "# a b c  (lines a*x + b*y = c)\n";
    for (const Line& line : set.lines)
        out << line.a << " " << line.b << " " << line.c << "\n";
    return out.str();
}

namespace {

using Wide = __int128;

bool parallel(const Line& p, const Line& q) {
    return Wide(p.a) * q.b - Wide(p.b) * q.a == 0;
}

Wide det3(const Line& p, const Line& q, const Line& r) {
    return Wide(p.a) * (Wide(q.b) * r.c - Wide(r.b) * q.c) -
           Wide(p.b) * (Wide(q.a) * r.c - Wide(r.a) * q.c) +
           Wide(p.c) * (Wide(q.a) * r.b - Wide(r.a) * q.b);
}

} // namespace

bool p3l_bruteforce(const LineSet& set) {
    const auto& lines = set.lines;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        for (std::size_t j = i + 1; j < lines.size(); ++j) {
            for (std::size_t k = j + 1; k < lines.size(); ++k) {
                if (det3(lines[i], lines[j], lines[k]) != 0)
                    continue;
                // A zero determinant with all three pairwise parallel is a
                // parallel family, not a common point.
                if (!parallel(lines[i], lines[j]) || !parallel(lines[i], lines[k]) ||
                    !parallel(lines[j], lines[k]))
                    return true;
            }
        }
    }
    return false;
}

namespace {

std::uint32_t cutting_depth(std::uint64_t n, std::uint32_t r) {
    if (r < 2)
        fail(ErrorKind::InvalidParams, "cutting parameter r must be at least 2");
    if (n == 0)
        fail(ErrorKind::InvalidSize, "line count must be positive");
    if (n <= r)
        return 0; // one cutting resolves every cell directly
    std::uint32_t d = 0;
    std::uint64_t size = n;
    while (size > 1) {
        if (size % r != 0)
            fail(ErrorKind::InvalidSize, "line count must be a power of r");
        size /= r;
        ++d;
    }
    return d;
}

} // namespace

ComputationTree p3l_cost_tree(std::uint64_t n, std::uint32_t r) {
    const std::uint32_t depth = cutting_depth(n, r);
    const std::size_t fanout = std::size_t(r) * r;

    std::vector<TreeEdge> edges;
    std::vector<VertexId> level{0};
    std::uint64_t size = n;
    for (std::uint32_t i = 0; i <= depth; ++i) {
        const auto time = static_cast<std::uint32_t>(size); // ceil(n / r^i)
        std::vector<VertexId> next;
        const std::size_t width = i == 0 ? 1 : fanout;
        for (VertexId parent : level) {
            for (std::size_t c = 0; c < width; ++c) {
                edges.push_back(TreeEdge{parent, time, false});
                next.push_back(static_cast<VertexId>(edges.size()));
            }
        }
        level = std::move(next);
        size = std::max<std::uint64_t>(1, size / r);
    }
    return build_tree(edges);
}

P3LCostSummary p3l_cost_summary(std::uint64_t n, std::uint32_t r) {
    ComputationTree tree = p3l_cost_tree(n, r);
    P3LCostSummary summary;
    summary.levels = cutting_depth(n, r);
    summary.total_work = tree.total_work;
    summary.sqrt_work = std::sqrt(double(tree.total_work));
    summary.ratio_to_n = summary.sqrt_work / double(n);
    summary.level_band = std::sqrt(double(summary.levels) + 1.0);
    return summary;
}

namespace {

nlohmann::json parse_spec_doc(const std::string& text) {
    try {
        nlohmann::json doc = nlohmann::json::parse(text);
        if (!doc.is_object())
            fail(ErrorKind::ParseError, "spec must be a JSON object");
        return doc;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::ParseError, std::string("invalid JSON spec: ") + e.what());
    }
}

VTSInstance vts_from_doc(const nlohmann::json& doc) {
    VTSInstance inst;
    if (!doc.contains("times") || !doc["times"].is_array())
        fail(ErrorKind::ParseError, "vts spec needs a \"times\" array");
    for (const auto& t : doc["times"])
        inst.times.push_back(t.get<std::uint32_t>());
    if (doc.contains("solutions")) {
        for (const auto& x : doc["solutions"])
            inst.solutions.push_back(x.is_boolean() ? x.get<bool>() : x.get<int>() != 0);
    } else {
        inst.solutions.assign(inst.times.size(), false);
    }
    return validate_vts(std::move(inst));
}

AuxCost aux_from_doc(const nlohmann::json& doc) {
    AuxCost aux;
    if (!doc.contains("taux"))
        return aux; // linear default
    const auto& node = doc["taux"];
    if (node.is_string()) {
        std::string name = node.get<std::string>();
        if (name == "linear")
            aux.kind = AuxCost::Kind::Linear;
        else if (name == "quadratic")
            aux.kind = AuxCost::Kind::Quadratic;
        else if (name == "sqrt")
            aux.kind = AuxCost::Kind::SqrtCeil;
        else
            fail(ErrorKind::ParseError, "unknown taux " + name);
    } else if (node.is_object() && node.contains("table")) {
        aux.kind = AuxCost::Kind::Table;
        for (const auto& entry : node["table"])
            aux.table[entry.at(0).get<std::uint64_t>()] = entry.at(1).get<std::uint64_t>();
    } else {
        fail(ErrorKind::ParseError, "taux must be a name or {\"table\": [[n, cost], ...]}");
    }
    return aux;
}

DnCSpec dnc_from_doc(const nlohmann::json& doc) {
    DnCSpec spec;
    spec.a = doc.value("a", 2u);
    spec.b = doc.value("b", 2u);
    spec.n = doc.value("n", std::uint64_t(1));
    spec.t_aux = aux_from_doc(doc);
    if (doc.contains("leaf_marks"))
        for (const auto& x : doc["leaf_marks"])
            spec.leaf_marks.push_back(x.is_boolean() ? x.get<bool>() : x.get<int>() != 0);
    return spec;
}

BombSpec bomb_from_doc(const nlohmann::json& doc) {
    BombSpec spec;
    if (!doc.contains("gaps") || !doc["gaps"].is_array())
        fail(ErrorKind::ParseError, "bomb spec needs a \"gaps\" array");
    for (const auto& d : doc["gaps"])
        spec.gaps.push_back(d.get<std::uint64_t>());
    return spec;
}

} // namespace

VTSInstance vts_from_json(const std::string& text) {
    return vts_from_doc(parse_spec_doc(text));
}

DnCSpec dnc_from_json(const std::string& text) {
    return dnc_from_doc(parse_spec_doc(text));
}

BombSpec bomb_from_json(const std::string& text) {
    return bomb_from_doc(parse_spec_doc(text));
}

ComputationTree tree_from_spec_json(const std::string& text) {
    nlohmann::json doc = parse_spec_doc(text);
    const std::string type = doc.value("type", "");
    if (type == "vts")
        return vts_star(vts_from_doc(doc));
    if (type == "dnc")
        return dnc_tree(dnc_from_doc(doc));
    if (type == "bomb")
        return bomb_line_tree(bomb_from_doc(doc));
    fail(ErrorKind::ParseError, "spec type must be vts, dnc or bomb");
}

} // namespace vtwalk

#include "vtwalk/expansion.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace vtwalk {

const char* scheme_name(WeightScheme scheme) {
    switch (scheme) {
    case WeightScheme::KnownTimes: return "known";
    case WeightScheme::ExponentialBlocks: return "expblocks";
    case WeightScheme::LinearRamp: return "linear";
    case WeightScheme::Unit: return "unit";
    }
    return "?";
}

std::optional<WeightScheme> scheme_from_name(const std::string& name) {
    if (name == "known") return WeightScheme::KnownTimes;
    if (name == "expblocks") return WeightScheme::ExponentialBlocks;
    if (name == "linear") return WeightScheme::LinearRamp;
    if (name == "unit") return WeightScheme::Unit;
    return std::nullopt;
}

std::uint32_t ExpandedTree::last_step_of(VertexId source_vertex) const {
    for (std::size_t i = vertices.size(); i-- > 0;) {
        if (vertices[i].source == source_vertex && !vertices[i].is_root())
            return vertices[i].id;
    }
    fail(ErrorKind::UnknownVertex,
         "no path vertices for source vertex " + std::to_string(source_vertex));
}

namespace {

double step_weight(WeightScheme scheme, std::uint32_t t_v, std::uint32_t step) {
    switch (scheme) {
    case WeightScheme::KnownTimes:
    case WeightScheme::ExponentialBlocks: // expanded from the padded tree
        return static_cast<double>(t_v);
    case WeightScheme::LinearRamp:
        return static_cast<double>(step);
    case WeightScheme::Unit:
        return 1.0;
    }
    return 1.0;
}

ExpandedTree expand_impl(const ComputationTree& tree, WeightScheme scheme,
                         WeightScheme label) {
    if (tree.n == 0)
        fail(ErrorKind::EmptyTree, "cannot expand a root-only tree");

    ExpandedTree out;
    out.source = tree;
    out.scheme = label;
    out.root_weight = 1.0 / tree.depth;

    out.vertices.push_back(ExpandedVertex{0, 0, 0, std::nullopt, out.root_weight, 0, false});

    // last expanded vertex per source vertex; root maps to itself
    std::vector<std::uint32_t> tail(tree.size(), 0);

    for (std::size_t v = 1; v < tree.size(); ++v) {
        const CompVertex& src = tree.vertices[v];
        std::uint32_t parent = tail[*src.parent];
        for (std::uint32_t t = 1; t <= src.time; ++t) {
            ExpandedVertex x;
            x.id = static_cast<std::uint32_t>(out.vertices.size());
            x.source = src.id;
            x.step = t;
            x.parent = parent;
            x.weight = step_weight(scheme, src.time, t);
            x.level = out.vertices[parent].level + 1;
            x.marked = src.marked && t == src.time;
            out.weight_sum += x.weight;
            out.depth = std::max(out.depth, x.level);
            out.vertices.push_back(x);
            parent = x.id;
        }
        tail[v] = parent;
    }

    out.children.assign(out.vertices.size(), {});
    for (const ExpandedVertex& x : out.vertices) {
        if (x.parent.has_value())
            out.children[*x.parent].push_back(x.id);
    }
    return out;
}

} // namespace

ExpandedTree expand(const ComputationTree& tree, WeightScheme scheme) {
    if (scheme == WeightScheme::ExponentialBlocks) {
        // Option 2 shares the known-times code path: pad into power-of-two
        // blocks, then weigh each block vertex by its block length.
        return expand_impl(pad_unknown(tree), WeightScheme::KnownTimes,
                           WeightScheme::ExponentialBlocks);
    }
    return expand_impl(tree, scheme, scheme);
}

ComputationTree pad_unknown(const ComputationTree& tree) {
    std::vector<CompVertex> verts;
    verts.push_back(CompVertex{0, std::nullopt, 0, false});

    std::vector<VertexId> tail(tree.size(), 0);
    for (std::size_t v = 1; v < tree.size(); ++v) {
        const CompVertex& src = tree.vertices[v];
        VertexId parent = tail[*src.parent];
        std::uint64_t covered = 0;
        for (std::uint32_t block = 1;; block *= 2) {
            covered += block;
            CompVertex x;
            x.id = static_cast<VertexId>(verts.size());
            x.parent = parent;
            x.time = block;
            x.marked = false;
            verts.push_back(x);
            parent = x.id;
            if (covered >= src.time)
                break;
        }
        verts.back().marked = src.marked;
        tail[v] = parent;
    }
    return assemble_tree(std::move(verts));
}

namespace {

// Root-to-leaf path ids, root excluded.
std::vector<std::uint32_t> path_from_root(const ExpandedTree& expanded, std::uint32_t leaf) {
    if (leaf >= expanded.size())
        fail(ErrorKind::UnknownVertex, "expanded vertex " + std::to_string(leaf) + " out of range");
    std::vector<std::uint32_t> path;
    std::uint32_t x = leaf;
    while (!expanded.vertices[x].is_root()) {
        path.push_back(x);
        x = *expanded.vertices[x].parent;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

} // namespace

double path_resistance(const ExpandedTree& expanded, std::uint32_t leaf) {
    double r = 0.0;
    for (std::uint32_t x : path_from_root(expanded, leaf))
        r += 1.0 / expanded.vertices[x].weight;
    return r;
}

double total_path_weight(const ExpandedTree& expanded, std::uint32_t leaf) {
    double w = 0.0;
    for (std::uint32_t x : path_from_root(expanded, leaf))
        w += expanded.vertices[x].weight;
    return w;
}

std::string expanded_to_json(const ExpandedTree& expanded, int indent) {
    nlohmann::json verts = nlohmann::json::array();
    for (const ExpandedVertex& x : expanded.vertices) {
        nlohmann::json jx;
        jx["id"] = x.id;
        if (x.parent.has_value())
            jx["parent"] = *x.parent;
        else
            jx["parent"] = nullptr;
        jx["source"] = x.source;
        jx["step"] = x.step;
        jx["weight"] = x.weight;
        jx["level"] = x.level;
        jx["marked"] = x.marked;
        verts.push_back(std::move(jx));
    }
    nlohmann::json doc;
    doc["scheme"] = scheme_name(expanded.scheme);
    doc["root_weight"] = expanded.root_weight;
    doc["depth"] = expanded.depth;
    doc["vertices"] = std::move(verts);
    return doc.dump(indent) + "\n";
}

} // namespace vtwalk

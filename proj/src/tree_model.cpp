#include "vtwalk/tree_model.hpp"

#include <algorithm>

#include <json.hpp>

namespace vtwalk {

namespace {

void validate_and_derive(ComputationTree& tree) {
    const auto& verts = tree.vertices;
    if (verts.empty() || verts[0].id != 0 || verts[0].parent.has_value())
        fail(ErrorKind::CycleOrOrphan, "tree must have a parentless root with id 0");
    if (verts[0].time != 0)
        fail(ErrorKind::ZeroTime, "root must have time 0");

    tree.children.assign(verts.size(), {});
    for (std::size_t i = 1; i < verts.size(); ++i) {
        const CompVertex& v = verts[i];
        if (v.id != i)
            fail(ErrorKind::CycleOrOrphan, "vertex ids must be dense and ascending");
        if (!v.parent.has_value() || *v.parent >= v.id)
            fail(ErrorKind::CycleOrOrphan,
                 "vertex " + std::to_string(v.id) + " needs a parent with a smaller id");
        if (v.time == 0)
            fail(ErrorKind::ZeroTime, "non-root vertex " + std::to_string(v.id) + " has time 0");
        tree.children[*v.parent].push_back(v.id);
    }

    for (const CompVertex& v : verts) {
        if (v.marked && !tree.children[v.id].empty())
            fail(ErrorKind::MarkedInternal,
                 "marked vertex " + std::to_string(v.id) + " is not a leaf");
    }

    tree.n = verts.size() - 1;
    tree.depth = 0;
    tree.total_work = 0;
    tree.t_max = 0;
    std::vector<std::uint32_t> level(verts.size(), 0);
    for (std::size_t i = 1; i < verts.size(); ++i) {
        level[i] = level[*verts[i].parent] + 1;
        tree.depth = std::max(tree.depth, level[i]);
        tree.total_work += std::uint64_t(verts[i].time) * verts[i].time;
        tree.t_max = std::max(tree.t_max, verts[i].time);
    }
}

} // namespace

ComputationTree build_tree(const std::vector<TreeEdge>& edges) {
    std::vector<CompVertex> verts;
    verts.reserve(edges.size() + 1);
    verts.push_back(CompVertex{0, std::nullopt, 0, false});
    for (std::size_t i = 0; i < edges.size(); ++i) {
        verts.push_back(CompVertex{static_cast<VertexId>(i + 1), edges[i].parent,
                                   edges[i].time, edges[i].marked});
    }
    return assemble_tree(std::move(verts));
}

ComputationTree assemble_tree(std::vector<CompVertex> vertices) {
    ComputationTree tree;
    tree.vertices = std::move(vertices);
    validate_and_derive(tree);
    return tree;
}

std::uint32_t degree(const ComputationTree& tree, VertexId v) {
    if (v >= tree.vertices.size())
        fail(ErrorKind::UnknownVertex, "vertex " + std::to_string(v) + " out of range");
    return static_cast<std::uint32_t>(tree.children[v].size());
}

bool brute_force_has_marked(const ComputationTree& tree) {
    std::vector<VertexId> stack{0};
    while (!stack.empty()) {
        VertexId v = stack.back();
        stack.pop_back();
        if (tree.vertices[v].marked)
            return true;
        for (VertexId c : tree.children[v])
            stack.push_back(c);
    }
    return false;
}

std::uint64_t classical_cost(const ComputationTree& tree) {
    std::uint64_t sum = 0;
    for (const CompVertex& v : tree.vertices)
        sum += v.time;
    return sum;
}

std::string tree_to_json(const ComputationTree& tree, int indent) {
    nlohmann::json verts = nlohmann::json::array();
    for (const CompVertex& v : tree.vertices) {
        nlohmann::json jv;
        jv["id"] = v.id;
        if (v.parent.has_value())
            jv["parent"] = *v.parent;
        else
            jv["parent"] = nullptr;
        jv["t"] = v.time;
        jv["marked"] = v.marked;
        verts.push_back(std::move(jv));
    }
    nlohmann::json doc;
    doc["vertices"] = std::move(verts);
    return doc.dump(indent) + "\n";
}

ComputationTree tree_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::ParseError, std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("vertices") || !doc["vertices"].is_array())
        fail(ErrorKind::ParseError, "expected an object with a \"vertices\" array");

    std::vector<CompVertex> verts;
    for (const auto& jv : doc["vertices"]) {
        if (!jv.is_object() || !jv.contains("id") || !jv.contains("parent") || !jv.contains("t"))
            fail(ErrorKind::ParseError, "vertex entries need id, parent and t fields");
        CompVertex v;
        v.id = jv["id"].get<VertexId>();
        if (!jv["parent"].is_null())
            v.parent = jv["parent"].get<VertexId>();
        v.time = jv["t"].get<std::uint32_t>();
        v.marked = jv.value("marked", false);
        verts.push_back(v);
    }
    return assemble_tree(std::move(verts));
}

} // namespace vtwalk

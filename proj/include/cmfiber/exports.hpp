#ifndef CMFIBER_EXPORTS_HPP
#define CMFIBER_EXPORTS_HPP

#include <sstream>

#include <nlohmann/json.hpp>

#include "cmfiber/volcano.hpp"

namespace cmfiber {

namespace export_detail {

// Deterministic vertex naming: position within the form-sorted order of
// its level.
struct Namer {
    const Volcano& V;
    std::vector<int> pos; // vertex id -> rank within level

    explicit Namer(const Volcano& v) : V(v), pos(v.vertices.size())
    {
        for (auto [b, e] : V.level_range)
            for (std::int32_t i = b; i < e; ++i)
                pos[V.sorted_ids[i]] = i - b;
    }
    std::string operator()(std::int32_t id) const
    {
        return "L" + std::to_string(V.level_of(id)) + "_" + std::to_string(pos[id]);
    }
};

struct EdgeRec {
    std::string kind; // ascending edges are recorded from the deeper side
    std::int32_t from, to;
    const char* label; // "p", "pbar" or nullptr
    bool real;
};

inline std::vector<EdgeRec> undirected_edges(const Volcano& V)
{
    std::vector<EdgeRec> out;
    for (int L = 0; L < static_cast<int>(V.level_range.size()); ++L) {
        auto [b, e] = V.level_range[L];
        for (std::int32_t i = b; i < e; ++i) {
            std::int32_t id = V.sorted_ids[i];
            const auto& vx = V.vertices[id];
            for (std::int32_t c = vx.child_begin; c < vx.child_end; ++c)
                out.push_back({"descending", id, c, nullptr, V.vertices[c].real});
            if (L == 0) {
                std::int32_t tp = V.hor_target[id][0];
                std::int32_t tq = V.hor_target[id][1];
                bool ram = V.chi == 0;
                if (tp >= 0 && (id < tp || (id == tp && !ram) || (id <= tp && ram)))
                    out.push_back({"horizontal", id, tp, ram ? nullptr : "p",
                                   ram && V.vertices[id].real});
                if (tq >= 0 && id <= tq)
                    out.push_back({"horizontal", id, tq, "pbar", false});
            }
        }
    }
    return out;
}

} // namespace export_detail

enum class GraphFormat { Dot, Json };

// Graphviz DOT: levels as ranks, real vertices/edges solid, complex ones
// dashed, split-edge labels p/pbar.
inline std::string export_dot(const Volcano& V)
{
    export_detail::Namer name(V);
    std::ostringstream os;
    os << "graph volcano {\n";
    os << "  // Delta_K=" << V.params.delta_k << " ell=" << V.params.ell
       << " f0=" << V.params.f0 << " depth=" << V.params.depth << "\n";
    os << "  node [shape=circle];\n";
    for (int L = 0; L < static_cast<int>(V.level_range.size()); ++L) {
        auto [b, e] = V.level_range[L];
        os << "  { rank=same;";
        for (std::int32_t i = b; i < e; ++i) {
            std::int32_t id = V.sorted_ids[i];
            os << " " << name(id);
        }
        os << " }\n";
        for (std::int32_t i = b; i < e; ++i) {
            std::int32_t id = V.sorted_ids[i];
            const auto& f = V.vertices[id].form;
            os << "  " << name(id) << " [label=\"" << f.str() << "\" style="
               << (V.vertices[id].real ? "solid" : "dashed") << "];\n";
        }
    }
    for (const auto& er : export_detail::undirected_edges(V)) {
        os << "  " << name(er.from) << " -- " << name(er.to) << " [style="
           << (er.real ? "solid" : "dashed");
        if (er.label)
            os << " label=\"" << er.label << "\"";
        if (er.kind == "horizontal")
            os << " constraint=false";
        os << "];\n";
    }
    os << "}\n";
    return os.str();
}

inline nlohmann::json export_json(const Volcano& V)
{
    export_detail::Namer name(V);
    nlohmann::json j;
    j["delta_k"] = V.params.delta_k;
    j["ell"] = V.params.ell;
    j["f0"] = V.params.f0;
    j["depth"] = V.params.depth;
    j["levels"] = nlohmann::json::array();
    for (int L = 0; L < static_cast<int>(V.level_range.size()); ++L) {
        auto [b, e] = V.level_range[L];
        nlohmann::json lv;
        lv["level"] = L;
        lv["discriminant"] = V.level_disc(L);
        lv["vertices"] = nlohmann::json::array();
        for (std::int32_t i = b; i < e; ++i) {
            std::int32_t id = V.sorted_ids[i];
            const auto& f = V.vertices[id].form;
            lv["vertices"].push_back({{"a", checked_i64(f.a)},
                                      {"b", checked_i64(f.b)},
                                      {"c", checked_i64(f.c)},
                                      {"real", V.vertices[id].real}});
        }
        j["levels"].push_back(lv);
    }
    j["edges"] = nlohmann::json::array();
    for (const auto& er : export_detail::undirected_edges(V)) {
        nlohmann::json e;
        e["kind"] = er.kind;
        e["from"] = {V.level_of(er.from), name.pos[er.from]};
        e["to"] = {V.level_of(er.to), name.pos[er.to]};
        e["label"] = er.label ? nlohmann::json(er.label) : nlohmann::json(nullptr);
        e["real"] = er.real;
        j["edges"].push_back(e);
    }
    return j;
}

inline std::string export_graph(const Volcano& V, GraphFormat fmt)
{
    if (fmt == GraphFormat::Dot)
        return export_dot(V);
    return export_json(V).dump(2) + "\n";
}

// Rebuilds the volcano named by an exported JSON document and checks that
// it reproduces the document exactly (serialization identity).
inline Volcano parse_volcano_json(const nlohmann::json& j)
{
    VolcanoParams p{j.at("delta_k").get<i64>(), j.at("ell").get<i64>(), j.at("f0").get<i64>(),
                    j.at("depth").get<int>()};
    Volcano V = build_volcano(p);
    if (export_json(V) != j)
        throw internal_error("volcano JSON round-trip mismatch");
    return V;
}

} // namespace cmfiber

#endif

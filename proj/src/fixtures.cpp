#include "sinkx/fixtures.hpp"

#include "sinkx/error.hpp"

namespace sinkx {

namespace {

Graph make_g_intro() {
    Graph g;
    for (const char* v : {"w1", "w2", "w3"}) g.add_vertex(v);
    g.add_edge("a", "w1", "w1");
    g.add_edge("b", "w1", "w2");
    g.add_edge("c", "w2", "w3");
    g.add_edge("d", "w3", "w2");
    return g;
}

SinkExtension attach_sink(const Graph& base, const VertexId& sink,
                          const std::vector<std::pair<EdgeId, VertexId>>& edges) {
    Graph g = base;
    std::set<VertexId> bv;
    std::set<EdgeId> be;
    for (const auto& v : base.vertices()) bv.insert(v);
    for (const auto& e : base.edge_ids()) be.insert(e);
    g.add_vertex(sink);
    for (const auto& [id, src] : edges) g.add_edge(id, src, sink);
    return validate_extension(std::move(g), std::move(bv), std::move(be), {sink});
}

Graph make_g_ex26() {
    Graph g;
    g.add_vertex("w1");
    g.add_vertex("w2");
    g.add_edge("a1", "w1", "w1");
    g.add_edge("a2", "w1", "w1");
    g.add_edge("b", "w1", "w2");
    g.add_edge("c1", "w2", "w2");
    g.add_edge("c2", "w2", "w2");
    return g;
}

Graph make_g_o3() {
    Graph g;
    g.add_vertex("u");
    g.add_edge("l1", "u", "u");
    g.add_edge("l2", "u", "u");
    g.add_edge("l3", "u", "u");
    return g;
}

SinkExtension make_z_fig() {
    Graph g;
    for (const char* v : {"v", "w", "z"}) g.add_vertex(v);
    g.add_edge("h", "z", "z");
    g.add_edge("f", "z", "w");
    g.add_edge("g", "w", "z");
    g.add_edge("e", "z", "v");
    return validate_extension(std::move(g), {"w", "z"}, {"f", "g", "h"}, {"v"});
}

std::map<std::string, std::string> build() {
    std::map<std::string, std::string> files;

    Graph g_intro = make_g_intro();
    files["G_intro.graph"] = serialize(g_intro);
    files["E1_intro.ext"] = serialize(attach_sink(
        g_intro, "v1", {{"f1", "w1"}, {"f2", "w2"}, {"f3", "w3"}, {"f4", "w3"}}));
    files["E2_intro.ext"] = serialize(attach_sink(
        g_intro, "v2", {{"g1", "w1"}, {"g2", "w3"}, {"g3", "w3"}, {"g4", "w3"}}));
    files["F_intro.ext"] = serialize(attach_sink(
        g_intro, "v0", {{"h1", "w1"}, {"h2", "w1"}, {"h3", "w3"}, {"h4", "w3"}, {"h5", "w3"}}));

    SinkExtension z_fig = make_z_fig();
    files["Z_fig.ext"] = serialize(z_fig);
    files["Z_fig_split.ext"] = serialize(outsplit(z_fig, "e").first);

    Graph g_ex26 = make_g_ex26();
    files["G_ex26.graph"] = serialize(g_ex26);
    files["E1_ex26.ext"] = serialize(attach_sink(g_ex26, "v1", {{"d", "w1"}}));
    files["E2_ex26.ext"] = serialize(attach_sink(g_ex26, "v2", {{"d", "w2"}}));

    Graph g_o3 = make_g_o3();
    files["G_o3.graph"] = serialize(g_o3);
    files["o3_w1.ext"] = serialize(attach_sink(g_o3, "s", {{"t1", "u"}}));
    files["o3_w2.ext"] = serialize(attach_sink(g_o3, "s", {{"t1", "u"}, {"t2", "u"}}));

    return files;
}

}  // namespace

const std::map<std::string, std::string>& fixture_files() {
    static const std::map<std::string, std::string> files = build();
    return files;
}

Graph fixture_graph(const std::string& name) {
    const auto& files = fixture_files();
    auto it = files.find(name + ".graph");
    if (it == files.end()) throw Error("no graph fixture named '" + name + "'");
    return parse_graph(it->second);
}

SinkExtension fixture_extension(const std::string& name) {
    const auto& files = fixture_files();
    auto it = files.find(name + ".ext");
    if (it == files.end()) throw Error("no extension fixture named '" + name + "'");
    return parse_extension(it->second);
}

}  // namespace sinkx

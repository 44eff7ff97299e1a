#include "sinkx/extension.hpp"

#include <algorithm>
#include <sstream>

namespace sinkx {

Graph SinkExtension::base_graph() const {
    Graph g;
    for (const auto& v : base_vertices) g.add_vertex(v);
    for (const auto& e : graph.edges())
        if (base_edges.count(e.id)) g.add_edge(e.id, e.src, e.dst);
    return g;
}

std::set<VertexId> SinkExtension::ext_vertices() const {
    std::set<VertexId> h;
    for (const auto& v : graph.vertices())
        if (!base_vertices.count(v)) h.insert(v);
    return h;
}

std::string ClauseViolation::to_string() const {
    return "CLAUSE(" + std::to_string(clause) + "): " + witness;
}

namespace {

std::string flatten(const std::vector<ClauseViolation>& violations) {
    std::string out = "invalid sink extension";
    for (const auto& v : violations) out += "\n  " + v.to_string();
    return out;
}

}  // namespace

ValidationError::ValidationError(std::vector<ClauseViolation> violations)
    : Error(flatten(violations)), violations_(std::move(violations)) {}

namespace {

// A directed cycle with all vertices inside `verts`, if one exists.
std::optional<std::vector<VertexId>> find_cycle_within(const Graph& g,
                                                       const std::set<VertexId>& verts) {
    enum class Color { white, gray, black };
    std::map<VertexId, Color> color;
    for (const auto& v : verts) color[v] = Color::white;
    std::vector<VertexId> stack;

    // iterative DFS keeping the gray path on an explicit stack
    struct Frame {
        VertexId v;
        std::vector<Edge> out;
        std::size_t next = 0;
    };
    for (const auto& start : verts) {
        if (color[start] != Color::white) continue;
        std::vector<Frame> frames;
        frames.push_back({start, g.out_edges(start), 0});
        color[start] = Color::gray;
        stack.push_back(start);
        while (!frames.empty()) {
            Frame& f = frames.back();
            bool descended = false;
            while (f.next < f.out.size()) {
                const Edge& e = f.out[f.next++];
                if (!verts.count(e.dst)) continue;
                if (color[e.dst] == Color::gray) {
                    auto it = std::find(stack.begin(), stack.end(), e.dst);
                    return std::vector<VertexId>(it, stack.end());
                }
                if (color[e.dst] == Color::white) {
                    color[e.dst] = Color::gray;
                    stack.push_back(e.dst);
                    frames.push_back({e.dst, g.out_edges(e.dst), 0});
                    descended = true;
                    break;
                }
            }
            if (!descended) {
                color[f.v] = Color::black;
                stack.pop_back();
                frames.pop_back();
            }
        }
    }
    return std::nullopt;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (const auto& p : parts) {
        if (!out.empty()) out += sep;
        out += p;
    }
    return out;
}

}  // namespace

std::vector<ClauseViolation> extension_violations(const Graph& graph,
                                                  const std::set<VertexId>& base_vertices,
                                                  const std::set<EdgeId>& base_edges,
                                                  const std::vector<VertexId>& sinks) {
    for (const auto& v : base_vertices)
        if (!graph.has_vertex(v)) throw Error("base vertex '" + v + "' is not in the graph");
    for (const auto& e : base_edges)
        if (!graph.has_edge(e)) throw Error("base edge '" + e + "' is not in the graph");
    for (const auto& s : sinks)
        if (!graph.has_vertex(s)) throw Error("sink '" + s + "' is not in the graph");

    std::vector<ClauseViolation> out;
    std::set<VertexId> h;
    for (const auto& v : graph.vertices())
        if (!base_vertices.count(v)) h.insert(v);

    // structural: the base must itself be a graph, sinks must live in H
    for (const auto& id : base_edges) {
        Edge e = graph.edge(id);
        if (!base_vertices.count(e.src) || !base_vertices.count(e.dst))
            out.push_back({0, "base edge " + id + " has an endpoint outside the base"});
    }
    std::set<VertexId> listed;
    for (const auto& s : sinks) {
        if (base_vertices.count(s)) out.push_back({0, "listed sink " + s + " is a base vertex"});
        if (!listed.insert(s).second) out.push_back({0, "sink " + s + " is listed twice"});
    }

    // (1) H has no sources, and its sinks in E are exactly the listed sinks
    for (const auto& v : h) {
        if (graph.in_degree(v) == 0)
            out.push_back({1, "vertex " + v + " in H receives no edge"});
        bool is_sink = graph.out_degree(v) == 0;
        bool is_listed = listed.count(v) != 0;
        if (is_sink && !is_listed) out.push_back({1, "vertex " + v + " is an unlisted sink in H"});
        if (!is_sink && is_listed) {
            out.push_back({1, "listed sink " + v + " emits edge " + graph.out_edges(v)[0].id});
        }
    }

    // (2) no cycle of E lies inside H
    if (auto cycle = find_cycle_within(graph, h)) {
        std::vector<std::string> names(cycle->begin(), cycle->end());
        out.push_back({2, "cycle inside H: " + join(names, " -> ")});
    }

    // (3) every edge outside the base has range in H
    for (const auto& e : graph.edges()) {
        if (base_edges.count(e.id)) continue;
        if (!h.count(e.dst))
            out.push_back({3, "edge " + e.id + " is outside the base but ends at base vertex " +
                                  e.dst});
    }

    // (4) sinks of the base stay sinks
    for (const auto& w : base_vertices) {
        bool base_sink = true;
        for (const auto& e : graph.out_edges(w))
            if (base_edges.count(e.id)) {
                base_sink = false;
                break;
            }
        if (!base_sink) continue;
        for (const auto& e : graph.out_edges(w)) {
            out.push_back({4, "base sink " + w + " emits edge " + e.id});
            break;
        }
    }
    return out;
}

SinkExtension validate_extension(Graph graph, std::set<VertexId> base_vertices,
                                 std::set<EdgeId> base_edges, std::vector<VertexId> sinks) {
    auto violations = extension_violations(graph, base_vertices, base_edges, sinks);
    if (!violations.empty()) throw ValidationError(std::move(violations));
    return SinkExtension{std::move(graph), std::move(base_vertices), std::move(base_edges),
                         std::move(sinks)};
}

SinkExtension as_zero_sink_extension(Graph g) {
    std::set<VertexId> vs;
    std::set<EdgeId> es;
    for (const auto& v : g.vertices()) vs.insert(v);
    for (const auto& e : g.edge_ids()) es.insert(e);
    return validate_extension(std::move(g), std::move(vs), std::move(es), {});
}

bool is_simple(const SinkExtension& ext) {
    std::set<VertexId> listed(ext.sinks.begin(), ext.sinks.end());
    return ext.ext_vertices() == listed;
}

std::set<VertexId> saturation(const SinkExtension& ext, const std::set<VertexId>& x) {
    for (const auto& v : x)
        if (!ext.graph.has_vertex(v)) throw Error("unknown vertex '" + v + "'");
    for (const auto& v : x)
        for (const auto& e : ext.graph.out_edges(v))
            if (!x.count(e.dst))
                throw Error("set is not hereditary: edge " + e.id + " leaves it at " + e.dst);

    std::set<VertexId> s = x;
    bool grew = true;
    while (grew) {
        grew = false;
        for (const auto& w : ext.graph.vertices()) {
            if (s.count(w)) continue;
            auto out = ext.graph.out_edges(w);
            if (out.empty()) continue;  // sinks are never absorbed
            bool all_in = std::all_of(out.begin(), out.end(),
                                      [&](const Edge& e) { return s.count(e.dst) != 0; });
            if (all_in) {
                s.insert(w);
                grew = true;
            }
        }
    }
    return s;
}

Boundary boundary(const SinkExtension& ext) {
    Boundary b;
    for (const auto& e : ext.graph.edges()) {
        if (ext.base_vertices.count(e.src) && !ext.base_vertices.count(e.dst)) {
            b.edges.insert(e.id);
            b.vertices.insert(e.src);
        }
    }
    return b;
}

namespace {

void collect_z_paths(const SinkExtension& ext, const VertexId& cur, const VertexId& target,
                     Path& prefix, std::vector<Path>& out) {
    if (cur == target) {
        out.push_back(prefix);
        return;
    }
    for (const auto& e : ext.graph.out_edges(cur)) {
        prefix = prefix + Path(cur, {e.id});
        collect_z_paths(ext, e.dst, target, prefix, out);
        Path trimmed(prefix.anchor(),
                     std::vector<EdgeId>(prefix.edges().begin(), prefix.edges().end() - 1));
        prefix = trimmed;
    }
}

}  // namespace

std::vector<Path> z_paths(const SinkExtension& ext, const VertexId& w, std::size_t sink_index) {
    if (!ext.base_vertices.count(w)) throw Error("'" + w + "' is not a base vertex");
    if (sink_index < 1 || sink_index > ext.sinks.size())
        throw Error("sink index " + std::to_string(sink_index) + " out of range");
    const VertexId& target = ext.sinks[sink_index - 1];

    std::vector<Path> out;
    for (const auto& e : ext.graph.out_edges(w)) {
        if (ext.base_vertices.count(e.dst)) continue;  // must leave the base immediately
        Path prefix(w, {e.id});
        collect_z_paths(ext, e.dst, target, prefix, out);
    }
    return out;
}

std::map<VertexId, Int> wojciech_vector(const SinkExtension& ext, std::size_t sink_index) {
    std::map<VertexId, Int> w;
    for (const auto& v : boundary(ext).vertices) {
        auto paths = z_paths(ext, v, sink_index);
        if (!paths.empty()) w[v] = Int(paths.size());
    }
    return w;
}

IntVector wojciech_dense(const SinkExtension& ext, std::size_t sink_index) {
    return wojciech_dense(ext, sink_index, ext.base_graph().vertices());
}

IntVector wojciech_dense(const SinkExtension& ext, std::size_t sink_index, const Labels& labels) {
    IntVector out(labels);
    for (const auto& [v, c] : wojciech_vector(ext, sink_index)) out.at(v) = c;
    return out;
}

bool is_tree_extension(const SinkExtension& ext) {
    if (ext.sink_count() != 1) throw Error("tree extensions have exactly one sink");
    const VertexId& sink = ext.sinks[0];
    // count paths to the sink inside H, saturating at 2; H is acyclic
    std::map<VertexId, int> memo;
    auto count = [&](auto&& self, const VertexId& v) -> int {
        if (v == sink) return 1;
        auto it = memo.find(v);
        if (it != memo.end()) return it->second;
        int total = 0;
        for (const auto& e : ext.graph.out_edges(v)) {
            total += self(self, e.dst);
            if (total >= 2) break;
        }
        memo[v] = std::min(total, 2);
        return memo[v];
    };
    for (const auto& v : ext.ext_vertices())
        if (count(count, v) != 1) return false;
    return true;
}

Move Move::outsplit(EdgeId e) {
    Move m;
    m.kind = Kind::outsplit;
    m.edge = std::move(e);
    return m;
}

Move Move::outsplit_along_path(EdgeId e, Path along) {
    Move m;
    m.kind = Kind::outsplit_along_path;
    m.edge = std::move(e);
    m.along = std::move(along);
    return m;
}

Move Move::simplify() {
    Move m;
    m.kind = Kind::simplify;
    return m;
}

Move Move::star(std::map<VertexId, Int> m_) {
    Move m;
    m.kind = Kind::star;
    m.star_m = std::move(m_);
    return m;
}

std::string Move::to_string() const {
    switch (kind) {
        case Kind::outsplit:
            return "outsplit " + edge;
        case Kind::outsplit_along_path: {
            std::string s = "outsplit-along " + edge;
            s += " @" + along.anchor();
            for (const auto& e : along.edges()) s += " " + e;
            return s;
        }
        case Kind::simplify:
            return "simplify";
        case Kind::star: {
            std::string s = "star";
            for (const auto& [v, c] : star_m) s += " " + v + " " + c.get_str();
            return s;
        }
    }
    return "?";
}

namespace {

VertexId fresh_vertex(const Graph& g, const VertexId& base_name) {
    for (std::size_t k = 1;; ++k) {
        VertexId candidate = base_name + "'" + std::to_string(k);
        if (!g.has_vertex(candidate)) return candidate;
    }
}

EdgeId fresh_edge(const Graph& g, EdgeId candidate) {
    while (g.has_edge(candidate)) candidate += "'";
    return candidate;
}

void assert_valid(const SinkExtension& ext, const char* op) {
    auto violations =
        extension_violations(ext.graph, ext.base_vertices, ext.base_edges, ext.sinks);
    if (!violations.empty())
        throw Error(std::string(op) + " produced an invalid extension: " +
                    violations.front().to_string());
}

struct OutsplitDetail {
    SinkExtension result;
    VertexId new_vertex;
    EdgeId new_edge;                  // carries the split edge out of v'
    std::map<EdgeId, EdgeId> copies;  // f -> f' for edges into s(e)
};

OutsplitDetail outsplit_detail(const SinkExtension& ext, const EdgeId& e) {
    if (!ext.graph.has_edge(e)) throw Error("unknown edge '" + e + "'");
    Edge split = ext.graph.edge(e);
    Boundary b = boundary(ext);
    if (!b.edges.count(e)) throw Error("edge '" + e + "' is not a boundary edge");
    bool base_source = true;
    for (const auto& f : ext.graph.in_edges(split.src))
        if (ext.base_edges.count(f.id)) {
            base_source = false;
            break;
        }
    if (base_source)
        throw Error("cannot outsplit at '" + e + "': " + split.src + " is a source of the base");

    Graph g = ext.graph;
    OutsplitDetail d;
    d.new_vertex = fresh_vertex(g, split.src);
    g.add_vertex(d.new_vertex);
    g.remove_edge(e);
    d.new_edge = fresh_edge(g, e + "'");
    g.add_edge(d.new_edge, d.new_vertex, split.dst);
    // every edge into s(e) is a base edge: non-base edges end in H
    for (const auto& f : ext.graph.in_edges(split.src)) {  // sorted by edge id
        EdgeId copy = fresh_edge(g, f.id + "'");
        g.add_edge(copy, f.src, d.new_vertex);
        d.copies[f.id] = copy;
    }
    d.result = SinkExtension{std::move(g), ext.base_vertices, ext.base_edges, ext.sinks};
    assert_valid(d.result, "outsplit");
    return d;
}

}  // namespace

std::pair<SinkExtension, Move> outsplit(const SinkExtension& ext, const EdgeId& e) {
    return {outsplit_detail(ext, e).result, Move::outsplit(e)};
}

std::pair<SinkExtension, MoveTrace> outsplit_along_path(const SinkExtension& ext, const EdgeId& e,
                                                        const Path& alpha) {
    if (!ext.graph.has_edge(e)) throw Error("unknown edge '" + e + "'");
    for (const auto& a : alpha.edges())
        if (!ext.base_edges.count(a))
            throw Error("path edge '" + a + "' is not a base edge");
    if (!alpha.valid_in(ext.graph)) throw Error("alpha is not a path");
    if (alpha.range(ext.graph) != ext.graph.edge(e).src)
        throw Error("path/edge mismatch: alpha must end at the source of '" + e + "'");

    MoveTrace trace;
    OutsplitDetail d = outsplit_detail(ext, e);
    trace.push_back(Move::outsplit(e));
    for (std::size_t k = alpha.length(); k-- > 1;) {
        const EdgeId& orig = alpha.edges()[k];
        auto it = d.copies.find(orig);
        if (it == d.copies.end())
            throw Error("internal: outsplit did not copy path edge '" + orig + "'");
        EdgeId next = it->second;
        try {
            d = outsplit_detail(d.result, next);
        } catch (const Error& err) {
            throw Error("outsplitting along the path, step " +
                        std::to_string(alpha.length() - k) + ": " + err.what());
        }
        trace.push_back(Move::outsplit(next));
    }
    return {d.result, trace};
}

std::pair<SinkExtension, Move> simplify(const SinkExtension& ext) {
    Graph g = ext.base_graph();
    for (const auto& s : ext.sinks) g.add_vertex(s);
    for (const auto& w : boundary(ext).vertices) {
        for (std::size_t i = 1; i <= ext.sink_count(); ++i) {
            for (const auto& alpha : z_paths(ext, w, i)) {
                std::vector<std::string> parts(alpha.edges().begin(), alpha.edges().end());
                EdgeId id = fresh_edge(g, w + "|" + join(parts, "."));
                g.add_edge(id, w, ext.sinks[i - 1]);
            }
        }
    }
    SinkExtension out{std::move(g), ext.base_vertices, ext.base_edges, ext.sinks};
    assert_valid(out, "simplify");
    return {out, Move::simplify()};
}

SinkExtension star(const SinkExtension& ext, const std::map<VertexId, Int>& m) {
    for (const auto& [v, c] : m) {
        if (!ext.base_vertices.count(v)) throw Error("'" + v + "' is not a base vertex");
        if (c < 0) throw Error("negative multiplicity at '" + v + "'");
    }
    Graph g = ext.graph;
    std::string stem = "*" + std::to_string(ext.sink_count() + 1);
    VertexId sink = stem;
    while (g.has_vertex(sink)) sink += "'";
    g.add_vertex(sink);
    for (const auto& w : ext.base_vertices) {  // sorted
        auto it = m.find(w);
        if (it == m.end()) continue;
        for (Int j = 1; j <= it->second; ++j)
            g.add_edge(fresh_edge(g, w + stem + "." + j.get_str()), w, sink);
    }
    std::vector<VertexId> sinks = ext.sinks;
    sinks.push_back(sink);
    return validate_extension(std::move(g), ext.base_vertices, ext.base_edges, std::move(sinks));
}

SinkExtension strip_sink(const SinkExtension& ext) { return strip_sink(ext, ext.sink_count()); }

SinkExtension strip_sink(const SinkExtension& ext, std::size_t index) {
    if (!is_simple(ext)) throw Error("strip_sink requires a simple extension");
    if (ext.sink_count() == 0) throw Error("no sink to strip");
    if (index != ext.sink_count()) throw Error("only the last sink can be stripped");
    const VertexId sink = ext.sinks.back();
    Graph g = ext.graph;
    for (const auto& e : g.in_edges(sink)) g.remove_edge(e.id);
    g.remove_vertex(sink);
    std::vector<VertexId> sinks(ext.sinks.begin(), ext.sinks.end() - 1);
    return validate_extension(std::move(g), ext.base_vertices, ext.base_edges, std::move(sinks));
}

SinkExtension apply_move(const SinkExtension& ext, const Move& move) {
    switch (move.kind) {
        case Move::Kind::outsplit:
            return outsplit(ext, move.edge).first;
        case Move::Kind::outsplit_along_path:
            return outsplit_along_path(ext, move.edge, move.along).first;
        case Move::Kind::simplify:
            return simplify(ext).first;
        case Move::Kind::star:
            return star(ext, move.star_m);
    }
    throw Error("unknown move");
}

SinkExtension apply_trace(const SinkExtension& ext, const MoveTrace& trace) {
    SinkExtension cur = ext;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        try {
            cur = apply_move(cur, trace[i]);
        } catch (const Error& e) {
            throw Error("move " + std::to_string(i + 1) + " (" + trace[i].to_string() +
                        "): " + e.what());
        }
    }
    return cur;
}

SinkExtension canonical_simple(const Graph& base,
                               const std::vector<std::map<VertexId, Int>>& ws) {
    SinkExtension ext = as_zero_sink_extension(base);
    for (const auto& w : ws) ext = star(ext, w);
    return ext;
}

namespace {

Int multiplicity(const Graph& g, const VertexId& src, const VertexId& dst) {
    Int n = 0;
    for (const auto& e : g.out_edges(src))
        if (e.dst == dst) ++n;
    return n;
}

// Backtracking isomorphism of the H-parts, base fixed pointwise, sinks
// matched by index.
bool h_parts_match(const SinkExtension& a, const SinkExtension& b) {
    auto ha = a.ext_vertices();
    auto hb = b.ext_vertices();
    if (ha.size() != hb.size()) return false;
    if (a.graph.edge_count() != b.graph.edge_count()) return false;

    std::map<VertexId, VertexId> fwd;  // a -> b
    std::set<VertexId> used;
    for (std::size_t i = 0; i < a.sinks.size(); ++i) {
        fwd[a.sinks[i]] = b.sinks[i];
        used.insert(b.sinks[i]);
    }

    std::vector<VertexId> free_a;
    for (const auto& v : ha)
        if (!fwd.count(v)) free_a.push_back(v);
    std::vector<VertexId> free_b;
    for (const auto& v : hb)
        if (!used.count(v)) free_b.push_back(v);
    if (free_a.size() != free_b.size()) return false;

    // check multiplicities between x (mapped) and all base + already-mapped
    auto consistent = [&](const VertexId& x, const VertexId& y) {
        for (const auto& w : a.base_vertices) {
            if (multiplicity(a.graph, w, x) != multiplicity(b.graph, w, y)) return false;
            if (multiplicity(a.graph, x, w) != multiplicity(b.graph, y, w)) return false;
        }
        for (const auto& [u, v] : fwd) {
            if (multiplicity(a.graph, u, x) != multiplicity(b.graph, v, y)) return false;
            if (multiplicity(a.graph, x, u) != multiplicity(b.graph, y, v)) return false;
        }
        if (multiplicity(a.graph, x, x) != multiplicity(b.graph, y, y)) return false;
        if (a.graph.in_degree(x) != b.graph.in_degree(y)) return false;
        if (a.graph.out_degree(x) != b.graph.out_degree(y)) return false;
        return true;
    };

    // sinks were pre-assigned; verify them against the base now
    for (std::size_t i = 0; i < a.sinks.size(); ++i) {
        fwd.erase(a.sinks[i]);
        bool ok = consistent(a.sinks[i], b.sinks[i]);
        fwd[a.sinks[i]] = b.sinks[i];
        if (!ok) return false;
    }

    auto search = [&](auto&& self, std::size_t k) -> bool {
        if (k == free_a.size()) return true;
        const VertexId& x = free_a[k];
        for (const auto& y : free_b) {
            if (used.count(y)) continue;
            if (!consistent(x, y)) continue;
            fwd[x] = y;
            used.insert(y);
            if (self(self, k + 1)) return true;
            fwd.erase(x);
            used.erase(y);
        }
        return false;
    };
    return search(search, 0);
}

}  // namespace

bool canonically_equal(const SinkExtension& a, const SinkExtension& b) {
    if (a.base_graph() != b.base_graph()) return false;
    if (a.sink_count() != b.sink_count()) return false;
    if (is_simple(a) && is_simple(b)) {
        // a simple extension is determined by its Wojciech multiplicities
        for (std::size_t i = 1; i <= a.sink_count(); ++i)
            if (wojciech_vector(a, i) != wojciech_vector(b, i)) return false;
        return true;
    }
    return h_parts_match(a, b);
}

SinkExtension parse_extension(std::string_view text) {
    struct VLine {
        std::size_t line;
        std::string id;
        bool base;
    };
    struct ELine {
        std::size_t line;
        std::string id, src, dst;
        bool base;
    };
    std::vector<VLine> vlines;
    std::vector<ELine> elines;
    std::vector<std::pair<std::size_t, std::string>> slines;

    std::size_t lineno = 0;
    std::istringstream in{std::string(text)};
    std::string line;
    auto parse_marker = [](const std::string& m, std::size_t lineno) {
        if (m == "base") return true;
        if (m == "ext") return false;
        throw ParseError(lineno, "expected 'base' or 'ext', got '" + m + "'");
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
        std::istringstream ls(line);
        std::vector<std::string> tok;
        std::string t;
        while (ls >> t) tok.push_back(t);
        if (tok.empty()) continue;
        if (tok[0] == "v" && tok.size() == 3)
            vlines.push_back({lineno, tok[1], parse_marker(tok[2], lineno)});
        else if (tok[0] == "e" && tok.size() == 5)
            elines.push_back({lineno, tok[1], tok[2], tok[3], parse_marker(tok[4], lineno)});
        else if (tok[0] == "sink" && tok.size() == 2)
            slines.push_back({lineno, tok[1]});
        else
            throw ParseError(lineno, "malformed line");
    }

    Graph g;
    std::set<VertexId> base_vertices;
    std::set<EdgeId> base_edges;
    std::vector<VertexId> sinks;
    for (const auto& v : vlines) {
        try {
            g.add_vertex(v.id);
        } catch (const Error& e) {
            throw ParseError(v.line, e.what());
        }
        if (v.base) base_vertices.insert(v.id);
    }
    for (const auto& e : elines) {
        try {
            g.add_edge(e.id, e.src, e.dst);
        } catch (const Error& err) {
            throw ParseError(e.line, err.what());
        }
        if (e.base) base_edges.insert(e.id);
    }
    for (const auto& [ln, s] : slines) {
        if (!g.has_vertex(s)) throw ParseError(ln, "sink '" + s + "' was never declared");
        sinks.push_back(s);
    }
    return validate_extension(std::move(g), std::move(base_vertices), std::move(base_edges),
                              std::move(sinks));
}

std::string serialize(const SinkExtension& ext) {
    std::ostringstream os;
    for (const auto& v : ext.graph.vertices())
        os << "v " << v << " " << (ext.base_vertices.count(v) ? "base" : "ext") << "\n";
    for (const auto& e : ext.graph.edges())
        os << "e " << e.id << " " << e.src << " " << e.dst << " "
           << (ext.base_edges.count(e.id) ? "base" : "ext") << "\n";
    for (const auto& s : ext.sinks) os << "sink " << s << "\n";
    return os.str();
}

std::string to_dot(const SinkExtension& ext) {
    std::set<VertexId> sinkset(ext.sinks.begin(), ext.sinks.end());
    std::ostringstream os;
    os << "digraph e {\n";
    for (const auto& v : ext.graph.vertices()) {
        os << "  \"" << v << "\"";
        if (sinkset.count(v))
            os << " [shape=doublecircle style=filled fillcolor=lightgray]";
        else if (!ext.base_vertices.count(v))
            os << " [style=filled fillcolor=lightgray]";
        os << ";\n";
    }
    for (const auto& e : ext.graph.edges()) {
        os << "  \"" << e.src << "\" -> \"" << e.dst << "\" [label=\"" << e.id << "\"";
        if (!ext.base_edges.count(e.id)) os << " style=dashed";
        os << "];\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace sinkx

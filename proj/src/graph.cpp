#include "sinkx/graph.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <sstream>

namespace sinkx {

namespace {

bool valid_identifier(const std::string& id) {
    if (id.empty()) return false;
    for (unsigned char c : id)
        if (std::isspace(c) || c == '#') return false;
    return true;
}

void check_identifier(const std::string& id, const char* kind) {
    if (!valid_identifier(id))
        throw Error(std::string(kind) + " identifier '" + id +
                    "' is empty or contains whitespace/'#'");
}

}  // namespace

void Graph::add_vertex(const VertexId& v) {
    check_identifier(v, "vertex");
    if (!vertices_.insert(v).second) throw Error("duplicate vertex '" + v + "'");
}

void Graph::add_edge(const EdgeId& e, const VertexId& src, const VertexId& dst) {
    check_identifier(e, "edge");
    if (edges_.count(e)) throw Error("duplicate edge '" + e + "'");
    if (!has_vertex(src)) throw Error("edge '" + e + "' has dangling source '" + src + "'");
    if (!has_vertex(dst)) throw Error("edge '" + e + "' has dangling range '" + dst + "'");
    edges_.emplace(e, std::make_pair(src, dst));
}

void Graph::remove_edge(const EdgeId& e) {
    if (edges_.erase(e) == 0) throw Error("no edge '" + e + "' to remove");
}

void Graph::remove_vertex(const VertexId& v) {
    if (!has_vertex(v)) throw Error("no vertex '" + v + "' to remove");
    for (const auto& [id, ep] : edges_)
        if (ep.first == v || ep.second == v)
            throw Error("vertex '" + v + "' still has incident edge '" + id + "'");
    vertices_.erase(v);
}

Edge Graph::edge(const EdgeId& e) const {
    auto it = edges_.find(e);
    if (it == edges_.end()) throw Error("unknown edge '" + e + "'");
    return Edge{it->first, it->second.first, it->second.second};
}

std::vector<VertexId> Graph::vertices() const {
    return std::vector<VertexId>(vertices_.begin(), vertices_.end());
}

std::vector<EdgeId> Graph::edge_ids() const {
    std::vector<EdgeId> out;
    out.reserve(edges_.size());
    for (const auto& [id, ep] : edges_) out.push_back(id);
    return out;
}

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> out;
    out.reserve(edges_.size());
    for (const auto& [id, ep] : edges_) out.push_back(Edge{id, ep.first, ep.second});
    return out;
}

std::vector<Edge> Graph::out_edges(const VertexId& v) const {
    std::vector<Edge> out;
    for (const auto& [id, ep] : edges_)
        if (ep.first == v) out.push_back(Edge{id, ep.first, ep.second});
    return out;
}

std::vector<Edge> Graph::in_edges(const VertexId& v) const {
    std::vector<Edge> out;
    for (const auto& [id, ep] : edges_)
        if (ep.second == v) out.push_back(Edge{id, ep.first, ep.second});
    return out;
}

std::size_t Graph::out_degree(const VertexId& v) const { return out_edges(v).size(); }
std::size_t Graph::in_degree(const VertexId& v) const { return in_edges(v).size(); }

VertexId Path::source(const Graph& g) const {
    if (edges_.empty()) return anchor_;
    return g.edge(edges_.front()).src;
}

VertexId Path::range(const Graph& g) const {
    if (edges_.empty()) return anchor_;
    return g.edge(edges_.back()).dst;
}

bool Path::valid_in(const Graph& g) const {
    if (edges_.empty()) return g.has_vertex(anchor_);
    for (const auto& e : edges_)
        if (!g.has_edge(e)) return false;
    if (!anchor_.empty() && g.edge(edges_.front()).src != anchor_) return false;
    for (std::size_t i = 0; i + 1 < edges_.size(); ++i)
        if (g.edge(edges_[i]).dst != g.edge(edges_[i + 1]).src) return false;
    return true;
}

std::vector<VertexId> Path::visited(const Graph& g) const {
    std::vector<VertexId> out{source(g)};
    for (const auto& e : edges_) out.push_back(g.edge(e).dst);
    return out;
}

Path Path::operator+(const Path& tail) const {
    Path out = *this;
    out.edges_.insert(out.edges_.end(), tail.edges_.begin(), tail.edges_.end());
    return out;
}

std::string Path::to_string() const {
    if (edges_.empty()) return "(empty at " + anchor_ + ")";
    std::string out;
    for (const auto& e : edges_) {
        if (!out.empty()) out += " ";
        out += e;
    }
    return out;
}

Graph parse_graph(std::string_view text) {
    Graph g;
    std::size_t lineno = 0;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
        std::istringstream ls(line);
        std::vector<std::string> tok;
        std::string t;
        while (ls >> t) tok.push_back(t);
        if (tok.empty()) continue;
        try {
            if (tok[0] == "v" && tok.size() == 2) {
                g.add_vertex(tok[1]);
            } else if (tok[0] == "e" && tok.size() == 4) {
                g.add_edge(tok[1], tok[2], tok[3]);
            } else {
                throw Error("malformed line");
            }
        } catch (const Error& e) {
            throw ParseError(lineno, e.what());
        }
    }
    return g;
}

std::string serialize(const Graph& g) {
    std::ostringstream os;
    for (const auto& v : g.vertices()) os << "v " << v << "\n";
    for (const auto& e : g.edges()) os << "e " << e.id << " " << e.src << " " << e.dst << "\n";
    return os.str();
}

std::string to_dot(const Graph& g) {
    std::ostringstream os;
    os << "digraph g {\n";
    for (const auto& v : g.vertices()) os << "  \"" << v << "\";\n";
    for (const auto& e : g.edges())
        os << "  \"" << e.src << "\" -> \"" << e.dst << "\" [label=\"" << e.id << "\"];\n";
    os << "}\n";
    return os.str();
}

IntMatrix vertex_matrix(const Graph& g) {
    Labels labels = g.vertices();
    IntMatrix m(labels, labels);
    std::map<VertexId, std::size_t> index;
    for (std::size_t i = 0; i < labels.size(); ++i) index[labels[i]] = i;
    for (const auto& e : g.edges()) m.at(index[e.src], index[e.dst]) += 1;
    return m;
}

bool reaches(const Graph& g, const VertexId& v, const std::set<VertexId>& targets) {
    if (!g.has_vertex(v)) throw Error("unknown vertex '" + v + "'");
    for (const auto& t : targets)
        if (!g.has_vertex(t)) throw Error("unknown vertex '" + t + "'");
    if (targets.count(v)) return true;  // empty path
    std::set<VertexId> seen{v};
    std::deque<VertexId> queue{v};
    while (!queue.empty()) {
        VertexId cur = queue.front();
        queue.pop_front();
        for (const auto& e : g.out_edges(cur)) {
            if (targets.count(e.dst)) return true;
            if (seen.insert(e.dst).second) queue.push_back(e.dst);
        }
    }
    return false;
}

VertexRoles vertex_roles(const Graph& g) {
    VertexRoles roles;
    for (const auto& v : g.vertices()) {
        roles.sinks.insert(v);
        roles.sources.insert(v);
    }
    for (const auto& e : g.edges()) {
        roles.sinks.erase(e.src);
        roles.sources.erase(e.dst);
    }
    return roles;
}

std::vector<std::set<VertexId>> maximal_tails(const Graph& g, std::size_t bound) {
    const auto verts = g.vertices();
    const std::size_t n = verts.size();
    if (n > std::min<std::size_t>(bound, 30))
        throw Error("maximal_tails: " + std::to_string(n) + " vertices exceeds brute-force bound " +
                    std::to_string(bound));
    std::map<VertexId, std::size_t> index;
    for (std::size_t i = 0; i < n; ++i) index[verts[i]] = i;

    // reach_down[i] = {j : i >= j}, reach_up[j] = {i : i >= j}, succ[i] = out-neighbours
    std::vector<std::uint32_t> reach_down(n, 0), reach_up(n, 0), succ(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            if (reaches(g, verts[i], {verts[j]})) {
                reach_down[i] |= 1u << j;
                reach_up[j] |= 1u << i;
            }
        for (const auto& e : g.out_edges(verts[i])) succ[i] |= 1u << index[e.dst];
    }

    std::vector<std::set<VertexId>> out;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        bool ok = true;
        // backwards hereditary, and no sinks relative to the set
        for (std::size_t j = 0; j < n && ok; ++j) {
            if (!(mask & (1u << j))) continue;
            if ((reach_up[j] & ~mask) != 0) ok = false;
            else if ((succ[j] & mask) == 0) ok = false;
        }
        // pairwise cofinal
        for (std::size_t i = 0; i < n && ok; ++i) {
            if (!(mask & (1u << i))) continue;
            for (std::size_t j = i; j < n && ok; ++j) {
                if (!(mask & (1u << j))) continue;
                if ((reach_down[i] & reach_down[j] & mask) == 0) ok = false;
            }
        }
        if (!ok) continue;
        std::set<VertexId> tail;
        for (std::size_t j = 0; j < n; ++j)
            if (mask & (1u << j)) tail.insert(verts[j]);
        out.push_back(std::move(tail));
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

// Vertices strictly between v and itself on closed walks: u != v with
// v >= u and u >= v.
std::set<VertexId> co_cyclic(const Graph& g, const VertexId& v) {
    std::set<VertexId> out;
    for (const auto& u : g.vertices()) {
        if (u == v) continue;
        if (reaches(g, v, {u}) && reaches(g, u, {v})) out.insert(u);
    }
    return out;
}

bool induced_has_cycle(const Graph& g, const std::set<VertexId>& verts) {
    // Kahn's algorithm on the induced subgraph; self-loops count as cycles.
    std::map<VertexId, std::size_t> indeg;
    for (const auto& v : verts) indeg[v] = 0;
    for (const auto& e : g.edges()) {
        if (!verts.count(e.src) || !verts.count(e.dst)) continue;
        if (e.src == e.dst) return true;
        ++indeg[e.dst];
    }
    std::deque<VertexId> queue;
    for (const auto& [v, d] : indeg)
        if (d == 0) queue.push_back(v);
    std::size_t removed = 0;
    while (!queue.empty()) {
        VertexId v = queue.front();
        queue.pop_front();
        ++removed;
        for (const auto& e : g.out_edges(v)) {
            if (e.src == e.dst || !verts.count(e.dst)) continue;
            if (--indeg[e.dst] == 0) queue.push_back(e.dst);
        }
    }
    return removed != verts.size();
}

}  // namespace

int return_path_count(const Graph& g, const VertexId& v, int cap) {
    if (!g.has_vertex(v)) throw Error("unknown vertex '" + v + "'");
    int count = 0;
    for (const auto& e : g.out_edges(v))
        if (e.dst == v) ++count;
    if (count >= cap) return cap;

    std::set<VertexId> mid = co_cyclic(g, v);
    if (mid.empty()) return count;
    if (induced_has_cycle(g, mid)) return cap;

    // The co-cyclic set induces a DAG: count v-avoiding paths back to v,
    // saturating at cap.
    std::map<VertexId, int> paths;
    // process in reverse topological order via repeated relaxation (tiny sets)
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& u : mid) {
            int total = 0;
            for (const auto& e : g.out_edges(u)) {
                if (e.dst == v)
                    total += 1;
                else if (mid.count(e.dst)) {
                    auto it = paths.find(e.dst);
                    if (it == paths.end()) {
                        total = -1;  // dependency not ready
                        break;
                    }
                    total += it->second;
                }
                if (total >= cap) {
                    total = cap;
                    break;
                }
            }
            if (total >= 0) {
                auto it = paths.find(u);
                if (it == paths.end() || it->second != total) {
                    paths[u] = std::min(total, cap);
                    changed = true;
                }
            }
        }
    }
    for (const auto& e : g.out_edges(v)) {
        if (e.dst == v || !mid.count(e.dst)) continue;
        count += paths.at(e.dst);
        if (count >= cap) return cap;
    }
    return count;
}

bool condition_k(const Graph& g) {
    for (const auto& v : g.vertices()) {
        int c = return_path_count(g, v, 2);
        if (c == 1) return false;
    }
    return true;
}

bool has_cycle(const Graph& g) { return induced_has_cycle(g, g.vertex_set()); }

std::optional<Path> find_path(const Graph& g, const VertexId& from,
                              const std::set<VertexId>& into) {
    if (!g.has_vertex(from)) throw Error("unknown vertex '" + from + "'");
    for (const auto& t : into)
        if (!g.has_vertex(t)) throw Error("unknown vertex '" + t + "'");
    if (into.empty()) return std::nullopt;

    // BFS distances towards the target set, then a greedy walk picking the
    // least admissible edge id at every step: the resulting edge sequence is
    // lexicographically least among shortest paths.
    std::map<VertexId, std::size_t> dist;
    std::deque<VertexId> queue;
    for (const auto& t : into) {
        dist[t] = 0;
        queue.push_back(t);
    }
    while (!queue.empty()) {
        VertexId cur = queue.front();
        queue.pop_front();
        for (const auto& e : g.in_edges(cur)) {
            if (dist.count(e.src)) continue;
            dist[e.src] = dist[cur] + 1;
            queue.push_back(e.src);
        }
    }
    auto it = dist.find(from);
    if (it == dist.end()) return std::nullopt;

    Path path(from);
    VertexId cur = from;
    std::size_t remaining = it->second;
    while (remaining > 0) {
        bool advanced = false;
        for (const auto& e : g.out_edges(cur)) {  // sorted by edge id
            auto dit = dist.find(e.dst);
            if (dit != dist.end() && dit->second == remaining - 1) {
                path = path + Path(cur, {e.id});
                cur = e.dst;
                --remaining;
                advanced = true;
                break;
            }
        }
        if (!advanced) throw Error("find_path: inconsistent BFS distances");
    }
    return path;
}

}  // namespace sinkx

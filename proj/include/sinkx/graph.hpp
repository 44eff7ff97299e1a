#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "sinkx/error.hpp"
#include "sinkx/intlattice.hpp"

namespace sinkx {

/// Opaque text labels. Non-empty, no whitespace, no '#'; unique per kind
/// within a graph. Parallel edges are kept as individually identified edges.
using VertexId = std::string;
using EdgeId = std::string;

struct Edge {
    EdgeId id;
    VertexId src;
    VertexId dst;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Finite directed multigraph with stable identifiers.
class Graph {
public:
    Graph() = default;

    void add_vertex(const VertexId& v);
    void add_edge(const EdgeId& e, const VertexId& src, const VertexId& dst);
    void remove_edge(const EdgeId& e);
    /// The vertex must be isolated.
    void remove_vertex(const VertexId& v);

    bool has_vertex(const VertexId& v) const { return vertices_.count(v) != 0; }
    bool has_edge(const EdgeId& e) const { return edges_.count(e) != 0; }
    Edge edge(const EdgeId& e) const;

    std::size_t vertex_count() const { return vertices_.size(); }
    std::size_t edge_count() const { return edges_.size(); }

    /// Sorted.
    std::vector<VertexId> vertices() const;
    std::set<VertexId> vertex_set() const { return vertices_; }
    std::vector<EdgeId> edge_ids() const;
    std::vector<Edge> edges() const;

    std::vector<Edge> out_edges(const VertexId& v) const;
    std::vector<Edge> in_edges(const VertexId& v) const;
    std::size_t out_degree(const VertexId& v) const;
    std::size_t in_degree(const VertexId& v) const;

    friend bool operator==(const Graph&, const Graph&) = default;

private:
    std::set<VertexId> vertices_;
    std::map<EdgeId, std::pair<VertexId, VertexId>> edges_;
};

/// Edge walk; an empty path is anchored at a vertex and has s = r = anchor.
class Path {
public:
    Path() = default;
    explicit Path(VertexId anchor) : anchor_(std::move(anchor)) {}
    Path(VertexId anchor, std::vector<EdgeId> edges)
        : anchor_(std::move(anchor)), edges_(std::move(edges)) {}

    bool empty() const { return edges_.empty(); }
    std::size_t length() const { return edges_.size(); }
    const std::vector<EdgeId>& edges() const { return edges_; }
    const VertexId& anchor() const { return anchor_; }

    /// Source/range relative to a graph (composability is checked).
    VertexId source(const Graph& g) const;
    VertexId range(const Graph& g) const;
    bool valid_in(const Graph& g) const;
    /// Vertices visited in order: s, r(e1), r(e2), ...
    std::vector<VertexId> visited(const Graph& g) const;

    Path operator+(const Path& tail) const;

    friend bool operator==(const Path&, const Path&) = default;

    std::string to_string() const;

private:
    VertexId anchor_;
    std::vector<EdgeId> edges_;
};

/// Line-oriented text format; '#' starts a comment.
///   v <vertex-id>
///   e <edge-id> <source-id> <range-id>
Graph parse_graph(std::string_view text);

/// Vertices sorted, then edges sorted by edge id. parse(serialize(g)) == g.
std::string serialize(const Graph& g);

/// Deterministic DOT export, canonical order.
std::string to_dot(const Graph& g);

/// Square matrix over the sorted vertex list; entry (u, v) counts edges u->v.
IntMatrix vertex_matrix(const Graph& g);

/// True iff some finite (possibly empty) path runs from v into `targets`.
bool reaches(const Graph& g, const VertexId& v, const std::set<VertexId>& targets);

struct VertexRoles {
    std::set<VertexId> sinks;    // emit no edge
    std::set<VertexId> sources;  // receive no edge
};
VertexRoles vertex_roles(const Graph& g);

/// All maximal tails: nonempty vertex sets that are pairwise cofinal under
/// >=, backwards hereditary, and sink-free. Brute-force enumeration; throws
/// when the vertex count exceeds `bound`.
std::vector<std::set<VertexId>> maximal_tails(const Graph& g, std::size_t bound = 20);

/// Number of distinct first-return paths at v, saturated at `cap`.
int return_path_count(const Graph& g, const VertexId& v, int cap = 2);

/// Every vertex has zero or at least two first-return paths.
bool condition_k(const Graph& g);

/// True iff the graph contains a directed cycle.
bool has_cycle(const Graph& g);

/// Shortest path from `from` into `into`; among shortest paths the edge-id
/// sequence is lexicographically least. Absent when unreachable.
std::optional<Path> find_path(const Graph& g, const VertexId& from,
                              const std::set<VertexId>& into);

}  // namespace sinkx

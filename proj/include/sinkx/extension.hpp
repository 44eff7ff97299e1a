#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sinkx/graph.hpp"
#include "sinkx/intlattice.hpp"

namespace sinkx {

/// A graph E together with a designated base subgraph G and an ordered list
/// of sinks living in H = E0 \ G0. Always constructed through
/// validate_extension, which enforces:
///   (1) H is finite, has no sources, and its sinks in E are exactly the
///       listed sinks,
///   (2) no cycle of E lies entirely inside H,
///   (3) every edge outside the base has range in H,
///   (4) every sink of the base stays a sink in E.
struct SinkExtension {
    Graph graph;                       // E
    std::set<VertexId> base_vertices;  // G0
    std::set<EdgeId> base_edges;       // G1
    std::vector<VertexId> sinks;       // v_1 .. v_n, in sink-index order

    Graph base_graph() const;
    std::set<VertexId> ext_vertices() const;  // H
    std::size_t sink_count() const { return sinks.size(); }
    bool is_base_vertex(const VertexId& v) const { return base_vertices.count(v) != 0; }
    bool is_base_edge(const EdgeId& e) const { return base_edges.count(e) != 0; }

    friend bool operator==(const SinkExtension&, const SinkExtension&) = default;
};

struct ClauseViolation {
    int clause;           // 1..4 per the definition; 0 for structural problems
    std::string witness;  // offending vertex/edge/cycle

    std::string to_string() const;  // "CLAUSE(n): witness"
};

class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<ClauseViolation> violations);
    const std::vector<ClauseViolation>& violations() const { return violations_; }

private:
    std::vector<ClauseViolation> violations_;
};

/// Every violated clause, empty when the input is a valid extension.
/// Throws Error when the inputs name unknown vertices or edges.
std::vector<ClauseViolation> extension_violations(const Graph& graph,
                                                  const std::set<VertexId>& base_vertices,
                                                  const std::set<EdgeId>& base_edges,
                                                  const std::vector<VertexId>& sinks);

/// Validated constructor; throws ValidationError listing every violation.
SinkExtension validate_extension(Graph graph, std::set<VertexId> base_vertices,
                                 std::set<EdgeId> base_edges, std::vector<VertexId> sinks);

/// Wraps a plain graph as a 0-sink extension of itself.
SinkExtension as_zero_sink_extension(Graph g);

/// H equals the listed sinks.
bool is_simple(const SinkExtension& ext);

/// Least saturated set containing a hereditary X: repeatedly absorbs any
/// non-sink whose outgoing edges all land in the set.
std::set<VertexId> saturation(const SinkExtension& ext, const std::set<VertexId>& x);

struct Boundary {
    std::set<VertexId> vertices;  // B0: sources of boundary edges
    std::set<EdgeId> edges;       // B1: edges from the base into H
};
Boundary boundary(const SinkExtension& ext);

/// All paths from w to sink i that leave the base immediately, in
/// lexicographic edge-sequence order. Sink indices are 1-based.
std::vector<Path> z_paths(const SinkExtension& ext, const VertexId& w, std::size_t sink_index);

/// Per base vertex, the number of such paths. Sparse: absent entries are 0.
std::map<VertexId, Int> wojciech_vector(const SinkExtension& ext, std::size_t sink_index);

/// Dense form over the given labels (defaults to the sorted base vertices).
IntVector wojciech_dense(const SinkExtension& ext, std::size_t sink_index);
IntVector wojciech_dense(const SinkExtension& ext, std::size_t sink_index, const Labels& labels);

/// Exactly one path from every H-vertex to the sink. Only for 1-sink
/// extensions.
bool is_tree_extension(const SinkExtension& ext);

/// Replayable move. Fresh identifiers are derived deterministically, so a
/// recorded trace rebuilds bit-identical graphs.
struct Move {
    enum class Kind { outsplit, outsplit_along_path, simplify, star };
    Kind kind = Kind::simplify;
    EdgeId edge;                      // outsplit, outsplit_along_path
    Path along;                       // outsplit_along_path
    std::map<VertexId, Int> star_m;   // star

    static Move outsplit(EdgeId e);
    static Move outsplit_along_path(EdgeId e, Path along);
    static Move simplify();
    static Move star(std::map<VertexId, Int> m);

    friend bool operator==(const Move&, const Move&) = default;
    std::string to_string() const;
};
using MoveTrace = std::vector<Move>;

/// Collapses every immediate-exit path to a sink into a single edge. The
/// result is simple, has the same base and the same Wojciech vectors.
std::pair<SinkExtension, Move> simplify(const SinkExtension& ext);

/// Boundary outsplitting by edge e: a fresh vertex v' takes over e, and every
/// edge into s(e) is duplicated towards v'. Requires e to be a boundary edge
/// whose source is not a source of the base.
std::pair<SinkExtension, Move> outsplit(const SinkExtension& ext, const EdgeId& e);

/// Iterated outsplitting along a base path alpha with r(alpha) = s(e): one
/// split for every edge of alpha (at its range vertex); for empty alpha a
/// single outsplit at e. Returns the primitive outsplit moves performed.
std::pair<SinkExtension, MoveTrace> outsplit_along_path(const SinkExtension& ext, const EdgeId& e,
                                                        const Path& alpha);

/// Attaches a fresh sink with m(w) parallel edges from every base vertex w.
/// m must be non-negative; a zero vector is rejected by validation because
/// the new sink would be a source.
SinkExtension star(const SinkExtension& ext, const std::map<VertexId, Int>& m);

/// Removes the last sink and its incoming edges from a simple extension.
SinkExtension strip_sink(const SinkExtension& ext);
SinkExtension strip_sink(const SinkExtension& ext, std::size_t index);

SinkExtension apply_move(const SinkExtension& ext, const Move& move);
/// Errors report the index of the first inapplicable move.
SinkExtension apply_trace(const SinkExtension& ext, const MoveTrace& trace);

/// The simple extension with exactly w[i](v) edges v -> sink_i, canonical
/// identifiers. A simple extension is determined by these multiplicities.
SinkExtension canonical_simple(const Graph& base, const std::vector<std::map<VertexId, Int>>& ws);

/// Equality after canonical renaming: bases must agree exactly, sinks are
/// matched by index, and the remaining H-parts by a multiplicity-preserving
/// bijection.
bool canonically_equal(const SinkExtension& a, const SinkExtension& b);

/// Extension text format; '#' starts a comment.
///   v <id> base|ext
///   e <id> <src> <dst> base|ext
///   sink <id>          (one line per sink, in sink-index order)
SinkExtension parse_extension(std::string_view text);
std::string serialize(const SinkExtension& ext);
std::string to_dot(const SinkExtension& ext);

}  // namespace sinkx

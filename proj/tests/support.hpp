#pragma once

// Shared generators and independent oracles for the randomized suites. The
// oracles here re-derive expected values by brute force and must stay
// independent of the library code paths they check.

#include <cstdlib>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "sinkx/classify.hpp"
#include "sinkx/extension.hpp"
#include "sinkx/graph.hpp"
#include "sinkx/intlattice.hpp"

namespace testsupport {

using namespace sinkx;
using Rng = std::mt19937_64;

inline std::uint64_t seed_from_env() {
    if (const char* s = std::getenv("SINKX_SEED")) return std::strtoull(s, nullptr, 10);
    return 0xC0FFEEull;
}

inline int rand_int(Rng& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline IntMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, int lo, int hi) {
    IntMatrix m(abstract_labels(rows), abstract_labels(cols));
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = rand_int(rng, lo, hi);
    return m;
}

// Minimal solution of a*x = d over the box [-bound, bound]^cols by (L1 norm,
// lexicographic) order; nullopt when the box holds none.
inline std::optional<IntVector> brute_force_membership(const IntMatrix& a, const IntVector& d,
                                                       int bound) {
    const std::size_t n = a.cols();
    std::vector<int> x(n, -bound);
    std::optional<IntVector> best;
    auto l1 = [](const std::vector<int>& v) {
        long s = 0;
        for (int c : v) s += std::abs(c);
        return s;
    };
    long best_l1 = 0;
    for (;;) {
        bool ok = true;
        for (std::size_t i = 0; i < a.rows() && ok; ++i) {
            Int acc = 0;
            for (std::size_t j = 0; j < n; ++j) acc += a.at(i, j) * x[j];
            if (acc != d[i]) ok = false;
        }
        if (ok) {
            long norm = l1(x);
            std::vector<Int> vals(x.begin(), x.end());
            if (!best || norm < best_l1) {
                best = IntVector(a.col_labels(), vals);
                best_l1 = norm;
            }
        }
        std::size_t k = 0;
        while (k < n && x[k] == bound) x[k++] = -bound;
        if (k == n) break;
        ++x[k];
    }
    return best;
}

// Strongly connected digraph without sources or sinks: a directed cycle over
// all vertices plus random extra edges (at most `max_parallel` per pair).
inline Graph random_strongly_connected(Rng& rng, int max_vertices, int max_extra,
                                       int max_parallel = 3) {
    int n = rand_int(rng, 2, max_vertices);
    Graph g;
    std::vector<VertexId> verts;
    for (int i = 1; i <= n; ++i) {
        verts.push_back("x" + std::to_string(i));
        g.add_vertex(verts.back());
    }
    for (int i = 0; i < n; ++i)
        g.add_edge("c" + std::to_string(i + 1), verts[static_cast<std::size_t>(i)],
                   verts[static_cast<std::size_t>((i + 1) % n)]);
    int extra = rand_int(rng, 0, max_extra);
    std::map<std::pair<VertexId, VertexId>, int> parallel;
    for (const auto& e : g.edges()) parallel[{e.src, e.dst}]++;
    int added = 0;
    for (int t = 0; t < 4 * extra && added < extra; ++t) {
        VertexId s = verts[static_cast<std::size_t>(rand_int(rng, 0, n - 1))];
        VertexId r = verts[static_cast<std::size_t>(rand_int(rng, 0, n - 1))];
        if (parallel[{s, r}] >= max_parallel) continue;
        parallel[{s, r}]++;
        g.add_edge("r" + std::to_string(++added), s, r);
    }
    return g;
}

// Arbitrary digraph; may contain sources and sinks.
inline Graph random_digraph(Rng& rng, int max_vertices, int percent_edge, int max_parallel = 2) {
    int n = rand_int(rng, 2, max_vertices);
    Graph g;
    std::vector<VertexId> verts;
    for (int i = 1; i <= n; ++i) {
        verts.push_back("x" + std::to_string(i));
        g.add_vertex(verts.back());
    }
    int id = 0;
    for (const auto& s : verts)
        for (const auto& r : verts)
            for (int p = 0; p < max_parallel; ++p)
                if (rand_int(rng, 0, 99) < percent_edge)
                    g.add_edge("r" + std::to_string(++id), s, r);
    return g;
}

// Nonzero multiplicity vector supported on `allowed`.
inline std::map<VertexId, Int> random_w(Rng& rng, const std::set<VertexId>& allowed,
                                        int max_mult) {
    std::map<VertexId, Int> w;
    std::vector<VertexId> pool(allowed.begin(), allowed.end());
    for (const auto& v : pool)
        if (rand_int(rng, 0, 1)) {
            int m = rand_int(rng, 1, max_mult);
            if (m > 0) w[v] = m;
        }
    if (w.empty() && !pool.empty())
        w[pool[static_cast<std::size_t>(rand_int(rng, 0, static_cast<int>(pool.size()) - 1))]] =
            rand_int(rng, 1, max_mult);
    return w;
}

// Boundary edges whose source is not a source of the base (the ones a
// boundary outsplitting accepts).
inline std::vector<EdgeId> admissible_boundary_edges(const SinkExtension& ext) {
    std::vector<EdgeId> out;
    Graph base = ext.base_graph();
    for (const auto& id : boundary(ext).edges)
        if (base.in_degree(ext.graph.edge(id).src) > 0) out.push_back(id);
    return out;
}

// A few random boundary outsplittings.
inline SinkExtension random_outsplits(Rng& rng, SinkExtension ext, int count) {
    for (int i = 0; i < count; ++i) {
        auto edges = admissible_boundary_edges(ext);
        if (edges.empty()) break;
        ext = outsplit(ext, edges[static_cast<std::size_t>(
                                rand_int(rng, 0, static_cast<int>(edges.size()) - 1))])
                  .first;
    }
    return ext;
}

// Random standard moves: boundary outsplittings with occasional
// simplifications.
inline SinkExtension random_moves(Rng& rng, SinkExtension ext, int count) {
    for (int i = 0; i < count; ++i) {
        if (rand_int(rng, 0, 3) == 0) {
            ext = simplify(ext).first;
            continue;
        }
        auto edges = admissible_boundary_edges(ext);
        if (edges.empty()) continue;
        ext = outsplit(ext, edges[static_cast<std::size_t>(
                                rand_int(rng, 0, static_cast<int>(edges.size()) - 1))])
                  .first;
    }
    return ext;
}

// Independent re-check of the maximal tail conditions.
inline bool is_maximal_tail(const Graph& g, const std::set<VertexId>& tail) {
    if (tail.empty()) return false;
    for (const auto& v : tail)
        for (const auto& w : tail) {
            bool found = false;
            for (const auto& y : tail)
                if (reaches(g, v, {y}) && reaches(g, w, {y})) {
                    found = true;
                    break;
                }
            if (!found) return false;
        }
    for (const auto& w : tail)
        for (const auto& v : g.vertices())
            if (reaches(g, v, {w}) && !tail.count(v)) return false;
    for (const auto& w : tail) {
        bool emits = false;
        for (const auto& e : g.out_edges(w))
            if (tail.count(e.dst)) emits = true;
        if (!emits) return false;
    }
    return true;
}

// Expected Wojciech change of one outsplit at a boundary edge with source v.
inline IntVector outsplit_delta(const Graph& base, const VertexId& v) {
    IntMatrix m = vertex_matrix(base) - IntMatrix::identity(vertex_matrix(base).row_labels());
    IntVector delta(base.vertices());
    delta.at(v) = 1;
    return m.apply(delta);
}

}  // namespace testsupport

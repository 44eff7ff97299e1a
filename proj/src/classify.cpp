#include "sinkx/classify.hpp"

#include <algorithm>
#include <sstream>

namespace sinkx {

std::string Verdict::to_string() const {
    switch (kind) {
        case VerdictKind::candidate_found: {
            std::string s = "candidate " + (candidate ? candidate->to_string() : "?");
            if (!hypothesis_ok) s += " (necessity hypothesis fails)";
            if (!reason.empty()) s += ": " + reason;
            return s;
        }
        case VerdictKind::obstructed:
            return "obstructed: " + reason;
        case VerdictKind::inconclusive:
            return "inconclusive: " + reason;
    }
    return "?";
}

ClassifyMode classify_mode_from_string(const std::string& s) {
    if (s == "essential") return ClassifyMode::essential;
    if (s == "closure") return ClassifyMode::closure;
    if (s == "af") return ClassifyMode::af;
    if (s == "nsink") return ClassifyMode::nsink;
    throw Error("unknown classification mode '" + s + "'");
}

std::string to_string(ClassifyMode mode) {
    switch (mode) {
        case ClassifyMode::essential: return "essential";
        case ClassifyMode::closure: return "closure";
        case ClassifyMode::af: return "af";
        case ClassifyMode::nsink: return "nsink";
    }
    return "?";
}

bool is_essential(const SinkExtension& ext) {
    for (const auto& w : ext.base_vertices)
        for (const auto& s : ext.sinks)
            if (!reaches(ext.graph, w, {s})) return false;
    return true;
}

std::set<VertexId> closure_of_sink(const SinkExtension& ext, std::size_t sink_index) {
    if (sink_index < 1 || sink_index > ext.sink_count())
        throw Error("sink index " + std::to_string(sink_index) + " out of range");
    const VertexId& sink = ext.sinks[sink_index - 1];
    std::set<VertexId> closure;
    for (const auto& tail : maximal_tails(ext.base_graph())) {
        bool all_reach = std::all_of(tail.begin(), tail.end(), [&](const VertexId& z) {
            return reaches(ext.graph, z, {sink});
        });
        if (all_reach) closure.insert(tail.begin(), tail.end());
    }
    return closure;
}

bool same_closure(const SinkExtension& a, const SinkExtension& b) {
    if (a.base_graph() != b.base_graph()) throw Error("extensions have different base graphs");
    if (a.sink_count() != 1 || b.sink_count() != 1)
        throw Error("closure comparison is defined for 1-sink extensions");
    return closure_of_sink(a, 1) == closure_of_sink(b, 1);
}

std::vector<std::size_t> TailFamily::closure(const Graph& e,
                                             const std::vector<std::size_t>& subset) const {
    std::set<VertexId> hull;
    for (auto i : subset) {
        const auto& vs = members.at(i).verts;
        hull.insert(vs.begin(), vs.end());
    }
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < members.size(); ++i) {
        const auto& vs = members[i].verts;
        bool inside = !hull.empty() && std::all_of(vs.begin(), vs.end(), [&](const VertexId& v) {
            return reaches(e, v, hull);
        });
        if (inside) out.push_back(i);
    }
    return out;
}

TailFamily prim_skeleton(const SinkExtension& ext) {
    if (ext.sink_count() != 1) throw Error("prim_skeleton is defined for 1-sink extensions");
    TailFamily fam;
    for (const auto& tail : maximal_tails(ext.graph)) fam.members.push_back({"tail", tail});
    for (const auto& v : vertex_roles(ext.graph).sinks) {
        std::set<VertexId> lambda;
        for (const auto& w : ext.graph.vertices())
            if (reaches(ext.graph, w, {v})) lambda.insert(w);
        fam.members.push_back({"sink " + v, lambda});
    }
    return fam;
}

std::vector<std::set<VertexId>> saturated_hereditary_subsets(const Graph& g, std::size_t bound) {
    const auto verts = g.vertices();
    const std::size_t n = verts.size();
    if (n > std::min<std::size_t>(bound, 30))
        throw Error("saturated_hereditary_subsets: " + std::to_string(n) +
                    " vertices exceeds brute-force bound " + std::to_string(bound));
    std::map<VertexId, std::size_t> index;
    for (std::size_t i = 0; i < n; ++i) index[verts[i]] = i;
    std::vector<std::uint32_t> succ(n, 0);
    std::vector<bool> is_sink(n, true);
    for (const auto& e : g.edges()) {
        succ[index[e.src]] |= 1u << index[e.dst];
        is_sink[index[e.src]] = false;
    }

    std::vector<std::set<VertexId>> out;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) {
            bool inside = (mask >> i) & 1u;
            if (inside && (succ[i] & ~mask) != 0) ok = false;  // hereditary
            if (!inside && !is_sink[i] && (succ[i] & ~mask) == 0) ok = false;  // saturated
        }
        if (!ok) continue;
        std::set<VertexId> s;
        for (std::size_t i = 0; i < n; ++i)
            if ((mask >> i) & 1u) s.insert(verts[i]);
        out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

std::string set_to_string(const std::set<VertexId>& s) {
    std::string out = "{";
    bool first = true;
    for (const auto& v : s) {
        if (!first) out += ",";
        out += v;
        first = false;
    }
    return out + "}";
}

IntMatrix incidence_minus_identity(const Graph& g) {
    IntMatrix a = vertex_matrix(g);
    return a - IntMatrix::identity(a.row_labels());
}

}  // namespace

Verdict wojciech_gap(const SinkExtension& a, const SinkExtension& b, std::size_t sink_index,
                     const std::optional<std::set<VertexId>>& support) {
    Graph base = a.base_graph();
    if (base != b.base_graph()) throw Error("extensions have different base graphs");
    if (sink_index < 1 || sink_index > a.sink_count() || sink_index > b.sink_count())
        throw Error("sink index " + std::to_string(sink_index) + " out of range");

    IntMatrix m = incidence_minus_identity(base);
    IntVector d = wojciech_dense(a, sink_index) - wojciech_dense(b, sink_index);

    std::optional<IntVector> x;
    std::string where = "the image of A - I";
    if (support) {
        for (const auto& v : *support)
            if (!base.has_vertex(v)) throw Error("support vertex '" + v + "' is not in the base");
        x = restricted_membership(m, d, std::vector<std::string>(support->begin(), support->end()));
        where += " over " + set_to_string(*support);
    } else {
        x = image_membership(m, d);
    }
    Verdict v;
    if (x) {
        v.kind = VerdictKind::candidate_found;
        v.candidate = *x;
    } else {
        v.kind = VerdictKind::obstructed;
        v.reason = "gap " + d.to_string() + " is not in " + where;
    }
    return v;
}

namespace {

std::vector<EdgeId> boundary_edges_at(const SinkExtension& ext, const VertexId& w) {
    std::vector<EdgeId> out;
    for (const auto& id : boundary(ext).edges)
        if (ext.graph.edge(id).src == w) out.push_back(id);
    return out;  // sorted: boundary().edges is an ordered set
}

Path repeat_cycle(const Path& gamma, const Int& times) {
    Path out(gamma.anchor());
    for (Int i = 0; i < times; ++i) out = out + gamma;
    return out;
}

std::set<VertexId> path_vertex_set(const Graph& g, const Path& p) {
    auto vs = p.visited(g);
    return std::set<VertexId>(vs.begin(), vs.end());
}

void check_set_reaches(const Graph& core, const std::set<VertexId>& from,
                       const std::set<VertexId>& to, const std::string& what) {
    for (const auto& v : from)
        if (!reaches(core, v, to))
            throw ClassifyError("balance precondition " + what + " fails: " + v +
                                " cannot reach " + set_to_string(to));
}

IntVector cycle_shift(const Graph& core, const Path& gamma, const Int& amount) {
    IntMatrix m = incidence_minus_identity(core);
    IntVector total(core.vertices());
    for (const auto& e : gamma.edges()) total.at(core.edge(e).dst) += 1;
    IntVector shift = m.apply(total);
    for (std::size_t i = 0; i < shift.size(); ++i) shift[i] *= amount;
    return shift;
}

// One iteration of the to-and-fro walk. Either finds a vertex of
// B1 cap B2 with the connecting path from `start`, or a loop mu based at a
// repeated B1 stop together with the path leading to it.
struct WalkOutcome {
    bool common = false;    // case (b)
    VertexId vertex;        // common vertex, resp. s(mu)
    Path to_vertex;         // path from start (beta)
    Path mu;                // case (a) only
};

WalkOutcome alternate_walk(const Graph& core, const VertexId& start,
                           const std::set<VertexId>& b1, const std::set<VertexId>& b2) {
    WalkOutcome out;
    Path beta(start);
    VertexId cur = start;
    std::map<VertexId, std::size_t> stop_pos{{start, 0}};
    for (;;) {
        if (b2.count(cur)) {
            out.common = true;
            out.vertex = cur;
            out.to_vertex = beta;
            return out;
        }
        Path hop2 = find_path(core, cur, b2).value();
        beta = beta + hop2;
        cur = hop2.range(core);
        if (b1.count(cur)) {
            out.common = true;
            out.vertex = cur;
            out.to_vertex = beta;
            return out;
        }
        Path hop1 = find_path(core, cur, b1).value();
        beta = beta + hop1;
        cur = hop1.range(core);
        auto it = stop_pos.find(cur);
        if (it != stop_pos.end()) {
            std::size_t pos = it->second;
            out.common = false;
            out.vertex = cur;
            out.to_vertex = Path(start, std::vector<EdgeId>(beta.edges().begin(),
                                                            beta.edges().begin() + pos));
            out.mu = Path(cur, std::vector<EdgeId>(beta.edges().begin() + pos,
                                                   beta.edges().end()));
            return out;
        }
        stop_pos[cur] = beta.length();
    }
}

Path rotate_cycle_to_end_at(const Graph& g, const Path& mu, const VertexId& target) {
    const auto& edges = mu.edges();
    for (std::size_t k = 0; k < edges.size(); ++k) {
        if (g.edge(edges[k]).dst != target) continue;
        std::vector<EdgeId> rotated(edges.begin() + k + 1, edges.end());
        rotated.insert(rotated.end(), edges.begin(), edges.begin() + k + 1);
        return Path(target, std::move(rotated));
    }
    throw Error("internal: cycle does not pass through " + target);
}

struct CoreBalance {
    SinkExtension a, b;
    MoveTrace ta, tb;
};

// The loop-balancing construction with an explicit "core" graph: the common
// part of the two bases in which gamma, the walks and all split vertices
// live. For plain 1-sink extensions the core is the whole base.
CoreBalance balance_loop_core(const SinkExtension& a0, const SinkExtension& b0, const Path& gamma,
                              const Int& amount, const Graph& core) {
    if (amount == 0) return {a0, b0, {}, {}};
    if (amount < 0) {
        CoreBalance swapped = balance_loop_core(b0, a0, gamma, -amount, core);
        return {swapped.b, swapped.a, swapped.tb, swapped.ta};
    }
    for (const auto& side : {&a0, &b0}) {
        if (side->sink_count() != 1)
            throw ClassifyError("balance requires 1-sink extensions");
        if (!is_tree_extension(*side))
            throw ClassifyError("balance requires tree extensions");
    }
    if (gamma.empty() || !gamma.valid_in(core) ||
        gamma.source(core) != gamma.range(core))
        throw ClassifyError("gamma is not a cycle in the base");

    IntVector shift = cycle_shift(core, gamma, amount);
    if (shift.is_zero()) return {a0, b0, {}, {}};  // full-cycle sums can vanish

    IntVector before = wojciech_dense(a0, 1, core.vertices()) -
                       wojciech_dense(b0, 1, core.vertices());
    IntVector want = before + shift;

    SinkExtension a = a0;
    SinkExtension b = b0;
    MoveTrace ta, tb;

    auto run_chain = [&](SinkExtension& side, MoveTrace& trace, const EdgeId& f, const Path& p) {
        auto [next, moves] = outsplit_along_path(side, f, p);
        side = std::move(next);
        trace.insert(trace.end(), moves.begin(), moves.end());
    };

    // chains gamma^amount + q on the first side and q alone on the second,
    // both ending at a boundary edge over the shared target
    auto finish_at = [&](const VertexId& target, const Path& q) {
        run_chain(a, ta, boundary_edges_at(a, target).front(), repeat_cycle(gamma, amount) + q);
        if (!q.empty()) run_chain(b, tb, boundary_edges_at(b, target).front(), q);
    };

    const int max_rounds = 8;
    bool done = false;
    for (int round = 0; round < max_rounds && !done; ++round) {
        std::set<VertexId> b1 = boundary(a).vertices;
        std::set<VertexId> b2 = boundary(b).vertices;
        for (const auto& v : b1)
            if (!core.has_vertex(v))
                throw ClassifyError("boundary vertex " + v + " lies outside the common core");
        for (const auto& v : b2)
            if (!core.has_vertex(v))
                throw ClassifyError("boundary vertex " + v + " lies outside the common core");
        check_set_reaches(core, path_vertex_set(core, gamma), b1, "gamma >= B1");
        check_set_reaches(core, b1, b2, "B1 >= B2");
        check_set_reaches(core, b2, b1, "B2 >= B1");

        // a boundary vertex of both sides reachable from r(gamma) finishes
        // the construction immediately
        {
            std::optional<VertexId> target;
            for (const auto& v : b1)
                if (b2.count(v) && reaches(core, gamma.range(core), {v})) {
                    target = v;
                    break;
                }
            if (target) {
                finish_at(*target, find_path(core, gamma.range(core), {*target}).value());
                done = true;
                break;
            }
        }

        Path alpha = find_path(core, gamma.range(core), b1).value();
        WalkOutcome walk = alternate_walk(core, alpha.range(core), b1, b2);

        if (walk.common) {
            finish_at(walk.vertex, alpha + walk.to_vertex);
            done = true;
            break;
        }

        // case (a): neutralize the loop mu on both sides first
        const Path& mu = walk.mu;
        auto mu_verts = path_vertex_set(core, mu);
        VertexId z1, z2;
        bool found1 = false, found2 = false;
        for (const auto& z : mu_verts) {
            if (!found1 && b1.count(z)) { z1 = z; found1 = true; }
            if (!found2 && b2.count(z)) { z2 = z; found2 = true; }
        }
        if (!found1 || !found2)
            throw ClassifyError("internal: walk loop misses a boundary set");
        run_chain(a, ta, boundary_edges_at(a, z1).front(), rotate_cycle_to_end_at(core, mu, z1));
        run_chain(b, tb, boundary_edges_at(b, z2).front(), rotate_cycle_to_end_at(core, mu, z2));

        // common boundary target reachable from r(gamma)
        std::set<VertexId> common;
        std::set<VertexId> nb2 = boundary(b).vertices;
        for (const auto& v : boundary(a).vertices)
            if (nb2.count(v) && reaches(core, gamma.range(core), {v})) common.insert(v);
        if (common.empty()) continue;  // boundaries grew; walk again

        // prefer the target the construction promises: the source of beta's
        // last edge, with the shared tail alpha+beta minus that edge
        Path q;
        VertexId target;
        if (!walk.to_vertex.empty()) {
            const EdgeId& last = walk.to_vertex.edges().back();
            VertexId promised = core.edge(last).src;
            if (common.count(promised)) {
                target = promised;
                q = alpha + Path(walk.to_vertex.anchor(),
                                 std::vector<EdgeId>(walk.to_vertex.edges().begin(),
                                                     walk.to_vertex.edges().end() - 1));
            }
        }
        if (target.empty()) {
            target = *common.begin();
            q = find_path(core, gamma.range(core), {target}).value();
        }
        finish_at(target, q);
        done = true;
    }
    if (!done)
        throw ClassifyError(
            "balance: no common boundary target found after repeated loop alignment");

    IntVector after = wojciech_dense(a, 1, core.vertices()) -
                      wojciech_dense(b, 1, core.vertices());
    if (after != want) throw Error("internal: balance changed the gap incorrectly");
    return {a, b, ta, tb};
}

}  // namespace

BalanceResult balance_loop(const SinkExtension& a, const SinkExtension& b, const Path& gamma,
                           const Int& amount) {
    Graph base = a.base_graph();
    if (base != b.base_graph()) throw Error("extensions have different base graphs");
    CoreBalance r = balance_loop_core(a, b, gamma, amount, base);
    return {r.a, r.b, r.ta, r.tb};
}

namespace {

// Least simple cycle in `d` by (length, lexicographic edge sequence).
std::optional<Path> least_simple_cycle(const Graph& d) {
    std::optional<Path> best;
    auto better = [&](const Path& p) {
        if (!best) return true;
        if (p.length() != best->length()) return p.length() < best->length();
        return p.edges() < best->edges();
    };
    for (const auto& start : d.vertices()) {
        std::vector<EdgeId> cur;
        std::set<VertexId> visited;
        auto dfs = [&](auto&& self, const VertexId& v) -> void {
            for (const auto& e : d.out_edges(v)) {
                if (e.dst == start) {
                    cur.push_back(e.id);
                    Path candidate(start, cur);
                    if (better(candidate)) best = candidate;
                    cur.pop_back();
                    continue;
                }
                if (visited.count(e.dst)) continue;
                if (best && cur.size() + 1 >= best->length()) continue;
                visited.insert(e.dst);
                cur.push_back(e.id);
                self(self, e.dst);
                cur.pop_back();
                visited.erase(e.dst);
            }
        };
        dfs(dfs, start);
    }
    return best;
}

Graph induced_subgraph(const Graph& g, const std::set<VertexId>& verts) {
    Graph d;
    for (const auto& v : verts) d.add_vertex(v);
    for (const auto& e : g.edges())
        if (verts.count(e.src) && verts.count(e.dst)) d.add_edge(e.id, e.src, e.dst);
    return d;
}

struct PhaseResult {
    SinkExtension a, b;
    MoveTrace ta, tb;
};

// Shared constructive core of the 1-sink classification: outsplit both sides
// until the Wojciech vectors of the designated (single) sink agree. The
// candidate solves (A_core - I) n = W_a - W_b over the core.
PhaseResult equalize_sink(const SinkExtension& a0, const SinkExtension& b0, const Graph& core,
                          const IntVector& candidate) {
    PhaseResult r;
    MoveTrace& ta = r.ta;
    MoveTrace& tb = r.tb;
    auto [sa, ma] = simplify(a0);
    r.a = std::move(sa);
    ta.push_back(ma);
    auto [sb, mb] = simplify(b0);
    r.b = std::move(sb);
    tb.push_back(mb);

    std::map<VertexId, Int> n;
    for (std::size_t i = 0; i < candidate.size(); ++i)
        if (candidate[i] != 0) n[candidate.labels()[i]] = candidate[i];

    IntMatrix m = incidence_minus_identity(core);
    auto check_gap = [&]() {
        IntVector gap = wojciech_dense(r.a, r.a.sink_count(), core.vertices()) -
                        wojciech_dense(r.b, r.b.sink_count(), core.vertices());
        IntVector nd(core.vertices());
        for (const auto& [v, c] : n) nd.at(v) = c;
        if (gap != m.apply(nd))
            throw Error("internal: gap and candidate drifted apart during equalization");
    };

    while (!n.empty()) {
        check_gap();
        std::size_t support_before = n.size();
        std::set<VertexId> supp;
        for (const auto& [v, c] : n) supp.insert(v);
        Graph d = induced_subgraph(core, supp);
        auto d_sinks = vertex_roles(d).sinks;
        if (!d_sinks.empty()) {
            const VertexId w = *d_sinks.begin();
            Int coeff = n[w];
            SinkExtension& side = (coeff > 0) ? r.b : r.a;
            MoveTrace& trace = (coeff > 0) ? tb : ta;
            Int count = abs(coeff);
            auto edges = boundary_edges_at(side, w);
            if (Int(edges.size()) < count)
                throw Error("internal: not enough boundary edges at " + w);
            for (Int i = 0; i < count; ++i) {
                auto [next, mv] = outsplit(side, edges[static_cast<std::size_t>(i.get_ui())]);
                side = std::move(next);
                trace.push_back(mv);
            }
            n.erase(w);
        } else {
            // D keeps the core's edge ids, so the cycle is a core path as-is.
            // A sink-free finite graph always contains one.
            Path gamma = least_simple_cycle(d).value();
            VertexId pivot = *path_vertex_set(core, gamma).begin();
            Int coeff = n[pivot];
            CoreBalance bal = balance_loop_core(r.a, r.b, gamma, -coeff, core);
            r.a = std::move(bal.a);
            r.b = std::move(bal.b);
            ta.insert(ta.end(), bal.ta.begin(), bal.ta.end());
            tb.insert(tb.end(), bal.tb.begin(), bal.tb.end());
            for (const auto& z : path_vertex_set(core, gamma)) {
                n[z] -= coeff;
                if (n[z] == 0) n.erase(z);
            }
        }
        if (n.size() >= support_before)
            throw Error("internal: the candidate's support did not shrink");
    }
    check_gap();
    return r;
}

std::map<VertexId, Int> last_sink_wojciech(const SinkExtension& ext) {
    return wojciech_vector(ext, ext.sink_count());
}

}  // namespace

Certificate classify_1sink(const SinkExtension& a, const SinkExtension& b, ClassifyMode mode) {
    if (mode == ClassifyMode::nsink) return classify_nsink(a, b);
    Graph base = a.base_graph();
    if (base != b.base_graph()) throw ClassifyError("extensions have different base graphs");
    if (a.sink_count() != 1 || b.sink_count() != 1)
        throw ClassifyError("both inputs must be 1-sink extensions");

    std::optional<std::set<VertexId>> support;
    auto roles = vertex_roles(base);
    switch (mode) {
        case ClassifyMode::essential:
            if (!roles.sources.empty())
                throw ClassifyError("base has a source: " + *roles.sources.begin());
            if (!is_essential(a)) throw ClassifyError("first extension is not essential");
            if (!is_essential(b)) throw ClassifyError("second extension is not essential");
            break;
        case ClassifyMode::af:
            if (!roles.sources.empty())
                throw ClassifyError("base has a source: " + *roles.sources.begin());
            if (has_cycle(base))
                throw ClassifyError("base has a cycle; the af mode needs an acyclic base");
            break;
        case ClassifyMode::closure: {
            if (!same_closure(a, b)) {
                auto c1 = closure_of_sink(a, 1);
                auto c2 = closure_of_sink(b, 1);
                throw ClassifyError("closure mismatch: " + set_to_string(c1) + " vs " +
                                    set_to_string(c2));
            }
            support = closure_of_sink(a, 1);
            break;
        }
        default:
            break;
    }

    Verdict verdict = wojciech_gap(a, b, 1, support);
    if (verdict.kind != VerdictKind::candidate_found)
        throw ClassifyError("no candidate: " + verdict.reason, verdict);

    PhaseResult phase = equalize_sink(a, b, base, *verdict.candidate);
    std::map<VertexId, Int> w = last_sink_wojciech(phase.a);
    if (w != last_sink_wojciech(phase.b))
        throw Error("internal: equalization did not equalize the Wojciech vectors");

    Certificate cert;
    cert.mode = to_string(mode);
    cert.base_hash = graph_hash(base);
    cert.trace1 = std::move(phase.ta);
    cert.trace2 = std::move(phase.tb);
    cert.trace1.push_back(Move::simplify());
    cert.trace2.push_back(Move::simplify());
    cert.f = canonical_simple(base, {w});
    return cert;
}

namespace {

// The last sink of a simple extension viewed as a 1-sink extension of
// everything else.
SinkExtension last_sink_view(const SinkExtension& ext) {
    const VertexId& sink = ext.sinks.back();
    std::set<VertexId> bv;
    for (const auto& v : ext.graph.vertices())
        if (v != sink) bv.insert(v);
    std::set<EdgeId> be;
    for (const auto& e : ext.graph.edges())
        if (e.dst != sink) be.insert(e.id);
    return validate_extension(ext.graph, std::move(bv), std::move(be), {sink});
}

}  // namespace

Certificate classify_nsink(const SinkExtension& a, const SinkExtension& b) {
    Graph base = a.base_graph();
    if (base != b.base_graph()) throw ClassifyError("extensions have different base graphs");
    if (a.sink_count() != b.sink_count())
        throw ClassifyError("sink count mismatch: " + std::to_string(a.sink_count()) + " vs " +
                            std::to_string(b.sink_count()));
    const std::size_t n = a.sink_count();
    if (n == 0) throw ClassifyError("the extensions have no sinks");

    for (std::size_t i = 1; i <= n; ++i) {
        for (const auto& w : a.base_vertices) {
            if (!reaches(a.graph, w, {a.sinks[i - 1]}))
                throw ClassifyError("first extension is not essential at sink " +
                                    std::to_string(i) + ": " + w + " cannot reach it");
            if (!reaches(b.graph, w, {b.sinks[i - 1]}))
                throw ClassifyError("second extension is not essential at sink " +
                                    std::to_string(i) + ": " + w + " cannot reach it");
        }
        Verdict v = wojciech_gap(a, b, i);
        if (v.kind != VerdictKind::candidate_found)
            throw ClassifyError("Wojciech gap at sink " + std::to_string(i) +
                                    " is not in the image of A - I",
                                v);
    }

    if (n == 1) return classify_1sink(a, b, ClassifyMode::essential);

    auto [s1, m1] = simplify(a);
    auto [s2, m2] = simplify(b);
    MoveTrace t1{m1}, t2{m2};

    Certificate sub = classify_nsink(strip_sink(s1), strip_sink(s2));
    SinkExtension l1 = apply_trace(s1, sub.trace1);
    SinkExtension l2 = apply_trace(s2, sub.trace2);
    t1.insert(t1.end(), sub.trace1.begin(), sub.trace1.end());
    t2.insert(t2.end(), sub.trace2.begin(), sub.trace2.end());
    if (!is_simple(l1) || !is_simple(l2) ||
        !canonically_equal(strip_sink(l1), strip_sink(l2)))
        throw Error("internal: the stripped extensions did not reach a common form");

    SinkExtension v1 = last_sink_view(l1);
    SinkExtension v2 = last_sink_view(l2);

    // the closure of the last sink in both views must be the original base
    for (const auto* view : {&v1, &v2}) {
        if (closure_of_sink(*view, 1) !=
            std::set<VertexId>(a.base_vertices.begin(), a.base_vertices.end()))
            throw ClassifyError("the closure of the last sink is not the whole base");
    }

    IntVector d = wojciech_dense(v1, 1, base.vertices()) - wojciech_dense(v2, 1, base.vertices());
    auto candidate = image_membership(incidence_minus_identity(base), d);
    if (!candidate) throw Error("internal: the lifted gap left the image of A - I");

    PhaseResult phase = equalize_sink(v1, v2, base, *candidate);
    SinkExtension f1 = apply_trace(l1, phase.ta);
    SinkExtension f2 = apply_trace(l2, phase.tb);
    t1.insert(t1.end(), phase.ta.begin(), phase.ta.end());
    t2.insert(t2.end(), phase.tb.begin(), phase.tb.end());

    std::vector<std::map<VertexId, Int>> ws;
    for (std::size_t i = 1; i <= n; ++i) {
        auto w1 = wojciech_vector(f1, i);
        if (w1 != wojciech_vector(f2, i))
            throw Error("internal: Wojciech vectors differ at sink " + std::to_string(i));
        ws.push_back(std::move(w1));
    }

    Certificate cert;
    cert.mode = "nsink";
    cert.base_hash = graph_hash(base);
    t1.push_back(Move::simplify());
    t2.push_back(Move::simplify());
    cert.trace1 = std::move(t1);
    cert.trace2 = std::move(t2);
    cert.f = canonical_simple(base, ws);
    return cert;
}

AbelianGroup k0_presentation(const SinkExtension& ext) {
    if (ext.sink_count() != 1) throw Error("K0 presentation requires a 1-sink extension");
    Graph base = ext.base_graph();
    auto roles = vertex_roles(base);
    if (!roles.sinks.empty())
        throw Error("K0 presentation requires a sink-free base; " + *roles.sinks.begin() +
                    " is a sink");
    IntMatrix at = vertex_matrix(base).transposed();
    IntMatrix m = (at - IntMatrix::identity(at.row_labels())).with_row("#W", wojciech_dense(ext, 1));
    return cokernel(m);
}

Verdict embedding_obstruction(const SinkExtension& a, const SinkExtension& b) {
    Graph base = a.base_graph();
    if (base != b.base_graph()) throw Error("extensions have different base graphs");
    if (a.sink_count() != 1 || b.sink_count() != 1)
        throw Error("the obstruction test is defined for 1-sink extensions");
    auto roles = vertex_roles(base);
    if (!roles.sinks.empty())
        throw Error("the obstruction test requires a sink-free base; " + *roles.sinks.begin() +
                    " is a sink");

    IntMatrix am = vertex_matrix(base);
    auto kernel = kernel_basis(am.transposed() - IntMatrix::identity(am.row_labels()));
    IntVector w1 = wojciech_dense(a, 1);
    IntVector w2 = wojciech_dense(b, 1);
    bool hyp = true;
    for (const auto& k : kernel)
        if (dot(w1, k) != 0 || dot(w2, k) != 0) hyp = false;

    IntVector d = w1 - w2;
    auto x = image_membership(am - IntMatrix::identity(am.row_labels()), d);

    Verdict v;
    v.hypothesis_ok = hyp;
    if (x) {
        v.kind = VerdictKind::candidate_found;
        v.candidate = *x;
        if (!hyp)
            v.reason = "a Wojciech vector is not orthogonal to ker(A^t - I), so membership "
                       "was not forced";
    } else if (hyp) {
        v.kind = VerdictKind::obstructed;
        v.reason = "gap " + d.to_string() +
                   " is not in the image of A - I; no common extension embeds in both";
    } else {
        v.kind = VerdictKind::inconclusive;
        v.reason = "gap is outside the image, but ker(A^t - I) is nontrivial and not "
                   "orthogonal to the Wojciech vectors";
    }
    return v;
}

namespace {

// Wojciech change of a single outsplit on a 1-sink tree extension.
bool outsplit_respects_law(const SinkExtension& before, const SinkExtension& after,
                           const std::vector<VertexId>& split_sources) {
    Graph base = before.base_graph();
    IntMatrix m = incidence_minus_identity(base);
    IntVector expected = wojciech_dense(before, 1);
    for (const auto& v : split_sources) {
        IntVector delta(base.vertices());
        delta.at(v) = 1;
        expected += m.apply(delta);
    }
    return wojciech_dense(after, 1) == expected;
}

}  // namespace

VerifyResult verify_certificate(const Certificate& cert, const SinkExtension& a,
                                const SinkExtension& b) {
    auto fail = [](std::string why) { return VerifyResult{false, std::move(why)}; };
    try {
        Graph base = a.base_graph();
        if (base != b.base_graph()) return fail("inputs have different base graphs");
        if (graph_hash(base) != cert.base_hash)
            return fail("certificate was issued for a different base graph");

        auto replay = [&](const SinkExtension& start, const MoveTrace& trace,
                          const char* which) -> std::variant<SinkExtension, VerifyResult> {
            SinkExtension cur = start;
            for (std::size_t i = 0; i < trace.size(); ++i) {
                const Move& mv = trace[i];
                bool check_law = cur.sink_count() == 1 &&
                                 (mv.kind == Move::Kind::outsplit ||
                                  mv.kind == Move::Kind::outsplit_along_path) &&
                                 is_tree_extension(cur);
                std::vector<VertexId> split_sources;
                if (check_law) {
                    if (!cur.graph.has_edge(mv.edge))
                        return fail(std::string(which) + ": move " + std::to_string(i + 1) +
                                    " references unknown edge " + mv.edge);
                    if (mv.kind == Move::Kind::outsplit || mv.along.empty()) {
                        split_sources.push_back(cur.graph.edge(mv.edge).src);
                    } else {
                        for (const auto& e : mv.along.edges())
                            split_sources.push_back(cur.graph.edge(e).dst);
                    }
                }
                SinkExtension next = cur;
                try {
                    next = apply_move(cur, mv);
                } catch (const Error& e) {
                    return fail(std::string(which) + ": move " + std::to_string(i + 1) + " (" +
                                mv.to_string() + ") failed: " + e.what());
                }
                if (check_law && !outsplit_respects_law(cur, next, split_sources))
                    return fail(std::string(which) + ": move " + std::to_string(i + 1) +
                                " violates the outsplit Wojciech law");
                cur = std::move(next);
            }
            return cur;
        };

        auto r1 = replay(a, cert.trace1, "trace 1");
        if (std::holds_alternative<VerifyResult>(r1)) return std::get<VerifyResult>(r1);
        auto r2 = replay(b, cert.trace2, "trace 2");
        if (std::holds_alternative<VerifyResult>(r2)) return std::get<VerifyResult>(r2);
        const SinkExtension& e1 = std::get<SinkExtension>(r1);
        const SinkExtension& e2 = std::get<SinkExtension>(r2);

        if (e1.sink_count() != e2.sink_count() || e1.sink_count() != cert.f.sink_count())
            return fail("sink counts disagree after replay");
        for (std::size_t i = 1; i <= e1.sink_count(); ++i)
            if (wojciech_vector(e1, i) != wojciech_vector(e2, i))
                return fail("Wojciech vectors differ at sink " + std::to_string(i));
        if (!canonically_equal(simplify(e1).first, cert.f))
            return fail("trace 1 does not lead to F");
        if (!canonically_equal(simplify(e2).first, cert.f))
            return fail("trace 2 does not lead to F");
        return VerifyResult{true, ""};
    } catch (const Error& e) {
        return fail(std::string("verification error: ") + e.what());
    }
}

std::uint64_t graph_hash(const Graph& g) {
    std::string text = serialize(g);
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

namespace {

std::string hash_hex(std::uint64_t h) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

}  // namespace

std::string serialize(const Certificate& cert) {
    std::ostringstream os;
    os << "sinkx-cert 1\n";
    os << "mode " << cert.mode << "\n";
    os << "base " << hash_hex(cert.base_hash) << "\n";
    for (int t = 1; t <= 2; ++t) {
        os << "trace " << t << "\n";
        for (const auto& mv : (t == 1 ? cert.trace1 : cert.trace2)) os << mv.to_string() << "\n";
        os << "end\n";
    }
    os << "extension\n" << serialize(cert.f) << "end\n";
    return os.str();
}

Certificate parse_certificate(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    auto next_tokens = [&](std::vector<std::string>& tok) -> bool {
        tok.clear();
        while (std::getline(in, line)) {
            ++lineno;
            std::istringstream ls(line);
            std::string t;
            while (ls >> t) tok.push_back(t);
            if (!tok.empty()) return true;
        }
        return false;
    };

    std::vector<std::string> tok;
    if (!next_tokens(tok) || tok.size() != 2 || tok[0] != "sinkx-cert" || tok[1] != "1")
        throw ParseError(lineno, "expected 'sinkx-cert 1' header");
    Certificate cert;
    if (!next_tokens(tok) || tok.size() != 2 || tok[0] != "mode")
        throw ParseError(lineno, "expected 'mode <mode>'");
    cert.mode = tok[1];
    if (!next_tokens(tok) || tok.size() != 2 || tok[0] != "base" || tok[1].size() != 16)
        throw ParseError(lineno, "expected 'base <hash>'");
    try {
        cert.base_hash = std::stoull(tok[1], nullptr, 16);
    } catch (const std::exception&) {
        throw ParseError(lineno, "malformed base hash '" + tok[1] + "'");
    }

    for (int t = 1; t <= 2; ++t) {
        if (!next_tokens(tok) || tok.size() != 2 || tok[0] != "trace" ||
            tok[1] != std::to_string(t))
            throw ParseError(lineno, "expected 'trace " + std::to_string(t) + "'");
        MoveTrace& trace = (t == 1) ? cert.trace1 : cert.trace2;
        for (;;) {
            if (!next_tokens(tok)) throw ParseError(lineno, "unterminated trace");
            if (tok.size() == 1 && tok[0] == "end") break;
            if (tok[0] == "outsplit" && tok.size() == 2) {
                trace.push_back(Move::outsplit(tok[1]));
            } else if (tok[0] == "outsplit-along" && tok.size() >= 3 && tok[2].size() > 1 &&
                       tok[2][0] == '@') {
                Path along(tok[2].substr(1),
                           std::vector<EdgeId>(tok.begin() + 3, tok.end()));
                trace.push_back(Move::outsplit_along_path(tok[1], along));
            } else if (tok[0] == "simplify" && tok.size() == 1) {
                trace.push_back(Move::simplify());
            } else if (tok[0] == "star" && tok.size() % 2 == 1) {
                std::map<VertexId, Int> m;
                for (std::size_t i = 1; i + 1 < tok.size(); i += 2)
                    m[tok[i]] = Int(tok[i + 1]);
                trace.push_back(Move::star(std::move(m)));
            } else {
                throw ParseError(lineno, "unrecognized move '" + line + "'");
            }
        }
    }

    if (!next_tokens(tok) || tok.size() != 1 || tok[0] != "extension")
        throw ParseError(lineno, "expected 'extension'");
    std::string ext_text;
    for (;;) {
        if (!std::getline(in, line)) throw ParseError(lineno, "unterminated extension block");
        ++lineno;
        if (line == "end") break;
        ext_text += line + "\n";
    }
    cert.f = parse_extension(ext_text);
    return cert;
}

}  // namespace sinkx

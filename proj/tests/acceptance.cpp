// Acceptance suite: one check per criterion, each printed as a PASS/FAIL
// line. Exits nonzero when any criterion fails. --seed N reseeds the
// randomized suites.

#include <cstring>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "sinkx/classify.hpp"
#include "sinkx/extension.hpp"
#include "sinkx/fixtures.hpp"
#include "sinkx/graph.hpp"
#include "sinkx/intlattice.hpp"
#include "support.hpp"

using namespace sinkx;
using testsupport::Rng;

namespace {

std::uint64_t g_seed = 20240811ull;

struct Checker {
    bool ok = true;
    std::string failure;

    void expect(bool cond, const std::string& what) {
        if (!cond && ok) failure = what;
        ok = ok && cond;
    }
};

IntMatrix a_minus_i(const Graph& g) {
    IntMatrix a = vertex_matrix(g);
    return a - IntMatrix::identity(a.row_labels());
}

// ---- criterion 1: vertex matrix, Wojciech vectors, membership ----
void criterion_1(Checker& c) {
    IntMatrix a = vertex_matrix(fixture_graph("G_ex26"));
    c.expect(a.at(0, 0) == 2 && a.at(0, 1) == 1 && a.at(1, 0) == 0 && a.at(1, 1) == 2,
             "vertex matrix of G_ex26 is not [[2,1],[0,2]]");

    auto w1 = wojciech_vector(fixture_extension("E1_ex26"), 1);
    auto w2 = wojciech_vector(fixture_extension("E2_ex26"), 1);
    c.expect(w1 == std::map<VertexId, Int>{{"w1", 1}}, "W(E1_ex26) != (1,0)");
    c.expect(w2 == std::map<VertexId, Int>{{"w2", 1}}, "W(E2_ex26) != (0,1)");

    IntVector d = wojciech_dense(fixture_extension("E1_ex26"), 1) -
                  wojciech_dense(fixture_extension("E2_ex26"), 1);
    auto n = image_membership(a_minus_i(fixture_graph("G_ex26")), d);
    c.expect(n.has_value(), "gap is not in the image");
    if (n) c.expect(n->at("w1") == 2 && n->at("w2") == -1, "solution is not (2,-1)");
}

// ---- criterion 2: ideal lattices of the pinned pair ----
void criterion_2(Checker& c) {
    auto subsets1 = saturated_hereditary_subsets(fixture_extension("E1_ex26").graph);
    std::vector<std::set<VertexId>> nonempty1;
    for (const auto& s : subsets1)
        if (!s.empty()) nonempty1.push_back(s);
    std::vector<std::set<VertexId>> want1 = {
        {"v1"}, {"v1", "w1", "w2"}, {"v1", "w2"}, {"w2"}};
    c.expect(nonempty1 == want1, "saturated hereditary subsets of E1_ex26 differ");

    auto subsets2 = saturated_hereditary_subsets(fixture_extension("E2_ex26").graph);
    std::vector<std::set<VertexId>> nonempty2;
    for (const auto& s : subsets2)
        if (!s.empty()) nonempty2.push_back(s);
    std::vector<std::set<VertexId>> want2 = {{"v2"}, {"v2", "w1", "w2"}, {"v2", "w2"}};
    c.expect(nonempty2 == want2, "saturated hereditary subsets of E2_ex26 differ");

    c.expect(nonempty1.size() > nonempty2.size(), "E1 does not have strictly more ideals");
}

// ---- criterion 3: essentiality, closures, closure-mode refusal ----
void criterion_3(Checker& c) {
    c.expect(is_essential(fixture_extension("E2_ex26")), "E2_ex26 should be essential");
    c.expect(!is_essential(fixture_extension("E1_ex26")), "E1_ex26 should not be essential");
    c.expect(closure_of_sink(fixture_extension("E1_ex26"), 1) == std::set<VertexId>{"w1"},
             "closure of v1 is not {w1}");
    c.expect(closure_of_sink(fixture_extension("E2_ex26"), 1) ==
                 std::set<VertexId>{"w1", "w2"},
             "closure of v2 is not {w1,w2}");
    try {
        classify_1sink(fixture_extension("E1_ex26"), fixture_extension("E2_ex26"),
                       ClassifyMode::closure);
        c.expect(false, "closure mode accepted a closure mismatch");
    } catch (const ClassifyError& e) {
        c.expect(std::string(e.what()).find("closure mismatch") != std::string::npos,
                 "refusal lacks the closure-mismatch diagnosis");
    }
}

// ---- criterion 4: the constructive pipeline on the intro pair ----
void criterion_4(Checker& c) {
    auto e1 = fixture_extension("E1_intro");
    auto e2 = fixture_extension("E2_intro");
    Certificate cert = classify_1sink(e1, e2, ClassifyMode::essential);
    c.expect(wojciech_vector(cert.f, 1) ==
                 std::map<VertexId, Int>{{"w1", 1}, {"w2", 1}, {"w3", 2}},
             "common Wojciech vector is not (1,1,2)");
    VerifyResult check = verify_certificate(cert, e1, e2);
    c.expect(check.ok, "certificate does not verify: " + check.diagnosis);

    auto f = fixture_extension("F_intro");
    c.expect(wojciech_vector(f, 1) == std::map<VertexId, Int>{{"w1", 2}, {"w3", 3}},
             "W(F_intro) != (2,0,3)");
    IntMatrix m = a_minus_i(e1.base_graph());
    c.expect(image_membership(m, wojciech_dense(f, 1) - wojciech_dense(e1, 1)).has_value(),
             "W(F_intro) - W(E1_intro) is not in the image");
    c.expect(image_membership(m, wojciech_dense(f, 1) - wojciech_dense(e2, 1)).has_value(),
             "W(F_intro) - W(E2_intro) is not in the image");
}

// ---- criterion 5: one-step and along-path Wojciech laws, randomized ----
void criterion_5(Checker& c) {
    Rng rng(g_seed + 5);
    for (int trial = 0; trial < 200 && c.ok; ++trial) {
        Graph base = testsupport::random_strongly_connected(rng, 8, 10, 3);
        std::set<VertexId> all = base.vertex_set();
        SinkExtension ext = canonical_simple(base, {testsupport::random_w(rng, all, 3)});
        ext = testsupport::random_outsplits(rng, ext, testsupport::rand_int(rng, 0, 3));
        c.expect(is_tree_extension(ext), "generated extension is not a tree extension");

        auto edges = testsupport::admissible_boundary_edges(ext);
        c.expect(!edges.empty(), "no admissible boundary edge");
        if (!c.ok) break;
        EdgeId e = edges[static_cast<std::size_t>(
            testsupport::rand_int(rng, 0, static_cast<int>(edges.size()) - 1))];
        VertexId src = ext.graph.edge(e).src;
        auto [split, mv] = outsplit(ext, e);
        c.expect(wojciech_dense(split, 1) ==
                     wojciech_dense(ext, 1) + testsupport::outsplit_delta(base, src),
                 "one-step Wojciech law failed");

        // along a random base path into the same boundary edge
        int len = testsupport::rand_int(rng, 0, 3);
        std::vector<EdgeId> alpha_edges;
        VertexId cur = src;
        for (int i = 0; i < len; ++i) {
            auto in = base.in_edges(cur);
            if (in.empty()) break;
            const auto& pick = in[static_cast<std::size_t>(
                testsupport::rand_int(rng, 0, static_cast<int>(in.size()) - 1))];
            alpha_edges.insert(alpha_edges.begin(), pick.id);
            cur = pick.src;
        }
        Path alpha(cur, alpha_edges);
        auto [chained, trace] = outsplit_along_path(ext, e, alpha);
        IntVector expected = wojciech_dense(ext, 1);
        if (alpha.empty()) {
            expected += testsupport::outsplit_delta(base, src);
        } else {
            for (const auto& a : alpha.edges())
                expected += testsupport::outsplit_delta(base, base.edge(a).dst);
        }
        c.expect(wojciech_dense(chained, 1) == expected, "along-path Wojciech law failed");
    }
}

// ---- criterion 6: exact integer lattice suite ----
void criterion_6(Checker& c) {
    Rng rng(g_seed + 6);
    for (int trial = 0; trial < 500 && c.ok; ++trial) {
        std::size_t r = static_cast<std::size_t>(testsupport::rand_int(rng, 1, 6));
        std::size_t k = static_cast<std::size_t>(testsupport::rand_int(rng, 1, 6));
        IntMatrix a = testsupport::random_matrix(rng, r, k, -9, 9);
        SmithDecomposition snf = smith_normal_form(a);
        c.expect(snf.u * a * snf.v == snf.d, "U*A*V != D");
        c.expect(abs(determinant(snf.u)) == 1 && abs(determinant(snf.v)) == 1,
                 "U or V is not unimodular");
        std::size_t rank = 0;
        bool chain = true;
        for (std::size_t i = 0; i < std::min(snf.d.rows(), snf.d.cols()); ++i) {
            for (std::size_t j = 0; j < snf.d.cols(); ++j)
                if (i != j && snf.d.at(i, j) != 0) chain = false;
            if (snf.d.at(i, i) < 0) chain = false;
            if (snf.d.at(i, i) != 0) {
                if (i != rank) chain = false;  // zeros must come last
                ++rank;
                if (i > 0 && snf.d.at(i - 1, i - 1) != 0 &&
                    snf.d.at(i, i) % snf.d.at(i - 1, i - 1) != 0)
                    chain = false;
            }
        }
        c.expect(chain, "diagonal is not a divisibility chain");
    }
    for (int trial = 0; trial < 200 && c.ok; ++trial) {
        IntMatrix a = testsupport::random_matrix(rng, 4, 4, -3, 3);
        IntVector d(abstract_labels(4));
        if (trial % 2 == 0) {
            IntVector x(abstract_labels(4));
            for (std::size_t j = 0; j < 4; ++j) x[j] = testsupport::rand_int(rng, -2, 2);
            d = a.apply(x);
        } else {
            for (std::size_t i = 0; i < 4; ++i) d[i] = testsupport::rand_int(rng, -4, 4);
        }
        auto mine = image_membership(a, d);
        auto oracle = testsupport::brute_force_membership(a, d, 3);
        if (oracle)
            c.expect(mine.has_value(), "solver missed a solution the oracle found");
        if (mine) c.expect(a.apply(*mine) == d, "solver returned a non-solution");
        auto restricted = restricted_membership(a, d, a.col_labels());
        c.expect(restricted.has_value() == mine.has_value(),
                 "full-support restriction disagrees with plain membership");
    }
}

// ---- criterion 7: move algebra ----
void criterion_7(Checker& c) {
    Rng rng(g_seed + 7);
    for (int trial = 0; trial < 100 && c.ok; ++trial) {
        Graph base = testsupport::random_strongly_connected(rng, 6, 8);
        std::set<VertexId> all = base.vertex_set();
        int sinks = testsupport::rand_int(rng, 1, 2);
        std::vector<std::map<VertexId, Int>> ws;
        for (int i = 0; i < sinks; ++i) ws.push_back(testsupport::random_w(rng, all, 2));
        SinkExtension ext = canonical_simple(base, ws);
        ext = testsupport::random_outsplits(rng, ext, testsupport::rand_int(rng, 0, 2));

        std::set<VertexId> listed(ext.sinks.begin(), ext.sinks.end());
        c.expect(saturation(ext, listed) == ext.ext_vertices(),
                 "saturating the sinks does not recover H");

        auto m = testsupport::random_w(rng, all, 2);
        c.expect(canonically_equal(simplify(star(ext, m)).first,
                                   star(simplify(ext).first, m)),
                 "simplify does not commute with star");
        auto edges = testsupport::admissible_boundary_edges(ext);
        if (!edges.empty()) {
            const EdgeId& e = edges[static_cast<std::size_t>(
                testsupport::rand_int(rng, 0, static_cast<int>(edges.size()) - 1))];
            c.expect(canonically_equal(star(outsplit(ext, e).first, m),
                                       outsplit(star(ext, m), e).first),
                     "outsplit does not commute with star");
        }
        SinkExtension s = simplify(ext).first;
        c.expect(canonically_equal(simplify(s).first, s), "simplify is not idempotent");
    }
}

// ---- criterion 8: closure stability under moves ----
void criterion_8(Checker& c) {
    Rng rng(g_seed + 8);
    int done = 0;
    while (done < 100 && c.ok) {
        Graph base = testsupport::random_digraph(rng, 6, 25);
        auto roles = vertex_roles(base);
        std::set<VertexId> eligible;
        for (const auto& v : base.vertices())
            if (!roles.sinks.count(v)) eligible.insert(v);
        if (eligible.empty()) continue;
        SinkExtension ext = canonical_simple(base, {testsupport::random_w(rng, eligible, 2)});
        ext = testsupport::random_outsplits(rng, ext, testsupport::rand_int(rng, 0, 2));
        auto closure = closure_of_sink(ext, 1);
        c.expect(closure_of_sink(simplify(ext).first, 1) == closure,
                 "closure changed under simplification");
        auto edges = testsupport::admissible_boundary_edges(ext);
        if (!edges.empty()) {
            EdgeId e = edges[static_cast<std::size_t>(
                testsupport::rand_int(rng, 0, static_cast<int>(edges.size()) - 1))];
            c.expect(closure_of_sink(outsplit(ext, e).first, 1) == closure,
                     "closure changed under an outsplit");
        }
        ++done;
    }
}

// ---- criterion 9: K0 presentations and their invariance ----
void criterion_9(Checker& c) {
    AbelianGroup g1 = k0_presentation(fixture_extension("E1_ex26"));
    AbelianGroup g2 = k0_presentation(fixture_extension("E2_ex26"));
    c.expect(g1.free_rank == 1 && g1.torsion.empty(), "K0(E1_ex26) != Z");
    c.expect(g1 == g2, "K0 of the pinned pair differ");

    auto e1 = fixture_extension("E1_intro");
    auto e2 = fixture_extension("E2_intro");
    Certificate cert = classify_1sink(e1, e2, ClassifyMode::essential);
    for (int side = 0; side < 2 && c.ok; ++side) {
        SinkExtension cur = side == 0 ? e1 : e2;
        AbelianGroup expected = k0_presentation(cur);
        for (const auto& mv : (side == 0 ? cert.trace1 : cert.trace2)) {
            cur = apply_move(cur, mv);
            c.expect(k0_presentation(cur) == expected,
                     "K0 changed along the emitted trace");
        }
    }
}

// ---- criterion 10: the necessity test ----
void criterion_10(Checker& c) {
    Verdict v = embedding_obstruction(fixture_extension("o3_w1"), fixture_extension("o3_w2"));
    c.expect(v.kind == VerdictKind::obstructed, "the parity pair is not obstructed");

    Rng rng(g_seed + 10);
    int done = 0;
    while (done < 50 && c.ok) {
        Graph base = testsupport::random_strongly_connected(rng, 6, 8);
        IntMatrix at = vertex_matrix(base).transposed();
        if (!kernel_basis(at - IntMatrix::identity(at.row_labels())).empty()) continue;
        std::set<VertexId> all = base.vertex_set();
        SinkExtension f0 = canonical_simple(base, {testsupport::random_w(rng, all, 2)});
        SinkExtension e1 = testsupport::random_moves(rng, f0, testsupport::rand_int(rng, 0, 4));
        SinkExtension e2 = testsupport::random_moves(rng, f0, testsupport::rand_int(rng, 0, 4));
        Verdict gap = wojciech_gap(e1, e2, 1);
        c.expect(gap.kind == VerdictKind::candidate_found,
                 "a common-ancestor pair lost gap membership");
        ++done;
    }
}

// ---- criterion 11: n-sink classification ----
void criterion_11(Checker& c) {
    Rng rng(g_seed + 11);
    for (int trial = 0; trial < 25 && c.ok; ++trial) {
        Graph base = testsupport::random_strongly_connected(rng, 5, 6);
        std::set<VertexId> all = base.vertex_set();
        auto w1 = testsupport::random_w(rng, all, 2);
        auto w2 = testsupport::random_w(rng, all, 2);
        SinkExtension f0 = canonical_simple(base, {w1, w2});
        SinkExtension a = testsupport::random_moves(rng, f0, testsupport::rand_int(rng, 0, 3));
        SinkExtension b = testsupport::random_moves(rng, f0, testsupport::rand_int(rng, 0, 3));
        for (std::size_t i = 1; i <= 2; ++i)
            c.expect(wojciech_gap(a, b, i).kind == VerdictKind::candidate_found,
                     "generated pair misses the gap hypothesis");
        if (!c.ok) break;
        try {
            Certificate cert = classify_nsink(a, b);
            VerifyResult check = verify_certificate(cert, a, b);
            c.expect(check.ok, "n-sink certificate rejected: " + check.diagnosis);
        } catch (const Error& e) {
            c.expect(false, std::string("n-sink classification failed: ") + e.what());
        }
    }

    // mismatched sink counts are rejected
    Graph base = fixture_graph("G_intro");
    auto two = canonical_simple(base, {{{"w1", 1}}, {{"w2", 1}}});
    auto one = canonical_simple(base, {{{"w1", 1}}});
    try {
        classify_nsink(two, one);
        c.expect(false, "mismatched sink counts were accepted");
    } catch (const ClassifyError&) {
    }
}

}  // namespace

int main(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc)
            g_seed = std::strtoull(argv[++i], nullptr, 10);
    }

    struct Entry {
        int id;
        const char* label;
        std::function<void(Checker&)> run;
    };
    std::vector<Entry> entries = {
        {1, "vertex matrix, Wojciech vectors and gap solution of the two-vertex pair",
         criterion_1},
        {2, "ideal lattices of the two-vertex pair", criterion_2},
        {3, "essentiality, closures and the closure-mode refusal", criterion_3},
        {4, "constructive pipeline on the three-vertex pair", criterion_4},
        {5, "outsplit Wojciech laws on 200 random tree extensions", criterion_5},
        {6, "Smith decomposition and membership suites", criterion_6},
        {7, "move algebra on 100 random instances", criterion_7},
        {8, "closure stability on 100 random instances", criterion_8},
        {9, "K0 presentations and trace invariance", criterion_9},
        {10, "necessity: parity obstruction and 50 solvable-gap pairs", criterion_10},
        {11, "n-sink classification on 25 random pairs", criterion_11},
    };

    int failures = 0;
    for (auto& e : entries) {
        Checker c;
        try {
            e.run(c);
        } catch (const std::exception& ex) {
            c.expect(false, std::string("exception: ") + ex.what());
        }
        if (c.ok) {
            std::cout << "[PASS] criterion " << e.id << ": " << e.label << "\n";
        } else {
            std::cout << "[FAIL] criterion " << e.id << ": " << e.label << " -- " << c.failure
                      << "\n";
            ++failures;
        }
    }
    if (failures) std::cout << failures << " criterion(s) failed\n";
    return failures == 0 ? 0 : 1;
}

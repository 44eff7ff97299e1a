#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "sinkx/extension.hpp"
#include "sinkx/graph.hpp"
#include "sinkx/intlattice.hpp"

namespace sinkx {

/// Replayable witness that two extensions reach a common simple extension F:
/// apply_trace(E1, trace1) and apply_trace(E2, trace2) have equal Wojciech
/// vectors and both simplify to F (up to canonical renaming).
struct Certificate {
    std::string mode;  // essential | closure | af | nsink
    std::uint64_t base_hash = 0;
    MoveTrace trace1;
    MoveTrace trace2;
    SinkExtension f;
};

enum class VerdictKind { candidate_found, obstructed, inconclusive };

struct Verdict {
    VerdictKind kind = VerdictKind::inconclusive;
    std::optional<IntVector> candidate;
    std::string reason;
    /// Whether the hypothesis backing a non-membership obstruction was
    /// verified. Obstructions are only ever claimed when it holds.
    bool hypothesis_ok = true;

    std::string to_string() const;
};

/// Classification refusals carry the diagnostic verdict when one applies.
class ClassifyError : public Error {
public:
    explicit ClassifyError(const std::string& message) : Error(message) {}
    ClassifyError(const std::string& message, Verdict verdict)
        : Error(message), verdict_(std::move(verdict)) {}
    const std::optional<Verdict>& verdict() const { return verdict_; }

private:
    std::optional<Verdict> verdict_;
};

/// Maximal tails of a 1-sink extension together with the down-sets of its
/// sinks; carries the specialization topology.
struct TailFamily {
    struct Member {
        std::string name;          // "tail" or "sink <v>"
        std::set<VertexId> verts;  // the tail, resp. lambda_v = {w : w >= v}
    };
    std::vector<Member> members;

    /// Indices of the members in the closure of the given member subset:
    /// those whose every vertex reaches the union of the subset.
    std::vector<std::size_t> closure(const Graph& e, const std::vector<std::size_t>& subset) const;
};

/// Every base vertex reaches every sink.
bool is_essential(const SinkExtension& ext);

/// Union of the maximal tails of the base that reach sink i (in E).
/// Equals the whole base exactly when the extension is essential at i.
std::set<VertexId> closure_of_sink(const SinkExtension& ext, std::size_t sink_index);

/// Closures of the single sinks agree. Requires the same base graph.
bool same_closure(const SinkExtension& a, const SinkExtension& b);

TailFamily prim_skeleton(const SinkExtension& ext);

/// All hereditary and saturated vertex subsets, including the empty set and
/// the full vertex set, sorted canonically.
std::vector<std::set<VertexId>> saturated_hereditary_subsets(const Graph& g,
                                                             std::size_t bound = 20);

/// Membership of the Wojciech gap W1 - W2 (sink i) in the image of A - I
/// over the base, optionally with the solution support restricted.
Verdict wojciech_gap(const SinkExtension& a, const SinkExtension& b, std::size_t sink_index,
                     const std::optional<std::set<VertexId>>& support = std::nullopt);

struct BalanceResult {
    SinkExtension first;
    SinkExtension second;
    MoveTrace trace1;
    MoveTrace trace2;
};

/// Shifts the Wojciech gap of two 1-sink tree extensions by
/// a * sum_j (A-I) delta_{r(gamma_j)} using boundary outsplittings only.
/// gamma must be a cycle in the base with gamma >= B1 and B1 >= B2 >= B1.
BalanceResult balance_loop(const SinkExtension& a, const SinkExtension& b, const Path& gamma,
                           const Int& amount);

enum class ClassifyMode { essential, closure, af, nsink };

ClassifyMode classify_mode_from_string(const std::string& s);
std::string to_string(ClassifyMode mode);

/// Constructive classification of two 1-sink extensions of the same base.
/// Emits a certificate whose traces consist of boundary outsplittings and
/// simplifications.
Certificate classify_1sink(const SinkExtension& a, const SinkExtension& b, ClassifyMode mode);

/// Classification of two essential n-sink extensions of the same base whose
/// Wojciech gaps all lie in im(A - I).
Certificate classify_nsink(const SinkExtension& a, const SinkExtension& b);

/// Cokernel of the stacked matrix [A^t - I ; W^t] over the base. Requires a
/// 1-sink extension of a sink-free base.
AbelianGroup k0_presentation(const SinkExtension& ext);

/// Necessity test over a sink-free base: when ker(A^t - I) is trivial (or
/// both Wojciech vectors are orthogonal to it), gap membership is necessary
/// for a common target, so non-membership is a verified obstruction.
Verdict embedding_obstruction(const SinkExtension& a, const SinkExtension& b);

struct VerifyResult {
    bool ok = false;
    std::string diagnosis;
};

/// Replays both traces, validating every intermediate extension, re-deriving
/// each outsplit's Wojciech change on tree extensions, and checking the
/// final Wojciech equality and canonical equality with F.
VerifyResult verify_certificate(const Certificate& cert, const SinkExtension& a,
                                const SinkExtension& b);

std::uint64_t graph_hash(const Graph& g);

std::string serialize(const Certificate& cert);
Certificate parse_certificate(std::string_view text);

}  // namespace sinkx

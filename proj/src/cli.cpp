#include "sinkx/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "sinkx/classify.hpp"
#include "sinkx/extension.hpp"
#include "sinkx/fixtures.hpp"
#include "sinkx/graph.hpp"

namespace sinkx::cli {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(0, "cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

enum class FileKind { graph, extension };

FileKind sniff_kind(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
        std::istringstream ls(line);
        std::vector<std::string> tok;
        std::string t;
        while (ls >> t) tok.push_back(t);
        if (tok.empty()) continue;
        if (tok[0] == "sink") return FileKind::extension;
        if (tok[0] == "v") return tok.size() >= 3 ? FileKind::extension : FileKind::graph;
        if (tok[0] == "e") return tok.size() >= 5 ? FileKind::extension : FileKind::graph;
    }
    return FileKind::graph;
}

/// Extension files load as-is; plain graph files become 0-sink extensions.
SinkExtension load_extension(const std::string& path) {
    std::string text = read_file(path);
    if (sniff_kind(text) == FileKind::extension) return parse_extension(text);
    return as_zero_sink_extension(parse_graph(text));
}

std::string vector_report(const std::string& prefix, const IntVector& v) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i)
        os << prefix << "[" << v.labels()[i] << "] = " << v[i] << "\n";
    return os.str();
}

std::string set_report(const std::set<VertexId>& s) {
    std::string out = "{";
    bool first = true;
    for (const auto& v : s) {
        if (!first) out += ",";
        out += v;
        first = false;
    }
    return out + "}";
}

std::map<VertexId, Int> parse_vector_spec(const std::string& spec) {
    std::map<VertexId, Int> m;
    std::istringstream in(spec);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        auto eq = item.rfind('=');
        if (eq == std::string::npos)
            throw ParseError(0, "vector entry '" + item + "' is not of the form vertex=count");
        try {
            m[item.substr(0, eq)] = Int(item.substr(eq + 1));
        } catch (const std::invalid_argument&) {
            throw ParseError(0, "bad count in vector entry '" + item + "'");
        }
    }
    return m;
}

std::vector<EdgeId> split_commas(const std::string& s) {
    std::vector<EdgeId> out;
    std::istringstream in(s);
    std::string item;
    while (std::getline(in, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

int report_validation_error(const ValidationError& err, std::ostream& out) {
    for (const auto& v : err.violations()) out << v.to_string() << "\n";
    return 1;
}

void write_cert(const Certificate& cert, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot write '" + path + "'");
    os << serialize(cert);
}

int cmd_validate(const std::string& file, std::ostream& out) {
    std::string text = read_file(file);
    if (sniff_kind(text) == FileKind::graph) {
        Graph g = parse_graph(text);
        out << "valid graph: " << g.vertex_count() << " vertices, " << g.edge_count()
            << " edges\n";
        return 0;
    }
    try {
        SinkExtension ext = parse_extension(text);
        out << "valid " << ext.sink_count() << "-sink extension: base "
            << ext.base_vertices.size() << " vertices, H " << ext.ext_vertices().size()
            << " vertices\n";
        for (std::size_t i = 0; i < ext.sink_count(); ++i)
            out << "sink " << i + 1 << ": " << ext.sinks[i] << "\n";
        return 0;
    } catch (const ValidationError& e) {
        return report_validation_error(e, out);
    }
}

int cmd_wojciech(const std::string& file, std::ostream& out) {
    SinkExtension ext = load_extension(file);
    for (std::size_t i = 1; i <= ext.sink_count(); ++i) {
        out << "sink " << i << ": " << ext.sinks[i - 1] << "\n";
        out << vector_report("W[" + std::to_string(i) + "]", wojciech_dense(ext, i));
    }
    return 0;
}

int cmd_classify(const std::string& file1, const std::string& file2, const std::string& mode,
                 const std::string& cert_path, std::ostream& out) {
    SinkExtension a = load_extension(file1);
    SinkExtension b = load_extension(file2);

    auto finish = [&](const Certificate& cert) {
        out << "mode: " << cert.mode << "\n";
        for (std::size_t i = 1; i <= cert.f.sink_count(); ++i)
            out << vector_report("common W[" + std::to_string(i) + "]",
                                 wojciech_dense(cert.f, i));
        out << "trace 1: " << cert.trace1.size() << " moves\n";
        out << "trace 2: " << cert.trace2.size() << " moves\n";
        VerifyResult check = verify_certificate(cert, a, b);
        out << "verified: " << (check.ok ? "yes" : "NO: " + check.diagnosis) << "\n";
        if (!cert_path.empty()) {
            write_cert(cert, cert_path);
            out << "certificate written: " << cert_path << "\n";
        }
        return check.ok ? 0 : 1;
    };

    if (mode == "auto") {
        if (a.sink_count() > 1 || b.sink_count() > 1) {
            out << "mode nsink: selected for multi-sink inputs\n";
            return finish(classify_nsink(a, b));
        }
        for (ClassifyMode m : {ClassifyMode::af, ClassifyMode::essential, ClassifyMode::closure}) {
            try {
                Certificate cert = classify_1sink(a, b, m);
                out << "mode " << to_string(m) << ": applied\n";
                return finish(cert);
            } catch (const ClassifyError& e) {
                out << "mode " << to_string(m) << ": " << e.what() << "\n";
            }
        }
        out << "no mode applied\n";
        return 1;
    }
    if (mode == "nsink") return finish(classify_nsink(a, b));
    return finish(classify_1sink(a, b, classify_mode_from_string(mode)));
}

int cmd_verify(const std::string& file1, const std::string& file2, const std::string& cert_path,
               std::ostream& out) {
    SinkExtension a = load_extension(file1);
    SinkExtension b = load_extension(file2);
    Certificate cert = parse_certificate(read_file(cert_path));
    VerifyResult res = verify_certificate(cert, a, b);
    if (res.ok) {
        out << "certificate verifies\n";
        return 0;
    }
    out << "certificate rejected: " << res.diagnosis << "\n";
    return 1;
}

int cmd_obstruct(const std::string& file1, const std::string& file2, std::ostream& out) {
    SinkExtension a = load_extension(file1);
    SinkExtension b = load_extension(file2);
    IntVector gap = wojciech_dense(a, 1) - wojciech_dense(b, 1);
    out << vector_report("gap", gap);
    Verdict v = embedding_obstruction(a, b);
    switch (v.kind) {
        case VerdictKind::candidate_found:
            out << "CandidateFound: " << v.candidate->to_string() << "\n";
            if (!v.hypothesis_ok) out << "note: " << v.reason << "\n";
            return 0;
        case VerdictKind::obstructed:
            out << "Obstructed: " << v.reason << "\n";
            return 1;
        case VerdictKind::inconclusive:
            out << "Inconclusive: " << v.reason << "\n";
            return 0;
    }
    return 2;
}

int cmd_k0(const std::string& file, std::ostream& out) {
    SinkExtension ext = load_extension(file);
    AbelianGroup g = k0_presentation(ext);
    out << "free rank: " << g.free_rank << "\n";
    out << "torsion:";
    for (const auto& t : g.torsion) out << " " << t;
    if (g.torsion.empty()) out << " (none)";
    out << "\n";
    out << "K0 = " << g.to_string() << "\n";
    return 0;
}

int cmd_ideals(const std::string& file, std::ostream& out) {
    SinkExtension ext = load_extension(file);
    auto subsets = saturated_hereditary_subsets(ext.graph);
    std::size_t nonempty = 0;
    for (const auto& s : subsets) {
        out << "ideal " << set_report(s) << "\n";
        if (!s.empty()) ++nonempty;
    }
    out << "count: " << subsets.size() << "\n";
    out << "nonempty: " << nonempty << "\n";
    return 0;
}

int cmd_prim(const std::string& file, std::ostream& out) {
    SinkExtension ext = load_extension(file);
    TailFamily fam = prim_skeleton(ext);
    out << "condition K: " << (condition_k(ext.base_graph()) ? "holds" : "fails") << "\n";
    for (std::size_t i = 0; i < fam.members.size(); ++i)
        out << "member " << i << " (" << fam.members[i].name << "): "
            << set_report(fam.members[i].verts) << "\n";
    for (std::size_t i = 0; i < fam.members.size(); ++i) {
        out << "closure of " << i << ":";
        for (auto j : fam.closure(ext.graph, {i})) out << " " << j;
        out << "\n";
    }
    return 0;
}

int cmd_tails(const std::string& file, std::ostream& out) {
    SinkExtension ext = load_extension(file);
    for (const auto& t : maximal_tails(ext.graph)) out << "tail " << set_report(t) << "\n";
    return 0;
}

int cmd_simplify(const std::string& file, std::ostream& out) {
    out << serialize(simplify(load_extension(file)).first);
    return 0;
}

int cmd_outsplit(const std::string& file, const std::string& edge, const std::string& along,
                 std::ostream& out) {
    SinkExtension ext = load_extension(file);
    auto ids = split_commas(along);
    if (ids.empty()) {
        out << serialize(outsplit(ext, edge).first);
        return 0;
    }
    Path alpha(ext.graph.edge(ids.front()).src, ids);
    out << serialize(outsplit_along_path(ext, edge, alpha).first);
    return 0;
}

int cmd_star(const std::string& file, const std::string& vector_spec, std::ostream& out) {
    SinkExtension ext = load_extension(file);
    try {
        out << serialize(star(ext, parse_vector_spec(vector_spec)));
        return 0;
    } catch (const ValidationError& e) {
        return report_validation_error(e, out);
    }
}

int cmd_dot(const std::string& file, std::ostream& out) {
    std::string text = read_file(file);
    if (sniff_kind(text) == FileKind::graph)
        out << to_dot(parse_graph(text));
    else
        out << to_dot(parse_extension(text));
    return 0;
}

int cmd_fixtures(const std::string& dir, std::ostream& out) {
    if (dir.empty()) {
        for (const auto& [name, text] : fixture_files()) out << name << "\n";
        return 0;
    }
    std::filesystem::create_directories(dir);
    for (const auto& [name, text] : fixture_files()) {
        auto path = std::filesystem::path(dir) / name;
        std::ofstream os(path, std::ios::binary);
        if (!os) throw Error("cannot write '" + path.string() + "'");
        os << text;
        out << "wrote " << path.string() << "\n";
    }
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"sink extensions of directed graphs: moves, invariants, classification"};
    app.require_subcommand(1);

    std::string file1, file2, edge, along, vector_spec, mode = "auto", cert_path, dir;

    auto* validate = app.add_subcommand("validate", "check an extension file");
    validate->add_option("file", file1)->required();

    auto* wojciech = app.add_subcommand("wojciech", "print the Wojciech vectors");
    wojciech->add_option("file", file1)->required();

    auto* simplify_cmd = app.add_subcommand("simplify", "collapse to the simple extension");
    simplify_cmd->add_option("file", file1)->required();

    auto* outsplit_cmd = app.add_subcommand("outsplit", "boundary outsplitting");
    outsplit_cmd->add_option("file", file1)->required();
    outsplit_cmd->add_option("--edge", edge, "boundary edge to split")->required();
    outsplit_cmd->add_option("--along", along, "comma-separated base path ending at the edge");

    auto* star_cmd = app.add_subcommand("star", "attach a fresh sink");
    star_cmd->add_option("file", file1)->required();
    star_cmd->add_option("--vector", vector_spec, "multiplicities, e.g. w1=2,w2=1")->required();

    auto* classify = app.add_subcommand("classify", "find a common extension");
    classify->add_option("file1", file1)->required();
    classify->add_option("file2", file2)->required();
    classify->add_option("--mode", mode)
        ->required()
        ->check(CLI::IsMember({"auto", "essential", "closure", "af", "nsink"}));
    classify->add_option("--cert", cert_path, "write the certificate here");

    auto* verify = app.add_subcommand("verify", "replay and check a certificate");
    verify->add_option("file1", file1)->required();
    verify->add_option("file2", file2)->required();
    verify->add_option("--cert", cert_path)->required();

    auto* k0 = app.add_subcommand("k0", "K0 presentation of a 1-sink extension");
    k0->add_option("file", file1)->required();

    auto* ideals = app.add_subcommand("ideals", "saturated hereditary vertex subsets");
    ideals->add_option("file", file1)->required();

    auto* prim = app.add_subcommand("prim", "maximal tails and sink closures");
    prim->add_option("file", file1)->required();

    auto* tails = app.add_subcommand("tails", "maximal tails of the graph");
    tails->add_option("file", file1)->required();

    auto* obstruct = app.add_subcommand("obstruct", "necessity test for a common extension");
    obstruct->add_option("file1", file1)->required();
    obstruct->add_option("file2", file2)->required();

    auto* dot = app.add_subcommand("dot", "DOT export");
    dot->add_option("file", file1)->required();

    auto* fixtures_cmd = app.add_subcommand("fixtures", "bundled example graphs");
    fixtures_cmd->add_option("--write", dir, "write the fixture files into this directory");

    std::vector<const char*> argv;
    argv.push_back("sinkx");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 2;
    }

    try {
        if (validate->parsed()) return cmd_validate(file1, out);
        if (wojciech->parsed()) return cmd_wojciech(file1, out);
        if (simplify_cmd->parsed()) return cmd_simplify(file1, out);
        if (outsplit_cmd->parsed()) return cmd_outsplit(file1, edge, along, out);
        if (star_cmd->parsed()) return cmd_star(file1, vector_spec, out);
        if (classify->parsed()) return cmd_classify(file1, file2, mode, cert_path, out);
        if (verify->parsed()) return cmd_verify(file1, file2, cert_path, out);
        if (k0->parsed()) return cmd_k0(file1, out);
        if (ideals->parsed()) return cmd_ideals(file1, out);
        if (prim->parsed()) return cmd_prim(file1, out);
        if (tails->parsed()) return cmd_tails(file1, out);
        if (obstruct->parsed()) return cmd_obstruct(file1, file2, out);
        if (dot->parsed()) return cmd_dot(file1, out);
        if (fixtures_cmd->parsed()) return cmd_fixtures(dir, out);
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        for (const auto& v : e.violations()) err << v.to_string() << "\n";
        return 1;
    } catch (const ClassifyError& e) {
        err << "refused: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    err << "no subcommand\n";
    return 2;
}

}  // namespace sinkx::cli

#pragma once

#include <map>
#include <string>

#include "sinkx/extension.hpp"
#include "sinkx/graph.hpp"

namespace sinkx {

/// Bundled example graphs and extensions, keyed by file name
/// (G_intro.graph, E1_intro.ext, ...). Contents are byte-stable.
const std::map<std::string, std::string>& fixture_files();

/// Lookup by bare name ("G_intro", "E1_ex26", ...).
Graph fixture_graph(const std::string& name);
SinkExtension fixture_extension(const std::string& name);

}  // namespace sinkx

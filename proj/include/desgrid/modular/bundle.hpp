#pragma once

#include <filesystem>
#include <vector>

#include "desgrid/modular/supervisor.hpp"

namespace desgrid::modular {

// Writes node_<id>.aut for every node with an explicit realization and a
// manifest.json listing each node's backend, alphabet, components and
// neighbor buses. An empty node list means all nodes.
void write_bundle(const SupervisorLibrary& lib, const std::filesystem::path& dir,
                  std::vector<int> nodes = {});

}  // namespace desgrid::modular

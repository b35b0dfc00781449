#include "desgrid/modular/bundle.hpp"

#include <fstream>
#include <json.hpp>

#include "desgrid/des/components.hpp"
#include "desgrid/error.hpp"
#include "desgrid/supervisory/io.hpp"

namespace desgrid::modular {

void write_bundle(const SupervisorLibrary& lib, const std::filesystem::path& dir,
                  std::vector<int> nodes) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create " + dir.string() + ": " + ec.message());
  if (nodes.empty()) nodes = lib.nodes();

  const auto& ev = *lib.model().events();
  nlohmann::ordered_json manifest;
  manifest["hops"] = lib.options().hops;
  manifest["state_bound"] = lib.options().state_bound;
  manifest["lookahead_depth"] = lib.options().lookahead_depth;
  auto& list = manifest["nodes"] = nlohmann::ordered_json::array();
  for (int node : nodes) {
    const NodeSynthesis& ns = lib.synthesis(node);
    nlohmann::ordered_json entry;
    entry["node"] = node;
    std::vector<std::string> alphabet, components;
    for (des::EventId e : ns.subsystem.alphabet) alphabet.push_back(ev.label(e));
    for (std::size_t c : ns.subsystem.components())
      components.push_back(des::component_name(lib.model().component(c).kind));
    entry["components"] = components;
    entry["alphabet"] = alphabet;
    entry["neighbors"] = std::vector<int>(ns.subsystem.buses.begin() + 1, ns.subsystem.buses.end());
    if (ns.sup) {
      std::string file = "node_" + std::to_string(node) + ".aut";
      entry["backend"] = "explicit";
      entry["file"] = file;
      entry["plant_states"] = ns.plant->state_count();
      entry["realization_states"] = ns.sup->realization.state_count();
      std::ofstream out(dir / file, std::ios::binary);
      out << supervisory::write_realization(*ns.sup);
      if (!out) throw Error("write failed: " + (dir / file).string());
    } else {
      entry["backend"] = "lookahead";
    }
    list.push_back(entry);
  }
  std::ofstream out(dir / "manifest.json", std::ios::binary);
  out << manifest.dump(2) << "\n";
  if (!out) throw Error("write failed: " + (dir / "manifest.json").string());
}

}  // namespace desgrid::modular

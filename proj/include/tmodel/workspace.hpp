#pragma once

#include <map>
#include <string>
#include <variant>

#include "tmodel/prohomotopy.hpp"

namespace tmodel {

struct Config {
  std::size_t budget_filler = 8;
  std::size_t budget_reindex = 4;
  std::size_t lim_window = 8;
  bool operator==(const Config&) const = default;
};

/// Named objects over one ring. Names are unique across all kinds; towers and
/// pro-maps refer to complexes and maps by name.
struct Workspace {
  Ring ring;
  std::map<std::string, ChainComplex> complexes;
  std::map<std::string, ChainMap> maps;
  std::map<std::string, ComplexTower> towers;
  std::map<std::string, ComplexProMap> promaps;
  Config config;

  // Names of referenced objects, kept so serialization reproduces the input.
  struct MapRefs { std::string source, target; };
  struct TowerRefs { std::vector<std::string> entries, structure; std::string endo; };
  struct ProMapRefs { std::string source, target; std::vector<std::string> comps; };
  std::map<std::string, MapRefs> map_refs;
  std::map<std::string, TowerRefs> tower_refs;
  std::map<std::string, ProMapRefs> promap_refs;

  bool has(const std::string& name) const;
  const ChainComplex& complex(const std::string& name) const;
  const ChainMap& map(const std::string& name) const;
  const ComplexTower& tower(const std::string& name) const;
  const ComplexProMap& promap(const std::string& name) const;

  void add_complex(const std::string& name, ChainComplex x);
  void add_map(const std::string& name, const std::string& source, const std::string& target, ChainMap f);
  /// Adds the entries and structure maps as name_0, name_1, ... and name_endo.
  void add_tower(const std::string& name, const ComplexTower& t);
};

/// Throws ParseError (with byte offset or field path) or ValidationError (object and degree).
Workspace parse_workspace_text(const std::string& text);
Workspace parse_workspace(const std::string& path);
std::string serialize_workspace(const Workspace& ws);

/// "0", "Z", "Z^2 + Z/2 + Z/4", "F2^3".
AbGroup parse_group(const Ring& ring, const std::string& text);

}  // namespace tmodel

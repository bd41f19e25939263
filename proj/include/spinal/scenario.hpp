#pragma once

#include <optional>
#include <string>

#include "json.hpp"
#include "spinal/construction.hpp"

namespace spinal {

// A scenario document with its references resolved. Nothing is validated
// beyond parsing until build() is called.
struct Scenario {
  nlohmann::json document;
  LevelGroupPtr s0;
  LevelGroupPtr g;
  ResidualRep rep;
  Ray ray;
  SpinalSequence spinal;
  std::optional<PermutationGroup> h;

  GammaSpec build() const;
};

// Group references: a catalog name, or {"degree": m, "generators": [...]}.
LevelGroupPtr resolve_group(const nlohmann::json& ref);
PermutationGroup resolve_plain_group(const nlohmann::json& ref);

Scenario parse_scenario(const nlohmann::json& doc);
Scenario parse_scenario_text(const std::string& text);
Scenario load_scenario(const std::string& path);

}  // namespace spinal

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "spinal/construction.hpp"

namespace spinal {

struct Check {
  std::string description;
  bool passed = false;
  nlohmann::json certificate;
};

struct SuiteReport {
  std::string suite;
  std::string digest;  // of the scenario the suite ran on
  nlohmann::json params;
  std::vector<Check> checks;

  bool passed() const;
  void add(std::string description, bool passed, nlohmann::json certificate = nlohmann::json::object());
  nlohmann::json to_json() const;
  std::string to_text() const;
};

// Canonical description of a spec and its FNV-1a digest.
nlohmann::json describe(const GammaSpec& spec);
std::string spec_digest(const GammaSpec& spec);

// Action of e on layer n, vertices numbered lexicographically.
Permutation layer_action(const Element& e, std::size_t n);
PermutationGroup layer_quotient(const std::vector<Element>& gens, std::size_t n);
std::vector<Element> gamma_generators(const GammaSpec& spec);

nlohmann::json fin_json(const Fin& f);

SuiteReport verify_spherical(const GammaSpec& spec, std::size_t d = 4);
// With no conjugators given, all admissible s in S_0 are used.
SuiteReport verify_rist_witness(const GammaSpec& spec, std::size_t d = 4,
                                std::optional<std::vector<Permutation>> conjugators = std::nullopt);
SuiteReport verify_layered_witness(const GammaSpec& spec, std::size_t n_max = 3, std::size_t d = 4);
SuiteReport verify_fin_in_gamma(const GammaSpec& spec, std::size_t d = 2);
SuiteReport verify_injectivity(const GammaSpec& spec, std::size_t d = 4);

// One walkthrough of the maximality argument for M and an element g outside
// Delta(M).
SuiteReport verify_maximality_walkthrough(const GammaSpec& spec, const PermutationGroup& m,
                                          const Element& g, std::size_t d = 4);
// Every non-normal maximal M against every s_w with w outside M.
SuiteReport verify_maximality(const GammaSpec& spec, std::size_t d = 4);

struct Depths {
  std::size_t portrait = 4;
  std::size_t quotient = 2;
  std::size_t layered = 3;
};

std::vector<std::string> suite_names();
SuiteReport run_suite(const GammaSpec& spec, const std::string& name, const Depths& depths = {});
std::vector<SuiteReport> run_all(const GammaSpec& spec, const Depths& depths = {});

}  // namespace spinal

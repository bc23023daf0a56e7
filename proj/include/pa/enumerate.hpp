#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pa/term.hpp"

namespace pa {

enum class Dedup { None, ModuloAC };

struct EnumSpec {
  System system = System::PA1;
  std::vector<std::string> alphabet;
  int max_size = 1;  // AST node count
  Dedup dedup = Dedup::None;
};

/// Every closed term with node count <= max_size, each exactly once,
/// deterministic order (by size, then structurally).
std::vector<TermPtr> enum_terms(const EnumSpec& spec);

/// Length of enum_terms(spec), by dynamic programming over sizes.
std::uint64_t count_terms(const EnumSpec& spec);

/// Size-stratified uniform sampler for property tests.
TermPtr sample_term(const EnumSpec& spec, std::uint64_t seed);

}  // namespace pa

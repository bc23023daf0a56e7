#pragma once

#include <stdexcept>
#include <string>

#include "pa/config.hpp"
#include "pa/term.hpp"

namespace pa {

struct ParseError : std::runtime_error {
  int position;
  ParseError(std::string msg, int pos)
      : std::runtime_error(std::move(msg)), position(pos) {}
};

/// Parse a closed term. Rejects PA2-only operators when system == PA1 and,
/// when a config is given, labels outside its alphabet.
TermPtr parse_term(const std::string& text, System system,
                   const SemanticsConfig* config = nullptr);

}  // namespace pa

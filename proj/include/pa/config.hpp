#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pa {

enum class Policy { Optional, Forced };

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Event alphabet, partial symmetric communication function, total event
/// order and the communication policy switch.
struct SemanticsConfig {
  std::vector<std::string> alphabet;               // order-of-declaration
  std::map<std::string, int> rank;                 // total order position
  std::map<std::pair<std::string, std::string>, std::string> gamma;
  Policy policy = Policy::Optional;

  bool in_alphabet(const std::string& e) const { return rank.count(e) != 0; }
  bool leq(const std::string& e1, const std::string& e2) const {
    return rank.at(e1) <= rank.at(e2);
  }
  std::optional<std::string> comm(const std::string& e1,
                                  const std::string& e2) const {
    auto it = gamma.find({e1, e2});
    if (it == gamma.end()) return std::nullopt;
    return it->second;
  }
};

/// Parse the line-oriented config format. Lines may also be separated by
/// ';'. Keys: alphabet, gamma <e1> <e2> = <e>, order (strict chain),
/// policy. Gamma lines are auto-mirrored; a conflicting mirror is an error.
SemanticsConfig load_config(const std::string& text);

SemanticsConfig load_config_file(const std::string& path);

}  // namespace pa

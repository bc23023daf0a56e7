#include "pa/config.hpp"

#include <fstream>
#include <sstream>

namespace pa {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

SemanticsConfig load_config(const std::string& text) {
  SemanticsConfig cfg;
  bool have_alphabet = false, have_order = false, have_policy = false;
  std::vector<std::string> order_chain;

  // Lines separated by newlines or ';'. '#' starts a comment.
  std::vector<std::string> lines;
  for (const auto& raw : split(text, '\n'))
    for (const auto& piece : split(raw, ';')) {
      std::string l = piece;
      size_t h = l.find('#');
      if (h != std::string::npos) l = l.substr(0, h);
      l = trim(l);
      if (!l.empty()) lines.push_back(l);
    }

  struct GammaLine {
    std::string e1, e2, res;
  };
  std::vector<GammaLine> gammas;

  for (const auto& line : lines) {
    if (line.rfind("gamma", 0) == 0) {
      std::istringstream is(line);
      std::string kw, e1, e2, eq, res;
      is >> kw >> e1 >> e2 >> eq >> res;
      if (kw != "gamma" || e1.empty() || e2.empty() || eq != "=" || res.empty())
        throw ConfigError("malformed gamma line: " + line);
      gammas.push_back({e1, e2, res});
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("malformed config line: " + line);
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key == "alphabet") {
      if (have_alphabet) throw ConfigError("duplicate key: alphabet");
      have_alphabet = true;
      for (const auto& e : split(val, ',')) {
        std::string name = trim(e);
        if (name.empty()) throw ConfigError("empty alphabet entry");
        for (const auto& prev : cfg.alphabet)
          if (prev == name) throw ConfigError("duplicate alphabet entry: " + name);
        cfg.alphabet.push_back(name);
      }
    } else if (key == "order") {
      if (have_order) throw ConfigError("duplicate key: order");
      have_order = true;
      for (const auto& e : split(val, '<')) {
        std::string name = trim(e);
        if (name.empty()) throw ConfigError("empty order entry");
        order_chain.push_back(name);
      }
    } else if (key == "policy") {
      if (have_policy) throw ConfigError("duplicate key: policy");
      have_policy = true;
      if (val == "optional")
        cfg.policy = Policy::Optional;
      else if (val == "forced")
        cfg.policy = Policy::Forced;
      else
        throw ConfigError("unknown policy: " + val);
    } else {
      throw ConfigError("unknown config key: " + key);
    }
  }

  if (!have_alphabet || cfg.alphabet.empty())
    throw ConfigError("config needs a nonempty alphabet");
  if (!have_order) throw ConfigError("config needs an order chain");

  // The order must be a strict total chain over exactly the alphabet.
  if (order_chain.size() != cfg.alphabet.size())
    throw ConfigError("order is not total over the alphabet");
  for (size_t i = 0; i < order_chain.size(); ++i) {
    const std::string& e = order_chain[i];
    bool known = false;
    for (const auto& a : cfg.alphabet) known = known || a == e;
    if (!known) throw ConfigError("order mentions unknown label: " + e);
    if (cfg.rank.count(e)) throw ConfigError("order repeats label: " + e);
    cfg.rank[e] = static_cast<int>(i);
  }

  for (const auto& g : gammas) {
    if (!cfg.in_alphabet(g.e1) || !cfg.in_alphabet(g.e2))
      throw ConfigError("gamma argument not in alphabet: " + g.e1 + " " + g.e2);
    if (!cfg.in_alphabet(g.res))
      throw ConfigError("gamma result not in alphabet: " + g.res);
    // Auto-mirror; a conflicting entry in either direction is an error.
    for (auto key : {std::make_pair(g.e1, g.e2), std::make_pair(g.e2, g.e1)}) {
      auto it = cfg.gamma.find(key);
      if (it != cfg.gamma.end() && it->second != g.res)
        throw ConfigError("asymmetric gamma: gamma " + key.first + " " +
                          key.second + " given as both " + it->second +
                          " and " + g.res);
      cfg.gamma[key] = g.res;
    }
  }
  return cfg;
}

SemanticsConfig load_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return load_config(ss.str());
}

}  // namespace pa

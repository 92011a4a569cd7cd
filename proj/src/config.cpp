#include "rwave/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <string>

#include "rwave/errors.hpp"

namespace rwave {

Exponents RunConfig::exponents() const {
  Exponents e;
  e.p = p;
  e.q = q;
  e.kappa1 = kappa1;
  e.kappa2 = kappa2;
  return e;
}

GridSpec RunConfig::grid() const {
  GridSpec g;
  g.r_max = r_max;
  g.t_max = t_max;
  g.n = n;
  g.stagger = true;
  return g;
}

TruncationPolicy RunConfig::truncation() const {
  TruncationPolicy t;
  t.t_infinity = t_infinity;
  t.tail_tol = tail_tol;
  t.check_tails = check_tails;
  return t;
}

SolverOptions RunConfig::solver() const {
  SolverOptions s;
  s.tol = tol;
  s.max_iters = max_iters;
  s.ratio_bound = ratio_bound;
  return s;
}

double RunConfig::horizon() const { return std::max(t_max, t_infinity); }

double RunConfig::fit_window_lo() const { return fit_lo >= 0.0 ? fit_lo : 10.0; }

double RunConfig::fit_window_hi() const { return fit_hi >= 0.0 ? fit_hi : 0.8 * t_max; }

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw InvalidArgument("config key " + key + " needs a number, got '" + v + "'");
  }
}

int parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const int x = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw InvalidArgument("config key " + key + " needs an integer, got '" + v + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "off" || v == "no") return false;
  throw InvalidArgument("config key " + key + " needs a boolean, got '" + v + "'");
}

void apply(RunConfig& cfg, const std::string& section, const std::string& key,
           const std::string& value) {
  const std::string where = "[" + section + "] " + key;
  if (section == "exponents") {
    if (key == "p") cfg.p = parse_double(where, value);
    else if (key == "q") cfg.q = parse_double(where, value);
    else if (key == "kappa1") cfg.kappa1 = parse_double(where, value);
    else if (key == "kappa2") cfg.kappa2 = parse_double(where, value);
    else throw InvalidArgument("unknown config key " + where);
  } else if (section == "data") {
    if (key == "family1") cfg.family1 = value;
    else if (key == "family2") cfg.family2 = value;
    else if (key == "eps") cfg.eps = parse_double(where, value);
    else if (key == "nu1") cfg.nu1 = parse_double(where, value);
    else if (key == "nu2") cfg.nu2 = parse_double(where, value);
    else throw InvalidArgument("unknown config key " + where);
  } else if (section == "grid") {
    if (key == "r_max") cfg.r_max = parse_double(where, value);
    else if (key == "t_max") cfg.t_max = parse_double(where, value);
    else if (key == "n") cfg.n = parse_int(where, value);
    else if (key == "t_infinity") cfg.t_infinity = parse_double(where, value);
    else if (key == "tail_tol") cfg.tail_tol = parse_double(where, value);
    else if (key == "check_tails") cfg.check_tails = parse_bool(where, value);
    else throw InvalidArgument("unknown config key " + where);
  } else if (section == "solver") {
    if (key == "tol") cfg.tol = parse_double(where, value);
    else if (key == "max_iters") cfg.max_iters = parse_int(where, value);
    else if (key == "ratio_bound") cfg.ratio_bound = parse_double(where, value);
    else throw InvalidArgument("unknown config key " + where);
  } else if (section == "output") {
    if (key == "outdir") cfg.outdir = value;
    else if (key == "fit_lo") cfg.fit_lo = parse_double(where, value);
    else if (key == "fit_hi") cfg.fit_hi = parse_double(where, value);
    else throw InvalidArgument("unknown config key " + where);
  } else {
    throw InvalidArgument("unknown config section [" + section + "]");
  }
}

}  // namespace

void load_config_file(const std::string& path, RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read config file " + path);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw InvalidArgument("config line " + std::to_string(lineno) +
                              ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidArgument("config line " + std::to_string(lineno) +
                            ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw InvalidArgument("config line " + std::to_string(lineno) + ": empty key");
    if (section.empty())
      throw InvalidArgument("config line " + std::to_string(lineno) +
                            ": key before any [section]");
    apply(cfg, section, key, value);
  }
}

}  // namespace rwave

#include "wkam/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "wkam/util.hpp"

namespace wkam {

namespace {

const char* kKnownKeys[] = {
    "system",    "dim",        "eps",       "N",          "h",
    "vmax",      "c",          "c_grid",    "h_grid",     "integrals",
    "c_list",    "t",          "dt",        "x0",         "p0",
    "seed",      "output_dir", "tol",       "max_iter",   "energy_tol",
    "tol_aubry", "sv_tol",     "tol_bracket", "steps",    "restarts",
    "inertia",   "pb0",        "axis",      "angle",      "json",
    "f",         "g",          "observables", "s",        "n_seeds",
    "delta",
};

bool known_key(const std::string& key) {
  return std::any_of(std::begin(kKnownKeys), std::end(kKnownKeys),
                     [&](const char* k) { return key == k; });
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("config: cannot open '" + path + "'");
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash_pos = line.find('#');
    if (hash_pos != std::string::npos) line.erase(hash_pos);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      std::ostringstream os;
      os << "config: line " << lineno << " of '" << path << "' is not 'key = value'";
      throw config_error(os.str());
    }
    cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  if (!known_key(key)) throw config_error("config: unknown key '" + key + "'");
  values_[key] = value;
}

bool ExperimentConfig::has(const std::string& key) const {
  return values_.count(key) != 0;
}

std::string ExperimentConfig::get_string(const std::string& key,
                                         const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double ExperimentConfig::get_real(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    std::size_t pos = 0;
    const double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument(it->second);
    return v;
  } catch (const std::exception&) {
    throw config_error("config: key '" + key + "' is not a real number");
  }
}

int ExperimentConfig::get_int(const std::string& key, int fallback) const {
  const double v = get_real(key, fallback);
  const int i = static_cast<int>(std::lround(v));
  if (std::abs(v - i) > 1e-9)
    throw config_error("config: key '" + key + "' is not an integer");
  return i;
}

bool ExperimentConfig::get_flag(const std::string& key, bool fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (it->second == "true" || it->second == "1") return true;
  if (it->second == "false" || it->second == "0") return false;
  throw config_error("config: key '" + key + "' is not a boolean");
}

Vec ExperimentConfig::get_vec(const std::string& key, const Vec& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const auto parts = get_list(key);
  Vec v(parts.size());
  for (std::size_t i = 0; i < parts.size(); ++i) {
    try {
      v[i] = std::stod(parts[i]);
    } catch (const std::exception&) {
      throw config_error("config: key '" + key + "' has a non-numeric entry");
    }
  }
  return v;
}

std::vector<std::string> ExperimentConfig::get_list(const std::string& key) const {
  std::vector<std::string> parts;
  const auto it = values_.find(key);
  if (it == values_.end()) return parts;
  std::string cur;
  for (char ch : it->second) {
    if (ch == ',') {
      parts.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  parts.push_back(trim(cur));
  return parts;
}

std::vector<double> ExperimentConfig::parse_range(const std::string& spec) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : spec) {
    if (ch == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  parts.push_back(cur);
  if (parts.size() != 3) throw config_error("range: expected start:stop:step");
  double start, stop, step;
  try {
    start = std::stod(parts[0]);
    stop = std::stod(parts[1]);
    step = std::stod(parts[2]);
  } catch (const std::exception&) {
    throw config_error("range: non-numeric field in '" + spec + "'");
  }
  if (!(step > 0)) throw config_error("range: step must be positive");
  if (stop < start - 1e-12) throw config_error("range: stop below start");
  std::vector<double> grid;
  const double span = (stop - start) / step;
  const long count = std::lround(std::floor(span + 1e-12)) + 1;
  for (long i = 0; i < count; ++i) grid.push_back(start + i * step);
  // snap the endpoint when it lands within tolerance
  if (!grid.empty() && std::abs(grid.back() - stop) < 1e-12) grid.back() = stop;
  return grid;
}

std::string ExperimentConfig::hash() const {
  std::ostringstream os;
  // output location and report format do not identify the experiment
  for (const auto& [k, v] : values_)
    if (k != "output_dir" && k != "json") os << k << "=" << v << "\n";
  std::ostringstream hex;
  hex << std::hex << fnv1a(os.str());
  return hex.str();
}

}  // namespace wkam

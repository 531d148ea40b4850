#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wkam/types.hpp"

namespace wkam {

/// Flat key-value experiment configuration. Files hold one `key = value` per
/// line ('#' starts a comment); command-line flags override file keys.
/// Unknown keys are rejected. Ranges are written `start:stop:step`, endpoints
/// inclusive within 1e-12.
class ExperimentConfig {
 public:
  ExperimentConfig() = default;

  static ExperimentConfig from_file(const std::string& path);
  void set(const std::string& key, const std::string& value);  // validates key

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_real(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_flag(const std::string& key, bool fallback) const;
  Vec get_vec(const std::string& key, const Vec& fallback) const;
  std::vector<std::string> get_list(const std::string& key) const;  // comma split

  /// `start:stop:step` -> inclusive grid.
  static std::vector<double> parse_range(const std::string& spec);

  /// FNV-1a of the canonical (sorted) key=value text.
  std::string hash() const;

  const std::map<std::string, std::string>& entries() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace wkam

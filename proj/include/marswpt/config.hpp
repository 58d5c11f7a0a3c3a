#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "marswpt/link.hpp"
#include "marswpt/sweep.hpp"

namespace marswpt {

/// Flat key/value run configuration. Units are part of the key names.
///
/// Values are validated when set; unknown keys are rejected. Typed objects
/// are built on demand, starting from the preset named by `preset` (if any)
/// and applying every other key on top of it.
class RunConfig {
 public:
  /// Throws ConfigError naming the key.
  void set(std::string_view key, std::string_view value);

  /// `key = value` lines; `#` starts a comment. Errors carry line numbers.
  void load(std::istream& in);
  void load_file(const std::string& path);

  bool has(std::string_view key) const;
  const std::map<std::string, std::string, std::less<>>& entries() const noexcept {
    return values_;
  }

  LinkScenario scenario() const;
  MonteCarloSettings monte_carlo() const;
  /// Harvesters named by `harvesters` / `harvester_files`; A, B, C when neither is set.
  std::vector<HarvesterModel> harvesters() const;
  /// Throws ConfigError listing every violation.
  SweepSpec sweep_spec() const;

  static const std::vector<std::string>& known_keys();

 private:
  std::map<std::string, std::string, std::less<>> values_;
};

}  // namespace marswpt

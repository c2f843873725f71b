#pragma once

// Experiment configuration: a TOML document with one table per concern
// ([background], [perturbation], [count], [bs], [split], [green],
// [green_scan], [ltsum], [verify], [output]). Command-line flags are merged
// in as overrides, and the merged document is echoed into every output.

#include <memory>
#include <json.hpp>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gapcount/operators.hpp"

namespace gapcount::cli {

class ExperimentConfig {
 public:
  ExperimentConfig();
  ExperimentConfig(const ExperimentConfig& other);
  ExperimentConfig& operator=(const ExperimentConfig& other);
  ExperimentConfig(ExperimentConfig&&) noexcept;
  ExperimentConfig& operator=(ExperimentConfig&&) noexcept;
  ~ExperimentConfig();

  static ExperimentConfig from_file(const std::string& path);
  static ExperimentConfig from_string(std::string_view text, std::string_view source = "<config>");

  /// Keys are dotted paths such as "count.tol".
  bool has(std::string_view path) const;

  double number(std::string_view path) const;
  double number(std::string_view path, double fallback) const;
  /// number() that must be > 0.
  double positive(std::string_view path, double fallback) const;
  long integer(std::string_view path) const;
  long integer(std::string_view path, long fallback) const;
  bool flag(std::string_view path, bool fallback) const;
  std::string text(std::string_view path, std::string_view fallback) const;
  std::vector<double> numbers(std::string_view path) const;
  std::vector<long> integers(std::string_view path) const;

  void set(std::string_view path, double v);
  void set(std::string_view path, long v);
  void set(std::string_view path, bool v);
  void set(std::string_view path, std::string_view v);
  void set(std::string_view path, const std::vector<double>& v);
  void set(std::string_view path, const std::vector<long>& v);

  /// [background] period, a, b.
  PeriodicBackground background() const;
  /// [perturbation]; an absent table means no perturbation.
  PerturbationSpec perturbation() const;

  /// The merged document as TOML text and as JSON.
  std::string to_toml() const;
  nlohmann::json to_json() const;

  const std::string& source() const noexcept { return source_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::string source_;
};

/// "lo..hi" or a single half width "h" meaning -h..h.
Window parse_window(std::string_view text);
/// "a..b" inclusive integer range.
std::pair<long, long> parse_range(std::string_view text);
/// Comma-separated reals.
std::vector<double> parse_list(std::string_view text);
/// "n,m;n,m;..." pairs.
std::vector<std::pair<long, long>> parse_pairs(std::string_view text);

}  // namespace gapcount::cli

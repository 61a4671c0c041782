#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "trefftz/regsolve.hpp"
#include "trefftz/types.hpp"
#include "trefftz/waves.hpp"

namespace trefftz::cli
{

class ConfigError : public Error
{
public:
  using Error::Error;
};

/// Flat `key = value` file with `[section]` headers; keys are stored as
/// "section.key". `#` and `;` start comments.
class Config
{
public:
  static Config parse(std::istream &in, const std::string &origin = "<config>");
  static Config load(const std::filesystem::path &path);

  /// Overrides (or adds) a key; the key must be known.
  void set(const std::string &key, const std::string &value);
  bool has(const std::string &key) const { return values_.count(key) != 0; }
  std::string get(const std::string &key, const std::string &fallback) const;

  /// Directory relative paths in the file are resolved against.
  const std::filesystem::path &base_dir() const { return base_dir_; }

  /// Sorted `key = value` lines; what the config hash is computed from.
  std::string canonical() const;
  std::uint64_t hash() const;

private:
  std::map<std::string, std::string> values_;
  std::filesystem::path base_dir_ = ".";
};

/// The keys accepted in config files and overrides.
const std::vector<std::string> &known_keys();

/// Scale presets used by --full: the full-size point-source study.
void apply_full_preset(Config &config);

/// FNV-1a, 64 bit.
std::uint64_t fnv1a64(const std::string &text);

struct ExperimentConfig
{
  double kappa = 16.0;
  Vec2 lower{0.0, -0.5};
  Vec2 upper{1.0, 0.5};
  std::optional<Vec2> source;  // unset: (-pi / (5 kappa), 0)
  double sigma = 1.0;

  int nx = 4;
  int ny = 5;
  double jitter = 0.2;
  std::uint64_t seed = 1;
  std::filesystem::path mesh_file;

  std::vector<int> P{8, 16, 32, 64, 128};
  std::vector<BasisMode> modes{BasisMode::PPW, BasisMode::EPW};
  double oversampling = 1.1;
  std::uint64_t stream_offset = 0;

  double epsilon = kDefaultEpsilon;
  SolverMethod solver = SolverMethod::Trace;

  std::filesystem::path out_dir = "out";
  int grid = 256;

  std::vector<double> ksweep_kappas{8.0, 16.0, 32.0};
  double ksweep_waves_per_kappa = 4.0;

  double stability_kappa = 16.0;
  std::vector<int> stability_m{0, 8, 16, 24, 32};
  std::vector<int> stability_P{32, 64, 128, 256, 512};

  std::uint64_t config_hash = 0;

  Vec2 source_for(double k) const;
};

/// Validates every field; throws ConfigError naming the offending key.
ExperimentConfig make_experiment_config(const Config &config);

}  // namespace trefftz::cli

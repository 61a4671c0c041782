#include "trefftz/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace trefftz::cli
{

namespace
{

std::string trim(std::string_view s)
{
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos)
  {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string &key, const std::string &text)
{
  std::vector<std::string> items;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ','))
  {
    item = trim(item);
    if (item.empty())
    {
      throw ConfigError(key + ": empty list entry in '" + text + "'");
    }
    items.push_back(item);
  }
  if (items.empty())
  {
    throw ConfigError(key + ": empty list");
  }
  return items;
}

double to_double(const std::string &key, const std::string &text)
{
  double v = 0.0;
  const auto *end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v))
  {
    throw ConfigError(key + ": not a finite number: '" + text + "'");
  }
  return v;
}

long long to_integer(const std::string &key, const std::string &text)
{
  long long v = 0;
  const auto *end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end)
  {
    throw ConfigError(key + ": not an integer: '" + text + "'");
  }
  return v;
}

Vec2 to_point(const std::string &key, const std::string &text)
{
  const auto items = split_list(key, text);
  if (items.size() != 2)
  {
    throw ConfigError(key + ": expected 'x, y'");
  }
  return {to_double(key, items[0]), to_double(key, items[1])};
}

void require(bool ok, const std::string &key, const std::string &what)
{
  if (!ok)
  {
    throw ConfigError(key + ": " + what);
  }
}

int positive_int(const std::string &key, const std::string &text, long long max = 1 << 20)
{
  const long long v = to_integer(key, text);
  require(v >= 1 && v <= max, key, "must be in [1, " + std::to_string(max) + "]");
  return static_cast<int>(v);
}

}  // namespace

const std::vector<std::string> &known_keys()
{
  static const std::vector<std::string> keys{
      "problem.kappa",        "problem.lower",          "problem.upper",
      "problem.source",       "problem.sigma",          "mesh.nx",
      "mesh.ny",              "mesh.jitter",            "mesh.seed",
      "mesh.file",            "basis.P",                "basis.modes",
      "basis.oversampling",   "basis.stream_offset",    "solver.epsilon",
      "solver.method",        "output.dir",             "output.grid",
      "ksweep.kappas",        "ksweep.waves_per_kappa", "stability.kappa",
      "stability.m",          "stability.P",
  };
  return keys;
}

Config Config::parse(std::istream &in, const std::string &origin)
{
  Config config;
  std::string section;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line))
  {
    ++lineno;
    const auto where = origin + ":" + std::to_string(lineno) + ": ";
    const auto cut = line.find_first_of("#;");
    if (cut != std::string::npos)
    {
      line.erase(cut);
    }
    line = trim(line);
    if (line.empty())
    {
      continue;
    }
    if (line.front() == '[')
    {
      if (line.back() != ']')
      {
        throw ConfigError(where + "unterminated section header");
      }
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
    {
      throw ConfigError(where + "expected 'key = value'");
    }
    const auto name = trim(std::string_view(line).substr(0, eq));
    const auto value = trim(std::string_view(line).substr(eq + 1));
    if (section.empty())
    {
      throw ConfigError(where + "key '" + name + "' outside a section");
    }
    const auto key = section + "." + name;
    if (config.has(key))
    {
      throw ConfigError(where + "duplicate key '" + key + "'");
    }
    try
    {
      config.set(key, value);
    }
    catch (const ConfigError &e)
    {
      throw ConfigError(where + e.what());
    }
  }
  return config;
}

Config Config::load(const std::filesystem::path &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw ConfigError("cannot open config file " + path.string());
  }
  Config config = parse(in, path.string());
  config.base_dir_ = path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path();
  return config;
}

void Config::set(const std::string &key, const std::string &value)
{
  const auto &keys = known_keys();
  if (std::find(keys.begin(), keys.end(), key) == keys.end())
  {
    throw ConfigError("unknown key '" + key + "'");
  }
  if (value.empty())
  {
    throw ConfigError(key + ": empty value");
  }
  values_[key] = value;
}

std::string Config::get(const std::string &key, const std::string &fallback) const
{
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

std::string Config::canonical() const
{
  std::string text;
  for (const auto &[key, value] : values_)
  {
    // the output directory does not change results
    if (key == "output.dir")
    {
      continue;
    }
    text += key + " = " + value + "\n";
  }
  return text;
}

std::uint64_t Config::hash() const { return fnv1a64(canonical()); }

std::uint64_t fnv1a64(const std::string &text)
{
  std::uint64_t h = 14695981039346656037ull;
  for (const unsigned char c : text)
  {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

void apply_full_preset(Config &config)
{
  config.set("problem.kappa", "128");
  config.set("basis.P", "64, 128, 256, 512, 815");
  config.set("stability.kappa", "128");
  config.set("stability.m", "0, 64, 128, 192, 256");
  config.set("stability.P", "256, 512, 1024, 2048");
  config.set("ksweep.kappas", "16, 32, 64, 128");
}

Vec2 ExperimentConfig::source_for(double k) const
{
  if (source)
  {
    return *source;
  }
  return {-std::numbers::pi / (5.0 * k), 0.0};
}

ExperimentConfig make_experiment_config(const Config &config)
{
  ExperimentConfig out;
  const auto get = [&](const char *key, const std::string &fallback) { return config.get(key, fallback); };
  const auto has = [&](const char *key) { return config.has(key); };

  if (has("problem.kappa"))
  {
    out.kappa = to_double("problem.kappa", get("problem.kappa", ""));
    require(out.kappa > 0.0 && out.kappa <= 1e4, "problem.kappa", "must be in (0, 1e4]");
  }
  if (has("problem.lower"))
  {
    out.lower = to_point("problem.lower", get("problem.lower", ""));
  }
  if (has("problem.upper"))
  {
    out.upper = to_point("problem.upper", get("problem.upper", ""));
  }
  require(out.upper.x > out.lower.x && out.upper.y > out.lower.y, "problem.upper",
          "domain rectangle must have positive extent");
  if (has("problem.source") && get("problem.source", "") != "auto")
  {
    out.source = to_point("problem.source", get("problem.source", ""));
    const Vec2 s = *out.source;
    require(!(s.x >= out.lower.x && s.x <= out.upper.x && s.y >= out.lower.y && s.y <= out.upper.y),
            "problem.source", "must lie outside the closed domain");
  }
  if (has("problem.sigma"))
  {
    out.sigma = to_double("problem.sigma", get("problem.sigma", ""));
    require(out.sigma > 0.0, "problem.sigma", "must be positive");
  }

  if (has("mesh.nx"))
  {
    out.nx = positive_int("mesh.nx", get("mesh.nx", ""), 1000);
  }
  if (has("mesh.ny"))
  {
    out.ny = positive_int("mesh.ny", get("mesh.ny", ""), 1000);
  }
  if (has("mesh.jitter"))
  {
    out.jitter = to_double("mesh.jitter", get("mesh.jitter", ""));
    require(out.jitter >= 0.0 && out.jitter < 0.5, "mesh.jitter", "must be in [0, 0.5)");
  }
  if (has("mesh.seed"))
  {
    const long long seed = to_integer("mesh.seed", get("mesh.seed", ""));
    require(seed >= 0, "mesh.seed", "must be non-negative");
    out.seed = static_cast<std::uint64_t>(seed);
  }
  if (has("mesh.file"))
  {
    std::filesystem::path file = get("mesh.file", "");
    out.mesh_file = file.is_absolute() ? file : config.base_dir() / file;
  }

  if (has("basis.P"))
  {
    out.P.clear();
    for (const auto &item : split_list("basis.P", get("basis.P", "")))
    {
      out.P.push_back(positive_int("basis.P", item, 4096));
    }
  }
  if (has("basis.modes"))
  {
    out.modes.clear();
    for (const auto &item : split_list("basis.modes", get("basis.modes", "")))
    {
      try
      {
        out.modes.push_back(parse_basis_mode(item));
      }
      catch (const Error &)
      {
        throw ConfigError("basis.modes: unknown mode '" + item + "' (expected PPW or EPW)");
      }
    }
  }
  if (has("basis.oversampling"))
  {
    out.oversampling = to_double("basis.oversampling", get("basis.oversampling", ""));
    require(out.oversampling >= 1.0 && out.oversampling <= 10.0, "basis.oversampling",
            "must be in [1, 10]");
  }
  if (has("basis.stream_offset"))
  {
    const long long v = to_integer("basis.stream_offset", get("basis.stream_offset", ""));
    require(v >= 0 && v < (1ll << 31), "basis.stream_offset", "must be in [0, 2^31)");
    out.stream_offset = static_cast<std::uint64_t>(v);
  }

  if (has("solver.epsilon"))
  {
    out.epsilon = to_double("solver.epsilon", get("solver.epsilon", ""));
    require(out.epsilon > 0.0 && out.epsilon < 1.0, "solver.epsilon", "must be in (0, 1)");
  }
  if (has("solver.method"))
  {
    try
    {
      out.solver = parse_solver_method(get("solver.method", ""));
    }
    catch (const Error &)
    {
      throw ConfigError("solver.method: expected 'trace' or 'gram'");
    }
  }

  if (has("output.dir"))
  {
    std::filesystem::path dir = get("output.dir", "");
    out.out_dir = dir;
  }
  if (has("output.grid"))
  {
    out.grid = positive_int("output.grid", get("output.grid", ""), 4096);
  }

  if (has("ksweep.kappas"))
  {
    out.ksweep_kappas.clear();
    for (const auto &item : split_list("ksweep.kappas", get("ksweep.kappas", "")))
    {
      const double k = to_double("ksweep.kappas", item);
      require(k > 0.0 && k <= 1e4, "ksweep.kappas", "entries must be in (0, 1e4]");
      out.ksweep_kappas.push_back(k);
    }
  }
  if (has("ksweep.waves_per_kappa"))
  {
    out.ksweep_waves_per_kappa = to_double("ksweep.waves_per_kappa", get("ksweep.waves_per_kappa", ""));
    require(out.ksweep_waves_per_kappa > 0.0, "ksweep.waves_per_kappa", "must be positive");
  }

  out.stability_kappa = out.kappa;
  if (has("stability.kappa"))
  {
    out.stability_kappa = to_double("stability.kappa", get("stability.kappa", ""));
    require(out.stability_kappa > 0.0, "stability.kappa", "must be positive");
  }
  if (has("stability.m"))
  {
    out.stability_m.clear();
    for (const auto &item : split_list("stability.m", get("stability.m", "")))
    {
      const long long m = to_integer("stability.m", item);
      require(m >= 0 && m <= 10000, "stability.m", "entries must be in [0, 10000]");
      out.stability_m.push_back(static_cast<int>(m));
    }
  }
  if (has("stability.P"))
  {
    out.stability_P.clear();
    for (const auto &item : split_list("stability.P", get("stability.P", "")))
    {
      out.stability_P.push_back(positive_int("stability.P", item, 8192));
    }
  }

  out.config_hash = config.hash();
  return out;
}

}  // namespace trefftz::cli

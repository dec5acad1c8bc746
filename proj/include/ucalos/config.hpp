// SPDX-License-Identifier: Apache-2.0
//
// ucalos: line-of-sight MIMO link simulator for uniform circular arrays
// Copyright (C) 2026 The ucalos authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

// Experiment configuration files.
//
//   # comment
//   [geometry]
//   lambda_m = 0.1
//   d_m = 1.2
//   r_m = 0.4
//   R_m = 0.4
//   N = 4
//   [experiment]
//   kind = ber
//   snr_db = 0:5:20
//   ...
//
// Physical quantities carry their unit in the key name. Lists are comma
// separated; numeric ranges may be written start:step:stop (inclusive).

#include "analysis.hpp"
#include "error.hpp"
#include "geometry.hpp"
#include "simulation.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace ucalos {

// ----- Raw key/value document ---------------------------------------------

class ConfigDocument {
public:
  struct Entry {
    std::string value;
    std::size_t line;
  };

  static ConfigDocument parse(std::string_view text) {
    ConfigDocument doc;
    std::string section;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t eol = std::min(text.find('\n', pos), text.size());
      std::string_view line = text.substr(pos, eol - pos);
      pos = eol + 1;
      ++line_no;
      if (const auto hash = line.find_first_of("#;"); hash != std::string_view::npos)
        line = line.substr(0, hash);
      line = trim(line);
      if (line.empty())
        continue;
      if (line.front() == '[') {
        if (line.back() != ']')
          throw ConfigError("unterminated section header", line_no);
        section = std::string(trim(line.substr(1, line.size() - 2)));
        if (section != "geometry" && section != "experiment")
          throw ConfigError("unknown section [" + section + "] (expected [geometry] or [experiment])", line_no);
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string_view::npos)
        throw ConfigError("expected 'key = value'", line_no);
      if (section.empty())
        throw ConfigError("key outside of any section", line_no);
      const std::string key(trim(line.substr(0, eq)));
      const std::string value(trim(line.substr(eq + 1)));
      if (key.empty())
        throw ConfigError("empty key", line_no);
      auto &sec = doc.sections_[section];
      if (sec.contains(key))
        throw ConfigError("duplicate key '" + key + "' (first set on line " + std::to_string(sec[key].line) + ")",
                          line_no);
      sec[key] = {value, line_no};
    }
    return doc;
  }

  static ConfigDocument load(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
      throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
  }

  const Entry *find(const std::string &section, const std::string &key) const {
    auto s = sections_.find(section);
    if (s == sections_.end())
      return nullptr;
    auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
  }

  const std::map<std::string, std::map<std::string, Entry>> &sections() const noexcept { return sections_; }

  static std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
      return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  }

private:
  std::map<std::string, std::map<std::string, Entry>> sections_;
};

// ----- Typed experiment configuration -------------------------------------

enum class ExperimentKind { Channel, VarianceSweep, Spacing, Ber, Complexity };

inline std::string_view to_string(ExperimentKind k) noexcept {
  switch (k) {
  case ExperimentKind::Channel:
    return "channel";
  case ExperimentKind::VarianceSweep:
    return "variance-sweep";
  case ExperimentKind::Spacing:
    return "spacing";
  case ExperimentKind::Ber:
    return "ber";
  case ExperimentKind::Complexity:
    return "complexity";
  }
  return "?";
}

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Channel;

  // geometry block; radii and counts only for channel and ber
  UcaParams geometry;

  // channel
  double circulant_tol = default_circulant_tol;

  // variance-sweep, spacing
  std::vector<double> radius_grid_lambda;
  std::vector<int> counts;
  double sigma2_threshold = 0.01;
  int count_cap = default_count_cap;

  // ber
  std::vector<Scheme> schemes;
  std::string constellation = "bpsk";
  std::vector<double> snr_db;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  EarlyStop early_stop;
  std::uint64_t block_trials = 1024;

  // complexity
  std::vector<std::uint64_t> complexity_N;
  std::vector<std::uint64_t> complexity_K;

  AlignedScene scene() const {
    return {geometry.wavelength, geometry.separation, geometry.beta, geometry.tx_rotation, geometry.rx_rotation};
  }
};

namespace detail {

class ConfigReader {
public:
  explicit ConfigReader(const ConfigDocument &doc) : doc_(doc) {}

  const ConfigDocument::Entry *get(const std::string &section, const std::string &key) {
    used_.insert(section + "." + key);
    return doc_.find(section, key);
  }

  const ConfigDocument::Entry &require(const std::string &section, const std::string &key,
                                       std::string_view for_what) {
    const auto *e = get(section, key);
    if (!e)
      throw ConfigError("missing key '" + key + "' in [" + section + "] (required for " + std::string(for_what) + ")");
    return *e;
  }

  // Keys present in the file that nothing consumed
  void reject_unused(std::string_view kind) const {
    for (const auto &[sec, keys] : doc_.sections())
      for (const auto &[key, entry] : keys)
        if (!used_.contains(sec + "." + key))
          throw ConfigError("key '" + key + "' in [" + sec + "] is not used by experiment kind '" + std::string(kind) +
                                "'",
                            entry.line);
  }

private:
  const ConfigDocument &doc_;
  std::set<std::string> used_;
};

inline double parse_double(std::string_view s, std::size_t line) {
  s = ConfigDocument::trim(s);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v))
    throw ConfigError("'" + std::string(s) + "' is not a finite number", line);
  return v;
}

inline std::uint64_t parse_uint(std::string_view s, std::size_t line) {
  s = ConfigDocument::trim(s);
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ConfigError("'" + std::string(s) + "' is not a non-negative integer", line);
  return v;
}

inline int parse_count(std::string_view s, std::size_t line) {
  const auto v = parse_uint(s, line);
  if (v < 1 || v > 4096)
    throw ConfigError("antenna count " + std::to_string(v) + " outside 1..4096", line);
  return static_cast<int>(v);
}

inline bool parse_bool(std::string_view s, std::size_t line) {
  s = ConfigDocument::trim(s);
  if (s == "true" || s == "yes" || s == "1")
    return true;
  if (s == "false" || s == "no" || s == "0")
    return false;
  throw ConfigError("'" + std::string(s) + "' is not a boolean", line);
}

inline std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = s.find(',', pos);
    out.push_back(ConfigDocument::trim(s.substr(pos, comma == std::string_view::npos ? comma : comma - pos)));
    if (comma == std::string_view::npos)
      break;
    pos = comma + 1;
  }
  return out;
}

// "a, b, c" or "start:step:stop" (inclusive, up to rounding)
inline std::vector<double> parse_grid(std::string_view s, std::size_t line) {
  std::vector<double> out;
  if (s.find(':') != std::string_view::npos) {
    const auto c1 = s.find(':');
    const auto c2 = s.find(':', c1 + 1);
    if (c2 == std::string_view::npos)
      throw ConfigError("range must be start:step:stop", line);
    const double start = parse_double(s.substr(0, c1), line);
    const double step = parse_double(s.substr(c1 + 1, c2 - c1 - 1), line);
    const double stop = parse_double(s.substr(c2 + 1), line);
    if (!(step > 0.0) || stop < start)
      throw ConfigError("range needs step > 0 and stop >= start", line);
    const auto n = static_cast<std::uint64_t>(std::floor((stop - start) / step + 1e-9));
    if (n > 1'000'000)
      throw ConfigError("range has too many points", line);
    for (std::uint64_t i = 0; i <= n; ++i)
      out.push_back(start + static_cast<double>(i) * step);
    return out;
  }
  for (auto item : split_list(s)) {
    if (item.empty())
      throw ConfigError("empty list item", line);
    out.push_back(parse_double(item, line));
  }
  return out;
}

} // namespace detail

inline ExperimentKind parse_kind(std::string_view s, std::size_t line) {
  for (ExperimentKind k : {ExperimentKind::Channel, ExperimentKind::VarianceSweep, ExperimentKind::Spacing,
                           ExperimentKind::Ber, ExperimentKind::Complexity})
    if (s == to_string(k))
      return k;
  throw ConfigError("unknown experiment kind '" + std::string(s) +
                        "' (expected channel, variance-sweep, spacing, ber or complexity)",
                    line);
}

// Validates everything a run needs; a config that passes never fails later
// for configuration reasons.
inline ExperimentConfig resolve_config(const ConfigDocument &doc) {
  using namespace detail;
  ConfigReader rd(doc);
  ExperimentConfig cfg;
  const auto &kind_e = rd.require("experiment", "kind", "every experiment");
  cfg.kind = parse_kind(kind_e.value, kind_e.line);
  const std::string kind_name(to_string(cfg.kind));

  auto opt_double = [&](const std::string &sec, const std::string &key, double &dst) {
    if (const auto *e = rd.get(sec, key))
      dst = parse_double(e->value, e->line);
  };
  auto req_double = [&](const std::string &sec, const std::string &key, double &dst) {
    const auto &e = rd.require(sec, key, kind_name);
    dst = parse_double(e.value, e.line);
  };
  auto line_of = [&](const std::string &sec, const std::string &key) {
    const auto *e = doc.find(sec, key);
    return e ? e->line : std::size_t{0};
  };

  const bool scene_kind = cfg.kind != ExperimentKind::Complexity;
  const bool full_geometry = cfg.kind == ExperimentKind::Channel || cfg.kind == ExperimentKind::Ber;

  if (scene_kind) {
    auto &g = cfg.geometry;
    req_double("geometry", "lambda_m", g.wavelength);
    req_double("geometry", "d_m", g.separation);
    opt_double("geometry", "theta_rad", g.tx_rotation);
    opt_double("geometry", "varphi_rad", g.rx_rotation);
    double br = g.beta.real(), bi = g.beta.imag();
    opt_double("geometry", "beta_real", br);
    opt_double("geometry", "beta_imag", bi);
    g.beta = {br, bi};
    if (full_geometry) {
      req_double("geometry", "r_m", g.tx_radius);
      req_double("geometry", "R_m", g.rx_radius);
      const auto &ne = rd.require("geometry", "N", kind_name);
      g.tx_count = parse_count(ne.value, ne.line);
      g.rx_count = g.tx_count;
      if (const auto *me = rd.get("geometry", "M"))
        g.rx_count = parse_count(me->value, me->line);
    } else {
      g.tx_radius = g.rx_radius = 1.0; // placeholder for validation; sweeps set radii per point
    }
    try {
      g = UcaGeometry(g).params();
    } catch (const ArgumentError &e) {
      throw ConfigError(std::string("invalid geometry: ") + e.what(), line_of("geometry", "lambda_m"));
    }
  }

  switch (cfg.kind) {
  case ExperimentKind::Channel:
    opt_double("experiment", "circulant_tol", cfg.circulant_tol);
    if (!(cfg.circulant_tol > 0.0))
      throw ConfigError("circulant_tol must be > 0", line_of("experiment", "circulant_tol"));
    break;

  case ExperimentKind::VarianceSweep:
  case ExperimentKind::Spacing: {
    const auto &ge = rd.require("experiment", "radius_grid_lambda", kind_name);
    cfg.radius_grid_lambda = parse_grid(ge.value, ge.line);
    for (double r : cfg.radius_grid_lambda)
      if (!(r > 0.0))
        throw ConfigError("radius grid values must be > 0", ge.line);
    if (cfg.kind == ExperimentKind::VarianceSweep) {
      const auto &ne = rd.require("experiment", "N_list", kind_name);
      for (auto item : split_list(ne.value))
        cfg.counts.push_back(parse_count(item, ne.line));
    } else {
      req_double("experiment", "sigma2_threshold", cfg.sigma2_threshold);
      if (!(cfg.sigma2_threshold > 0.0))
        throw ConfigError("sigma2_threshold must be > 0", line_of("experiment", "sigma2_threshold"));
      if (const auto *e = rd.get("experiment", "N_cap")) {
        cfg.count_cap = parse_count(e->value, e->line);
        if (cfg.count_cap < 2)
          throw ConfigError("N_cap must be >= 2", e->line);
      }
    }
    break;
  }

  case ExperimentKind::Ber: {
    const auto &se = rd.require("experiment", "scheme", kind_name);
    for (auto item : split_list(se.value)) {
      try {
        cfg.schemes.push_back(parse_scheme(item));
      } catch (const ArgumentError &e) {
        throw ConfigError(e.what(), se.line);
      }
    }
    if (const auto *e = rd.get("experiment", "constellation")) {
      if (e->value != "bpsk" && e->value != "qpsk")
        throw ConfigError("unknown constellation '" + e->value + "' (expected bpsk or qpsk)", e->line);
      cfg.constellation = e->value;
    }
    const auto &snr = rd.require("experiment", "snr_db", kind_name);
    cfg.snr_db = parse_grid(snr.value, snr.line);
    const auto &te = rd.require("experiment", "trials", kind_name);
    cfg.trials = parse_uint(te.value, te.line);
    if (cfg.trials < 1)
      throw ConfigError("trials must be >= 1", te.line);
    const auto &seed = rd.require("experiment", "seed", kind_name);
    cfg.seed = parse_uint(seed.value, seed.line);
    if (const auto *e = rd.get("experiment", "early_stop"))
      cfg.early_stop.enabled = parse_bool(e->value, e->line);
    if (const auto *e = rd.get("experiment", "early_stop_min_errors"))
      cfg.early_stop.min_errors = parse_uint(e->value, e->line);
    if (const auto *e = rd.get("experiment", "early_stop_min_trials"))
      cfg.early_stop.min_trials = parse_uint(e->value, e->line);
    if (const auto *e = rd.get("experiment", "block_trials")) {
      cfg.block_trials = parse_uint(e->value, e->line);
      if (cfg.block_trials < 1)
        throw ConfigError("block_trials must be >= 1", e->line);
    }
    const bool beamformed = std::any_of(cfg.schemes.begin(), cfg.schemes.end(),
                                        [](Scheme s) { return s != Scheme::TraditionalExhaustive; });
    if (beamformed && cfg.geometry.tx_count != cfg.geometry.rx_count)
      throw ConfigError("beamformed schemes need N == M", line_of("geometry", "M"));
    break;
  }

  case ExperimentKind::Complexity: {
    const auto &ne = rd.require("experiment", "N_list", kind_name);
    for (auto item : split_list(ne.value)) {
      const auto n = parse_uint(item, ne.line);
      if (!is_power_of_two(n))
        throw ConfigError("N must be a power of two for the fast symbol-wise count, got " + std::to_string(n),
                          ne.line);
      cfg.complexity_N.push_back(n);
    }
    const auto &ke = rd.require("experiment", "K_list", kind_name);
    for (auto item : split_list(ke.value)) {
      const auto k = parse_uint(item, ke.line);
      if (k < 2)
        throw ConfigError("K must be >= 2", ke.line);
      cfg.complexity_K.push_back(k);
    }
    break;
  }
  }

  rd.reject_unused(kind_name);
  return cfg;
}

inline ExperimentConfig load_config(const std::string &path) { return resolve_config(ConfigDocument::load(path)); }

} // namespace ucalos

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

// Experiment drivers behind the command-line tool. Each driver computes all of
// its output files in memory; nothing touches the disk until every result is
// ready, so a failing run leaves no partial files behind.

#include "analysis.hpp"
#include "channel.hpp"
#include "config.hpp"
#include "simulation.hpp"

#include <json.hpp>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

namespace ucalos {

struct OutputFile {
  std::string name;
  std::string content;
};

using OutputSet = std::vector<OutputFile>;

// Shortest round-trip decimal representation
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace detail {

inline nlohmann::ordered_json geometry_json(const UcaParams &g, bool full) {
  nlohmann::ordered_json j;
  j["lambda_m"] = g.wavelength;
  j["d_m"] = g.separation;
  if (full) {
    j["r_m"] = g.tx_radius;
    j["R_m"] = g.rx_radius;
    j["N"] = g.tx_count;
    j["M"] = g.rx_count;
  }
  j["theta_rad"] = g.tx_rotation;
  j["varphi_rad"] = g.rx_rotation;
  j["beta_real"] = g.beta.real();
  j["beta_imag"] = g.beta.imag();
  return j;
}

inline nlohmann::ordered_json resolved_json(const ExperimentConfig &cfg) {
  nlohmann::ordered_json j;
  j["kind"] = std::string(to_string(cfg.kind));
  const bool full = cfg.kind == ExperimentKind::Channel || cfg.kind == ExperimentKind::Ber;
  if (cfg.kind != ExperimentKind::Complexity)
    j["geometry"] = geometry_json(cfg.geometry, full);
  auto &e = j["experiment"];
  switch (cfg.kind) {
  case ExperimentKind::Channel:
    e["circulant_tol"] = cfg.circulant_tol;
    break;
  case ExperimentKind::VarianceSweep:
    e["radius_grid_lambda"] = cfg.radius_grid_lambda;
    e["N_list"] = cfg.counts;
    break;
  case ExperimentKind::Spacing:
    e["radius_grid_lambda"] = cfg.radius_grid_lambda;
    e["sigma2_threshold"] = cfg.sigma2_threshold;
    e["N_cap"] = cfg.count_cap;
    break;
  case ExperimentKind::Ber: {
    std::vector<std::string> names;
    for (Scheme s : cfg.schemes)
      names.emplace_back(to_string(s));
    e["scheme"] = names;
    e["constellation"] = cfg.constellation;
    e["snr_db"] = cfg.snr_db;
    e["trials"] = cfg.trials;
    e["seed"] = cfg.seed;
    e["early_stop"] = cfg.early_stop.enabled;
    e["early_stop_min_errors"] = cfg.early_stop.min_errors;
    e["early_stop_min_trials"] = cfg.early_stop.min_trials;
    e["block_trials"] = cfg.block_trials;
    e["snr_definition"] = "symbol energy over per-receive-antenna complex noise variance";
    break;
  }
  case ExperimentKind::Complexity:
    e["N_list"] = cfg.complexity_N;
    e["K_list"] = cfg.complexity_K;
    break;
  }
  return j;
}

inline OutputFile manifest(const ExperimentConfig &cfg, const OutputSet &outputs) {
  nlohmann::ordered_json j;
  j["tool"] = "ucalos";
  j["command"] = std::string(to_string(cfg.kind));
  if (cfg.kind == ExperimentKind::Ber)
    j["seed"] = cfg.seed;
  j["config"] = resolved_json(cfg);
  std::vector<std::string> files;
  for (const auto &o : outputs)
    files.push_back(o.name);
  j["outputs"] = files;
  return {"manifest.json", j.dump(2) + "\n"};
}

inline UcaGeometry geometry_of(const ExperimentConfig &cfg) { return UcaGeometry(cfg.geometry); }

inline std::vector<double> radii_m(const ExperimentConfig &cfg) {
  std::vector<double> out;
  for (double r : cfg.radius_grid_lambda)
    out.push_back(r * cfg.geometry.wavelength);
  return out;
}

} // namespace detail

inline OutputSet cmd_channel(const ExperimentConfig &cfg) {
  const ChannelMatrix H = build_channel(detail::geometry_of(cfg));
  OutputSet out;

  std::string mat = "m,n,re,im\n";
  for (std::size_t m = 0; m < H.rows(); ++m)
    for (std::size_t n = 0; n < H.cols(); ++n) {
      const cdouble h = H.gains(m, n);
      mat += std::to_string(m + 1) + "," + std::to_string(n + 1) + "," + format_double(h.real()) + "," +
             format_double(h.imag()) + "\n";
    }
  out.push_back({"channel_matrix.csv", std::move(mat)});

  nlohmann::ordered_json summary;
  summary["rows"] = H.rows();
  summary["cols"] = H.cols();
  summary["square"] = H.square();
  if (H.square()) {
    const double dev = circulant_deviation(H.gains);
    const auto g = subchannel_gains(H);
    summary["circulant"] = dev <= cfg.circulant_tol;
    summary["circulant_deviation"] = dev;
    summary["circulant_tol"] = cfg.circulant_tol;
    summary["diagonalization_residual"] = diagonalization_residual(H);
    summary["sigma2"] = gain_variance(g);

    std::string prof = "k,abs_H1k\n";
    const auto mags = g.magnitudes();
    for (std::size_t k = 0; k < mags.size(); ++k)
      prof += std::to_string(k + 1) + "," + format_double(mags[k]) + "\n";
    out.push_back({"gain_profile.csv", std::move(prof)});
  } else {
    summary["circulant"] = "not square";
  }
  out.push_back({"channel_summary.json", summary.dump(2) + "\n"});
  out.push_back(detail::manifest(cfg, out));
  return out;
}

inline OutputSet cmd_sweep(const ExperimentConfig &cfg) {
  const auto radii = detail::radii_m(cfg);
  const auto samples = variance_sweep(cfg.scene(), radii, cfg.counts);
  std::string csv = "R_over_lambda,N,sigma2\n";
  for (std::size_t i = 0; i < samples.size(); ++i) {
    // report the configured grid value rather than the round-tripped product
    const double r = cfg.radius_grid_lambda[i % radii.size()];
    csv += format_double(r) + "," + std::to_string(samples[i].count) + "," + format_double(samples[i].sigma2) + "\n";
  }
  OutputSet out{{"variance_sweep.csv", std::move(csv)}};
  out.push_back(detail::manifest(cfg, out));
  return out;
}

inline OutputSet cmd_spacing(const ExperimentConfig &cfg) {
  const auto radii = detail::radii_m(cfg);
  const auto rows = spacing_analysis(cfg.scene(), radii, cfg.sigma2_threshold, cfg.count_cap);
  std::string csv = "R_over_lambda,N_star,spacing_over_lambda,sigma2\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    csv += format_double(cfg.radius_grid_lambda[i]) + "," + std::to_string(rows[i].best_count) + ",";
    if (rows[i].spacing_over_lambda)
      csv += format_double(*rows[i].spacing_over_lambda);
    csv += "," + format_double(rows[i].sigma2) + "\n";
  }
  OutputSet out{{"spacing.csv", std::move(csv)}};
  out.push_back(detail::manifest(cfg, out));
  return out;
}

inline OutputSet cmd_ber(const ExperimentConfig &cfg, unsigned workers = 1) {
  std::string csv = "scheme,snr_db,bits,errors,ber_empirical,ber_theoretical\n";
  std::string theory = "snr_db,ber_theoretical,ber_theoretical_literal\n";
  bool theory_written = false;
  for (Scheme s : cfg.schemes) {
    SimulationConfig sim;
    sim.geometry = detail::geometry_of(cfg);
    sim.constellation = cfg.constellation;
    sim.snr_db = cfg.snr_db;
    sim.trials_per_point = cfg.trials;
    sim.seed = cfg.seed;
    sim.scheme = s;
    sim.early_stop = cfg.early_stop;
    sim.workers = workers;
    sim.block_trials = cfg.block_trials;
    const BerResult res = run_ber(sim);
    for (const auto &p : res.points) {
      csv += std::string(to_string(s)) + "," + format_double(p.snr_db) + "," + std::to_string(p.bits) + "," +
             std::to_string(p.errors) + "," + format_double(p.ber_empirical) + ",";
      if (p.ber_theoretical)
        csv += format_double(*p.ber_theoretical);
      csv += "\n";
    }
    if (!theory_written && res.points.front().ber_theoretical) {
      for (const auto &p : res.points)
        theory += format_double(p.snr_db) + "," + format_double(*p.ber_theoretical) + "," +
                  format_double(*p.ber_theoretical_literal) + "\n";
      theory_written = true;
    }
  }
  OutputSet out{{"ber.csv", std::move(csv)}};
  if (theory_written)
    out.push_back({"ber_theory.csv", std::move(theory)});
  out.push_back(detail::manifest(cfg, out));
  return out;
}

inline OutputSet cmd_complexity(const ExperimentConfig &cfg) {
  std::string csv = "scheme,N,K,additions,multiplications\n";
  for (auto N : cfg.complexity_N)
    for (auto K : cfg.complexity_K)
      for (DetectorKind kind : {DetectorKind::FastSymbolWise, DetectorKind::TraditionalMl}) {
        const auto r = complexity_report(kind, N, K);
        csv += std::string(to_string(kind)) + "," + std::to_string(N) + "," + std::to_string(K) + "," +
               std::to_string(r.complex_additions) + "," + std::to_string(r.complex_multiplications) + "\n";
      }
  OutputSet out{{"complexity.csv", std::move(csv)}};
  out.push_back(detail::manifest(cfg, out));
  return out;
}

inline OutputSet run_experiment(const ExperimentConfig &cfg, unsigned workers = 1) {
  switch (cfg.kind) {
  case ExperimentKind::Channel:
    return cmd_channel(cfg);
  case ExperimentKind::VarianceSweep:
    return cmd_sweep(cfg);
  case ExperimentKind::Spacing:
    return cmd_spacing(cfg);
  case ExperimentKind::Ber:
    return cmd_ber(cfg, workers);
  case ExperimentKind::Complexity:
    return cmd_complexity(cfg);
  }
  return {};
}

// Each file is written to a temporary name and renamed into place.
inline void write_outputs(const std::filesystem::path &dir, const OutputSet &outputs) {
  std::filesystem::create_directories(dir);
  for (const auto &o : outputs) {
    const auto final_path = dir / o.name;
    auto tmp = final_path;
    tmp += ".tmp";
    {
      std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
      if (!f)
        throw std::runtime_error("cannot write " + tmp.string());
      f << o.content;
      if (!f)
        throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, final_path);
  }
}

} // namespace ucalos

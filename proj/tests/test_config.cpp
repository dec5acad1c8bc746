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

#include <catch_amalgamated.hpp>

#include <ucalos/config.hpp>
#include <ucalos/experiments.hpp>

#include <json.hpp>

#include <string>

using namespace ucalos;
using Catch::Approx;
using Catch::Matchers::ContainsSubstring;

namespace {

const char *ber_text = R"(# BER run
[geometry]
lambda_m = 0.1
d_m = 1.2
r_m = 0.4
R_m = 0.4
theta_rad = 0
varphi_rad = 0
N = 4

[experiment]
kind = ber
scheme = beamformed-fast, traditional-exhaustive
snr_db = 0:5:20
trials = 100
seed = 7
early_stop = false
)";

ExperimentConfig resolve(const std::string &text) { return resolve_config(ConfigDocument::parse(text)); }

std::size_t error_line(const std::string &text) {
  try {
    resolve(text);
  } catch (const ConfigError &e) {
    return e.line();
  }
  return 9999;
}

} // namespace

TEST_CASE("a complete BER config resolves", "[config]") {
  const auto cfg = resolve(ber_text);
  CHECK(cfg.kind == ExperimentKind::Ber);
  CHECK(cfg.geometry.tx_count == 4);
  CHECK(cfg.geometry.rx_count == 4);
  CHECK(cfg.geometry.beta.real() == Approx(4 * std::numbers::pi));
  CHECK(cfg.schemes == std::vector<Scheme>{Scheme::BeamformedFast, Scheme::TraditionalExhaustive});
  CHECK(cfg.snr_db == std::vector<double>{0, 5, 10, 15, 20});
  CHECK(cfg.trials == 100);
  CHECK(cfg.seed == 7);
  CHECK_FALSE(cfg.early_stop.enabled);
}

TEST_CASE("grid syntax", "[config]") {
  CHECK(detail::parse_grid("2:0.25:3", 1).size() == 5);
  CHECK(detail::parse_grid("2:0.25:3", 1).back() == Approx(3.0));
  CHECK(detail::parse_grid("1, 2.5,4", 1) == std::vector<double>{1, 2.5, 4});
  CHECK_THROWS_AS(detail::parse_grid("1:0:3", 1), ConfigError);
  CHECK_THROWS_AS(detail::parse_grid("3:1:1", 1), ConfigError);
  CHECK_THROWS_AS(detail::parse_grid("1,,2", 1), ConfigError);
}

TEST_CASE("config errors carry line numbers", "[config]") {
  std::string t = ber_text;
  SECTION("bad number") {
    t.replace(t.find("d_m = 1.2"), 9, "d_m = 1.2x");
    CHECK(error_line(t) == 4);
  }
  SECTION("unknown key") {
    t += "colour = blue\n";
    CHECK(error_line(t) == 18);
  }
  SECTION("duplicate key") {
    t += "seed = 8\n";
    CHECK(error_line(t) == 18);
  }
  SECTION("zero trials") {
    t.replace(t.find("trials = 100"), 12, "trials = 0");
    CHECK(error_line(t) == 15);
  }
  SECTION("unknown scheme") {
    t.replace(t.find("beamformed-fast,"), 16, "zero-forcing,");
    CHECK(error_line(t) == 13);
  }
  SECTION("line outside a section") { CHECK(error_line("kind = ber\n") == 1); }
  SECTION("unknown section") { CHECK(error_line("[plots]\n") == 1); }
}

TEST_CASE("missing and inconsistent keys", "[config]") {
  std::string t = ber_text;
  SECTION("missing seed") {
    t.replace(t.find("seed = 7"), 8, "");
    CHECK_THROWS_WITH(resolve(t), ContainsSubstring("seed"));
  }
  SECTION("invalid geometry") {
    t.replace(t.find("d_m = 1.2"), 9, "d_m = 0");
    CHECK_THROWS_AS(resolve(t), ConfigError);
  }
  SECTION("beamformed scheme with M != N") {
    t.replace(t.find("N = 4"), 5, "N = 4\nM = 3");
    CHECK_THROWS_WITH(resolve(t), ContainsSubstring("N == M"));
  }
  SECTION("missing kind") { CHECK_THROWS_AS(resolve("[geometry]\nlambda_m = 1\n"), ConfigError); }
  SECTION("radius keys are rejected for sweeps") {
    CHECK_THROWS_WITH(resolve("[geometry]\nlambda_m = 1\nd_m = 10\nr_m = 1\n[experiment]\nkind = spacing\n"
                              "radius_grid_lambda = 2:1:3\nsigma2_threshold = 0.01\n"),
                      ContainsSubstring("r_m"));
  }
  SECTION("complexity N must be a power of two") {
    CHECK_THROWS_AS(resolve("[experiment]\nkind = complexity\nN_list = 3\nK_list = 2\n"), ConfigError);
  }
}

TEST_CASE("experiment drivers produce the documented CSV layouts", "[config][experiments]") {
  SECTION("complexity") {
    const auto out = run_experiment(resolve("[experiment]\nkind = complexity\nN_list = 2, 4, 8\nK_list = 2\n"));
    REQUIRE(out.size() == 2);
    CHECK(out[0].name == "complexity.csv");
    CHECK(out[0].content == "scheme,N,K,additions,multiplications\n"
                            "fast-symbol-wise-ml,2,2,6,5\n"
                            "traditional-ml,2,2,16,24\n"
                            "fast-symbol-wise-ml,4,2,16,12\n"
                            "traditional-ml,4,2,256,320\n"
                            "fast-symbol-wise-ml,8,2,40,28\n"
                            "traditional-ml,8,2,16384,18432\n");
    const auto manifest = nlohmann::json::parse(out[1].content);
    CHECK(manifest["command"] == "complexity");
    CHECK(manifest["outputs"][0] == "complexity.csv");
  }
  SECTION("spacing") {
    const auto out = run_experiment(resolve("[geometry]\nlambda_m = 1\nd_m = 10\n[experiment]\nkind = spacing\n"
                                            "radius_grid_lambda = 2, 3\nsigma2_threshold = 1e-40\nN_cap = 8\n"));
    CHECK(out[0].content == "R_over_lambda,N_star,spacing_over_lambda,sigma2\n2,1,,0\n3,1,,0\n");
  }
  SECTION("variance sweep") {
    const auto out = run_experiment(resolve("[geometry]\nlambda_m = 0.5\nd_m = 5\n[experiment]\n"
                                            "kind = variance-sweep\nradius_grid_lambda = 1:1:3\nN_list = 4, 6\n"));
    CHECK(out[0].content.starts_with("R_over_lambda,N,sigma2\n1,4,"));
    CHECK(std::count(out[0].content.begin(), out[0].content.end(), '\n') == 7);
  }
  SECTION("channel, non-square") {
    const auto out = run_experiment(resolve("[geometry]\nlambda_m = 0.1\nd_m = 1\nr_m = 0.2\nR_m = 0.3\nN = 4\n"
                                            "M = 3\n[experiment]\nkind = channel\n"));
    REQUIRE(out.size() == 3);
    CHECK(out[0].name == "channel_matrix.csv");
    CHECK(std::count(out[0].content.begin(), out[0].content.end(), '\n') == 13);
    const auto summary = nlohmann::json::parse(out[1].content);
    CHECK(summary["circulant"] == "not square");
  }
  SECTION("ber") {
    const auto out = run_experiment(resolve(ber_text), 3);
    REQUIRE(out.size() == 3);
    CHECK(out[0].content.starts_with("scheme,snr_db,bits,errors,ber_empirical,ber_theoretical\nbeamformed-fast,0,400,"));
    CHECK(out[1].name == "ber_theory.csv");
    CHECK(out[0].content == run_experiment(resolve(ber_text), 1)[0].content);
  }
}

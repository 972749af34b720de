#include <cmath>
#include <filesystem>
#include <random>

#include "doctest.h"

#include "ksynth/experiments.hpp"
#include "ksynth/io.hpp"
#include "ksynth/stats.hpp"
#include "ksynth/svg.hpp"
#include "ksynth/thread_pool.hpp"

using namespace ksynth;
namespace fs = std::filesystem;

TEST_CASE("linear fit recovers exact lines") {
  const std::vector<Real> x = {0, 1, 2, 3, 4};
  std::vector<Real> y;
  for (const Real xi : x) y.push_back(2.5 * xi - 1.0);
  const LinearFit fit = fit_line(x, y);
  CHECK(fit.slope == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(fit.residual < 1e-12);
  CHECK(fit.points == 5);

  CHECK_THROWS_AS(fit_line({1.0}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(fit_line({1.0, 1.0}, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("spearman handles monotone data and ties") {
  CHECK(spearman_rho({1, 2, 3, 4}, {10, 20, 40, 80}) == doctest::Approx(1.0));
  CHECK(spearman_rho({1, 2, 3, 4}, {8, 4, 2, 1}) == doctest::Approx(-1.0));
  // ties get average ranks
  const Real rho = spearman_rho({1, 1, 2, 3}, {5, 5, 7, 9});
  CHECK(rho > 0.9);
  CHECK(spearman_rho({1, 1, 1}, {1, 2, 3}) == 0.0);
}

TEST_CASE("digests and atomic writes") {
  CHECK(digest_hex("") == "cbf29ce484222325");
  CHECK(digest_hex("a") != digest_hex("b"));

  const fs::path dir = fs::temp_directory_path() / "ksynth_io_test";
  fs::remove_all(dir);
  atomic_write_file(dir / "x.txt", "hello\n");
  CHECK(read_file(dir / "x.txt") == "hello\n");
  CHECK(file_digest(dir / "x.txt") == digest_hex("hello\n"));
  // overwrite through the same path stays atomic
  atomic_write_file(dir / "x.txt", "bye\n");
  CHECK(read_file(dir / "x.txt") == "bye\n");
  fs::remove_all(dir);
}

TEST_CASE("deterministic float formatting") {
  CHECK(fmt_real(0.5) == "0.5");
  CHECK(fmt_real(1e-3) == "0.001");
  CHECK(fmt_real(3.0) == "3");
  CHECK(fmt_real(1.0 / 3.0) == fmt_real(1.0 / 3.0));
}

TEST_CASE("pulse csv round-trips with sidecar") {
  ControlPulse pulse;
  pulse.dt = 0.25;
  pulse.amplitudes = RealMatrix(3, 4);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<Real> dist(-2.0, 2.0);
  for (int k = 0; k < 3; ++k) {
    for (int a = 0; a < 4; ++a) pulse.amplitudes(k, a) = dist(rng);
  }

  const fs::path dir = fs::temp_directory_path() / "ksynth_pulse_test";
  fs::remove_all(dir);
  const fs::path csv = dir / "pulse.csv";
  write_pulse_csv(csv, pulse, {"X", "Z", "break", "int"});
  write_pulse_sidecar(csv, pulse, "ising", 7, nlohmann::json{{"budget", 100}});

  const std::string header = read_file(csv).substr(0, read_file(csv).find('\n'));
  CHECK(header == "step,u_X,u_Z,u_break,u_int");

  const ControlPulse back = read_pulse_csv(csv);
  REQUIRE(back.steps() == 3);
  REQUIRE(back.channels() == 4);
  for (int k = 0; k < 3; ++k) {
    for (int a = 0; a < 4; ++a) {
      CHECK(back.amplitudes(k, a) == doctest::Approx(pulse.amplitudes(k, a)).epsilon(1e-10));
    }
  }
  const nlohmann::json side = nlohmann::json::parse(read_file(dir / "pulse.json"));
  CHECK(side["dt"] == 0.25);
  CHECK(side["model"] == "ising");
  CHECK(side["seed"] == 7);
  fs::remove_all(dir);
}

TEST_CASE("manifest lists outputs with digests") {
  const fs::path dir = fs::temp_directory_path() / "ksynth_manifest_test";
  fs::remove_all(dir);
  atomic_write_file(dir / "data.csv", "a,b\n1,2\n");

  RunManifest m;
  m.command = "basis";
  m.config = {{"L", 3}};
  m.seed = 9;
  m.add_output(dir / "data.csv");
  m.write(dir);

  const nlohmann::json j = nlohmann::json::parse(read_file(dir / "manifest.json"));
  CHECK(j["command"] == "basis");
  CHECK(j["seed"] == 9);
  CHECK(j["outputs"][0]["path"] == "data.csv");
  CHECK(j["outputs"][0]["digest"] == digest_hex("a,b\n1,2\n"));
  CHECK(j.contains("timestamp"));
  fs::remove_all(dir);
}

TEST_CASE("svg renderer emits plausible documents") {
  SvgPlot plot("demo", "x", "y");
  plot.add_line("curve", {{1, 1}, {2, 4}, {3, 9}});
  plot.add_scatter("dots", {{1.5, 2.0}});
  plot.add_vline(2.0, "marker");
  const std::string svg = plot.render();
  CHECK(svg.find("<svg") == 0);
  CHECK(svg.find("polyline") != std::string::npos);
  CHECK(svg.find("curve") != std::string::npos);
  CHECK(svg.rfind("</svg>\n") == svg.size() - 7);

  SvgPlot logplot("log", "n", "loss");
  logplot.set_log_x(true);
  logplot.set_log_y(true);
  logplot.add_line("l", {{1, 1e-1}, {10, 1e-3}, {100, 1e-6}});
  const std::string logsvg = logplot.render();
  CHECK(logsvg.find("polyline") != std::string::npos);

  SvgPlot heat("heat", "J", "m");
  heat.add_cell(0, 0, 1.0);
  heat.add_cell(1, 0, 2.0);
  heat.add_cell(1, 1, 3.0);
  CHECK(heat.render().find("rect") != std::string::npos);
}

TEST_CASE("parallel_for covers every index and propagates exceptions") {
  std::vector<int> hits(100, 0);
  parallel_for(4, hits.size(), [&](std::size_t i) { hits[i] = 1; });
  for (const int h : hits) CHECK(h == 1);

  CHECK_THROWS_AS(parallel_for(3, 10,
                               [](std::size_t i) {
                                 if (i == 5) throw std::runtime_error("boom");
                               }),
                  std::runtime_error);
}

TEST_CASE("merge_curves takes pointwise minima and recomputes n_c") {
  SynthesisCurve a;
  a.steps = {1, 2, 4};
  a.losses = {0.5, 0.1, 2e-4};
  a.pulses.resize(3);
  SynthesisCurve b;
  b.steps = {1, 2};
  b.losses = {0.3, 0.2};
  b.pulses.resize(2);
  const SynthesisCurve merged = merge_curves({a, b}, 1e-3);
  REQUIRE(merged.steps == std::vector<int>{1, 2, 4});
  CHECK(merged.losses[0] == 0.3);
  CHECK(merged.losses[1] == 0.1);
  CHECK(merged.losses[2] == 2e-4);
  REQUIRE(merged.critical_step.has_value());
  CHECK(*merged.critical_step == 4);
}

TEST_CASE("default schedule matches the documented grid") {
  const std::vector<int> s = default_schedule();
  CHECK(s.front() == 1);
  CHECK(s.back() == 300);
  for (std::size_t i = 0; i + 1 < s.size(); ++i) CHECK(s[i] < s[i + 1]);
  CHECK(s == std::vector<int>{1, 2, 4, 8, 12, 16, 24, 32, 48, 64, 96, 128, 192, 256, 300});
}

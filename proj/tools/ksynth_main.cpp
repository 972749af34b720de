// Command-line harness for block-Krylov complexity and GRAPE synthesis
// experiments. Subcommands: basis, access, smin, layer-sweep, pauli-sweep,
// xxz, verify. Exit codes: 0 success, 1 check/computation failure, 2 bad
// input.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nlohmann/json.hpp"

#include "ksynth/acceptance.hpp"
#include "ksynth/block_krylov.hpp"
#include "ksynth/experiments.hpp"
#include "ksynth/grape.hpp"
#include "ksynth/io.hpp"
#include "ksynth/models.hpp"
#include "ksynth/stats.hpp"
#include "ksynth/svg.hpp"
#include "ksynth/version.hpp"

namespace {

using namespace ksynth;
namespace fs = std::filesystem;

struct Options {
  std::string command;
  std::string model = "ising";
  int length = 4;
  std::uint64_t seed = 0;
  int jobs = 2;
  std::string out_dir;
  std::string config_path;
  std::string basis_dir;  // reuse a persisted basis instead of rebuilding

  KrylovTolerances tol;
  int max_depth = 64;
  GrapeConfig grape;
  std::vector<int> schedule = default_schedule();
  int samples = 5;
  std::vector<int> layers;  // empty = 0..min(4, M-1)

  std::string sweep_range;  // basis --sweep-L a..b
  Real delta = 1.5;         // xxz target anisotropy
  bool quick = false;       // verify --quick
  bool save_pulses = false;
};

// ---------------------------------------------------------------------------
// config file + manifest plumbing

void apply_config_file(Options& opt) {
  if (opt.config_path.empty()) return;
  nlohmann::json j = nlohmann::json::parse(read_file(opt.config_path));
  opt.model = j.value("model", opt.model);
  opt.length = j.value("L", opt.length);
  opt.seed = j.value("seed", opt.seed);
  opt.jobs = j.value("jobs", opt.jobs);
  opt.out_dir = j.value("out", opt.out_dir);
  opt.samples = j.value("samples", opt.samples);
  opt.max_depth = j.value("max_depth", opt.max_depth);
  opt.delta = j.value("delta", opt.delta);
  if (j.contains("schedule")) opt.schedule = j["schedule"].get<std::vector<int>>();
  if (j.contains("layers")) opt.layers = j["layers"].get<std::vector<int>>();
  if (j.contains("tolerances")) {
    const auto& t = j["tolerances"];
    opt.tol.ortho_tol = t.value("ortho_tol", opt.tol.ortho_tol);
    opt.tol.rank_tol = t.value("rank_tol", opt.tol.rank_tol);
    opt.tol.containment_tol = t.value("containment_tol", opt.tol.containment_tol);
  }
  if (j.contains("grape")) {
    const auto& g = j["grape"];
    opt.grape.budget = g.value("budget", opt.grape.budget);
    opt.grape.learning_rate = g.value("learning_rate", opt.grape.learning_rate);
    opt.grape.beta1 = g.value("beta1", opt.grape.beta1);
    opt.grape.beta2 = g.value("beta2", opt.grape.beta2);
    opt.grape.adam_eps = g.value("adam_eps", opt.grape.adam_eps);
    opt.grape.loss_threshold = g.value("loss_threshold", opt.grape.loss_threshold);
    opt.grape.tau = g.value("tau", opt.grape.tau);
    opt.grape.dt = g.value("dt", opt.grape.dt);
    opt.grape.stop_loss = g.value("stop_loss", opt.grape.stop_loss);
    opt.grape.init_scale = g.value("init_scale", opt.grape.init_scale);
    opt.grape.restarts = g.value("restarts", opt.grape.restarts);
    if (g.contains("u_max") && !g["u_max"].is_null()) {
      opt.grape.u_max = g["u_max"].get<Real>();
    }
  }
}

nlohmann::json resolved_config(const Options& opt) {
  nlohmann::json g;
  g["budget"] = opt.grape.budget;
  g["learning_rate"] = opt.grape.learning_rate;
  g["beta1"] = opt.grape.beta1;
  g["beta2"] = opt.grape.beta2;
  g["adam_eps"] = opt.grape.adam_eps;
  g["loss_threshold"] = opt.grape.loss_threshold;
  g["tau"] = opt.grape.tau;
  g["dt"] = opt.grape.dt;
  g["stop_loss"] = opt.grape.stop_loss;
  g["init_scale"] = opt.grape.init_scale;
  g["restarts"] = opt.grape.restarts;
  if (opt.grape.u_max) {
    g["u_max"] = *opt.grape.u_max;
  } else {
    g["u_max"] = nullptr;
  }
  nlohmann::json j;
  j["model"] = opt.model;
  j["L"] = opt.length;
  j["seed"] = opt.seed;
  j["jobs"] = opt.jobs;
  j["samples"] = opt.samples;
  j["max_depth"] = opt.max_depth;
  j["delta"] = opt.delta;
  j["schedule"] = opt.schedule;
  j["layers"] = opt.layers;
  j["tolerances"] = {{"ortho_tol", opt.tol.ortho_tol},
                     {"rank_tol", opt.tol.rank_tol},
                     {"containment_tol", opt.tol.containment_tol}};
  j["grape"] = g;
  return j;
}

RunManifest make_manifest(const Options& opt) {
  RunManifest m;
  m.command = opt.command;
  m.config = resolved_config(opt);
  m.seed = opt.seed;
  return m;
}

fs::path out_dir_for(const Options& opt) {
  if (!opt.out_dir.empty()) return opt.out_dir;
  return fs::path("out") / opt.command;
}

BlockKrylovBasis obtain_basis(const Options& opt) {
  if (!opt.basis_dir.empty()) return load_basis(opt.basis_dir);
  const ModelSpec spec = parse_model(opt.model, opt.length);
  return build_basis(build_native_set(spec), opt.tol, opt.max_depth);
}

std::string block_sizes_str(const BlockKrylovBasis& basis) {
  std::ostringstream out;
  out << "[";
  const auto sizes = basis.block_sizes();
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    out << (i ? ", " : "") << sizes[i];
  }
  out << "]";
  return out.str();
}

// ---------------------------------------------------------------------------
// subcommands

int cmd_basis(Options& opt) {
  const fs::path out = out_dir_for(opt);
  RunManifest manifest = make_manifest(opt);

  if (!opt.sweep_range.empty()) {
    const auto dots = opt.sweep_range.find("..");
    if (dots == std::string::npos) {
      throw std::invalid_argument("--sweep-L expects a..b, e.g. 3..5");
    }
    const int lo = std::stoi(opt.sweep_range.substr(0, dots));
    const int hi = std::stoi(opt.sweep_range.substr(dots + 2));
    if (lo < 2 || hi < lo) throw std::invalid_argument("--sweep-L: bad range");
    std::ostringstream csv;
    csv << "L,M_ising,dim_ising,M_heisenberg,dim_heisenberg\n";
    for (int length = lo; length <= hi; ++length) {
      std::vector<int> depths;
      std::vector<int> dims;
      for (const std::string model : {"ising", "heisenberg"}) {
        const BlockKrylovBasis basis =
            build_basis(build_native_set(parse_model(model, length)), opt.tol, opt.max_depth);
        depths.push_back(basis.depth());
        dims.push_back(basis.total_dim());
      }
      csv << length << ',' << depths[0] << ',' << dims[0] << ',' << depths[1] << ','
          << dims[1] << '\n';
      std::cout << "L=" << length << "  M_ising=" << depths[0]
                << "  M_heisenberg=" << depths[1] << "\n";
    }
    atomic_write_file(out / "depth_vs_L.csv", csv.str());
    manifest.add_output(out / "depth_vs_L.csv");
    manifest.write(out);
    return 0;
  }

  const BlockKrylovBasis basis = obtain_basis(opt);
  const fs::path basis_dir = out / "basis";
  save_basis(basis, basis_dir);
  std::cout << "model " << basis.natives.spec.name() << ", L = " << basis.length() << "\n";
  std::cout << "M = " << basis.depth() << ", block sizes n_J = " << block_sizes_str(basis)
            << "\n";
  std::cout << "total dimension = " << basis.total_dim() << " of "
            << basis.index_dim() - 1 << "\n";
  if (basis.truncated) {
    std::cerr << "error: basis truncated at max_depth = " << opt.max_depth
              << "; increase --max-depth\n";
    manifest.write(out);
    return 1;
  }
  const auto universal = universality_check(basis);
  std::cout << (universal.universal ? "universal: spans all traceless operators"
                                    : "NOT universal: algebra closed early")
            << "\n";
  manifest.add_output(basis_dir / "meta.json");
  manifest.write(out);
  return 0;
}

int cmd_access(Options& opt) {
  const fs::path out = out_dir_for(opt);
  RunManifest manifest = make_manifest(opt);
  const BlockKrylovBasis basis = obtain_basis(opt);
  const int L = basis.length();

  std::ostringstream csv;
  csv << "site,axis,J_containment,J_first_overlap,contained\n";
  for (int site = 0; site < L; ++site) {
    for (const char axis : {'X', 'Y', 'Z'}) {
      const OperatorSum target =
          OperatorSum::term(PauliString::single(L, site, axis), 1.0);
      csv << site << ',' << axis << ',';
      std::string contain = "";
      std::string overlap = "";
      bool contained = true;
      try {
        contain = std::to_string(access_depth(basis, target, basis.tol.containment_tol));
      } catch (const std::runtime_error&) {
        contained = false;
      }
      try {
        overlap = std::to_string(first_overlap_depth(basis, target, basis.tol.containment_tol));
      } catch (const std::runtime_error&) {
        contained = false;
      }
      csv << contain << ',' << overlap << ',' << (contained ? "yes" : "NO") << '\n';
    }
  }
  atomic_write_file(out / "access_depth.csv", csv.str());
  manifest.add_output(out / "access_depth.csv");
  manifest.write(out);
  std::cout << "wrote " << (out / "access_depth.csv").string() << "\n";
  return 0;
}

int cmd_smin(Options& opt) {
  const fs::path out = out_dir_for(opt);
  RunManifest manifest = make_manifest(opt);
  const BlockKrylovBasis basis = obtain_basis(opt);
  const SminMap map = s_min_map(basis, basis.tol.ortho_tol);

  std::ostringstream csv;
  csv << "J,m,s_min\n";
  for (const auto& e : map.entries) {
    csv << e.block << ',' << e.index << ',' << e.s_min << '\n';
  }
  atomic_write_file(out / "smin_map.csv", csv.str());

  std::ostringstream frontier;
  frontier << "s_min,first_J\n";
  for (const auto& [s, j] : map.frontier) frontier << s << ',' << j << '\n';
  atomic_write_file(out / "smin_frontier.csv", frontier.str());

  SvgPlot plot("Minimum operator size over the block Krylov basis", "Krylov depth J",
               "intra-layer index m");
  for (const auto& e : map.entries) {
    plot.add_cell(static_cast<Real>(e.block), static_cast<Real>(e.index),
                  static_cast<Real>(e.s_min));
  }
  atomic_write_file(out / "smin_map.svg", plot.render());

  manifest.add_output(out / "smin_map.csv");
  manifest.add_output(out / "smin_frontier.csv");
  manifest.add_output(out / "smin_map.svg");
  manifest.write(out);
  std::cout << "wrote s_min map for " << map.entries.size() << " basis vectors\n";
  return 0;
}

int cmd_layer_sweep(Options& opt) {
  const fs::path out = out_dir_for(opt);
  RunManifest manifest = make_manifest(opt);
  const BlockKrylovBasis basis = obtain_basis(opt);

  std::vector<int> layers = opt.layers;
  if (layers.empty()) {
    for (int j = 0; j <= 4 && j < basis.depth(); ++j) layers.push_back(j);
  }
  manifest.config["layers"] = layers;

  const LayerSweepResult result =
      run_layer_sweep(basis, layers, opt.samples, opt.grape, opt.schedule, opt.jobs);

  std::ostringstream losses;
  losses << "layer,sample,n,loss\n";
  for (const auto& s : result.samples) {
    for (std::size_t i = 0; i < s.curve.steps.size(); ++i) {
      losses << s.layer << ',' << s.sample_index << ',' << s.curve.steps[i] << ','
             << fmt_real(s.curve.losses[i]) << '\n';
    }
  }
  atomic_write_file(out / "layer_losses.csv", losses.str());

  std::ostringstream ncs;
  ncs << "layer,sample,target_seed,n_c,censored\n";
  for (const auto& s : result.samples) {
    ncs << s.layer << ',' << s.sample_index << ',' << s.target_seed << ','
        << s.n_c_or_cap << ',' << (s.censored ? "yes" : "no") << '\n';
  }
  atomic_write_file(out / "layer_nc.csv", ncs.str());

  std::ostringstream agg;
  agg << "layer,total,censored,mean_nc,stddev_nc\n";
  for (const auto& a : result.aggregates) {
    agg << a.layer << ',' << a.total << ',' << a.censored << ','
        << (a.mean_nc ? fmt_real(*a.mean_nc) : "") << ',' << fmt_real(a.stddev_nc) << '\n';
  }
  atomic_write_file(out / "layer_aggregate.csv", agg.str());

  nlohmann::json fit;
  if (result.fit) {
    fit["gamma"] = result.fit->slope;
    fit["intercept"] = result.fit->intercept;
    fit["residual"] = result.fit->residual;
    fit["points"] = result.fit->points;
  }
  fit["warnings"] = result.warnings;
  atomic_write_file(out / "fit.json", fit.dump(2) + "\n");

  SvgPlot loss_plot("Synthesis loss vs control steps", "control steps n", "best loss");
  loss_plot.set_log_y(true);
  loss_plot.set_log_x(true);
  for (const int layer : layers) {
    std::vector<std::pair<Real, Real>> pts;
    for (const auto& s : result.samples) {
      if (s.layer != layer || s.sample_index != 0) continue;
      for (std::size_t i = 0; i < s.curve.steps.size(); ++i) {
        pts.emplace_back(s.curve.steps[i], std::max(s.curve.losses[i], 1e-12));
      }
    }
    loss_plot.add_line("J=" + std::to_string(layer), std::move(pts));
  }
  atomic_write_file(out / "layer_losses.svg", loss_plot.render());

  SvgPlot nc_plot("Critical step vs Krylov depth", "Krylov depth J", "n_c");
  nc_plot.set_log_y(true);
  std::vector<std::pair<Real, Real>> means;
  for (const auto& a : result.aggregates) {
    if (a.mean_nc) means.emplace_back(a.layer, *a.mean_nc);
  }
  nc_plot.add_line("mean n_c", means);
  if (result.fit) {
    std::vector<std::pair<Real, Real>> line;
    for (const auto& a : result.aggregates) {
      line.emplace_back(a.layer,
                        std::exp(result.fit->intercept + result.fit->slope * a.layer));
    }
    nc_plot.add_line("exp fit", std::move(line));
  }
  atomic_write_file(out / "nc_vs_layer.svg", nc_plot.render());

  for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
  if (result.fit) {
    std::cout << "gamma = " << fmt_real(result.fit->slope) << " (ln n_c per layer, "
              << result.fit->points << " points)\n";
  } else {
    std::cout << "no fit: fewer than 3 uncensored points\n";
  }

  for (const char* name : {"layer_losses.csv", "layer_nc.csv", "layer_aggregate.csv",
                           "fit.json", "layer_losses.svg", "nc_vs_layer.svg"}) {
    manifest.add_output(out / name);
  }
  manifest.write(out);
  return 0;
}

int cmd_pauli_sweep(Options& opt) {
  const fs::path out = out_dir_for(opt);
  RunManifest manifest = make_manifest(opt);
  const BlockKrylovBasis basis = obtain_basis(opt);

  const PauliSweepResult result = run_pauli_sweep(basis, opt.grape, opt.schedule, opt.jobs);

  std::ostringstream csv;
  csv << "target,K,n_c,censored,final_loss\n";
  std::vector<std::pair<Real, Real>> pts;
  for (const auto& row : result.rows) {
    csv << row.label << ',' << fmt_real(row.complexity) << ','
        << (row.n_c ? std::to_string(*row.n_c) : "") << ',' << (row.censored ? "yes" : "no")
        << ',' << fmt_real(row.final_loss) << '\n';
    if (row.n_c) pts.emplace_back(row.complexity, static_cast<Real>(*row.n_c));
  }
  atomic_write_file(out / "pauli_targets.csv", csv.str());

  nlohmann::json summary;
  summary["spearman_rho"] = result.spearman;
  summary["censored"] = result.censored_count;
  summary["total"] = static_cast<int>(result.rows.size());
  atomic_write_file(out / "pauli_summary.json", summary.dump(2) + "\n");

  SvgPlot plot("Critical step vs Krylov complexity", "Krylov complexity K", "n_c");
  plot.set_log_x(true);
  plot.set_log_y(true);
  plot.add_scatter("targets", std::move(pts));
  atomic_write_file(out / "nc_vs_K.svg", plot.render());

  std::cout << "Spearman rho(K, n_c) = " << fmt_real(result.spearman) << " over "
            << result.rows.size() << " targets (" << result.censored_count << " censored)\n";

  for (const char* name : {"pauli_targets.csv", "pauli_summary.json", "nc_vs_K.svg"}) {
    manifest.add_output(out / name);
  }
  manifest.write(out);
  return 0;
}

int cmd_xxz(Options& opt) {
  const fs::path out = out_dir_for(opt);
  RunManifest manifest = make_manifest(opt);
  const BlockKrylovBasis basis = obtain_basis(opt);

  const XxzResult result = run_xxz(basis, opt.delta, opt.grape, opt.schedule, opt.jobs);

  std::ostringstream loss_csv;
  loss_csv << "n,loss\n";
  for (std::size_t i = 0; i < result.curve.steps.size(); ++i) {
    loss_csv << result.curve.steps[i] << ',' << fmt_real(result.curve.losses[i]) << '\n';
  }
  atomic_write_file(out / "xxz_loss.csv", loss_csv.str());

  std::ostringstream res_csv;
  res_csv << "J,P_J,R_J\n";
  for (std::size_t j = 0; j < result.profile.P.size(); ++j) {
    res_csv << j << ',' << fmt_real(result.profile.P[j]) << ','
            << fmt_real(result.profile.R[j]) << '\n';
  }
  atomic_write_file(out / "xxz_residual.csv", res_csv.str());

  SvgPlot loss_plot("XXZ synthesis loss (model: " + basis.natives.spec.name() + ")",
                    "control steps n", "best loss");
  loss_plot.set_log_x(true);
  loss_plot.set_log_y(true);
  std::vector<std::pair<Real, Real>> pts;
  for (std::size_t i = 0; i < result.curve.steps.size(); ++i) {
    pts.emplace_back(result.curve.steps[i], std::max(result.curve.losses[i], 1e-12));
  }
  loss_plot.add_line("delta=" + fmt_real(opt.delta), std::move(pts));
  atomic_write_file(out / "xxz_loss.svg", loss_plot.render());

  SvgPlot r_plot("Residual weight beyond depth J", "Krylov depth J", "R_J");
  r_plot.set_log_y(true);
  std::vector<std::pair<Real, Real>> rpts;
  for (std::size_t j = 0; j < result.profile.R.size(); ++j) {
    rpts.emplace_back(static_cast<Real>(j), std::max(result.profile.R[j], 1e-12));
  }
  r_plot.add_line("R_J", std::move(rpts));
  r_plot.add_vline(static_cast<Real>(result.depth_marker), "J = log2(n_max)");
  atomic_write_file(out / "xxz_residual.svg", r_plot.render());

  if (!result.curve.pulses.empty()) {
    write_pulse_csv(out / "xxz_pulse.csv", result.curve.pulses.back(), basis.natives.names);
    write_pulse_sidecar(out / "xxz_pulse.csv", result.curve.pulses.back(),
                        basis.natives.spec.name(), opt.seed, resolved_config(opt));
    manifest.add_output(out / "xxz_pulse.csv");
    manifest.add_output(out / "xxz_pulse.json");
  }

  std::cout << "final loss " << fmt_real(result.curve.losses.back()) << " at n = "
            << result.curve.steps.back() << "; n_c = "
            << (result.curve.critical_step ? std::to_string(*result.curve.critical_step)
                                           : std::string("not reached"))
            << "\n";
  for (const char* name :
       {"xxz_loss.csv", "xxz_residual.csv", "xxz_loss.svg", "xxz_residual.svg"}) {
    manifest.add_output(out / name);
  }
  manifest.write(out);
  return 0;
}

int cmd_verify(Options& opt) {
  AcceptanceOptions acc;
  acc.quick = opt.quick;
  acc.jobs = opt.jobs;
  acc.seed = opt.seed;
  const std::vector<CheckResult> results = run_acceptance(acc);
  print_check_results(std::cout, results);

  const fs::path out = out_dir_for(opt);
  std::ostringstream csv;
  csv << "id,name,verdict,seconds,detail\n";
  for (const auto& r : results) {
    std::string detail = r.detail;
    std::replace(detail.begin(), detail.end(), ',', ';');
    csv << r.id << ',' << r.name << ','
        << (r.skipped ? "skip" : (r.passed ? "pass" : "fail")) << ','
        << fmt_real(r.seconds) << ',' << detail << '\n';
  }
  atomic_write_file(out / "verify_results.csv", csv.str());
  RunManifest manifest = make_manifest(opt);
  manifest.add_output(out / "verify_results.csv");
  manifest.write(out);
  return all_passed(results) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;

  // Config file values are defaults; explicit flags override them.
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") opt.config_path = argv[i + 1];
  }
  try {
    apply_config_file(opt);
  } catch (const std::exception& e) {
    std::cerr << "error reading config: " << e.what() << "\n";
    return 2;
  }

  CLI::App app{std::string(kToolName) + " " + kToolVersion +
               " -- block-Krylov complexity and pulse synthesis experiments"};
  app.require_subcommand(1);
  app.add_option("--config", opt.config_path, "JSON config file (flags override it)");

  auto add_common = [&](CLI::App* sub, bool with_grape) {
    sub->add_option("--model", opt.model, "simulator model: ising, heisenberg, xxz:DELTA");
    sub->add_option("--L", opt.length, "qubit count");
    sub->add_option("--seed", opt.seed, "base RNG seed");
    sub->add_option("--jobs", opt.jobs, "worker threads for sweeps");
    sub->add_option("--out", opt.out_dir, "output directory (default out/<command>)");
    sub->add_option("--basis", opt.basis_dir, "reuse a saved basis directory");
    sub->add_option("--rank-tol", opt.tol.rank_tol, "Gram-Schmidt rank tolerance");
    sub->add_option("--ortho-tol", opt.tol.ortho_tol, "orthonormality tolerance");
    sub->add_option("--containment-tol", opt.tol.containment_tol, "access containment tolerance");
    sub->add_option("--max-depth", opt.max_depth, "block count cap");
    if (with_grape) {
      sub->add_option("--budget", opt.grape.budget, "optimizer iterations per n");
      sub->add_option("--lr", opt.grape.learning_rate, "optimizer step size");
      sub->add_option("--eps", opt.grape.loss_threshold, "loss threshold for n_c");
      sub->add_option("--tau", opt.grape.tau, "target evolution time");
      sub->add_option("--dt", opt.grape.dt, "pulse step duration");
      sub->add_option("--restarts", opt.grape.restarts, "warm-start chains per target");
      sub->add_option("--u-max", [&opt](const std::vector<std::string>& vals) {
        opt.grape.u_max = std::stod(vals.front());
        return true;
      }, "amplitude bound (unbounded when omitted)");
      sub->add_option("--schedule", [&opt](const std::vector<std::string>& vals) {
        opt.schedule.clear();
        std::istringstream ss(vals.front());
        std::string tok;
        while (std::getline(ss, tok, ',')) opt.schedule.push_back(std::stoi(tok));
        return true;
      }, "comma-separated step counts, strictly increasing");
    }
  };

  CLI::App* basis = app.add_subcommand("basis", "build, check, and persist the block Krylov basis");
  add_common(basis, false);
  basis->add_option("--sweep-L", opt.sweep_range, "emit M vs L table for both models, e.g. 3..5");

  CLI::App* access = app.add_subcommand("access", "single-qubit Pauli access depths");
  add_common(access, false);

  CLI::App* smin = app.add_subcommand("smin", "minimum operator size map over the basis");
  add_common(smin, false);

  CLI::App* layer = app.add_subcommand("layer-sweep",
                                       "synthesis cost of random targets per Krylov layer");
  add_common(layer, true);
  layer->add_option("--samples", opt.samples, "random targets per layer");
  layer->add_option("--layers", [&opt](const std::vector<std::string>& vals) {
    opt.layers.clear();
    std::istringstream ss(vals.front());
    std::string tok;
    while (std::getline(ss, tok, ',')) opt.layers.push_back(std::stoi(tok));
    return true;
  }, "comma-separated layer list (default 0..min(4, M-1))");

  CLI::App* pauli = app.add_subcommand("pauli-sweep",
                                       "n_c vs K over all weight<=2 Pauli targets");
  add_common(pauli, true);

  CLI::App* xxz = app.add_subcommand("xxz", "XXZ synthesis curve and residual weights");
  add_common(xxz, true);
  xxz->add_option("--delta", opt.delta, "XXZ anisotropy (target)");

  CLI::App* verify = app.add_subcommand("verify", "run the acceptance checks");
  verify->add_option("--jobs", opt.jobs, "worker threads");
  verify->add_option("--seed", opt.seed, "base RNG seed");
  verify->add_option("--out", opt.out_dir, "output directory");
  verify->add_flag("--quick", opt.quick, "only L <= 3 checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  opt.command = app.get_subcommands().front()->get_name();
  try {
    if (opt.command == "basis") return cmd_basis(opt);
    if (opt.command == "access") return cmd_access(opt);
    if (opt.command == "smin") return cmd_smin(opt);
    if (opt.command == "layer-sweep") return cmd_layer_sweep(opt);
    if (opt.command == "pauli-sweep") return cmd_pauli_sweep(opt);
    if (opt.command == "xxz") return cmd_xxz(opt);
    if (opt.command == "verify") return cmd_verify(opt);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::cerr << "unknown command\n";
  return 2;
}

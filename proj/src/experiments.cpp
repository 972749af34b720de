#include "ksynth/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ksynth/thread_pool.hpp"

namespace ksynth {

std::vector<int> default_schedule() {
  return {1, 2, 4, 8, 12, 16, 24, 32, 48, 64, 96, 128, 192, 256, 300};
}

SynthesisCurve merge_curves(const std::vector<SynthesisCurve>& curves, Real eps) {
  SynthesisCurve merged;
  for (const auto& curve : curves) {
    for (std::size_t i = 0; i < curve.steps.size(); ++i) {
      if (i < merged.steps.size()) {
        if (curve.losses[i] < merged.losses[i]) {
          merged.losses[i] = curve.losses[i];
          merged.pulses[i] = curve.pulses[i];
        }
      } else {
        merged.steps.push_back(curve.steps[i]);
        merged.losses.push_back(curve.losses[i]);
        merged.pulses.push_back(curve.pulses[i]);
      }
    }
  }
  merged.critical_step = critical_step(merged.steps, merged.losses, eps);
  return merged;
}

namespace {

struct ChainJob {
  std::size_t group = 0;  // target index
  int restart = 0;
  std::uint64_t seed = 0;
};

/// Runs restart chains for a list of target unitaries and merges them per
/// target, with a deterministic result independent of worker scheduling.
std::vector<SynthesisCurve> sweep_targets(const std::vector<Matrix>& targets,
                                          const GrapeConfig& cfg,
                                          const std::vector<int>& schedule,
                                          const std::vector<Matrix>& natives, int jobs,
                                          const SweepOptions& options) {
  std::vector<ChainJob> jobs_list;
  for (std::size_t g = 0; g < targets.size(); ++g) {
    for (int r = 0; r < cfg.restarts; ++r) {
      jobs_list.push_back({g, r, cfg.seed + 7919 * static_cast<std::uint64_t>(g) +
                                  static_cast<std::uint64_t>(r)});
    }
  }
  std::vector<SynthesisCurve> chains(jobs_list.size());
  parallel_for(jobs, jobs_list.size(), [&](std::size_t i) {
    GrapeConfig chain_cfg = cfg;
    chain_cfg.seed = jobs_list[i].seed;
    chains[i] = warm_start_sweep(targets[jobs_list[i].group], schedule, chain_cfg, natives,
                                 options);
  });
  std::vector<SynthesisCurve> merged(targets.size());
  for (std::size_t g = 0; g < targets.size(); ++g) {
    std::vector<SynthesisCurve> group;
    for (std::size_t i = 0; i < jobs_list.size(); ++i) {
      if (jobs_list[i].group == g) group.push_back(chains[i]);
    }
    merged[g] = merge_curves(group, cfg.loss_threshold);
  }
  return merged;
}

}  // namespace

LayerSweepResult run_layer_sweep(const BlockKrylovBasis& basis, const std::vector<int>& layers,
                                 int samples, const GrapeConfig& cfg,
                                 const std::vector<int>& schedule, int jobs) {
  if (samples < 1) throw std::invalid_argument("run_layer_sweep: samples must be >= 1");
  for (const int layer : layers) {
    if (layer < 0 || layer >= basis.depth()) {
      throw std::invalid_argument("run_layer_sweep: layer outside basis depth");
    }
  }
  const std::vector<Matrix> natives = natives_dense(basis.natives);

  LayerSweepResult result;
  std::vector<Matrix> targets;
  for (const int layer : layers) {
    for (int s = 0; s < samples; ++s) {
      LayerSweepSample sample;
      sample.layer = layer;
      sample.sample_index = s;
      sample.target_seed = cfg.seed + 104729 * static_cast<std::uint64_t>(result.samples.size());
      const OperatorSum op = sample_from_block(basis, layer, sample.target_seed);
      targets.push_back(target_unitary(op, cfg.tau));
      result.samples.push_back(std::move(sample));
    }
  }

  SweepOptions options;
  options.stop_after_threshold = true;
  const std::vector<SynthesisCurve> curves =
      sweep_targets(targets, cfg, schedule, natives, jobs, options);

  const int cap = schedule.empty() ? 0 : schedule.back();
  for (std::size_t i = 0; i < curves.size(); ++i) {
    result.samples[i].curve = curves[i];
    result.samples[i].censored = !curves[i].critical_step.has_value();
    result.samples[i].n_c_or_cap = curves[i].critical_step.value_or(cap);
  }

  // Aggregate per layer; censored samples are counted, never averaged in.
  std::vector<Real> fit_x, fit_y;
  std::optional<Real> previous_mean;
  for (const int layer : layers) {
    LayerAggregate agg;
    agg.layer = layer;
    std::vector<Real> ncs;
    for (const auto& s : result.samples) {
      if (s.layer != layer) continue;
      ++agg.total;
      if (s.censored) {
        ++agg.censored;
      } else {
        ncs.push_back(static_cast<Real>(s.n_c_or_cap));
      }
    }
    if (!ncs.empty()) {
      agg.mean_nc = mean(ncs);
      agg.stddev_nc = stddev(ncs);
    }
    const bool censored_heavy = agg.censored * 2 > agg.total;
    if (censored_heavy) {
      std::ostringstream w;
      w << "layer " << layer << " dropped from fit: " << agg.censored << "/" << agg.total
        << " samples censored at n = " << cap;
      result.warnings.push_back(w.str());
    } else {
      for (const Real nc : ncs) {
        fit_x.push_back(static_cast<Real>(layer));
        fit_y.push_back(std::log(nc));
      }
    }
    if (previous_mean && agg.mean_nc && *agg.mean_nc < *previous_mean) {
      std::ostringstream w;
      w << "mean n_c decreased from layer " << layer - 1 << " to " << layer
        << " (soft monotonicity check)";
      result.warnings.push_back(w.str());
    }
    if (agg.mean_nc) previous_mean = agg.mean_nc;
    result.aggregates.push_back(std::move(agg));
  }

  std::vector<Real> distinct = fit_x;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (fit_x.size() >= 3 && distinct.size() >= 2) {
    result.fit = fit_line(fit_x, fit_y);
  }
  return result;
}

PauliSweepResult run_pauli_sweep(const BlockKrylovBasis& basis, const GrapeConfig& cfg,
                                 const std::vector<int>& schedule, int jobs) {
  const std::vector<Matrix> natives = natives_dense(basis.natives);
  const std::vector<LabeledTarget> set = enumerate_lowweight_set(basis.natives.spec);

  PauliSweepResult result;
  std::vector<Matrix> targets;
  for (const auto& t : set) {
    PauliSweepRow row;
    row.label = t.label;
    row.complexity = complexity_profile(basis, t.op).K;
    result.rows.push_back(std::move(row));
    targets.push_back(target_unitary(t.op, cfg.tau));
  }

  SweepOptions options;
  options.stop_after_threshold = true;
  const std::vector<SynthesisCurve> curves =
      sweep_targets(targets, cfg, schedule, natives, jobs, options);

  const int cap = schedule.empty() ? 0 : schedule.back();
  std::vector<Real> ks, ncs;
  for (std::size_t i = 0; i < curves.size(); ++i) {
    PauliSweepRow& row = result.rows[i];
    row.n_c = curves[i].critical_step;
    row.censored = !row.n_c.has_value();
    row.final_loss = curves[i].losses.empty() ? 1.0 : curves[i].losses.back();
    result.censored_count += row.censored;
    ks.push_back(row.complexity);
    // Rank correlation treats censored rows as "at least the cap".
    ncs.push_back(static_cast<Real>(row.n_c.value_or(cap)));
  }
  result.spearman = spearman_rho(ks, ncs);
  return result;
}

XxzResult run_xxz(const BlockKrylovBasis& basis, Real delta, const GrapeConfig& cfg,
                  const std::vector<int>& schedule, int jobs) {
  TargetSpec spec;
  spec.kind = TargetSpec::Kind::XXZ;
  spec.delta = delta;
  const OperatorSum target_op = build_target(spec, basis.natives.spec);

  XxzResult result;
  result.profile = complexity_profile(basis, target_op);
  const int cap = schedule.empty() ? 1 : schedule.back();
  result.depth_marker = static_cast<int>(std::floor(std::log2(static_cast<Real>(cap))));

  const std::vector<Matrix> natives = natives_dense(basis.natives);
  const std::vector<Matrix> targets = {target_unitary(target_op, cfg.tau)};
  result.curve = sweep_targets(targets, cfg, schedule, natives, jobs, {}).front();
  return result;
}

}  // namespace ksynth

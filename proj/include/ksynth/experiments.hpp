#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ksynth/block_krylov.hpp"
#include "ksynth/grape.hpp"
#include "ksynth/stats.hpp"

namespace ksynth {

/// The warm-start schedule used throughout: n in {1..300}, log-ish spacing.
std::vector<int> default_schedule();

/// Pointwise-best merge of several sweep chains over one target.
SynthesisCurve merge_curves(const std::vector<SynthesisCurve>& curves, Real eps);

struct LayerSweepSample {
  int layer = 0;
  int sample_index = 0;
  std::uint64_t target_seed = 0;
  SynthesisCurve curve;  // merged over restarts
  bool censored = false;
  int n_c_or_cap = 0;  // n_c, or the schedule cap when censored
};

struct LayerAggregate {
  int layer = 0;
  int total = 0;
  int censored = 0;
  std::optional<Real> mean_nc;  // uncensored samples only
  Real stddev_nc = 0.0;
};

struct LayerSweepResult {
  std::vector<LayerSweepSample> samples;
  std::vector<LayerAggregate> aggregates;
  std::optional<LinearFit> fit;  // ln n_c vs J over uncensored points
  std::vector<std::string> warnings;
};

/// Random targets from isolated Krylov layers, optimized over the schedule
/// with restarts; fans (layer, sample, restart) chains across `jobs` workers.
LayerSweepResult run_layer_sweep(const BlockKrylovBasis& basis, const std::vector<int>& layers,
                                 int samples, const GrapeConfig& cfg,
                                 const std::vector<int>& schedule, int jobs);

struct PauliSweepRow {
  std::string label;
  Real complexity = 0.0;  // K
  std::optional<int> n_c;
  bool censored = false;
  Real final_loss = 1.0;  // best loss at the last evaluated n
};

struct PauliSweepResult {
  std::vector<PauliSweepRow> rows;
  Real spearman = 0.0;  // over uncensored rows, censored rows at the cap
  int censored_count = 0;
};

/// n_c versus K over the weight <= 2 target set.
PauliSweepResult run_pauli_sweep(const BlockKrylovBasis& basis, const GrapeConfig& cfg,
                                 const std::vector<int>& schedule, int jobs);

struct XxzResult {
  SynthesisCurve curve;  // full loss-vs-n curve (no early stop)
  ComplexityProfile profile;
  int depth_marker = 0;  // floor(log2(n_max))
};

/// Synthesis of the XXZ target on the basis' simulator model, with the
/// residual-weight staircase of the same target.
XxzResult run_xxz(const BlockKrylovBasis& basis, Real delta, const GrapeConfig& cfg,
                  const std::vector<int>& schedule, int jobs);

}  // namespace ksynth

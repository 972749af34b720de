#pragma once

#include <string>
#include <vector>

#include "ksynth/operator_sum.hpp"

namespace ksynth {

enum class InteractionKind { Ising, Heisenberg, XXZ };

/// 1D open chain of `length` qubits with one of the supported couplings.
/// Sites are 0-based everywhere in this library.
struct ModelSpec {
  int length = 4;
  InteractionKind kind = InteractionKind::Ising;
  Real delta = 1.5;  // anisotropy, used by XXZ only

  std::string name() const;
};

/// Parses `ising`, `heisenberg` or `xxz:DELTA` selectors (length set by caller).
ModelSpec parse_model(const std::string& selector, int length);

/// The simulator's switchable interactions, in fixed channel order
/// (X, Z, break, int). Index alpha into `terms` is the control-channel index.
struct NativeSet {
  ModelSpec spec;
  std::vector<std::string> names;
  std::vector<OperatorSum> terms;

  int channels() const { return static_cast<int>(terms.size()); }
};

/// H_X = sum_i X_i, H_Z = sum_i Z_i, H_break = X_0, H_int per kind,
/// couplings over i = 0..L-2 (open boundary).
NativeSet build_native_set(const ModelSpec& spec);

struct TargetSpec {
  enum class Kind { SinglePauli, ZZPair, XXZ, Ising, Heisenberg, File };
  Kind kind = Kind::SinglePauli;
  char axis = 'X';       // SinglePauli
  int site = 0;          // SinglePauli
  int site_a = 0;        // ZZPair, requires site_a < site_b
  int site_b = 1;        // ZZPair
  Real delta = 1.5;      // XXZ
  std::string path;      // File
};

/// Target selector strings: `x:SITE` / `y:SITE` / `z:SITE`, `zz:I,J`,
/// `xxz:DELTA`, `ising`, `heisenberg`, `file:PATH`.
TargetSpec parse_target(const std::string& selector);

OperatorSum build_target(const TargetSpec& target, const ModelSpec& spec);

struct LabeledTarget {
  std::string label;
  OperatorSum op;
};

/// The weight <= 2 target collection: 3L single-site Paulis (site-major,
/// X < Y < Z) followed by the L(L-1)/2 ZZ pairs in lexicographic order.
std::vector<LabeledTarget> enumerate_lowweight_set(const ModelSpec& spec);

}  // namespace ksynth

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <vector>

#include "ksynth/models.hpp"
#include "ksynth/operator_sum.hpp"
#include "ksynth/types.hpp"

namespace ksynth {

/// Coefficient vector over the lexicographic Pauli index (dimension 4^L).
/// Starts as a sorted sparse list and switches permanently to a dense
/// Eigen vector once the fill exceeds kDenseFillRatio.
class KrylovVec {
 public:
  static constexpr Real kDenseFillRatio = 0.25;

  explicit KrylovVec(std::uint32_t dim);

  static KrylovVec from_operator(const OperatorSum& op);
  static KrylovVec from_dense(RealVector v);
  static KrylovVec from_sorted_entries(std::uint32_t dim,
                                       std::vector<std::pair<std::uint32_t, Real>> entries);

  std::uint32_t dim() const { return dim_; }
  bool is_dense() const { return dense_; }
  std::size_t nnz() const;

  Real coeff(std::uint32_t index) const;
  Real dot(const KrylovVec& other) const;
  Real norm() const;

  /// this += a * x
  void axpy(Real a, const KrylovVec& x);
  void scale(Real a);

  RealVector to_dense_vector() const;
  OperatorSum to_operator(int length) const;

  /// Applies f(index, value) to every stored nonzero entry.
  template <typename F>
  void for_each(F&& f) const {
    if (dense_) {
      for (std::uint32_t i = 0; i < dim_; ++i) {
        if (dv_[i] != 0.0) f(i, dv_[i]);
      }
    } else {
      for (const auto& [i, v] : sp_) f(i, v);
    }
  }

 private:
  void maybe_densify();

  std::uint32_t dim_;
  bool dense_ = false;
  std::vector<std::pair<std::uint32_t, Real>> sp_;  // sorted by index
  RealVector dv_;
};

struct KrylovTolerances {
  Real ortho_tol = 1e-8;        // orthonormality verification
  Real rank_tol = 1e-10;        // relative rank cut in Gram-Schmidt
  Real containment_tol = 1e-8;  // access-depth residual cut
};

struct KrylovBlock {
  int index = 0;
  std::vector<KrylovVec> vectors;

  int size() const { return static_cast<int>(vectors.size()); }
};

/// i[h, v] on the Pauli-index coefficient vector.
KrylovVec apply_bracket(const OperatorSum& h, const KrylovVec& v, int length);

/// Modified Gram-Schmidt with one full re-orthogonalization pass.
/// Candidates whose residual drops below rank_tol times their original norm
/// are discarded; output order follows candidate order.
std::vector<KrylovVec> orthonormalize_against(std::vector<KrylovVec> candidates,
                                              const std::vector<const KrylovVec*>& previous,
                                              Real rank_tol);

/// OperatorSum-level convenience overload.
std::vector<OperatorSum> orthonormalize_against(const std::vector<OperatorSum>& candidates,
                                                const std::vector<OperatorSum>& previous,
                                                Real rank_tol);

class BlockKrylovBasis {
 public:
  NativeSet natives;
  KrylovTolerances tol;
  int max_depth = 0;
  bool truncated = false;
  std::vector<KrylovBlock> blocks;

  int length() const { return natives.spec.length; }
  std::uint32_t index_dim() const { return std::uint32_t{1} << (2 * length()); }
  int depth() const { return static_cast<int>(blocks.size()); }
  int total_dim() const;
  std::vector<int> block_sizes() const;

  const KrylovVec& vec(int block, int m) const;
  OperatorSum vector_as_operator(int block, int m) const;
  RealVector vector_coeffs(int block, int m) const;
};

/// Iterated-bracket construction of the block Krylov basis. Blocks stop at
/// closure (an empty candidate residual) or at max_depth, in which case the
/// result is flagged truncated unless the traceless space is already full.
BlockKrylovBasis build_basis(const NativeSet& natives, const KrylovTolerances& tol = {},
                             int max_depth = 64);

struct UniversalityResult {
  bool universal = false;
  int dimension = 0;
};

/// Universal iff the basis spans all 4^L - 1 traceless dimensions.
/// Throws on a truncated basis.
UniversalityResult universality_check(const BlockKrylovBasis& basis);

struct ComplexityProfile {
  std::vector<Real> P;      // block weights, sum + out_of_span = 1
  Real K = 0.0;             // sum_J P_J 2^J
  std::vector<Real> R;      // residual beyond depth J
  Real out_of_span = 0.0;
  Real identity_coeff = 0.0;  // stripped before profiling
  Real target_norm = 0.0;     // HS norm of the traceless part
};

ComplexityProfile complexity_profile(const BlockKrylovBasis& basis, const OperatorSum& target);

/// 3 * 2^J - 2; the closed form of C_{J+1} = 2 C_J + 2 with C_0 = 1.
std::int64_t layer_circuit_complexity(int block);

/// Smallest J whose cumulative projection leaves residual norm^2 at or
/// below containment_tol. Throws when the target is never contained.
int access_depth(const BlockKrylovBasis& basis, const OperatorSum& target, Real containment_tol);

/// Alternative reading: smallest J with block weight P_J above overlap_tol.
int first_overlap_depth(const BlockKrylovBasis& basis, const OperatorSum& target, Real overlap_tol);

struct SminEntry {
  int block = 0;
  int index = 0;  // intra-layer index m
  int s_min = 0;
};

struct SminMap {
  std::vector<SminEntry> entries;
  std::map<int, int> frontier;  // size s -> smallest block where it first appears
};

SminMap s_min_map(const BlockKrylovBasis& basis, Real coeff_tol);

/// Unit-HS-norm isotropic sample in the Omega_J frame, deterministic per seed.
OperatorSum sample_from_block(const BlockKrylovBasis& basis, int block, std::uint64_t seed);

/// Directory persistence: meta.json plus one little-endian float64
/// coefficient file per block (row = vector over the lexicographic Pauli index).
void save_basis(const BlockKrylovBasis& basis, const std::filesystem::path& dir);
BlockKrylovBasis load_basis(const std::filesystem::path& dir);

}  // namespace ksynth

#pragma once

#include "ksynth/operator_sum.hpp"
#include "ksynth/types.hpp"

namespace ksynth {

/// Dense 2^L x 2^L matrix of a single Pauli word. Site i acts on bit i of
/// the basis-state index; Y = i X Z with the standard 2x2 Pauli matrices.
Matrix pauli_word_dense(const PauliString& word);

/// Dense Hermitian matrix of a Pauli sum. Throws when L > max_length.
Matrix to_dense(const OperatorSum& a, int max_length = 8);

/// e^{-i t H} for Hermitian H, via eigendecomposition.
Matrix hermitian_exponential(const Matrix& h, Real t);

}  // namespace ksynth

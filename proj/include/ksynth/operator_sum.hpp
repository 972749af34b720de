#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <utility>

#include "ksynth/pauli.hpp"
#include "ksynth/types.hpp"

namespace ksynth {

/// Real-coefficient linear combination of Pauli words; represents a Hermitian
/// operator. Iteration order is the lexicographic (x_mask, z_mask) word order.
/// Entries with |c| <= prune tolerance are absent.
class OperatorSum {
 public:
  using TermMap = std::map<PauliString, Real>;
  using const_iterator = TermMap::const_iterator;

  explicit OperatorSum(int length);

  static OperatorSum zero(int length) { return OperatorSum(length); }
  static OperatorSum term(const PauliString& word, Real coeff);

  /// Text form: one `<coeff> <letters>` term per line, length inferred.
  static OperatorSum from_text(std::istream& in);
  static OperatorSum from_text(const std::string& text);
  std::string to_text() const;

  int length() const { return length_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  Real coeff(const PauliString& word) const;
  void add(const PauliString& word, Real coeff, Real prune_tol = kPruneTol);

  const_iterator begin() const { return terms_.begin(); }
  const_iterator end() const { return terms_.end(); }

  OperatorSum& operator+=(const OperatorSum& other);
  OperatorSum& operator-=(const OperatorSum& other);
  OperatorSum& operator*=(Real scale);

  friend OperatorSum operator+(OperatorSum a, const OperatorSum& b) { return a += b; }
  friend OperatorSum operator-(OperatorSum a, const OperatorSum& b) { return a -= b; }
  friend OperatorSum operator*(OperatorSum a, Real s) { return a *= s; }
  friend OperatorSum operator*(Real s, OperatorSum a) { return a *= s; }

  void prune(Real tol = kPruneTol);

  /// sqrt(sum c_P^2); the Hilbert-Schmidt norm under Pauli orthonormality.
  Real hs_norm() const;

 private:
  int length_;
  TermMap terms_;
};

/// Hermiticity-preserving bracket i[A, B], exact on Pauli words up to
/// floating rounding in the coefficients. Throws on length mismatch.
OperatorSum bracket(const OperatorSum& a, const OperatorSum& b);

/// <A|B> = tr(A^† B)/2^L = sum_P c_P(A) c_P(B).
Real hs_inner(const OperatorSum& a, const OperatorSum& b);

/// Minimum Pauli weight over terms retained at |c| > coeff_tol.
/// Throws if nothing survives the pruning.
int s_min(const OperatorSum& a, Real coeff_tol);

/// Splits off the identity component: returns (traceless part, identity coeff).
std::pair<OperatorSum, Real> strip_identity(const OperatorSum& a);

}  // namespace ksynth

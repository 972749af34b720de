#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "ksynth/types.hpp"

namespace ksynth {

/// One tensor-product word over {I, X, Y, Z}, stored as two bitmasks:
/// bit i of x_mask / z_mask carries the X / Z component of site i.
/// Y is the convention Y = i * X * Z, so a site with both bits set is Y.
class PauliString {
 public:
  static constexpr int kMaxLength = 32;

  /// Identity word on `length` sites.
  explicit PauliString(int length);

  PauliString(int length, std::uint64_t x_mask, std::uint64_t z_mask);

  /// Parse letters such as "XIZ"; site 0 is the first character.
  static PauliString from_letters(std::string_view letters);

  /// Single non-identity letter at `site`, identity elsewhere.
  static PauliString single(int length, int site, char letter);

  int length() const { return length_; }
  std::uint64_t x_mask() const { return x_; }
  std::uint64_t z_mask() const { return z_; }

  char letter(int site) const;
  bool is_identity() const { return x_ == 0 && z_ == 0; }

  /// Number of non-identity letters.
  int weight() const;

  bool commutes_with(const PauliString& other) const;

  /// Lexicographic index over (x_mask, z_mask): x_mask * 2^L + z_mask.
  /// Only meaningful when 4^L fits the index space (L <= 15 enforced).
  std::uint32_t pauli_index() const;
  static PauliString from_pauli_index(int length, std::uint32_t index);

  std::string str() const;

  /// Equality and ordering are by letter content only; the order is
  /// lexicographic on (x_mask, z_mask).
  friend bool operator==(const PauliString& a, const PauliString& b) {
    return a.x_ == b.x_ && a.z_ == b.z_;
  }
  friend std::strong_ordering operator<=>(const PauliString& a, const PauliString& b) {
    if (auto c = a.x_ <=> b.x_; c != 0) return c;
    return a.z_ <=> b.z_;
  }

 private:
  int length_;
  std::uint64_t x_;
  std::uint64_t z_;
};

/// Result of a word product P * Q = i^phase_log_i * word.
struct PauliProduct {
  int phase_log_i;  // exponent k in i^k, reduced mod 4
  PauliString word;

  Complex phase() const;
};

/// Exact word multiplication. Throws on length mismatch.
PauliProduct ps_multiply(const PauliString& p, const PauliString& q);

}  // namespace ksynth

template <>
struct std::hash<ksynth::PauliString> {
  std::size_t operator()(const ksynth::PauliString& p) const noexcept {
    std::uint64_t h = p.x_mask() * 0x9e3779b97f4a7c15ULL;
    h ^= p.z_mask() + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

#include "ksynth/pauli.hpp"

#include <bit>
#include <stdexcept>

namespace ksynth {

namespace {

void check_length(int length) {
  if (length < 1 || length > PauliString::kMaxLength) {
    throw std::invalid_argument("PauliString length out of range: " + std::to_string(length));
  }
}

}  // namespace

PauliString::PauliString(int length) : length_(length), x_(0), z_(0) {
  check_length(length);
}

PauliString::PauliString(int length, std::uint64_t x_mask, std::uint64_t z_mask)
    : length_(length), x_(x_mask), z_(z_mask) {
  check_length(length);
  const std::uint64_t valid = length == 64 ? ~0ULL : ((1ULL << length) - 1);
  if ((x_ & ~valid) != 0 || (z_ & ~valid) != 0) {
    throw std::invalid_argument("PauliString mask exceeds length");
  }
}

PauliString PauliString::from_letters(std::string_view letters) {
  check_length(static_cast<int>(letters.size()));
  std::uint64_t x = 0, z = 0;
  for (std::size_t i = 0; i < letters.size(); ++i) {
    switch (letters[i]) {
      case 'I':
        break;
      case 'X':
        x |= 1ULL << i;
        break;
      case 'Y':
        x |= 1ULL << i;
        z |= 1ULL << i;
        break;
      case 'Z':
        z |= 1ULL << i;
        break;
      default:
        throw std::invalid_argument(std::string("invalid Pauli letter: ") + letters[i]);
    }
  }
  return PauliString(static_cast<int>(letters.size()), x, z);
}

PauliString PauliString::single(int length, int site, char letter) {
  check_length(length);
  if (site < 0 || site >= length) {
    throw std::invalid_argument("Pauli site index out of range: " + std::to_string(site));
  }
  std::uint64_t x = 0, z = 0;
  switch (letter) {
    case 'X':
      x = 1ULL << site;
      break;
    case 'Y':
      x = 1ULL << site;
      z = 1ULL << site;
      break;
    case 'Z':
      z = 1ULL << site;
      break;
    default:
      throw std::invalid_argument(std::string("invalid Pauli letter: ") + letter);
  }
  return PauliString(length, x, z);
}

char PauliString::letter(int site) const {
  if (site < 0 || site >= length_) {
    throw std::invalid_argument("Pauli site index out of range: " + std::to_string(site));
  }
  const bool x = (x_ >> site) & 1;
  const bool z = (z_ >> site) & 1;
  if (x && z) return 'Y';
  if (x) return 'X';
  if (z) return 'Z';
  return 'I';
}

int PauliString::weight() const { return std::popcount(x_ | z_); }

bool PauliString::commutes_with(const PauliString& other) const {
  // Symplectic form: the words anticommute iff the overlap parity is odd.
  const int parity = std::popcount(x_ & other.z_) + std::popcount(z_ & other.x_);
  return parity % 2 == 0;
}

std::uint32_t PauliString::pauli_index() const {
  if (length_ > 15) {
    throw std::invalid_argument("pauli_index requires length <= 15");
  }
  return static_cast<std::uint32_t>((x_ << length_) | z_);
}

PauliString PauliString::from_pauli_index(int length, std::uint32_t index) {
  check_length(length);
  if (length > 15) {
    throw std::invalid_argument("from_pauli_index requires length <= 15");
  }
  const std::uint64_t mask = (1ULL << length) - 1;
  return PauliString(length, (index >> length) & mask, index & mask);
}

std::string PauliString::str() const {
  std::string out(static_cast<std::size_t>(length_), 'I');
  for (int i = 0; i < length_; ++i) out[static_cast<std::size_t>(i)] = letter(i);
  return out;
}

Complex PauliProduct::phase() const {
  switch (((phase_log_i % 4) + 4) % 4) {
    case 0:
      return {1.0, 0.0};
    case 1:
      return {0.0, 1.0};
    case 2:
      return {-1.0, 0.0};
    default:
      return {0.0, -1.0};
  }
}

PauliProduct ps_multiply(const PauliString& p, const PauliString& q) {
  if (p.length() != q.length()) {
    throw std::invalid_argument("ps_multiply: length mismatch");
  }
  const std::uint64_t xr = p.x_mask() ^ q.x_mask();
  const std::uint64_t zr = p.z_mask() ^ q.z_mask();
  // Per-site phases of the convention letter = i^{x z} X^x Z^z, accumulated
  // with the (-1)^{z_p x_q} swap factor from commuting Z past X.
  int k = std::popcount(p.x_mask() & p.z_mask()) + std::popcount(q.x_mask() & q.z_mask()) -
          std::popcount(xr & zr) + 2 * std::popcount(p.z_mask() & q.x_mask());
  k = ((k % 4) + 4) % 4;
  return PauliProduct{k, PauliString(p.length(), xr, zr)};
}

}  // namespace ksynth

#include "ksynth/operator_sum.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ksynth {

OperatorSum::OperatorSum(int length) : length_(length) {
  if (length < 1 || length > PauliString::kMaxLength) {
    throw std::invalid_argument("OperatorSum length out of range");
  }
}

OperatorSum OperatorSum::term(const PauliString& word, Real coeff) {
  OperatorSum out(word.length());
  out.add(word, coeff);
  return out;
}

Real OperatorSum::coeff(const PauliString& word) const {
  auto it = terms_.find(word);
  return it == terms_.end() ? 0.0 : it->second;
}

void OperatorSum::add(const PauliString& word, Real coeff, Real prune_tol) {
  if (word.length() != length_) {
    throw std::invalid_argument("OperatorSum::add: length mismatch");
  }
  if (!std::isfinite(coeff)) {
    throw std::invalid_argument("OperatorSum::add: non-finite coefficient");
  }
  auto [it, inserted] = terms_.try_emplace(word, coeff);
  if (!inserted) it->second += coeff;
  if (std::abs(it->second) <= prune_tol) terms_.erase(it);
}

OperatorSum& OperatorSum::operator+=(const OperatorSum& other) {
  if (other.length_ != length_) {
    throw std::invalid_argument("OperatorSum: length mismatch");
  }
  for (const auto& [word, c] : other.terms_) add(word, c);
  return *this;
}

OperatorSum& OperatorSum::operator-=(const OperatorSum& other) {
  if (other.length_ != length_) {
    throw std::invalid_argument("OperatorSum: length mismatch");
  }
  for (const auto& [word, c] : other.terms_) add(word, -c);
  return *this;
}

OperatorSum& OperatorSum::operator*=(Real scale) {
  if (!std::isfinite(scale)) {
    throw std::invalid_argument("OperatorSum: non-finite scale");
  }
  for (auto& [word, c] : terms_) c *= scale;
  prune();
  return *this;
}

void OperatorSum::prune(Real tol) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (std::abs(it->second) <= tol) {
      it = terms_.erase(it);
    } else {
      ++it;
    }
  }
}

Real OperatorSum::hs_norm() const {
  Real sq = 0.0;
  for (const auto& [word, c] : terms_) sq += c * c;
  return std::sqrt(sq);
}

OperatorSum OperatorSum::from_text(std::istream& in) {
  OperatorSum* out = nullptr;
  OperatorSum storage(1);
  std::string line;
  bool have_any = false;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    Real coeff;
    std::string letters;
    if (!(ls >> coeff >> letters)) {
      if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
      throw std::invalid_argument("OperatorSum::from_text: bad line: " + line);
    }
    PauliString word = PauliString::from_letters(letters);
    if (!have_any) {
      storage = OperatorSum(word.length());
      out = &storage;
      have_any = true;
    }
    out->add(word, coeff);
  }
  if (!have_any) {
    throw std::invalid_argument("OperatorSum::from_text: no terms");
  }
  return storage;
}

OperatorSum OperatorSum::from_text(const std::string& text) {
  std::istringstream in(text);
  return from_text(in);
}

std::string OperatorSum::to_text() const {
  std::ostringstream out;
  out.precision(17);
  for (const auto& [word, c] : terms_) {
    out << c << ' ' << word.str() << '\n';
  }
  return out.str();
}

OperatorSum bracket(const OperatorSum& a, const OperatorSum& b) {
  if (a.length() != b.length()) {
    throw std::invalid_argument("bracket: length mismatch");
  }
  OperatorSum out(a.length());
  for (const auto& [p, cp] : a) {
    for (const auto& [q, cq] : b) {
      if (p.commutes_with(q)) continue;
      // Anticommuting words: i[P,Q] = 2 i (PQ) with PQ = (+-i) R, so the
      // contribution is -+2 R with a real sign.
      PauliProduct prod = ps_multiply(p, q);
      const Real sign = prod.phase_log_i == 1 ? -2.0 : 2.0;
      out.add(prod.word, sign * cp * cq);
    }
  }
  out.prune();
  return out;
}

Real hs_inner(const OperatorSum& a, const OperatorSum& b) {
  if (a.length() != b.length()) {
    throw std::invalid_argument("hs_inner: length mismatch");
  }
  // Walk the smaller map.
  const OperatorSum& small = a.size() <= b.size() ? a : b;
  const OperatorSum& large = a.size() <= b.size() ? b : a;
  Real acc = 0.0;
  for (const auto& [word, c] : small) acc += c * large.coeff(word);
  return acc;
}

int s_min(const OperatorSum& a, Real coeff_tol) {
  int best = std::numeric_limits<int>::max();
  for (const auto& [word, c] : a) {
    if (std::abs(c) <= coeff_tol) continue;
    best = std::min(best, word.weight());
  }
  if (best == std::numeric_limits<int>::max()) {
    throw std::invalid_argument("s_min: zero operator has no size");
  }
  return best;
}

std::pair<OperatorSum, Real> strip_identity(const OperatorSum& a) {
  OperatorSum traceless = a;
  const PauliString id(a.length());
  const Real id_coeff = a.coeff(id);
  if (id_coeff != 0.0) {
    traceless.add(id, -id_coeff, 0.0);
  }
  return {std::move(traceless), id_coeff};
}

}  // namespace ksynth

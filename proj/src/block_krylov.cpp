#include "ksynth/block_krylov.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "nlohmann/json.hpp"

namespace ksynth {

static_assert(std::endian::native == std::endian::little,
              "basis persistence assumes a little-endian host");

// ---------------------------------------------------------------------------
// KrylovVec

KrylovVec::KrylovVec(std::uint32_t dim) : dim_(dim) {}

KrylovVec KrylovVec::from_operator(const OperatorSum& op) {
  const int L = op.length();
  KrylovVec out(std::uint32_t{1} << (2 * L));
  out.sp_.reserve(op.size());
  for (const auto& [word, c] : op) {
    out.sp_.emplace_back(word.pauli_index(), c);  // map order is index order
  }
  out.maybe_densify();
  return out;
}

KrylovVec KrylovVec::from_dense(RealVector v) {
  KrylovVec out(static_cast<std::uint32_t>(v.size()));
  out.dense_ = true;
  out.dv_ = std::move(v);
  return out;
}

KrylovVec KrylovVec::from_sorted_entries(std::uint32_t dim,
                                         std::vector<std::pair<std::uint32_t, Real>> entries) {
  KrylovVec out(dim);
  out.sp_ = std::move(entries);
  out.maybe_densify();
  return out;
}

std::size_t KrylovVec::nnz() const {
  if (!dense_) return sp_.size();
  std::size_t n = 0;
  for (Eigen::Index i = 0; i < dv_.size(); ++i) n += dv_[i] != 0.0;
  return n;
}

Real KrylovVec::coeff(std::uint32_t index) const {
  if (dense_) return dv_[index];
  auto it = std::lower_bound(sp_.begin(), sp_.end(), index,
                             [](const auto& e, std::uint32_t i) { return e.first < i; });
  return (it != sp_.end() && it->first == index) ? it->second : 0.0;
}

Real KrylovVec::dot(const KrylovVec& other) const {
  if (dim_ != other.dim_) throw std::invalid_argument("KrylovVec::dot: dimension mismatch");
  if (dense_ && other.dense_) return dv_.dot(other.dv_);
  if (!dense_ && !other.dense_) {
    Real acc = 0.0;
    auto a = sp_.begin();
    auto b = other.sp_.begin();
    while (a != sp_.end() && b != other.sp_.end()) {
      if (a->first < b->first) {
        ++a;
      } else if (b->first < a->first) {
        ++b;
      } else {
        acc += a->second * b->second;
        ++a;
        ++b;
      }
    }
    return acc;
  }
  const KrylovVec& sparse = dense_ ? other : *this;
  const KrylovVec& dense = dense_ ? *this : other;
  Real acc = 0.0;
  for (const auto& [i, v] : sparse.sp_) acc += v * dense.dv_[i];
  return acc;
}

Real KrylovVec::norm() const { return std::sqrt(dot(*this)); }

void KrylovVec::axpy(Real a, const KrylovVec& x) {
  if (dim_ != x.dim_) throw std::invalid_argument("KrylovVec::axpy: dimension mismatch");
  if (a == 0.0) return;
  if (!dense_ && x.dense_) {
    // Result is dense regardless; promote first.
    dv_ = to_dense_vector();
    dense_ = true;
    sp_.clear();
    sp_.shrink_to_fit();
  }
  if (dense_) {
    if (x.dense_) {
      dv_ += a * x.dv_;
    } else {
      for (const auto& [i, v] : x.sp_) dv_[i] += a * v;
    }
    return;
  }
  // sparse += a * sparse: sorted merge, dropping rounding dust
  std::vector<std::pair<std::uint32_t, Real>> merged;
  merged.reserve(sp_.size() + x.sp_.size());
  auto p = sp_.begin();
  auto q = x.sp_.begin();
  while (p != sp_.end() || q != x.sp_.end()) {
    if (q == x.sp_.end() || (p != sp_.end() && p->first < q->first)) {
      merged.emplace_back(*p);
      ++p;
    } else if (p == sp_.end() || q->first < p->first) {
      merged.emplace_back(q->first, a * q->second);
      ++q;
    } else {
      const Real v = p->second + a * q->second;
      if (std::abs(v) > kPruneTol) merged.emplace_back(p->first, v);
      ++p;
      ++q;
    }
  }
  sp_ = std::move(merged);
  maybe_densify();
}

void KrylovVec::scale(Real a) {
  if (dense_) {
    dv_ *= a;
  } else {
    for (auto& [i, v] : sp_) v *= a;
  }
}

RealVector KrylovVec::to_dense_vector() const {
  if (dense_) return dv_;
  RealVector v = RealVector::Zero(dim_);
  for (const auto& [i, c] : sp_) v[i] = c;
  return v;
}

OperatorSum KrylovVec::to_operator(int length) const {
  if ((std::uint32_t{1} << (2 * length)) != dim_) {
    throw std::invalid_argument("KrylovVec::to_operator: length does not match dimension");
  }
  OperatorSum out(length);
  for_each([&](std::uint32_t i, Real c) { out.add(PauliString::from_pauli_index(length, i), c); });
  return out;
}

void KrylovVec::maybe_densify() {
  if (dense_) return;
  if (static_cast<Real>(sp_.size()) > kDenseFillRatio * static_cast<Real>(dim_)) {
    dv_ = to_dense_vector();
    dense_ = true;
    sp_.clear();
    sp_.shrink_to_fit();
  }
}

// ---------------------------------------------------------------------------
// Bracket action on coefficient vectors

KrylovVec apply_bracket(const OperatorSum& h, const KrylovVec& v, int length) {
  const std::uint32_t dim = std::uint32_t{1} << (2 * length);
  if (v.dim() != dim || h.length() != length) {
    throw std::invalid_argument("apply_bracket: dimension mismatch");
  }
  const std::uint32_t site_mask = (std::uint32_t{1} << length) - 1;

  struct Term {
    std::uint32_t xp, zp, pidx;
    Real c;
    int self_phase;  // popcount(xp & zp)
  };
  std::vector<Term> terms;
  terms.reserve(h.size());
  for (const auto& [word, c] : h) {
    const auto xp = static_cast<std::uint32_t>(word.x_mask());
    const auto zp = static_cast<std::uint32_t>(word.z_mask());
    terms.push_back({xp, zp, (xp << length) | zp, c, std::popcount(xp & zp)});
  }

  auto accumulate = [&](auto&& sink) {
    v.for_each([&](std::uint32_t idx, Real val) {
      const std::uint32_t xq = idx >> length;
      const std::uint32_t zq = idx & site_mask;
      for (const Term& t : terms) {
        const int parity = std::popcount(t.xp & zq) + std::popcount(t.zp & xq);
        if (parity % 2 == 0) continue;  // commuting words drop out
        const std::uint32_t xr = t.xp ^ xq;
        const std::uint32_t zr = t.zp ^ zq;
        int k = t.self_phase + std::popcount(xq & zq) - std::popcount(xr & zr) +
                2 * std::popcount(t.zp & xq);
        k = ((k % 4) + 4) % 4;
        sink(idx ^ t.pidx, (k == 1 ? -2.0 : 2.0) * t.c * val);
      }
    });
  };

  if (v.is_dense()) {
    RealVector out = RealVector::Zero(dim);
    accumulate([&](std::uint32_t i, Real c) { out[i] += c; });
    return KrylovVec::from_dense(std::move(out));
  }
  std::unordered_map<std::uint32_t, Real> acc;
  acc.reserve(v.nnz() * h.size() * 2);
  accumulate([&](std::uint32_t i, Real c) { acc[i] += c; });
  std::vector<std::pair<std::uint32_t, Real>> entries;
  entries.reserve(acc.size());
  for (const auto& [i, c] : acc) {
    if (std::abs(c) > kPruneTol) entries.emplace_back(i, c);
  }
  std::sort(entries.begin(), entries.end());
  return KrylovVec::from_sorted_entries(dim, std::move(entries));
}

// ---------------------------------------------------------------------------
// Gram-Schmidt

std::vector<KrylovVec> orthonormalize_against(std::vector<KrylovVec> candidates,
                                              const std::vector<const KrylovVec*>& previous,
                                              Real rank_tol) {
  std::vector<KrylovVec> accepted;
  for (KrylovVec& cand : candidates) {
    const Real original_norm = cand.norm();
    if (original_norm <= 0.0) continue;
    for (int pass = 0; pass < 2; ++pass) {
      for (const KrylovVec* q : previous) cand.axpy(-q->dot(cand), *q);
      for (const KrylovVec& q : accepted) cand.axpy(-q.dot(cand), q);
    }
    const Real residual = cand.norm();
    if (residual < rank_tol * original_norm) continue;
    cand.scale(1.0 / residual);
    accepted.push_back(std::move(cand));
  }
  return accepted;
}

std::vector<OperatorSum> orthonormalize_against(const std::vector<OperatorSum>& candidates,
                                                const std::vector<OperatorSum>& previous,
                                                Real rank_tol) {
  if (candidates.empty()) return {};
  const int L = candidates.front().length();
  std::vector<KrylovVec> cands;
  cands.reserve(candidates.size());
  for (const auto& c : candidates) cands.push_back(KrylovVec::from_operator(c));
  std::vector<KrylovVec> prev;
  prev.reserve(previous.size());
  std::vector<const KrylovVec*> prev_ptrs;
  for (const auto& p : previous) prev.push_back(KrylovVec::from_operator(p));
  for (const auto& p : prev) prev_ptrs.push_back(&p);
  std::vector<KrylovVec> kept = orthonormalize_against(std::move(cands), prev_ptrs, rank_tol);
  std::vector<OperatorSum> out;
  out.reserve(kept.size());
  for (const auto& k : kept) out.push_back(k.to_operator(L));
  return out;
}

// ---------------------------------------------------------------------------
// BlockKrylovBasis

int BlockKrylovBasis::total_dim() const {
  int n = 0;
  for (const auto& b : blocks) n += b.size();
  return n;
}

std::vector<int> BlockKrylovBasis::block_sizes() const {
  std::vector<int> out;
  out.reserve(blocks.size());
  for (const auto& b : blocks) out.push_back(b.size());
  return out;
}

const KrylovVec& BlockKrylovBasis::vec(int block, int m) const {
  if (block < 0 || block >= depth() || m < 0 || m >= blocks[block].size()) {
    throw std::invalid_argument("basis vector index out of range");
  }
  return blocks[static_cast<std::size_t>(block)].vectors[static_cast<std::size_t>(m)];
}

OperatorSum BlockKrylovBasis::vector_as_operator(int block, int m) const {
  return vec(block, m).to_operator(length());
}

RealVector BlockKrylovBasis::vector_coeffs(int block, int m) const {
  return vec(block, m).to_dense_vector();
}

BlockKrylovBasis build_basis(const NativeSet& natives, const KrylovTolerances& tol,
                             int max_depth) {
  if (natives.terms.empty()) throw std::invalid_argument("build_basis: empty native set");
  if (max_depth < 1) throw std::invalid_argument("build_basis: max_depth must be >= 1");
  const int L = natives.spec.length;
  const PauliString identity(L);
  for (const auto& term : natives.terms) {
    if (term.length() != L) throw std::invalid_argument("build_basis: native length mismatch");
    if (std::abs(term.coeff(identity)) > kPruneTol) {
      throw std::invalid_argument("build_basis: native set must be traceless");
    }
  }

  BlockKrylovBasis basis;
  basis.natives = natives;
  basis.tol = tol;
  basis.max_depth = max_depth;
  const int full_dim = static_cast<int>((std::uint32_t{1} << (2 * L)) - 1);

  std::vector<KrylovVec> seed;
  seed.reserve(natives.terms.size());
  for (const auto& term : natives.terms) seed.push_back(KrylovVec::from_operator(term));
  std::vector<KrylovVec> block0 = orthonormalize_against(std::move(seed), {}, tol.rank_tol);
  if (block0.empty()) throw std::invalid_argument("build_basis: native set spans nothing");
  basis.blocks.push_back({0, std::move(block0)});

  while (true) {
    if (basis.depth() == max_depth) {
      basis.truncated = basis.total_dim() < full_dim;
      break;
    }
    std::vector<const KrylovVec*> previous;
    previous.reserve(static_cast<std::size_t>(basis.total_dim()));
    for (const auto& b : basis.blocks) {
      for (const auto& v : b.vectors) previous.push_back(&v);
    }
    // Brackets of every native with the newest block, channel-major order.
    const KrylovBlock& last = basis.blocks.back();
    std::vector<KrylovVec> candidates;
    candidates.reserve(natives.terms.size() * last.vectors.size());
    for (const auto& h : natives.terms) {
      for (const auto& v : last.vectors) candidates.push_back(apply_bracket(h, v, L));
    }
    std::vector<KrylovVec> next =
        orthonormalize_against(std::move(candidates), previous, tol.rank_tol);
    if (next.empty()) break;  // algebra closed
    basis.blocks.push_back({basis.depth(), std::move(next)});
  }
  return basis;
}

UniversalityResult universality_check(const BlockKrylovBasis& basis) {
  if (basis.truncated) {
    throw std::runtime_error(
        "universality_check: basis truncated at max_depth; increase max_depth");
  }
  const int full_dim = static_cast<int>(basis.index_dim()) - 1;
  const int dim = basis.total_dim();
  return {dim == full_dim, dim};
}

ComplexityProfile complexity_profile(const BlockKrylovBasis& basis, const OperatorSum& target) {
  if (target.length() != basis.length()) {
    throw std::invalid_argument("complexity_profile: length mismatch");
  }
  auto [traceless, id_coeff] = strip_identity(target);
  const Real norm = traceless.hs_norm();
  if (traceless.is_zero()) {
    throw std::invalid_argument("complexity_profile: target has zero traceless part");
  }
  traceless *= 1.0 / norm;
  const KrylovVec t = KrylovVec::from_operator(traceless);

  ComplexityProfile profile;
  profile.identity_coeff = id_coeff;
  profile.target_norm = norm;
  profile.P.reserve(static_cast<std::size_t>(basis.depth()));
  Real sum = 0.0;
  Real k = 0.0;
  for (const auto& block : basis.blocks) {
    Real p = 0.0;
    for (const auto& v : block.vectors) {
      const Real ov = v.dot(t);
      p += ov * ov;
    }
    profile.P.push_back(p);
    sum += p;
    k += p * std::ldexp(1.0, block.index);  // P_J * 2^J
  }
  profile.K = k;
  profile.out_of_span = std::max(0.0, 1.0 - sum);
  profile.R.assign(profile.P.size(), 0.0);
  Real suffix = profile.out_of_span;
  for (int j = static_cast<int>(profile.P.size()) - 1; j >= 0; --j) {
    profile.R[static_cast<std::size_t>(j)] = suffix;
    suffix += profile.P[static_cast<std::size_t>(j)];
  }
  return profile;
}

std::int64_t layer_circuit_complexity(int block) {
  if (block < 0) throw std::invalid_argument("layer_circuit_complexity: negative depth");
  if (block > 60) throw std::overflow_error("layer_circuit_complexity: depth exceeds 2^63");
  return 3 * (std::int64_t{1} << block) - 2;
}

int access_depth(const BlockKrylovBasis& basis, const OperatorSum& target, Real containment_tol) {
  const ComplexityProfile profile = complexity_profile(basis, target);
  Real cumulative = 0.0;
  for (std::size_t j = 0; j < profile.P.size(); ++j) {
    cumulative += profile.P[j];
    if (1.0 - cumulative <= containment_tol) return static_cast<int>(j);
  }
  std::ostringstream msg;
  msg << "access_depth: target not contained; final residual norm^2 = " << (1.0 - cumulative);
  throw std::runtime_error(msg.str());
}

int first_overlap_depth(const BlockKrylovBasis& basis, const OperatorSum& target,
                        Real overlap_tol) {
  const ComplexityProfile profile = complexity_profile(basis, target);
  for (std::size_t j = 0; j < profile.P.size(); ++j) {
    if (profile.P[j] > overlap_tol) return static_cast<int>(j);
  }
  throw std::runtime_error("first_overlap_depth: target has no overlap with any block");
}

SminMap s_min_map(const BlockKrylovBasis& basis, Real coeff_tol) {
  const int L = basis.length();
  const std::uint32_t site_mask = (std::uint32_t{1} << L) - 1;
  SminMap map;
  for (const auto& block : basis.blocks) {
    for (int m = 0; m < block.size(); ++m) {
      int best = L + 1;
      block.vectors[static_cast<std::size_t>(m)].for_each([&](std::uint32_t idx, Real c) {
        if (std::abs(c) <= coeff_tol) return;
        const int w = std::popcount((idx >> L) | (idx & site_mask));
        best = std::min(best, w);
      });
      map.entries.push_back({block.index, m, best});
      auto [it, inserted] = map.frontier.try_emplace(best, block.index);
      if (!inserted) it->second = std::min(it->second, block.index);
    }
  }
  return map;
}

OperatorSum sample_from_block(const BlockKrylovBasis& basis, int block, std::uint64_t seed) {
  if (block < 0 || block >= basis.depth()) {
    throw std::invalid_argument("sample_from_block: block index out of range");
  }
  const KrylovBlock& layer = basis.blocks[static_cast<std::size_t>(block)];
  std::mt19937_64 rng(seed);
  std::normal_distribution<Real> normal(0.0, 1.0);
  RealVector coeffs(layer.size());
  Real norm = 0.0;
  do {
    for (int m = 0; m < layer.size(); ++m) coeffs[m] = normal(rng);
    norm = coeffs.norm();
  } while (norm == 0.0);
  coeffs /= norm;

  KrylovVec out(basis.index_dim());
  for (int m = 0; m < layer.size(); ++m) {
    out.axpy(coeffs[m], layer.vectors[static_cast<std::size_t>(m)]);
  }
  return out.to_operator(basis.length());
}

// ---------------------------------------------------------------------------
// Persistence

namespace {

std::string block_file_name(int block) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "block_%03d.f64", block);
  return buf;
}

}  // namespace

void save_basis(const BlockKrylovBasis& basis, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  nlohmann::json meta;
  meta["format"] = "ksynth-basis/1";
  meta["length"] = basis.length();
  meta["model"] = basis.natives.spec.name();
  meta["native_names"] = basis.natives.names;
  meta["ortho_tol"] = basis.tol.ortho_tol;
  meta["rank_tol"] = basis.tol.rank_tol;
  meta["containment_tol"] = basis.tol.containment_tol;
  meta["max_depth"] = basis.max_depth;
  meta["truncated"] = basis.truncated;
  meta["depth"] = basis.depth();
  meta["block_sizes"] = basis.block_sizes();
  meta["total_dim"] = basis.total_dim();
  meta["tolerance_note"] =
      "block count and sizes depend on rank_tol/ortho_tol; rerun with other "
      "tolerances to probe sensitivity";

  std::ofstream meta_out(dir / "meta.json");
  if (!meta_out) throw std::runtime_error("save_basis: cannot write meta.json");
  meta_out << meta.dump(2) << '\n';

  for (const auto& block : basis.blocks) {
    std::ofstream out(dir / block_file_name(block.index), std::ios::binary);
    if (!out) throw std::runtime_error("save_basis: cannot write block file");
    for (const auto& v : block.vectors) {
      const RealVector row = v.to_dense_vector();
      out.write(reinterpret_cast<const char*>(row.data()),
                static_cast<std::streamsize>(sizeof(Real) * static_cast<std::size_t>(row.size())));
    }
  }
}

BlockKrylovBasis load_basis(const std::filesystem::path& dir) {
  std::ifstream meta_in(dir / "meta.json");
  if (!meta_in) throw std::runtime_error("load_basis: cannot open meta.json in " + dir.string());
  nlohmann::json meta = nlohmann::json::parse(meta_in);
  if (meta.value("format", "") != "ksynth-basis/1") {
    throw std::runtime_error("load_basis: unknown basis format");
  }
  const int length = meta.at("length").get<int>();
  BlockKrylovBasis basis;
  basis.natives = build_native_set(parse_model(meta.at("model").get<std::string>(), length));
  basis.tol.ortho_tol = meta.at("ortho_tol").get<Real>();
  basis.tol.rank_tol = meta.at("rank_tol").get<Real>();
  basis.tol.containment_tol = meta.at("containment_tol").get<Real>();
  basis.max_depth = meta.at("max_depth").get<int>();
  basis.truncated = meta.at("truncated").get<bool>();

  const auto block_sizes = meta.at("block_sizes").get<std::vector<int>>();
  const std::uint32_t dim = basis.index_dim();
  for (int j = 0; j < static_cast<int>(block_sizes.size()); ++j) {
    std::ifstream in(dir / block_file_name(j), std::ios::binary);
    if (!in) throw std::runtime_error("load_basis: missing " + block_file_name(j));
    KrylovBlock block;
    block.index = j;
    for (int m = 0; m < block_sizes[static_cast<std::size_t>(j)]; ++m) {
      RealVector row(dim);
      in.read(reinterpret_cast<char*>(row.data()),
              static_cast<std::streamsize>(sizeof(Real) * dim));
      if (!in) throw std::runtime_error("load_basis: short read in " + block_file_name(j));
      block.vectors.push_back(KrylovVec::from_dense(std::move(row)));
    }
    basis.blocks.push_back(std::move(block));
  }
  return basis;
}

}  // namespace ksynth

#include "ksynth/models.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ksynth {

namespace {

OperatorSum two_site_coupling(int length, char axis, Real coeff) {
  OperatorSum out(length);
  for (int i = 0; i + 1 < length; ++i) {
    const PauliString a = PauliString::single(length, i, axis);
    const PauliString b = PauliString::single(length, i + 1, axis);
    out.add(PauliString(length, a.x_mask() | b.x_mask(), a.z_mask() | b.z_mask()), coeff);
  }
  return out;
}

OperatorSum interaction_term(const ModelSpec& spec) {
  switch (spec.kind) {
    case InteractionKind::Ising:
      return two_site_coupling(spec.length, 'Z', 1.0);
    case InteractionKind::Heisenberg: {
      OperatorSum out = two_site_coupling(spec.length, 'X', 1.0);
      out += two_site_coupling(spec.length, 'Y', 1.0);
      out += two_site_coupling(spec.length, 'Z', 1.0);
      return out;
    }
    case InteractionKind::XXZ: {
      OperatorSum out = two_site_coupling(spec.length, 'X', 1.0);
      out += two_site_coupling(spec.length, 'Y', 1.0);
      out += two_site_coupling(spec.length, 'Z', spec.delta);
      return out;
    }
  }
  throw std::logic_error("unreachable");
}

OperatorSum uniform_field(int length, char axis) {
  OperatorSum out(length);
  for (int i = 0; i < length; ++i) out.add(PauliString::single(length, i, axis), 1.0);
  return out;
}

}  // namespace

std::string ModelSpec::name() const {
  switch (kind) {
    case InteractionKind::Ising:
      return "ising";
    case InteractionKind::Heisenberg:
      return "heisenberg";
    case InteractionKind::XXZ: {
      std::ostringstream out;
      out << "xxz:" << delta;
      return out.str();
    }
  }
  throw std::logic_error("unreachable");
}

ModelSpec parse_model(const std::string& selector, int length) {
  ModelSpec spec;
  spec.length = length;
  if (selector == "ising") {
    spec.kind = InteractionKind::Ising;
  } else if (selector == "heisenberg") {
    spec.kind = InteractionKind::Heisenberg;
  } else if (selector.rfind("xxz:", 0) == 0) {
    spec.kind = InteractionKind::XXZ;
    spec.delta = std::stod(selector.substr(4));
    if (!std::isfinite(spec.delta)) throw std::invalid_argument("non-finite anisotropy");
  } else {
    throw std::invalid_argument("unknown model selector: " + selector +
                                " (expected ising, heisenberg, or xxz:DELTA)");
  }
  return spec;
}

NativeSet build_native_set(const ModelSpec& spec) {
  if (spec.length < 2) {
    throw std::invalid_argument("build_native_set: need at least 2 sites");
  }
  if (!std::isfinite(spec.delta)) {
    throw std::invalid_argument("build_native_set: non-finite anisotropy");
  }
  NativeSet natives;
  natives.spec = spec;
  natives.names = {"X", "Z", "break", "int"};
  natives.terms.push_back(uniform_field(spec.length, 'X'));
  natives.terms.push_back(uniform_field(spec.length, 'Z'));
  natives.terms.push_back(OperatorSum::term(PauliString::single(spec.length, 0, 'X'), 1.0));
  natives.terms.push_back(interaction_term(spec));
  return natives;
}

TargetSpec parse_target(const std::string& selector) {
  TargetSpec t;
  if (selector == "ising") {
    t.kind = TargetSpec::Kind::Ising;
  } else if (selector == "heisenberg") {
    t.kind = TargetSpec::Kind::Heisenberg;
  } else if (selector.rfind("xxz:", 0) == 0) {
    t.kind = TargetSpec::Kind::XXZ;
    t.delta = std::stod(selector.substr(4));
  } else if (selector.rfind("file:", 0) == 0) {
    t.kind = TargetSpec::Kind::File;
    t.path = selector.substr(5);
  } else if (selector.rfind("zz:", 0) == 0) {
    t.kind = TargetSpec::Kind::ZZPair;
    const std::string body = selector.substr(3);
    const auto comma = body.find(',');
    if (comma == std::string::npos) {
      throw std::invalid_argument("zz target needs two sites, e.g. zz:1,4");
    }
    t.site_a = std::stoi(body.substr(0, comma));
    t.site_b = std::stoi(body.substr(comma + 1));
  } else if (selector.size() > 2 && selector[1] == ':' &&
             (selector[0] == 'x' || selector[0] == 'y' || selector[0] == 'z')) {
    t.kind = TargetSpec::Kind::SinglePauli;
    t.axis = static_cast<char>(selector[0] - 'a' + 'A');
    t.site = std::stoi(selector.substr(2));
  } else {
    throw std::invalid_argument("unknown target selector: " + selector);
  }
  return t;
}

OperatorSum build_target(const TargetSpec& target, const ModelSpec& spec) {
  const int L = spec.length;
  switch (target.kind) {
    case TargetSpec::Kind::SinglePauli: {
      if (target.site < 0 || target.site >= L) {
        throw std::invalid_argument("target site out of range");
      }
      return OperatorSum::term(PauliString::single(L, target.site, target.axis), 1.0);
    }
    case TargetSpec::Kind::ZZPair: {
      if (target.site_a >= target.site_b) {
        throw std::invalid_argument("zz pair requires i < j");
      }
      if (target.site_a < 0 || target.site_b >= L) {
        throw std::invalid_argument("target site out of range");
      }
      const PauliString a = PauliString::single(L, target.site_a, 'Z');
      const PauliString b = PauliString::single(L, target.site_b, 'Z');
      return OperatorSum::term(PauliString(L, 0, a.z_mask() | b.z_mask()), 1.0);
    }
    case TargetSpec::Kind::XXZ: {
      ModelSpec m = spec;
      m.kind = InteractionKind::XXZ;
      m.delta = target.delta;
      return interaction_term(m);
    }
    case TargetSpec::Kind::Ising: {
      ModelSpec m = spec;
      m.kind = InteractionKind::Ising;
      return interaction_term(m);
    }
    case TargetSpec::Kind::Heisenberg: {
      ModelSpec m = spec;
      m.kind = InteractionKind::Heisenberg;
      return interaction_term(m);
    }
    case TargetSpec::Kind::File: {
      std::ifstream in(target.path);
      if (!in) throw std::invalid_argument("cannot open target file: " + target.path);
      OperatorSum op = OperatorSum::from_text(in);
      if (op.length() != L) {
        throw std::invalid_argument("target file length " + std::to_string(op.length()) +
                                    " does not match system size " + std::to_string(L));
      }
      return op;
    }
  }
  throw std::logic_error("unreachable");
}

std::vector<LabeledTarget> enumerate_lowweight_set(const ModelSpec& spec) {
  const int L = spec.length;
  std::vector<LabeledTarget> out;
  out.reserve(static_cast<std::size_t>(3 * L + L * (L - 1) / 2));
  for (int i = 0; i < L; ++i) {
    for (char axis : {'X', 'Y', 'Z'}) {
      LabeledTarget t{std::string(1, static_cast<char>(axis - 'A' + 'a')) + ":" +
                          std::to_string(i),
                      OperatorSum::term(PauliString::single(L, i, axis), 1.0)};
      out.push_back(std::move(t));
    }
  }
  for (int i = 0; i < L; ++i) {
    for (int j = i + 1; j < L; ++j) {
      const PauliString a = PauliString::single(L, i, 'Z');
      const PauliString b = PauliString::single(L, j, 'Z');
      out.push_back({"zz:" + std::to_string(i) + "," + std::to_string(j),
                     OperatorSum::term(PauliString(L, 0, a.z_mask() | b.z_mask()), 1.0)});
    }
  }
  return out;
}

}  // namespace ksynth

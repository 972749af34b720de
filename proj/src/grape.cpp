#include "ksynth/grape.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "ksynth/dense.hpp"

namespace ksynth {

namespace {

/// phi(x) = (e^x - 1)/x, series near zero.
Complex phi1(Complex x) {
  if (std::abs(x) < 1e-4) {
    return 1.0 + x * (0.5 + x * (1.0 / 6.0 + x / 24.0));
  }
  return (std::exp(x) - 1.0) / x;
}

struct StepDecomposition {
  Matrix eigvecs;
  RealVector eigvals;
  Vector phases;  // e^{-i lambda dt}
  Matrix unitary;
};

StepDecomposition decompose_step(const RealVector& u, const std::vector<Matrix>& natives,
                                 Real dt) {
  StepDecomposition d;
  const Matrix h = step_hamiltonian(u, natives);
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("grape: step eigendecomposition failed");
  }
  d.eigvecs = es.eigenvectors();
  d.eigvals = es.eigenvalues();
  d.phases = (Complex(0.0, -dt) * d.eigvals.cast<Complex>().array()).exp().matrix();
  d.unitary = d.eigvecs * d.phases.asDiagonal() * d.eigvecs.adjoint();
  return d;
}

void clamp_amplitudes(ControlPulse& pulse, const std::optional<Real>& u_max) {
  if (!u_max) return;
  const Real bound = *u_max;
  pulse.amplitudes = pulse.amplitudes.cwiseMax(-bound).cwiseMin(bound);
}

void check_channel(int ch, int channels) {
  if (ch < 0 || ch >= channels) {
    throw std::invalid_argument("pulse channel index out of range: " + std::to_string(ch));
  }
}

}  // namespace

std::vector<Matrix> natives_dense(const NativeSet& natives, int max_length) {
  std::vector<Matrix> out;
  out.reserve(natives.terms.size());
  for (const auto& term : natives.terms) out.push_back(to_dense(term, max_length));
  return out;
}

Matrix target_unitary(const OperatorSum& h, Real tau, int max_length) {
  return hermitian_exponential(to_dense(h, max_length), tau);
}

Matrix step_hamiltonian(const RealVector& u, const std::vector<Matrix>& natives) {
  if (static_cast<std::size_t>(u.size()) != natives.size()) {
    throw std::invalid_argument("step_hamiltonian: channel count mismatch");
  }
  if (natives.empty()) throw std::invalid_argument("step_hamiltonian: no native channels");
  Matrix h = Matrix::Zero(natives.front().rows(), natives.front().cols());
  for (std::size_t a = 0; a < natives.size(); ++a) {
    if (u[static_cast<Eigen::Index>(a)] != 0.0) h += u[static_cast<Eigen::Index>(a)] * natives[a];
  }
  return h;
}

Matrix propagate(const ControlPulse& pulse, const std::vector<Matrix>& natives) {
  if (pulse.channels() != static_cast<int>(natives.size())) {
    throw std::invalid_argument("propagate: channel count mismatch");
  }
  if (pulse.steps() < 1) throw std::invalid_argument("propagate: empty pulse");
  if (pulse.dt <= 0.0) throw std::invalid_argument("propagate: dt must be positive");
  const Eigen::Index dim = natives.front().rows();
  Matrix u = Matrix::Identity(dim, dim);
  for (int k = 0; k < pulse.steps(); ++k) {
    u = decompose_step(pulse.amplitudes.row(k).transpose(), natives, pulse.dt).unitary * u;
  }
  return u;
}

Real fidelity(const Matrix& u, const Matrix& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols()) {
    throw std::invalid_argument("fidelity: dimension mismatch");
  }
  const Real dim = static_cast<Real>(u.rows());
  const Complex overlap = (u.adjoint() * v).trace();
  return std::norm(overlap) / (dim * dim);
}

std::pair<Real, RealMatrix> loss_and_gradient(const ControlPulse& pulse,
                                              const std::vector<Matrix>& natives,
                                              const Matrix& target) {
  const int n = pulse.steps();
  const int channels = pulse.channels();
  if (channels != static_cast<int>(natives.size())) {
    throw std::invalid_argument("loss_and_gradient: channel count mismatch");
  }
  const Eigen::Index dim = target.rows();
  const Real dsq = static_cast<Real>(dim) * static_cast<Real>(dim);

  std::vector<StepDecomposition> steps;
  steps.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    steps.push_back(decompose_step(pulse.amplitudes.row(k).transpose(), natives, pulse.dt));
  }

  // prefix[k] = U_{k-1} ... U_0, suffix[k] = U_{n-1} ... U_{k+1}
  std::vector<Matrix> prefix(static_cast<std::size_t>(n));
  Matrix acc = Matrix::Identity(dim, dim);
  for (int k = 0; k < n; ++k) {
    prefix[static_cast<std::size_t>(k)] = acc;
    acc = steps[static_cast<std::size_t>(k)].unitary * acc;
  }
  const Matrix total = acc;
  std::vector<Matrix> suffix(static_cast<std::size_t>(n));
  acc = Matrix::Identity(dim, dim);
  for (int k = n - 1; k >= 0; --k) {
    suffix[static_cast<std::size_t>(k)] = acc;
    acc = acc * steps[static_cast<std::size_t>(k)].unitary;
  }

  const Complex z = (target.adjoint() * total).trace();
  const Real loss = 1.0 - std::norm(z) / dsq;

  RealMatrix grad(n, channels);
  Matrix gamma(dim, dim);
  for (int k = 0; k < n; ++k) {
    const auto& step = steps[static_cast<std::size_t>(k)];
    // Divided-difference kernel of the exponential's directional derivative.
    for (Eigen::Index i = 0; i < dim; ++i) {
      for (Eigen::Index j = 0; j < dim; ++j) {
        const Complex x = Complex(0.0, -pulse.dt) * (step.eigvals[i] - step.eigvals[j]);
        gamma(i, j) = step.phases[j] * phi1(x) * Complex(0.0, -pulse.dt);
      }
    }
    const Matrix a_k = prefix[static_cast<std::size_t>(k)] * target.adjoint() *
                       suffix[static_cast<std::size_t>(k)];
    const Matrix b = step.eigvecs.adjoint() * a_k * step.eigvecs;
    const Matrix bt_gamma = b.transpose().cwiseProduct(gamma);
    for (int a = 0; a < channels; ++a) {
      const Matrix c = step.eigvecs.adjoint() * natives[static_cast<std::size_t>(a)] *
                       step.eigvecs;
      const Complex dz = bt_gamma.cwiseProduct(c).sum();
      grad(k, a) = -2.0 / dsq * std::real(std::conj(z) * dz);
    }
  }
  return {loss, std::move(grad)};
}

GrapeResult optimize(const ControlPulse& init, const Matrix& target, const GrapeConfig& cfg,
                     const std::vector<Matrix>& natives) {
  if (cfg.budget < 0) throw std::invalid_argument("optimize: negative budget");
  GrapeResult result;
  ControlPulse pulse = init;
  clamp_amplitudes(pulse, cfg.u_max);

  RealMatrix m = RealMatrix::Zero(pulse.steps(), pulse.channels());
  RealMatrix v = RealMatrix::Zero(pulse.steps(), pulse.channels());
  result.loss = std::numeric_limits<Real>::infinity();

  for (int it = 0;; ++it) {
    auto [loss, grad] = loss_and_gradient(pulse, natives, target);
    if (!std::isfinite(loss)) {
      std::ostringstream msg;
      msg << "optimize: non-finite loss at iteration " << it << " (|u|_max = "
          << pulse.amplitudes.cwiseAbs().maxCoeff() << ")";
      throw std::runtime_error(msg.str());
    }
    result.history.push_back(loss);
    if (loss < result.loss) {
      result.loss = loss;
      result.pulse = pulse;
    }
    if (it == cfg.budget || result.loss <= cfg.stop_loss) break;

    const Real t = static_cast<Real>(it + 1);
    m = cfg.beta1 * m + (1.0 - cfg.beta1) * grad;
    v = cfg.beta2 * v + (1.0 - cfg.beta2) * grad.cwiseProduct(grad);
    const Real m_corr = 1.0 - std::pow(cfg.beta1, t);
    const Real v_corr = 1.0 - std::pow(cfg.beta2, t);
    pulse.amplitudes -=
        (cfg.learning_rate / m_corr) * m.cwiseQuotient(
            ((v / v_corr).cwiseSqrt().array() + cfg.adam_eps).matrix());
    clamp_amplitudes(pulse, cfg.u_max);
  }
  result.converged = result.loss < cfg.loss_threshold;
  return result;
}

std::optional<int> critical_step(const std::vector<int>& steps, const std::vector<Real>& losses,
                                 Real eps) {
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (losses[i] < eps) return steps[i];
  }
  return std::nullopt;
}

SynthesisCurve warm_start_sweep(const Matrix& target, const std::vector<int>& schedule,
                                const GrapeConfig& cfg, const std::vector<Matrix>& natives,
                                const SweepOptions& options) {
  for (std::size_t i = 0; i + 1 < schedule.size(); ++i) {
    if (schedule[i] >= schedule[i + 1]) {
      throw std::invalid_argument("warm_start_sweep: schedule must be strictly increasing");
    }
  }
  if (!schedule.empty() && schedule.front() < 1) {
    throw std::invalid_argument("warm_start_sweep: step counts must be positive");
  }
  const int channels = static_cast<int>(natives.size());
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<Real> noise(0.0, cfg.init_scale);

  SynthesisCurve curve;
  ControlPulse incumbent;
  incumbent.dt = cfg.dt;
  for (const int n : schedule) {
    ControlPulse init;
    init.dt = cfg.dt;
    init.amplitudes = RealMatrix::Zero(n, channels);
    if (curve.steps.empty()) {
      for (int k = 0; k < n; ++k) {
        for (int a = 0; a < channels; ++a) init.amplitudes(k, a) = noise(rng);
      }
    } else {
      // Appending idle steps preserves the incumbent's loss exactly.
      init.amplitudes.topRows(incumbent.steps()) = incumbent.amplitudes;
    }
    GrapeResult res = optimize(init, target, cfg, natives);
    incumbent = res.pulse;
    curve.steps.push_back(n);
    curve.losses.push_back(res.loss);
    curve.pulses.push_back(res.pulse);
    if (options.stop_after_threshold && res.loss < cfg.loss_threshold) break;
  }
  curve.critical_step = critical_step(curve.steps, curve.losses, cfg.loss_threshold);
  return curve;
}

SynthesisCurve best_of_restarts(const Matrix& target, const std::vector<int>& schedule,
                                const GrapeConfig& cfg, const std::vector<Matrix>& natives,
                                int restarts, const SweepOptions& options) {
  if (restarts < 1) throw std::invalid_argument("best_of_restarts: need at least one restart");
  SynthesisCurve merged;
  for (int r = 0; r < restarts; ++r) {
    GrapeConfig chain_cfg = cfg;
    chain_cfg.seed = cfg.seed + static_cast<std::uint64_t>(r);
    const SynthesisCurve curve = warm_start_sweep(target, schedule, chain_cfg, natives, options);
    for (std::size_t i = 0; i < curve.steps.size(); ++i) {
      if (i < merged.steps.size()) {
        if (curve.losses[i] < merged.losses[i]) {
          merged.losses[i] = curve.losses[i];
          merged.pulses[i] = curve.pulses[i];
        }
      } else {
        merged.steps.push_back(curve.steps[i]);
        merged.losses.push_back(curve.losses[i]);
        merged.pulses.push_back(curve.pulses[i]);
      }
    }
  }
  merged.critical_step = critical_step(merged.steps, merged.losses, cfg.loss_threshold);
  return merged;
}

ControlPulse trotter_pulse(Real alpha, Real beta, int ch1, int ch2, int n, Real dt,
                           int channels) {
  if (n < 1) throw std::invalid_argument("trotter_pulse: n must be >= 1");
  if (ch1 == ch2) throw std::invalid_argument("trotter_pulse: channels must be distinct");
  check_channel(ch1, channels);
  check_channel(ch2, channels);
  ControlPulse pulse;
  pulse.dt = dt;
  pulse.amplitudes = RealMatrix::Zero(2 * n, channels);
  // (e^{i alpha H1 / n} e^{i beta H2 / n})^n with the rightmost factor first;
  // e^{+i theta H} maps to amplitude -theta/dt.
  for (int g = 0; g < n; ++g) {
    pulse.amplitudes(2 * g, ch2) = -beta / (static_cast<Real>(n) * dt);
    pulse.amplitudes(2 * g + 1, ch1) = -alpha / (static_cast<Real>(n) * dt);
  }
  return pulse;
}

ControlPulse commutator_pulse(int ch1, int ch2, int n, Real dt, int channels) {
  if (n < 1) throw std::invalid_argument("commutator_pulse: n must be >= 1");
  if (ch1 == ch2) throw std::invalid_argument("commutator_pulse: channels must be distinct");
  check_channel(ch1, channels);
  check_channel(ch2, channels);
  ControlPulse pulse;
  pulse.dt = dt;
  pulse.amplitudes = RealMatrix::Zero(4 * n, channels);
  const Real amp = 1.0 / (std::sqrt(static_cast<Real>(n)) * dt);
  // (e^{i H1/sqrt n} e^{i H2/sqrt n} e^{-i H1/sqrt n} e^{-i H2/sqrt n})^n,
  // rightmost factor applied first.
  for (int g = 0; g < n; ++g) {
    pulse.amplitudes(4 * g, ch2) = amp;
    pulse.amplitudes(4 * g + 1, ch1) = amp;
    pulse.amplitudes(4 * g + 2, ch2) = -amp;
    pulse.amplitudes(4 * g + 3, ch1) = -amp;
  }
  return pulse;
}

}  // namespace ksynth

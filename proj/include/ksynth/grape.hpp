#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ksynth/models.hpp"
#include "ksynth/types.hpp"

namespace ksynth {

/// Piecewise-constant control sequence: amplitudes(k, alpha) is the strength
/// of native channel alpha during step k; step 0 is applied first.
struct ControlPulse {
  Real dt = 0.1;
  RealMatrix amplitudes;  // steps x channels

  int steps() const { return static_cast<int>(amplitudes.rows()); }
  int channels() const { return static_cast<int>(amplitudes.cols()); }
};

struct GrapeConfig {
  int budget = 2000;       // Adam iterations per optimize call
  Real learning_rate = 1e-2;
  Real beta1 = 0.9;
  Real beta2 = 0.999;
  Real adam_eps = 1e-8;
  Real loss_threshold = 1e-3;  // the acceptance loss epsilon
  Real tau = 0.5;              // target evolution time in e^{-i H tau}
  Real dt = 0.1;
  std::optional<Real> u_max;   // amplitude bound, unbounded by default
  std::uint64_t seed = 0;
  Real stop_loss = 1e-10;  // early exit once the incumbent is this good
  Real init_scale = 1e-2;  // scale of the random first-step initialization
  int restarts = 3;
};

struct GrapeResult {
  ControlPulse pulse;  // argmin over the evaluation history
  Real loss = 1.0;     // min over the evaluation history
  std::vector<Real> history;
  bool converged = false;  // loss < loss_threshold
};

struct SynthesisCurve {
  std::vector<int> steps;          // strictly increasing n values
  std::vector<Real> losses;        // best loss after optimization at each n
  std::vector<ControlPulse> pulses;
  std::optional<int> critical_step;  // smallest n with loss < threshold
};

/// Dense forms of the native terms, in channel order.
std::vector<Matrix> natives_dense(const NativeSet& natives, int max_length = 8);

/// e^{-i H tau} for a Pauli-sum Hamiltonian.
Matrix target_unitary(const OperatorSum& h, Real tau, int max_length = 8);

/// sum_alpha u_alpha H_alpha. Throws on channel count mismatch.
Matrix step_hamiltonian(const RealVector& u, const std::vector<Matrix>& natives);

/// Product of step exponentials, step 0 applied first (rightmost factor).
Matrix propagate(const ControlPulse& pulse, const std::vector<Matrix>& natives);

/// |tr(U^† V)|^2 / D^2, in [0, 1], invariant under global phase.
Real fidelity(const Matrix& u, const Matrix& v);

/// Loss = 1 - fidelity(target, U_n) and its exact gradient with respect to
/// every amplitude, via the eigendecomposition form of the exponential's
/// directional derivative and cached partial products.
std::pair<Real, RealMatrix> loss_and_gradient(const ControlPulse& pulse,
                                              const std::vector<Matrix>& natives,
                                              const Matrix& target);

/// Adam descent on the synthesis loss; retains the best-seen pulse.
/// Deterministic: the config's seed is not consumed here.
GrapeResult optimize(const ControlPulse& init, const Matrix& target, const GrapeConfig& cfg,
                     const std::vector<Matrix>& natives);

/// Smallest n whose loss beats eps, if any.
std::optional<int> critical_step(const std::vector<int>& steps, const std::vector<Real>& losses,
                                 Real eps);

struct SweepOptions {
  bool stop_after_threshold = false;  // end the schedule once n_c is found
};

/// Duration sweep with warm starts: each n extends the previous optimum with
/// zero-amplitude steps; the first n starts from small seeded random
/// amplitudes. The recorded best-loss sequence is non-increasing.
SynthesisCurve warm_start_sweep(const Matrix& target, const std::vector<int>& schedule,
                                const GrapeConfig& cfg, const std::vector<Matrix>& natives,
                                const SweepOptions& options = {});

/// Pointwise-best merge of `restarts` warm-start chains with distinct seeds.
SynthesisCurve best_of_restarts(const Matrix& target, const std::vector<int>& schedule,
                                const GrapeConfig& cfg, const std::vector<Matrix>& natives,
                                int restarts, const SweepOptions& options = {});

/// 2n-step alternating pulse realizing e^{i(alpha H_ch1 + beta H_ch2)} in the
/// n -> infinity limit of the first-order product formula.
ControlPulse trotter_pulse(Real alpha, Real beta, int ch1, int ch2, int n, Real dt,
                           int channels);

/// 4n-step group-commutator pulse realizing e^{-[H_ch1, H_ch2]} as n grows.
ControlPulse commutator_pulse(int ch1, int ch2, int n, Real dt, int channels);

}  // namespace ksynth

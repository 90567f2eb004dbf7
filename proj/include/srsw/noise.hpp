#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "srsw/state.hpp"

namespace srsw {

/// Deterministic 64-bit mix used wherever independent streams are derived
/// from (seed, index) pairs; stable across platforms.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

/// Cached first derivatives of a state, shared by the advective term and all
/// noise operators so each drift assembly transforms the state only once.
struct StateGradients {
  ScalarField dv1dx, dv1dy, dv2dx, dv2dy, dhdx, dhdy;
  static StateGradients of(const State& s);
};

enum class NoisePhase { cos, sin };

struct NoiseMode {
  int k1 = 0;
  int k2 = 0;
  NoisePhase phase = NoisePhase::cos;
  double amplitude = 0.0;
};

/// Finite family {xi_i} of divergence-free vector fields with precomputed
/// gradients. xi_i = amplitude * (k-perp/|k|) * {cos,sin}(k.x), which is
/// divergence-free by construction (k-perp . k = 0).
class NoiseBasis {
public:
  NoiseBasis() = default;

  /// K modes over the lowest wavevectors |k| >= 1 with amplitudes A|k|^-s.
  static NoiseBasis standard(GridPtr grid, int K, double amplitude = 0.05,
                             double decay = 3.0);
  static NoiseBasis from_modes(GridPtr grid, const std::vector<NoiseMode>& modes);
  /// Arbitrary prescribed fields; rejects fields whose spectral divergence
  /// exceeds 1e-10.
  static NoiseBasis from_fields(std::vector<VectorField> fields);

  int count() const { return static_cast<int>(xi_.size()); }
  const VectorField& xi(int i) const { return xi_[i]; }
  /// grad of component c of xi_i: pair (d/dx, d/dy).
  const VectorField& grad_xi1(int i) const { return grad_xi1_[i]; }
  const VectorField& grad_xi2(int i) const { return grad_xi2_[i]; }
  const std::vector<NoiseMode>& modes() const { return modes_; }

  /// max_{|alpha|<=4, component} ||d^alpha xi^c||_inf, spectral derivatives.
  double w4inf_norm(int i) const;
  /// Summability proxy sum_i ||xi_i||_{4,inf}^2.
  double w4inf_sum() const;
  /// sum_i ||xi_i||_inf^2 (enters the noise stability bound).
  double linf_sq_sum() const;

private:
  std::vector<VectorField> xi_;
  std::vector<VectorField> grad_xi1_, grad_xi2_;
  std::vector<NoiseMode> modes_;

  void finalize();
};

/// L_xi f = xi . grad f, products dealiased.
ScalarField lie_transport(const VectorField& xi, const ScalarField& f);
VectorField lie_transport(const VectorField& xi, const VectorField& f);
/// A_xi v = v^1 grad xi^1 + v^2 grad xi^2, products dealiased.
VectorField momentum_stretch(const VectorField& xi, const VectorField& v);

/// G_i(v,h) = (L_i v + A_i v, L_i h).
State g_op(const NoiseBasis& basis, int i, const State& state);
/// 1/2 sum_i G_i(G_i(state)); the Ito-Stratonovich conversion drift.
State ito_correction(const NoiseBasis& basis, const State& state);

/// sum_i G_i(state) * dw[i], batched over modes with one dealias at the end.
State noise_sum(const NoiseBasis& basis, const State& state, const StateGradients& grads,
                std::span<const double> dw);

// internal fast paths reusing a gradient cache
State g_op(const NoiseBasis& basis, int i, const State& state, const StateGradients& grads);
State ito_correction(const NoiseBasis& basis, const State& state, const StateGradients& grads);

/// Brownian increment table: increments[step*K + mode] ~ N(0, dt).
/// Reproducible bit-for-bit from (seed, K, steps, dt); generation is
/// independent of ensemble scheduling because each path owns its stream.
struct NoisePath {
  double dt = 0.0;
  int modes = 0;
  int steps = 0;
  std::uint64_t seed = 0;
  std::string generator_id;
  std::vector<double> increments;

  std::span<const double> step_increments(int step) const {
    return {increments.data() + static_cast<size_t>(step) * modes,
            static_cast<size_t>(modes)};
  }

  /// Sum consecutive groups of `factor` increments: the same Brownian path
  /// on a coarser grid (refinement studies).
  NoisePath coarsen(int factor) const;
};

NoisePath sample_path(int modes, double dt, int steps, std::uint64_t seed);

} // namespace srsw

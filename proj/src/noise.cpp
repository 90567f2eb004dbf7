#include "srsw/noise.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "srsw/kernels.hpp"

namespace srsw {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  return splitmix64(splitmix64(base) ^ (index + 0x9e3779b97f4a7c15ULL));
}

StateGradients StateGradients::of(const State& s) {
  StateGradients g;
  std::tie(g.dv1dx, g.dv1dy) = gradient(s.v.x);
  std::tie(g.dv2dx, g.dv2dy) = gradient(s.v.y);
  std::tie(g.dhdx, g.dhdy) = gradient(s.h);
  return g;
}

namespace {

VectorField trig_mode_field(const GridPtr& grid, const NoiseMode& m) {
  const double inv_norm = 1.0 / std::hypot(static_cast<double>(m.k1), static_cast<double>(m.k2));
  const double dx = -m.k2 * inv_norm; // k-perp / |k|
  const double dy = m.k1 * inv_norm;
  const double ks = grid->kscale();
  VectorField xi(grid);
  const int n = grid->n();
  for (int ix = 0; ix < n; ++ix) {
    for (int iy = 0; iy < n; ++iy) {
      const double phase = ks * (m.k1 * grid->x(ix) + m.k2 * grid->y(iy));
      const double w = (m.phase == NoisePhase::cos) ? std::cos(phase) : std::sin(phase);
      xi.x(ix, iy) = m.amplitude * dx * w;
      xi.y(ix, iy) = m.amplitude * dy * w;
    }
  }
  return xi;
}

double spectral_divergence_max(const VectorField& xi) {
  ScalarField div = derivative(xi.x, Axis::x, 1);
  div += derivative(xi.y, Axis::y, 1);
  return absmax(div);
}

} // namespace

void NoiseBasis::finalize() {
  grad_xi1_.clear();
  grad_xi2_.clear();
  grad_xi1_.reserve(xi_.size());
  grad_xi2_.reserve(xi_.size());
  for (const VectorField& f : xi_) {
    if (spectral_divergence_max(f) >= 1e-10)
      throw std::invalid_argument("NoiseBasis: xi field is not divergence-free");
    VectorField g1(f.grid_ptr()), g2(f.grid_ptr());
    std::tie(g1.x, g1.y) = gradient(f.x);
    std::tie(g2.x, g2.y) = gradient(f.y);
    grad_xi1_.push_back(std::move(g1));
    grad_xi2_.push_back(std::move(g2));
  }
}

NoiseBasis NoiseBasis::standard(GridPtr grid, int K, double amplitude, double decay) {
  if (K < 0) throw std::invalid_argument("NoiseBasis: K must be >= 0");
  // Half-plane wavevectors sorted by (|k|^2, k1, k2); cos and sin per vector.
  struct KV {
    int k1, k2, k2sum;
  };
  const int kmax_band = grid->n() / 3;
  std::vector<KV> kvs;
  for (int k1 = -kmax_band; k1 <= kmax_band; ++k1)
    for (int k2 = 0; k2 <= kmax_band; ++k2) {
      if (k2 == 0 && k1 <= 0) continue;
      kvs.push_back({k1, k2, k1 * k1 + k2 * k2});
    }
  std::sort(kvs.begin(), kvs.end(), [](const KV& a, const KV& b) {
    return std::tie(a.k2sum, a.k1, a.k2) < std::tie(b.k2sum, b.k1, b.k2);
  });
  if (K > 2 * static_cast<int>(kvs.size()))
    throw std::invalid_argument("NoiseBasis: K exceeds the resolved (dealiased) band");

  NoiseBasis basis;
  for (int j = 0; j < K; ++j) {
    const KV& kv = kvs[j / 2];
    NoiseMode m;
    m.k1 = kv.k1;
    m.k2 = kv.k2;
    m.phase = (j % 2 == 0) ? NoisePhase::cos : NoisePhase::sin;
    m.amplitude = amplitude * std::pow(std::sqrt(static_cast<double>(kv.k2sum)), -decay);
    basis.modes_.push_back(m);
    basis.xi_.push_back(trig_mode_field(grid, m));
  }
  basis.finalize();
  return basis;
}

NoiseBasis NoiseBasis::from_modes(GridPtr grid, const std::vector<NoiseMode>& modes) {
  NoiseBasis basis;
  const int kmax_band = grid->n() / 3;
  for (const NoiseMode& m : modes) {
    if (m.k1 == 0 && m.k2 == 0)
      throw std::invalid_argument("NoiseBasis: mode wavevector must be nonzero");
    if (std::abs(m.k1) > kmax_band || std::abs(m.k2) > kmax_band)
      throw std::invalid_argument("NoiseBasis: mode outside the resolved (dealiased) band");
    if (m.amplitude < 0.0) throw std::invalid_argument("NoiseBasis: amplitude must be >= 0");
    basis.modes_.push_back(m);
    basis.xi_.push_back(trig_mode_field(grid, m));
  }
  basis.finalize();
  return basis;
}

NoiseBasis NoiseBasis::from_fields(std::vector<VectorField> fields) {
  NoiseBasis basis;
  basis.xi_ = std::move(fields);
  basis.modes_.resize(basis.xi_.size());
  basis.finalize();
  return basis;
}

double NoiseBasis::w4inf_norm(int i) const {
  const VectorField& f = xi_[i];
  double best = std::max(absmax(f.x), absmax(f.y));
  for (int a1 = 0; a1 <= 4; ++a1) {
    for (int a2 = 0; a2 + a1 <= 4; ++a2) {
      if (a1 == 0 && a2 == 0) continue;
      for (const ScalarField* c : {&f.x, &f.y}) {
        ScalarField d = *c;
        if (a1 > 0) d = derivative(d, Axis::x, a1);
        if (a2 > 0) d = derivative(d, Axis::y, a2);
        best = std::max(best, absmax(d));
      }
    }
  }
  return best;
}

double NoiseBasis::w4inf_sum() const {
  double s = 0.0;
  for (int i = 0; i < count(); ++i) {
    const double w = w4inf_norm(i);
    s += w * w;
  }
  return s;
}

double NoiseBasis::linf_sq_sum() const {
  double s = 0.0;
  for (const VectorField& f : xi_) {
    const double w = std::max(absmax(f.x), absmax(f.y));
    s += w * w;
  }
  return s;
}

ScalarField lie_transport(const VectorField& xi, const ScalarField& f) {
  auto [dfdx, dfdy] = gradient(f);
  ScalarField out = multiply(xi.x, dfdx);
  kernels::mul_add(xi.y.data(), dfdy.data(), out.data(), out.size());
  dealias_in_place(out);
  return out;
}

VectorField lie_transport(const VectorField& xi, const VectorField& f) {
  VectorField out(f.grid_ptr());
  out.x = lie_transport(xi, f.x);
  out.y = lie_transport(xi, f.y);
  return out;
}

VectorField momentum_stretch(const VectorField& xi, const VectorField& v) {
  auto [dx1, dy1] = gradient(xi.x);
  auto [dx2, dy2] = gradient(xi.y);
  VectorField out(v.grid_ptr());
  kernels::mul(v.x.data(), dx1.data(), out.x.data(), out.x.size());
  kernels::mul_add(v.y.data(), dx2.data(), out.x.data(), out.x.size());
  kernels::mul(v.x.data(), dy1.data(), out.y.data(), out.y.size());
  kernels::mul_add(v.y.data(), dy2.data(), out.y.data(), out.y.size());
  dealias_in_place(out);
  return out;
}

namespace {

// G_i products from cached gradients, no dealias (callers batch it).
void g_op_raw(const NoiseBasis& basis, int i, const State& state, const StateGradients& g,
              State& out) {
  const VectorField& xi = basis.xi(i);
  const VectorField& gx1 = basis.grad_xi1(i);
  const VectorField& gx2 = basis.grad_xi2(i);
  const int m = state.h.size();
  // v-part: xi . grad v^c + v^1 d_c xi^1 + v^2 d_c xi^2
  kernels::mul(xi.x.data(), g.dv1dx.data(), out.v.x.data(), m);
  kernels::mul_add(xi.y.data(), g.dv1dy.data(), out.v.x.data(), m);
  kernels::mul_add(state.v.x.data(), gx1.x.data(), out.v.x.data(), m);
  kernels::mul_add(state.v.y.data(), gx2.x.data(), out.v.x.data(), m);

  kernels::mul(xi.x.data(), g.dv2dx.data(), out.v.y.data(), m);
  kernels::mul_add(xi.y.data(), g.dv2dy.data(), out.v.y.data(), m);
  kernels::mul_add(state.v.x.data(), gx1.y.data(), out.v.y.data(), m);
  kernels::mul_add(state.v.y.data(), gx2.y.data(), out.v.y.data(), m);

  // h-part: xi . grad h
  kernels::mul(xi.x.data(), g.dhdx.data(), out.h.data(), m);
  kernels::mul_add(xi.y.data(), g.dhdy.data(), out.h.data(), m);
}

void dealias_state(State& s) {
  dealias_in_place(s.v);
  dealias_in_place(s.h);
}

} // namespace

State g_op(const NoiseBasis& basis, int i, const State& state, const StateGradients& grads) {
  State out(state.grid_ptr());
  g_op_raw(basis, i, state, grads, out);
  dealias_state(out);
  return out;
}

State g_op(const NoiseBasis& basis, int i, const State& state) {
  return g_op(basis, i, state, StateGradients::of(state));
}

State ito_correction(const NoiseBasis& basis, const State& state,
                     const StateGradients& grads) {
  State acc(state.grid_ptr());
  State gi(state.grid_ptr());
  for (int i = 0; i < basis.count(); ++i) {
    g_op_raw(basis, i, state, grads, gi);
    dealias_state(gi);
    const StateGradients gg = StateGradients::of(gi);
    State out(state.grid_ptr());
    g_op_raw(basis, i, gi, gg, out);
    acc += out;
  }
  dealias_state(acc);
  acc *= 0.5;
  return acc;
}

State ito_correction(const NoiseBasis& basis, const State& state) {
  return ito_correction(basis, state, StateGradients::of(state));
}

State noise_sum(const NoiseBasis& basis, const State& state, const StateGradients& grads,
                std::span<const double> dw) {
  State acc(state.grid_ptr());
  State gi(state.grid_ptr());
  for (int i = 0; i < basis.count(); ++i) {
    if (dw[i] == 0.0) continue;
    g_op_raw(basis, i, state, grads, gi);
    axpy(dw[i], gi, acc);
  }
  dealias_state(acc);
  return acc;
}

NoisePath sample_path(int modes, double dt, int steps, std::uint64_t seed) {
  NoisePath path;
  path.dt = dt;
  path.modes = modes;
  path.steps = steps;
  path.seed = seed;
  path.generator_id = "mt19937_64/box-muller/v1";
  path.increments.resize(static_cast<size_t>(modes) * steps);

  // Explicit Box-Muller on 53-bit uniforms: bit-reproducible everywhere,
  // unlike std::normal_distribution.
  std::mt19937_64 eng(seed);
  const double sd = std::sqrt(dt);
  const size_t total = path.increments.size();
  size_t i = 0;
  while (i < total) {
    const double u1 = 1.0 - static_cast<double>(eng() >> 11) * 0x1.0p-53; // (0,1]
    const double u2 = static_cast<double>(eng() >> 11) * 0x1.0p-53;      // [0,1)
    const double r = std::sqrt(-2.0 * std::log(u1));
    path.increments[i++] = sd * r * std::cos(two_pi * u2);
    if (i < total) path.increments[i++] = sd * r * std::sin(two_pi * u2);
  }
  return path;
}

NoisePath NoisePath::coarsen(int factor) const {
  if (factor < 1 || steps % factor != 0)
    throw std::invalid_argument("NoisePath::coarsen: factor must divide steps");
  NoisePath out;
  out.dt = dt * factor;
  out.modes = modes;
  out.steps = steps / factor;
  out.seed = seed;
  out.generator_id = generator_id + "/coarsened";
  out.increments.assign(static_cast<size_t>(out.steps) * modes, 0.0);
  for (int s = 0; s < steps; ++s) {
    const int cs = s / factor;
    for (int m = 0; m < modes; ++m)
      out.increments[static_cast<size_t>(cs) * modes + m] +=
          increments[static_cast<size_t>(s) * modes + m];
  }
  return out;
}

} // namespace srsw

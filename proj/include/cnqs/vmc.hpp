// Copyright 2026 The cnqs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CNQS_VMC_HPP
#define CNQS_VMC_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cnqs/errors.hpp"
#include "cnqs/jastrow.hpp"
#include "cnqs/nqs.hpp"
#include "cnqs/oracle.hpp"
#include "cnqs/random.hpp"

namespace cnqs {

struct VmcConfig {
  std::size_t n = 10;
  std::size_t m = 10;
  double delta = 0.0;
  double p_cap = 5.0;
  /// SR steps; one sweep gathers samples_per_sweep samples per chain.
  std::size_t sweeps = 500;
  std::size_t samples_per_sweep = 1000;
  double learning_rate = 0.02;
  double sr_shift = 1e-3;
  std::uint64_t seed = 1;
  /// Independent Markov chains, each with its own random stream.
  std::size_t chains = 1;
  /// Exchange proposals between stored samples (0 means n).
  std::size_t sample_interval = 0;
  /// Proposals discarded before the first sweep (0 means 20 n).
  std::size_t thermalization = 0;
  double init_scale = 0.01;
  /// Replace sampling by a |psi|^2-weighted sum over the whole sector.
  bool exact = false;

  void validate() const {
    if (n < 2 || n % 2 != 0) throw ArgumentError("VMC chain length must be even and at least 2");
    if (m < 1) throw ArgumentError("VMC needs at least one hidden unit");
    if (!(p_cap > 0)) throw ArgumentError("p_cap must be positive");
    if (!(learning_rate > 0)) throw ArgumentError("learning_rate must be positive");
    if (!(sr_shift >= 0)) throw ArgumentError("sr_shift must be non-negative");
    if (chains < 1) throw ArgumentError("VMC needs at least one chain");
    if (!exact && samples_per_sweep * chains < 2) throw ArgumentError("SR needs at least two samples per step");
    if (exact && n > 16) throw CapabilityError("exact summation supports n <= 16");
  }
};

struct VmcResult {
  RealRbmParams params;
  /// Energy estimate before each SR step.
  std::vector<double> energy_trace;
  std::optional<double> overlap;
  std::optional<double> exact_energy;
  double acceptance_rate = 1.0;
};

/// The chain Hamiltonian in the stoquastic frame:
/// sum_j [delta v_j v_{j+1} - 2 [v_j != v_{j+1}] psi(v^(j,j+1)) / psi(v)].
inline double local_energy(const std::function<double(const SpinConfig&)>& psi, const SpinConfig& v, double delta) {
  if (v.magnetization() != 0) throw ArgumentError("local energy needs a zero-magnetisation configuration");
  const double here = psi(v);
  if (here == 0) throw NumericalError("local energy evaluated at a node of the wavefunction");
  const std::size_t n = v.size();
  double e = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t k = (j + 1) % n;
    e += delta * v[j] * v[k];
    if (v[j] != v[k]) {
      SpinConfig w = v;
      w.flip(j);
      w.flip(k);
      e -= 2.0 * psi(w) / here;
    }
  }
  return e;
}

namespace detail {

/// log psi(v') - log psi(v) after exchanging the antiparallel spins j and k.
inline double exchange_log_ratio(const RealRbmParams& p, const std::vector<double>& theta, const SpinConfig& v,
                                 std::size_t j, std::size_t k) {
  const std::size_t n = p.n_visible();
  double d = -2.0 * (p.a[j] * v[j] + p.a[k] * v[k]);
  for (std::size_t i = 0; i < p.n_hidden(); ++i) {
    const double t2 = theta[i] - 2.0 * (p.w[i * n + j] * v[j] + p.w[i * n + k] * v[k]);
    d += log_two_cosh(t2) - log_two_cosh(theta[i]);
  }
  return d;
}

}  // namespace detail

inline double local_energy(const RealRbmParams& p, const SpinConfig& v, double delta) {
  if (v.size() != p.n_visible()) throw ArgumentError("configuration length does not match the RBM");
  if (v.magnetization() != 0) throw ArgumentError("local energy needs a zero-magnetisation configuration");
  const auto theta = rbm_activations(p, v);
  const std::size_t n = v.size();
  double e = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t k = (j + 1) % n;
    e += delta * v[j] * v[k];
    if (v[j] != v[k]) e -= 2.0 * std::exp(detail::exchange_log_ratio(p, theta, v, j, k));
  }
  return e;
}

/// d log psi / d p for p = (a, b, w) in that order, w row-major.
inline std::vector<double> log_derivatives(const RealRbmParams& p, const SpinConfig& v) {
  const std::size_t n = p.n_visible(), m = p.n_hidden();
  const auto theta = rbm_activations(p, v);
  std::vector<double> o(p.parameter_count());
  for (std::size_t j = 0; j < n; ++j) o[j] = v[j];
  for (std::size_t i = 0; i < m; ++i) {
    const double t = std::tanh(theta[i]);
    o[n + i] = t;
    for (std::size_t j = 0; j < n; ++j) o[n + m + i * n + j] = t * v[j];
  }
  return o;
}

inline std::vector<double> flatten(const RealRbmParams& p) {
  std::vector<double> out(p.a);
  out.insert(out.end(), p.b.begin(), p.b.end());
  out.insert(out.end(), p.w.begin(), p.w.end());
  return out;
}

inline RealRbmParams unflatten(std::span<const double> x, std::size_t n, std::size_t m) {
  RealRbmParams p(n, m);
  if (x.size() != p.parameter_count()) throw ArgumentError("parameter vector has the wrong length");
  std::copy(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n), p.a.begin());
  std::copy(x.begin() + static_cast<std::ptrdiff_t>(n), x.begin() + static_cast<std::ptrdiff_t>(n + m), p.b.begin());
  std::copy(x.begin() + static_cast<std::ptrdiff_t>(n + m), x.end(), p.w.begin());
  return p;
}

/// Metropolis acceptance for an amplitude ratio psi(v') / psi(v).
inline double acceptance_probability(double ratio) { return std::min(1.0, ratio * ratio); }

/// Random zero-magnetisation configuration.
inline SpinConfig random_sector_config(std::size_t n, Rng& rng) {
  std::vector<int> s(n, 1);
  for (std::size_t j = n / 2; j < n; ++j) s[j] = -1;
  for (std::size_t i = n; i > 1; --i) std::swap(s[i - 1], s[rng.below(i)]);
  return SpinConfig(std::move(s));
}

/// Markov chain over the zero-magnetisation sector. Each proposal exchanges
/// one up spin with one down spin, chosen uniformly, so the proposal is
/// symmetric and magnetisation is conserved.
class MetropolisSampler {
 public:
  MetropolisSampler(const RealRbmParams& p, SpinConfig start, std::uint64_t seed)
      : p_(&p), v_(std::move(start)), rng_(seed) {
    if (v_.size() != p.n_visible()) throw ArgumentError("start configuration does not match the RBM");
    if (v_.magnetization() != 0) throw ArgumentError("start configuration is not in the zero-magnetisation sector");
  }

  void set_params(const RealRbmParams& p) { p_ = &p; }
  const SpinConfig& config() const { return v_; }
  Rng& rng() { return rng_; }

  bool step() {
    const std::size_t n = v_.size();
    std::vector<std::size_t> up, down;
    for (std::size_t j = 0; j < n; ++j) (v_[j] > 0 ? up : down).push_back(j);
    const std::size_t j = up[rng_.below(up.size())];
    const std::size_t k = down[rng_.below(down.size())];
    const auto theta = rbm_activations(*p_, v_);
    const double ratio = std::exp(detail::exchange_log_ratio(*p_, theta, v_, j, k));
    ++proposed_;
    if (rng_.uniform() < acceptance_probability(ratio)) {
      v_.flip(j);
      v_.flip(k);
      ++accepted_;
      return true;
    }
    return false;
  }

  /// `count` samples, `interval` proposals apart.
  std::vector<SpinConfig> sweep(std::size_t count, std::size_t interval) {
    std::vector<SpinConfig> out;
    out.reserve(count);
    for (std::size_t s = 0; s < count; ++s) {
      for (std::size_t t = 0; t < interval; ++t) step();
      out.push_back(v_);
    }
    return out;
  }

  std::size_t proposed() const { return proposed_; }
  std::size_t accepted() const { return accepted_; }

 private:
  const RealRbmParams* p_;
  SpinConfig v_;
  Rng rng_;
  std::size_t proposed_ = 0;
  std::size_t accepted_ = 0;
};

/// Weighted estimates of the energy, the log-derivative covariance S and
/// the force F_k = <E O_k> - <E><O_k>.
struct SrEstimate {
  double energy = 0;
  Eigen::MatrixXd s;
  Eigen::VectorXd force;
};

inline SrEstimate sr_estimate(const RealRbmParams& p, std::span<const SpinConfig> configs,
                              std::span<const double> weights, double delta) {
  const auto np = static_cast<Eigen::Index>(p.parameter_count());
  Eigen::VectorXd mean_o = Eigen::VectorXd::Zero(np), mean_eo = Eigen::VectorXd::Zero(np);
  Eigen::MatrixXd oo = Eigen::MatrixXd::Zero(np, np);
  double total = 0, mean_e = 0;
  for (std::size_t c = 0; c < configs.size(); ++c) {
    const double wgt = weights[c];
    const auto o_std = log_derivatives(p, configs[c]);
    const Eigen::Map<const Eigen::VectorXd> o(o_std.data(), np);
    const double e = local_energy(p, configs[c], delta);
    total += wgt;
    mean_e += wgt * e;
    mean_o += wgt * o;
    mean_eo += wgt * e * o;
    oo.selfadjointView<Eigen::Lower>().rankUpdate(o, wgt);
  }
  SrEstimate out;
  mean_e /= total;
  mean_o /= total;
  mean_eo /= total;
  oo = oo.selfadjointView<Eigen::Lower>();
  out.energy = mean_e;
  out.s = oo / total - mean_o * mean_o.transpose();
  out.force = mean_eo - mean_e * mean_o;
  return out;
}

inline SrEstimate sr_estimate(const RealRbmParams& p, std::span<const SpinConfig> samples, double delta) {
  if (samples.size() < 2) throw ArgumentError("SR needs at least two samples");
  const std::vector<double> weights(samples.size(), 1.0);
  return sr_estimate(p, samples, weights, delta);
}

/// Sector enumeration weighted by |psi|^2.
inline SrEstimate sr_estimate_exact(const RealRbmParams& p, double delta) {
  const std::size_t n = p.n_visible();
  std::vector<SpinConfig> configs;
  std::vector<double> logs;
  for (std::uint64_t s : zero_magnetization_sector(n)) {
    configs.push_back(SpinConfig::from_index(s, n));
    logs.push_back(2.0 * rbm_log_amplitude(p, configs.back()));
  }
  const double top = *std::max_element(logs.begin(), logs.end());
  for (auto& l : logs) l = std::exp(l - top);
  return sr_estimate(p, configs, logs, delta);
}

/// Solves (S + shift 1) delta = -F, steps by learning_rate delta and clips to p_cap.
inline RealRbmParams sr_update(const RealRbmParams& p, const SrEstimate& est, const VmcConfig& cfg) {
  const auto np = static_cast<Eigen::Index>(p.parameter_count());
  Eigen::MatrixXd a = est.s;
  a.diagonal().array() += cfg.sr_shift;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
  Eigen::VectorXd step = ldlt.solve(-est.force);
  const Eigen::VectorXd pivots = ldlt.vectorD().cwiseAbs();
  const bool degenerate = np > 0 && !(pivots.minCoeff() > 1e-12 * std::max(1.0, pivots.maxCoeff()));
  if (ldlt.info() != Eigen::Success || !step.allFinite() || !ldlt.isPositive() || degenerate) {
    throw NumericalError("SR linear system is singular; increase sr_shift");
  }
  auto x = flatten(p);
  for (Eigen::Index k = 0; k < np; ++k) {
    const auto i = static_cast<std::size_t>(k);
    x[i] = std::clamp(x[i] + cfg.learning_rate * step[k], -cfg.p_cap, cfg.p_cap);
  }
  return unflatten(x, p.n_visible(), p.n_hidden());
}

inline RealRbmParams sr_step(const RealRbmParams& p, std::span<const SpinConfig> samples, const VmcConfig& cfg) {
  return sr_update(p, sr_estimate(p, samples, cfg.delta), cfg);
}

/// Overlap of the RBM with the exact sector ground state, stoquastic frame.
inline double rbm_overlap(const RealRbmParams& p, const DenseState& ground) {
  const std::size_t n = p.n_visible();
  std::vector<double> logs;
  const auto sector = zero_magnetization_sector(n);
  for (std::uint64_t s : sector) logs.push_back(rbm_log_amplitude(p, SpinConfig::from_index(s, n)));
  const double top = *std::max_element(logs.begin(), logs.end());
  DenseState psi(n);
  for (std::size_t r = 0; r < sector.size(); ++r) psi[sector[r]] = std::exp(logs[r] - top);
  return overlap(psi, ground);
}

inline RealRbmParams random_rbm(std::size_t n, std::size_t m, double scale, Rng& rng) {
  RealRbmParams p(n, m);
  for (auto& x : p.a) x = rng.uniform(-scale, scale);
  for (auto& x : p.b) x = rng.uniform(-scale, scale);
  for (auto& x : p.w) x = rng.uniform(-scale, scale);
  return p;
}

/// Variational optimisation of a real RBM for the XXZ chain by stochastic
/// reconfiguration. The overlap is reported for n <= 14.
inline VmcResult run_vmc(const VmcConfig& cfg, const std::function<void(std::size_t, double)>& progress = {}) {
  cfg.validate();
  Rng init(cfg.seed);
  VmcResult result;
  result.params = random_rbm(cfg.n, cfg.m, cfg.init_scale, init);

  std::vector<MetropolisSampler> chains;
  const std::size_t interval = cfg.sample_interval ? cfg.sample_interval : cfg.n;
  const std::size_t burn = cfg.thermalization ? cfg.thermalization : 20 * cfg.n;
  if (!cfg.exact) {
    for (std::size_t c = 0; c < cfg.chains; ++c) {
      const std::uint64_t stream = init.bits();
      Rng start(stream ^ 0x9e3779b97f4a7c15ULL);
      chains.emplace_back(result.params, random_sector_config(cfg.n, start), stream);
      for (std::size_t t = 0; t < burn; ++t) chains.back().step();
    }
  }

  for (std::size_t sweep = 0; sweep < cfg.sweeps; ++sweep) {
    SrEstimate est;
    if (cfg.exact) {
      est = sr_estimate_exact(result.params, cfg.delta);
    } else {
      std::vector<SpinConfig> samples;
      for (auto& chain : chains) {
        chain.set_params(result.params);
        auto batch = chain.sweep(cfg.samples_per_sweep, interval);
        samples.insert(samples.end(), batch.begin(), batch.end());
      }
      est = sr_estimate(result.params, samples, cfg.delta);
    }
    result.energy_trace.push_back(est.energy);
    if (progress) progress(sweep, est.energy);
    result.params = sr_update(result.params, est, cfg);
  }

  if (!cfg.exact) {
    std::size_t proposed = 0, accepted = 0;
    for (const auto& chain : chains) {
      proposed += chain.proposed();
      accepted += chain.accepted();
    }
    result.acceptance_rate = proposed ? static_cast<double>(accepted) / static_cast<double>(proposed) : 0.0;
  }
  if (cfg.n <= 14) {
    const GroundState g = xxz_ground_state(cfg.n, cfg.delta, true);
    result.exact_energy = g.energy;
    result.overlap = rbm_overlap(result.params, g.state);
  }
  return result;
}

/// Hidden-unit order by decreasing max_j |w_ij|.
inline std::vector<std::size_t> weight_row_order(const RealRbmParams& p) {
  const std::size_t n = p.n_visible();
  std::vector<double> peak(p.n_hidden(), 0.0);
  for (std::size_t i = 0; i < p.n_hidden(); ++i)
    for (std::size_t j = 0; j < n; ++j) peak[i] = std::max(peak[i], std::abs(p.w[i * n + j]));
  std::vector<std::size_t> order(p.n_hidden());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return peak[x] > peak[y]; });
  return order;
}

struct CftBaseline {
  double alpha = 0;
  double one_minus_overlap = 1;
};

/// Best CFT Jastrow exponent for the XXZ ground state at `delta`: a coarse
/// scan of alpha in [0, 1] refined by golden-section search.
inline CftBaseline optimal_cft_baseline(std::size_t n, double delta) {
  const DenseState ground = xxz_ground_state(n, delta, false).state;
  auto loss = [&](double alpha) { return 1.0 - overlap(dense_from(CftState(n, alpha)), ground); };
  double best = 0, best_loss = loss(0);
  for (int k = 1; k <= 100; ++k) {
    const double a = 0.01 * k;
    const double l = loss(a);
    if (l < best_loss) {
      best = a;
      best_loss = l;
    }
  }
  double lo = std::max(0.0, best - 0.01), hi = best + 0.01;
  const double g = (std::sqrt(5.0) - 1) / 2;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = loss(x1), f2 = loss(x2);
  for (int it = 0; it < 60; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = loss(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = loss(x2);
    }
  }
  const double a = f1 < f2 ? x1 : x2;
  const double l = std::min(f1, f2);
  return l < best_loss ? CftBaseline{a, l} : CftBaseline{best, best_loss};
}

}  // namespace cnqs

#endif  // CNQS_VMC_HPP

#pragma once

// Belief propagation update for the symmetric SBM, in probability form for
// any k and in log-likelihood-ratio form for k = 2.
//
// A message into a vertex is a distribution on the k labels. Combining a set
// of incoming messages m_1..m_l at a vertex with side label s~ gives
//
//   out(s)  ∝  prior(s~)(s) * prod_i (b + (a - b) m_i(s))
//
// where prior(s~)(s) = (alpha + (k - 1 - k alpha) [s == s~]) / (k - 1).
// All products are accumulated in the log domain.

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>

#include "streambp/error.hpp"
#include "streambp/types.hpp"

namespace streambp {

template <typename Scalar>
using Belief = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
using BeliefVector = Belief<double>;

template <typename Scalar>
struct BasicKernelParams {
  Scalar a = 0;
  Scalar b = 0;
  Scalar alpha = 0;
  int k = 2;
  // Messages are kept in [eps, 1 - eps]; 0 disables clamping.
  Scalar eps = Scalar(1e-6);

  void validate() const {
    if (k < 1) throw ParameterError("kernel: k must be at least 1");
    if (!(a >= 0) || !(b >= 0) || (a == 0 && b == 0)) {
      throw ParameterError("kernel: need a, b >= 0, not both zero");
    }
    if (!(alpha >= 0) || alpha > Scalar(k - 1) / Scalar(k) + Scalar(1e-15)) {
      throw ParameterError("kernel: alpha outside [0, (k-1)/k]");
    }
    if (!(eps >= 0) || (eps > 0 && !(eps * k < 1))) {
      throw ParameterError("kernel: eps must satisfy 0 <= eps < 1/k");
    }
  }
};
using KernelParams = BasicKernelParams<double>;

template <typename Scalar>
Belief<Scalar> uniform_belief(int k) {
  return Belief<Scalar>::Constant(k, Scalar(1) / Scalar(k));
}

// Index of the largest entry; ties go to the lowest index.
template <typename Derived>
Label argmax(const Eigen::MatrixBase<Derived>& v) {
  Label best = 0;
  for (Eigen::Index s = 1; s < v.size(); ++s) {
    if (v(s) > v(best)) best = static_cast<Label>(s);
  }
  return best;
}

inline void check_side_label(const SideLabel& side, int k) {
  if (side && (*side < 0 || *side >= k)) {
    throw LabelError("side label " + std::to_string(*side) + " outside [0, " +
                     std::to_string(k) + ")");
  }
}

// Projects a distribution onto {p in simplex : p(s) >= eps for all s}.
// Entries below eps are raised to eps and the remaining mass is rescaled,
// repeating until no free entry drops below eps. The result is a
// distribution with entries in [eps, 1 - (k - 1) eps] (so within [eps, 1 - eps]),
// vectors already in the set are returned unchanged up to rounding, and
// applying it twice is the same as once.
template <typename Derived>
Belief<typename Derived::Scalar> clamp(const Eigen::MatrixBase<Derived>& belief,
                                       typename Derived::Scalar eps) {
  using Scalar = typename Derived::Scalar;
  Belief<Scalar> p = belief;
  if (eps <= 0) return p;
  const Eigen::Index k = p.size();
  Eigen::Array<bool, Eigen::Dynamic, 1> pinned = Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(k, false);
  for (;;) {
    Scalar free_mass = 0;
    Eigen::Index npinned = 0;
    for (Eigen::Index s = 0; s < k; ++s) {
      if (pinned(s)) {
        ++npinned;
      } else {
        free_mass += p(s);
      }
    }
    const Scalar budget = Scalar(1) - Scalar(npinned) * eps;
    const Scalar scale = free_mass > 0 ? budget / free_mass : Scalar(0);
    bool changed = false;
    for (Eigen::Index s = 0; s < k; ++s) {
      if (!pinned(s) && p(s) * scale < eps) {
        pinned(s) = true;
        changed = true;
      }
    }
    if (!changed) {
      for (Eigen::Index s = 0; s < k; ++s) p(s) = pinned(s) ? eps : p(s) * scale;
      return p;
    }
  }
}

// prior(s~); an absent side label means alpha = (k - 1) / k, the uniform prior.
template <typename Scalar>
Belief<Scalar> bp_prior(const SideLabel& side, const BasicKernelParams<Scalar>& params) {
  const int k = params.k;
  check_side_label(side, k);
  if (k == 1) return Belief<Scalar>::Ones(1);
  if (!side) return uniform_belief<Scalar>(k);
  const Scalar off = params.alpha / Scalar(k - 1);
  Belief<Scalar> prior = Belief<Scalar>::Constant(k, off);
  prior(*side) = (params.alpha + Scalar(k - 1) - Scalar(k) * params.alpha) / Scalar(k - 1);
  return prior / prior.sum();
}

// Streaming form of the BP update: start from the prior, fold in incoming
// messages one at a time, then read the normalized and clamped result.
template <typename Scalar>
class BpAccumulator {
 public:
  explicit BpAccumulator(const BasicKernelParams<Scalar>& params)
      : params_(params), log_(params.k), log_priors_(params.k, params.k + 1) {
    for (int c = 0; c <= params.k; ++c) {
      const Belief<Scalar> prior = bp_prior(c < params.k ? SideLabel(c) : SideLabel{}, params);
      for (int s = 0; s < params.k; ++s) log_priors_(s, c) = std::log(prior(s));
    }
  }

  void reset(const SideLabel& side) {
    check_side_label(side, params_.k);
    log_ = log_priors_.col(side ? *side : params_.k);
  }

  template <typename Derived>
  void add(const Eigen::MatrixBase<Derived>& message) {
    const Scalar diff = params_.a - params_.b;
    for (int s = 0; s < params_.k; ++s) {
      const Scalar factor = params_.b + diff * message(s);
      if (!(factor > 0)) {
        throw NumericDomainError("BP factor b + (a-b) m(s) is not positive");
      }
      log_(s) += std::log(factor);
    }
  }

  Belief<Scalar> result() const {
    Belief<Scalar> out(params_.k);
    write(out);
    return out;
  }

  template <typename Derived>
  void write(Eigen::MatrixBase<Derived> const& out_const) const {
    auto& out = const_cast<Eigen::MatrixBase<Derived>&>(out_const);
    const Scalar top = log_.maxCoeff();
    if (!std::isfinite(top)) throw NumericDomainError("BP update has no finite log-weight");
    // Scalar std::log/std::exp throughout: the packet versions are off by an
    // ulp here and there, which breaks ties between equal entries.
    Scalar total = 0;
    for (int s = 0; s < params_.k; ++s) {
      out(s) = std::exp(log_(s) - top);
      total += out(s);
    }
    out /= total;
    if (params_.eps > 0) out = clamp(out, params_.eps);
  }

 private:
  BasicKernelParams<Scalar> params_;
  Belief<Scalar> log_;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> log_priors_;  // column k: no side label
};

template <typename Scalar>
Belief<Scalar> bp_combine(std::span<const Belief<Scalar>> incoming, const SideLabel& side,
                          const BasicKernelParams<Scalar>& params) {
  BpAccumulator<Scalar> acc(params);
  acc.reset(side);
  for (const auto& m : incoming) acc.add(m);
  return acc.result();
}

// --- k = 2, log-likelihood-ratio form: M = 1/2 log(m(0) / m(1)). ---

// F(x) = 1/2 log((a e^{2x} + b) / (b e^{2x} + a)), evaluated without overflow.
template <typename Scalar>
Scalar llr_edge_factor(Scalar x, const BasicKernelParams<Scalar>& params) {
  const Scalar a = params.a, b = params.b;
  if (x >= 0) {
    const Scalar t = std::exp(-2 * x);
    return Scalar(0.5) * (std::log(a + b * t) - std::log(b + a * t));
  }
  const Scalar t = std::exp(2 * x);
  return Scalar(0.5) * (std::log(a * t + b) - std::log(b * t + a));
}

// Largest representable |M| after clamping: 1/2 log((1 - eps) / eps).
template <typename Scalar>
Scalar llr_bound(Scalar eps) {
  if (eps <= 0) return std::numeric_limits<Scalar>::infinity();
  return Scalar(0.5) * std::log((Scalar(1) - eps) / eps);
}

// h_{s~}: +-1/2 log((1 - alpha) / alpha), zero without side information.
template <typename Scalar>
Scalar llr_prior(const SideLabel& side, const BasicKernelParams<Scalar>& params) {
  check_side_label(side, 2);
  if (!side) return 0;
  const Scalar h = Scalar(0.5) * std::log((Scalar(1) - params.alpha) / params.alpha);
  return *side == 0 ? h : -h;
}

template <typename Scalar>
Scalar llr_combine(std::span<const Scalar> incoming, const SideLabel& side,
                   const BasicKernelParams<Scalar>& params) {
  if (params.k != 2) throw UnsupportedError("LLR form of the BP update requires k = 2");
  Scalar total = llr_prior(side, params);
  for (Scalar m : incoming) total += llr_edge_factor(m, params);
  const Scalar bound = llr_bound(params.eps);
  return std::max(-bound, std::min(bound, total));
}

template <typename Derived>
typename Derived::Scalar llr_from_belief(const Eigen::MatrixBase<Derived>& belief) {
  using std::log;
  return typename Derived::Scalar(0.5) * (log(belief(0)) - log(belief(1)));
}

template <typename Scalar>
Belief<Scalar> belief_from_llr(Scalar llr) {
  Belief<Scalar> out(2);
  // Logistic in 2M, written to stay accurate in both tails.
  if (llr >= 0) {
    const Scalar t = std::exp(-2 * llr);
    out << Scalar(1) / (Scalar(1) + t), t / (Scalar(1) + t);
  } else {
    const Scalar t = std::exp(2 * llr);
    out << t / (Scalar(1) + t), Scalar(1) / (Scalar(1) + t);
  }
  return out;
}

}  // namespace streambp

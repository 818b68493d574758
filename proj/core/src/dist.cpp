// SPDX-License-Identifier: Apache-2.0
#include "smoothtm/dist.hpp"

#include <cmath>
#include <sstream>

#include "smoothtm/errors.hpp"

namespace smoothtm {

bool is_simplex(std::span<const double> weights) {
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= -kSimplexTol)) return false;
    sum += w;
  }
  return std::abs(sum - 1.0) <= kSimplexTol;
}

Dist::Dist(FiniteSet base, std::vector<double> weights)
    : base_(std::move(base)), weights_(std::move(weights)) {
  if (weights_.size() != base_.size())
    throw MismatchError("distribution has " + std::to_string(weights_.size()) +
                        " weights for a set of size " + std::to_string(base_.size()));
  bool clamped = false;
  double sum = 0.0;
  for (double& w : weights_) {
    if (!std::isfinite(w) || w < -kSimplexTol)
      throw ConstructionError("distribution weight " + std::to_string(w) + " is not a probability");
    if (w < 0.0) {
      w = 0.0;
      clamped = true;
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > kSimplexTol) {
    std::ostringstream os;
    os.precision(17);
    os << "distribution weights sum to " << sum;
    throw ConstructionError(os.str());
  }
  if (clamped)
    for (double& w : weights_) w /= sum;
}

Dist Dist::normalized(FiniteSet base, std::vector<double> weights) {
  Dist d(std::move(base), std::move(weights));
  double sum = 0.0;
  for (double w : d.weights_) sum += w;
  if (sum != 1.0)
    for (double& w : d.weights_) w /= sum;
  return d;
}

Dist Dist::point(FiniteSet base, std::size_t index) {
  if (index >= base.size()) throw MismatchError("point mass index out of range");
  std::vector<double> w(base.size(), 0.0);
  w[index] = 1.0;
  return Dist(std::move(base), std::move(w));
}

Dist Dist::point(FiniteSet base, std::string_view label) {
  std::size_t i = base.index_of(label);
  return point(std::move(base), i);
}

Dist Dist::uniform(FiniteSet base) {
  if (base.empty()) throw ConstructionError("uniform distribution over an empty set");
  std::vector<double> w(base.size(), 1.0 / static_cast<double>(base.size()));
  // Fold the rounding residue into the last coordinate.
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < w.size(); ++i) sum += w[i];
  w.back() = 1.0 - sum;
  return Dist(std::move(base), std::move(w));
}

std::optional<std::size_t> Dist::point_index() const {
  std::optional<std::size_t> hit;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (weights_[i] == 1.0) {
      if (hit) return std::nullopt;
      hit = i;
    } else if (weights_[i] != 0.0) {
      return std::nullopt;
    }
  }
  return hit;
}

std::vector<std::size_t> Dist::support() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < weights_.size(); ++i)
    if (weights_[i] != 0.0) out.push_back(i);
  return out;
}

Dist Dist::marginal(std::size_t factor) const {
  const auto& f = base_.factors();
  if (factor >= f.size()) throw MismatchError("marginal factor out of range");
  std::vector<double> out(f[factor].size(), 0.0);
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (weights_[i] == 0.0) continue;
    out[base_.unflatten(i)[factor]] += weights_[i];
  }
  return Dist::normalized(f[factor], std::move(out));
}

double Measure::mass() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

Measure Measure::scaled(const Dist& d, double factor) {
  Measure m{d.base(), std::vector<double>(d.weights().begin(), d.weights().end())};
  for (double& w : m.weights) w *= factor;
  return m;
}

Dist tensor(const Dist& a, const Dist& b) {
  std::vector<double> w(a.size() * b.size());
  std::size_t k = 0;
  for (double x : a.weights())
    for (double y : b.weights()) w[k++] = x * y;
  return Dist::normalized(FiniteSet::product({a.base(), b.base()}), std::move(w));
}

Dist tensor(std::span<const Dist> parts) {
  if (parts.empty()) throw MismatchError("tensor of no factors");
  std::vector<FiniteSet> bases;
  std::vector<double> w{1.0};
  bool first = true;
  for (const Dist& p : parts) {
    bases.push_back(p.base());
    if (first) {
      w.assign(p.weights().begin(), p.weights().end());
      first = false;
      continue;
    }
    std::vector<double> next(w.size() * p.size());
    std::size_t k = 0;
    for (double x : w)
      for (double y : p.weights()) next[k++] = x * y;
    w = std::move(next);
  }
  return Dist::normalized(FiniteSet::product(std::move(bases)), std::move(w));
}

Dist convex_combine(const Dist& coeffs, std::span<const Dist> parts) {
  if (parts.size() != coeffs.size())
    throw MismatchError("convex_combine: " + std::to_string(parts.size()) + " parts for " +
                        std::to_string(coeffs.size()) + " coefficients");
  if (parts.empty()) throw MismatchError("convex_combine of no parts");
  const FiniteSet& base = parts.front().base();
  for (const Dist& p : parts)
    if (!(p.base() == base)) throw MismatchError("convex_combine: parts do not share a base");
  std::vector<double> w(base.size(), 0.0);
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const double c = coeffs[k];
    auto pw = parts[k].weights();
    for (std::size_t x = 0; x < w.size(); ++x) w[x] += c * pw[x];
  }
  return Dist::normalized(base, std::move(w));
}

double inner(std::string_view label, const Dist& d) { return d[d.base().index_of(label)]; }

Dist direct_sum(const Measure& x, const Measure& y, std::string x_tag, std::string y_tag) {
  if (x.weights.size() != x.base.size() || y.weights.size() != y.base.size())
    throw MismatchError("direct_sum: weight vector does not match its base");
  const double total = x.mass() + y.mass();
  if (std::abs(total - 1.0) > kSimplexTol)
    throw MismatchError("direct_sum: parts carry total mass " + std::to_string(total));
  std::vector<double> w(x.weights);
  w.insert(w.end(), y.weights.begin(), y.weights.end());
  auto base = FiniteSet::disjoint_union({{std::move(x_tag), x.base}, {std::move(y_tag), y.base}});
  return Dist(std::move(base), std::move(w));
}

Dist direct_sum(double p, const Dist& x, const Dist& y) {
  if (p < 0.0 || p > 1.0) throw MismatchError("direct_sum: p outside [0,1]");
  return direct_sum(Measure::scaled(x, p), Measure::scaled(y, 1.0 - p));
}

double max_abs_diff(const Dist& a, const Dist& b) {
  if (!(a.base() == b.base())) throw MismatchError("max_abs_diff: bases differ");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

std::string to_string(const Dist& d) {
  std::ostringstream os;
  os.precision(17);
  os << '{';
  bool first = true;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] == 0.0) continue;
    if (!first) os << ", ";
    os << d.base().label(i) << ": " << d[i];
    first = false;
  }
  os << '}';
  return os.str();
}

}  // namespace smoothtm

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "smoothtm/finite_set.hpp"

namespace smoothtm {

/// Operation-level numeric slack for simplex membership.
inline constexpr double kSimplexTol = 1e-12;

/// True iff every coordinate is >= -kSimplexTol and the sum is within
/// kSimplexTol of one.
bool is_simplex(std::span<const double> weights);

/// A probability distribution over a finite set, stored densely.
///
/// Construction validates simplex membership. Coordinates in
/// [-kSimplexTol, 0) are clamped to zero and the vector renormalized; larger
/// negatives or a bad total raise ConstructionError.
class Dist {
 public:
  Dist(FiniteSet base, std::vector<double> weights);

  static Dist point(FiniteSet base, std::size_t index);
  static Dist point(FiniteSet base, std::string_view label);
  static Dist uniform(FiniteSet base);
  /// Validates like the constructor, then divides by the computed sum so
  /// rounding defects do not compound across repeated operations. A single
  /// nonzero coordinate becomes exactly 1.
  static Dist normalized(FiniteSet base, std::vector<double> weights);

  const FiniteSet& base() const noexcept { return base_; }
  std::size_t size() const noexcept { return weights_.size(); }
  std::span<const double> weights() const noexcept { return weights_; }
  double operator[](std::size_t i) const { return weights_[i]; }

  /// Index of the unique coordinate equal to exactly 1.0, if any.
  std::optional<std::size_t> point_index() const;
  bool is_point_mass() const { return point_index().has_value(); }
  std::vector<std::size_t> support() const;

  /// Marginal over one factor of a product base.
  Dist marginal(std::size_t factor) const;

  friend bool operator==(const Dist& a, const Dist& b) {
    return a.base_ == b.base_ && a.weights_ == b.weights_;
  }

 private:
  FiniteSet base_;
  std::vector<double> weights_;
};

/// A sub-probability vector; the summands of a direct sum.
struct Measure {
  FiniteSet base;
  std::vector<double> weights;

  double mass() const;
  static Measure scaled(const Dist& d, double factor);
};

/// Joint distribution of independent components over the product set.
Dist tensor(const Dist& a, const Dist& b);
Dist tensor(std::span<const Dist> parts);

/// Pointwise sum_k coeffs[k] * parts[k]. The coefficient base indexes parts.
Dist convex_combine(const Dist& coeffs, std::span<const Dist> parts);

/// <x, d>: the weight of label x.
double inner(std::string_view label, const Dist& d);

/// Concatenation over the tagged union X ⊔ Y. Throws MismatchError unless
/// the two masses sum to one within kSimplexTol.
Dist direct_sum(const Measure& x, const Measure& y, std::string x_tag = "x", std::string y_tag = "y");
/// p·x ⊕ (1-p)·y.
Dist direct_sum(double p, const Dist& x, const Dist& y);

/// Max per-coordinate absolute difference; bases must match.
double max_abs_diff(const Dist& a, const Dist& b);

/// "{A: 0.5, B: 0.5}" listing nonzero weights.
std::string to_string(const Dist& d);

}  // namespace smoothtm

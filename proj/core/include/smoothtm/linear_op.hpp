// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "smoothtm/dist.hpp"
#include "smoothtm/finite_set.hpp"

namespace smoothtm {

/// A linear map R(domain) -> R(codomain) with column-stochastic (or
/// substochastic) sparse columns.
class LinearOp {
 public:
  /// An empty operator on the empty set; a placeholder for assignment.
  LinearOp() = default;
  struct Entry {
    std::uint32_t row;
    double value;
  };

  LinearOp(FiniteSet domain, FiniteSet codomain, std::vector<std::vector<Entry>> columns);
  /// Column j is the point mass at rows[j].
  static LinearOp from_function_table(FiniteSet domain, FiniteSet codomain, std::vector<std::uint32_t> rows);

  const FiniteSet& domain() const noexcept { return domain_; }
  const FiniteSet& codomain() const noexcept { return codomain_; }
  std::span<const Entry> column(std::size_t j) const;

  /// True iff every column is a single entry of value exactly 1.
  bool is_deterministic() const noexcept { return deterministic_; }

  Dist apply(const Dist& d) const;

  /// apply(tensor(factors)) without materializing the joint. The domain must be
  /// the product of the factor bases. Zero-weight combinations are skipped,
  /// so the cost follows the support sizes rather than the domain size.
  Dist apply_product(std::span<const Dist* const> factors) const;

 private:
  FiniteSet domain_;
  FiniteSet codomain_;
  std::vector<std::size_t> col_begin_;
  std::vector<Entry> entries_;
  bool deterministic_ = true;
};

/// Δf for a total function f: domain -> codomain, given as an index map.
/// A nullopt anywhere in the domain raises ConstructionError.
LinearOp induced_op(FiniteSet domain, FiniteSet codomain,
                    const std::function<std::optional<std::size_t>(std::size_t)>& f);
LinearOp induced_op(FiniteSet domain, FiniteSet codomain, std::span<const std::size_t> table);

}  // namespace smoothtm

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace smoothtm {

/// An ordered finite set of labels. The order fixes coordinate indices for
/// every vector indexed by the set.
///
/// Three shapes exist: plain label lists, Cartesian products (stored flat,
/// row-major in factor order, first factor most significant) and tagged
/// disjoint unions. Product and union labels are generated on demand so that
/// large joint sets never materialize strings.
///
/// Values are cheap to copy and immutable.
class FiniteSet {
 public:
  enum class Kind { Plain, Product, Union };

  FiniteSet();

  static FiniteSet of(std::vector<std::string> labels);
  static FiniteSet product(std::vector<FiniteSet> factors);
  static FiniteSet disjoint_union(std::vector<std::pair<std::string, FiniteSet>> parts);

  Kind kind() const noexcept;
  std::size_t size() const noexcept;
  bool empty() const noexcept { return size() == 0; }

  std::string label(std::size_t index) const;
  std::optional<std::size_t> find(std::string_view label) const;
  /// Throws MismatchError when the label is absent.
  std::size_t index_of(std::string_view label) const;
  bool contains(std::string_view label) const { return find(label).has_value(); }

  // Product structure.
  const std::vector<FiniteSet>& factors() const;
  std::vector<std::size_t> unflatten(std::size_t index) const;
  std::size_t flatten(std::span<const std::size_t> coords) const;

  // Union structure.
  std::size_t num_parts() const;
  const FiniteSet& part(std::size_t k) const;
  const std::string& part_tag(std::size_t k) const;
  std::size_t part_offset(std::size_t k) const;
  std::optional<std::size_t> find_part(std::string_view tag) const;
  /// (part, local index) of a union element.
  std::pair<std::size_t, std::size_t> locate(std::size_t index) const;

  bool same_as(const FiniteSet& other) const noexcept { return impl_ == other.impl_; }
  friend bool operator==(const FiniteSet& a, const FiniteSet& b);

 private:
  struct Impl;
  explicit FiniteSet(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

/// The move directions {-1, 0, +1}, labelled L, S, R, in that index order.
const FiniteSet& directions();

}  // namespace smoothtm

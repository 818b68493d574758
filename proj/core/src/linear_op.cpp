// SPDX-License-Identifier: Apache-2.0
#include "smoothtm/linear_op.hpp"

#include "smoothtm/errors.hpp"

namespace smoothtm {

LinearOp::LinearOp(FiniteSet domain, FiniteSet codomain, std::vector<std::vector<Entry>> columns)
    : domain_(std::move(domain)), codomain_(std::move(codomain)) {
  if (columns.size() != domain_.size()) throw MismatchError("LinearOp: column count != |domain|");
  col_begin_.reserve(columns.size() + 1);
  col_begin_.push_back(0);
  for (auto& col : columns) {
    for (const Entry& e : col)
      if (e.row >= codomain_.size()) throw MismatchError("LinearOp: row index out of range");
    if (col.size() != 1 || col.front().value != 1.0) deterministic_ = false;
    entries_.insert(entries_.end(), col.begin(), col.end());
    col_begin_.push_back(entries_.size());
  }
}

LinearOp LinearOp::from_function_table(FiniteSet domain, FiniteSet codomain, std::vector<std::uint32_t> rows) {
  if (rows.size() != domain.size()) throw MismatchError("LinearOp: table size != |domain|");
  LinearOp op;
  op.col_begin_.resize(rows.size() + 1);
  op.entries_.resize(rows.size());
  for (std::size_t j = 0; j < rows.size(); ++j) {
    if (rows[j] >= codomain.size()) throw MismatchError("LinearOp: row index out of range");
    op.col_begin_[j] = j;
    op.entries_[j] = {rows[j], 1.0};
  }
  op.col_begin_[rows.size()] = rows.size();
  op.domain_ = std::move(domain);
  op.codomain_ = std::move(codomain);
  return op;
}

std::span<const LinearOp::Entry> LinearOp::column(std::size_t j) const {
  return std::span<const Entry>(entries_).subspan(col_begin_.at(j), col_begin_.at(j + 1) - col_begin_[j]);
}

Dist LinearOp::apply(const Dist& d) const {
  if (!(d.base() == domain_)) throw MismatchError("LinearOp::apply: distribution is not over the domain");
  std::vector<double> out(codomain_.size(), 0.0);
  auto w = d.weights();
  for (std::size_t j = 0; j < w.size(); ++j) {
    for (std::size_t k = col_begin_[j]; k < col_begin_[j + 1]; ++k)
      out[entries_[k].row] += entries_[k].value * w[j];
  }
  return Dist::normalized(codomain_, std::move(out));
}

Dist LinearOp::apply_product(std::span<const Dist* const> factors) const {
  if (domain_.kind() != FiniteSet::Kind::Product || domain_.factors().size() != factors.size())
    throw MismatchError("LinearOp::apply_product: domain is not a product of the given arity");
  const auto& dom_factors = domain_.factors();
  const std::size_t n = factors.size();
  std::vector<std::vector<std::size_t>> supports(n);
  std::vector<std::size_t> strides(n, 1);
  for (std::size_t k = 0; k < n; ++k) {
    if (!(factors[k]->base() == dom_factors[k]))
      throw MismatchError("LinearOp::apply_product: factor base mismatch");
    supports[k] = factors[k]->support();
    if (supports[k].empty()) throw MismatchError("LinearOp::apply_product: empty support");
  }
  for (std::size_t k = n - 1; k > 0; --k) strides[k - 1] = strides[k] * dom_factors[k].size();

  std::vector<double> out(codomain_.size(), 0.0);
  // Odometer over supports in row-major order; partial[k] is the product of the
  // first k+1 chosen weights, formed left to right exactly as tensor() does.
  std::vector<std::size_t> pos(n, 0);
  std::vector<double> partial(n);
  std::vector<std::size_t> flat(n);
  auto refresh = [&](std::size_t from) {
    for (std::size_t k = from; k < n; ++k) {
      const std::size_t idx = supports[k][pos[k]];
      const double w = (*factors[k])[idx];
      partial[k] = (k == 0) ? w : partial[k - 1] * w;
      flat[k] = (k == 0 ? 0 : flat[k - 1]) + idx * strides[k];
    }
  };
  refresh(0);
  while (true) {
    const std::size_t j = flat[n - 1];
    const double w = partial[n - 1];
    for (std::size_t e = col_begin_[j]; e < col_begin_[j + 1]; ++e)
      out[entries_[e].row] += entries_[e].value * w;
    std::size_t k = n;
    while (k > 0) {
      --k;
      if (++pos[k] < supports[k].size()) break;
      pos[k] = 0;
      if (k == 0) return Dist::normalized(codomain_, std::move(out));
    }
    refresh(k);
  }
}

LinearOp induced_op(FiniteSet domain, FiniteSet codomain,
                    const std::function<std::optional<std::size_t>(std::size_t)>& f) {
  std::vector<std::uint32_t> rows(domain.size());
  for (std::size_t x = 0; x < domain.size(); ++x) {
    auto y = f(x);
    if (!y) throw ConstructionError("induced_op: function undefined at '" + domain.label(x) + "'");
    if (*y >= codomain.size()) throw ConstructionError("induced_op: image outside codomain");
    rows[x] = static_cast<std::uint32_t>(*y);
  }
  return LinearOp::from_function_table(std::move(domain), std::move(codomain), std::move(rows));
}

LinearOp induced_op(FiniteSet domain, FiniteSet codomain, std::span<const std::size_t> table) {
  if (table.size() != domain.size()) throw ConstructionError("induced_op: table does not cover the domain");
  return induced_op(std::move(domain), std::move(codomain),
                    [&](std::size_t x) -> std::optional<std::size_t> { return table[x]; });
}

}  // namespace smoothtm

// SPDX-License-Identifier: Apache-2.0
#include "smoothtm/finite_set.hpp"

#include <algorithm>
#include <unordered_map>

#include "smoothtm/errors.hpp"

namespace smoothtm {

struct FiniteSet::Impl {
  Kind kind = Kind::Plain;
  std::size_t size = 0;

  std::vector<std::string> labels;
  std::unordered_map<std::string, std::size_t> index;

  std::vector<FiniteSet> factors;
  std::vector<std::size_t> strides;

  std::vector<std::string> tags;
  std::vector<FiniteSet> parts;
  std::vector<std::size_t> offsets;  // size parts+1
};

namespace {

bool valid_plain_label(std::string_view s) {
  if (s.empty()) return false;
  return std::none_of(s.begin(), s.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '(' || c == ')' || c == ',';
  });
}

// Splits "(a,b,(c,d))" into {"a","b","(c,d)"}; returns nullopt if not parenthesized.
std::optional<std::vector<std::string_view>> split_tuple(std::string_view s) {
  if (s.size() < 2 || s.front() != '(' || s.back() != ')') return std::nullopt;
  s = s.substr(1, s.size() - 2);
  std::vector<std::string_view> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (depth < 0) return std::nullopt;
    if (s[i] == ',' && depth == 0) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  if (depth != 0) return std::nullopt;
  out.push_back(s.substr(start));
  return out;
}

}  // namespace

FiniteSet::FiniteSet() : impl_(std::make_shared<Impl>()) {}

FiniteSet::FiniteSet(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

FiniteSet FiniteSet::of(std::vector<std::string> labels) {
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::Plain;
  impl->size = labels.size();
  impl->index.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!valid_plain_label(labels[i]))
      throw ConstructionError("invalid set label '" + labels[i] + "'");
    if (!impl->index.emplace(labels[i], i).second)
      throw ConstructionError("duplicate set label '" + labels[i] + "'");
  }
  impl->labels = std::move(labels);
  return FiniteSet(std::move(impl));
}

FiniteSet FiniteSet::product(std::vector<FiniteSet> factors) {
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::Product;
  impl->strides.assign(factors.size(), 1);
  std::size_t size = 1;
  for (std::size_t k = factors.size(); k-- > 0;) {
    impl->strides[k] = size;
    size *= factors[k].size();
  }
  impl->size = factors.empty() ? 1 : size;
  impl->factors = std::move(factors);
  return FiniteSet(std::move(impl));
}

FiniteSet FiniteSet::disjoint_union(std::vector<std::pair<std::string, FiniteSet>> parts) {
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::Union;
  impl->offsets.push_back(0);
  for (auto& [tag, set] : parts) {
    if (!valid_plain_label(tag) || tag.find(':') != std::string::npos)
      throw ConstructionError("invalid union tag '" + tag + "'");
    if (std::find(impl->tags.begin(), impl->tags.end(), tag) != impl->tags.end())
      throw ConstructionError("duplicate union tag '" + tag + "'");
    impl->tags.push_back(tag);
    impl->offsets.push_back(impl->offsets.back() + set.size());
    impl->parts.push_back(std::move(set));
  }
  impl->size = impl->offsets.back();
  return FiniteSet(std::move(impl));
}

FiniteSet::Kind FiniteSet::kind() const noexcept { return impl_->kind; }
std::size_t FiniteSet::size() const noexcept { return impl_->size; }

std::string FiniteSet::label(std::size_t index) const {
  if (index >= impl_->size) throw MismatchError("set index out of range");
  switch (impl_->kind) {
    case Kind::Plain:
      return impl_->labels[index];
    case Kind::Product: {
      std::string out = "(";
      auto coords = unflatten(index);
      for (std::size_t k = 0; k < coords.size(); ++k) {
        if (k) out += ',';
        out += impl_->factors[k].label(coords[k]);
      }
      return out + ")";
    }
    case Kind::Union: {
      auto [p, local] = locate(index);
      return impl_->tags[p] + ":" + impl_->parts[p].label(local);
    }
  }
  return {};
}

std::optional<std::size_t> FiniteSet::find(std::string_view label) const {
  switch (impl_->kind) {
    case Kind::Plain: {
      auto it = impl_->index.find(std::string(label));
      if (it == impl_->index.end()) return std::nullopt;
      return it->second;
    }
    case Kind::Product: {
      auto items = split_tuple(label);
      if (!items || items->size() != impl_->factors.size()) return std::nullopt;
      std::vector<std::size_t> coords;
      for (std::size_t k = 0; k < items->size(); ++k) {
        auto c = impl_->factors[k].find((*items)[k]);
        if (!c) return std::nullopt;
        coords.push_back(*c);
      }
      return flatten(coords);
    }
    case Kind::Union: {
      auto colon = label.find(':');
      if (colon == std::string_view::npos) return std::nullopt;
      auto p = find_part(label.substr(0, colon));
      if (!p) return std::nullopt;
      auto local = impl_->parts[*p].find(label.substr(colon + 1));
      if (!local) return std::nullopt;
      return impl_->offsets[*p] + *local;
    }
  }
  return std::nullopt;
}

std::size_t FiniteSet::index_of(std::string_view label) const {
  auto i = find(label);
  if (!i) throw MismatchError("label '" + std::string(label) + "' is not an element of the set");
  return *i;
}

const std::vector<FiniteSet>& FiniteSet::factors() const {
  if (impl_->kind != Kind::Product) throw MismatchError("set is not a product");
  return impl_->factors;
}

std::vector<std::size_t> FiniteSet::unflatten(std::size_t index) const {
  const auto& f = factors();
  std::vector<std::size_t> coords(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) {
    coords[k] = index / impl_->strides[k];
    index %= impl_->strides[k];
  }
  return coords;
}

std::size_t FiniteSet::flatten(std::span<const std::size_t> coords) const {
  const auto& f = factors();
  if (coords.size() != f.size()) throw MismatchError("coordinate arity mismatch");
  std::size_t out = 0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (coords[k] >= f[k].size()) throw MismatchError("coordinate out of range");
    out += coords[k] * impl_->strides[k];
  }
  return out;
}

std::size_t FiniteSet::num_parts() const {
  if (impl_->kind != Kind::Union) throw MismatchError("set is not a disjoint union");
  return impl_->parts.size();
}

const FiniteSet& FiniteSet::part(std::size_t k) const {
  num_parts();
  return impl_->parts.at(k);
}

const std::string& FiniteSet::part_tag(std::size_t k) const {
  num_parts();
  return impl_->tags.at(k);
}

std::size_t FiniteSet::part_offset(std::size_t k) const {
  num_parts();
  return impl_->offsets.at(k);
}

std::optional<std::size_t> FiniteSet::find_part(std::string_view tag) const {
  num_parts();
  for (std::size_t k = 0; k < impl_->tags.size(); ++k)
    if (impl_->tags[k] == tag) return k;
  return std::nullopt;
}

std::pair<std::size_t, std::size_t> FiniteSet::locate(std::size_t index) const {
  num_parts();
  const auto& off = impl_->offsets;
  auto it = std::upper_bound(off.begin(), off.end(), index);
  std::size_t p = static_cast<std::size_t>(it - off.begin()) - 1;
  return {p, index - off[p]};
}

bool operator==(const FiniteSet& a, const FiniteSet& b) {
  if (a.impl_ == b.impl_) return true;
  if (a.impl_->kind != b.impl_->kind || a.impl_->size != b.impl_->size) return false;
  switch (a.impl_->kind) {
    case FiniteSet::Kind::Plain:
      return a.impl_->labels == b.impl_->labels;
    case FiniteSet::Kind::Product:
      return a.impl_->factors == b.impl_->factors;
    case FiniteSet::Kind::Union:
      return a.impl_->tags == b.impl_->tags && a.impl_->parts == b.impl_->parts;
  }
  return false;
}

const FiniteSet& directions() {
  static const FiniteSet dirs = FiniteSet::of({"L", "S", "R"});
  return dirs;
}

}  // namespace smoothtm

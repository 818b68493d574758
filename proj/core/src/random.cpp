// SPDX-License-Identifier: Apache-2.0
#include "smoothtm/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "smoothtm/errors.hpp"

namespace smoothtm {

std::size_t Rng::below(std::size_t n) {
  if (n == 0) throw Error("Rng::below needs a positive bound");
  // Rejection sampling keeps the result exactly uniform.
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do x = engine_();
  while (x >= limit);
  return static_cast<std::size_t>(x % bound);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

Dist weights_on(Rng& rng, const FiniteSet& base, const std::vector<std::size_t>& support) {
  std::vector<double> w(base.size(), 0.0);
  double total = 0.0;
  for (std::size_t i : support) {
    w[i] = -std::log(1.0 - rng.uniform());
    total += w[i];
  }
  if (total == 0.0) {
    w[support.front()] = 1.0;
    total = 1.0;
  }
  for (double& x : w) x /= total;
  return Dist(base, std::move(w));
}

}  // namespace

Dist random_dist(Rng& rng, const FiniteSet& base) {
  std::vector<std::size_t> all(base.size());
  std::iota(all.begin(), all.end(), 0);
  return weights_on(rng, base, all);
}

Dist random_mixed_dist(Rng& rng, const FiniteSet& base) {
  const std::size_t mode = rng.below(3);
  if (mode == 0 || base.size() == 1) return Dist::point(base, rng.below(base.size()));
  if (mode == 2) return random_dist(rng, base);
  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < base.size(); ++i)
    if (rng.chance(0.5)) support.push_back(i);
  if (support.empty()) support.push_back(rng.below(base.size()));
  return weights_on(rng, base, support);
}

Machine random_machine(Rng& rng, std::size_t num_states, std::size_t num_symbols, std::size_t num_tapes) {
  if (num_states == 0 || num_symbols == 0 || num_tapes == 0) throw Error("random_machine: sizes must be positive");
  std::vector<std::string> q, s{"_"};
  for (std::size_t i = 0; i < num_states; ++i) q.push_back("q" + std::to_string(i));
  for (std::size_t i = 1; i < num_symbols; ++i) s.push_back(std::string(1, static_cast<char>('A' + (i - 1) % 26)) +
                                                            (i > 26 ? std::to_string(i) : ""));
  const FiniteSet states = FiniteSet::of(q);
  const FiniteSet alphabet = FiniteSet::of(s);
  std::size_t size = num_states;
  for (std::size_t j = 0; j < num_tapes; ++j) size *= num_symbols;
  std::vector<Machine::Transition> table(size);
  for (auto& t : table) {
    t.next = rng.below(num_states);
    for (std::size_t j = 0; j < num_tapes; ++j) t.write.push_back(rng.below(num_symbols));
    for (std::size_t j = 0; j < num_tapes; ++j) t.move.push_back(move_from_index(rng.below(3)));
  }
  return Machine(states, alphabet, 0, num_tapes, table);
}

SmoothConfig random_smooth_config(Rng& rng, const FiniteSet& states, const FiniteSet& alphabet, std::size_t blank,
                                  std::size_t num_tapes, std::size_t radius) {
  SmoothConfig s{random_mixed_dist(rng, states), {}};
  const auto r = static_cast<std::int64_t>(radius);
  for (std::size_t j = 0; j < num_tapes; ++j) {
    std::vector<Dist> cells;
    for (std::int64_t i = -r; i <= r; ++i) cells.push_back(random_mixed_dist(rng, alphabet));
    s.tapes.emplace_back(-r, std::move(cells), alphabet, blank);
  }
  return s;
}

SmoothConfig random_smooth_config(Rng& rng, const Machine& m, std::size_t radius) {
  return random_smooth_config(rng, m.states(), m.alphabet(), m.blank(), m.num_tapes(), radius);
}

Configuration random_configuration(Rng& rng, const Machine& m, std::size_t radius) {
  Configuration c{rng.below(m.states().size()), {}};
  const auto r = static_cast<std::int64_t>(radius);
  for (std::size_t j = 0; j < m.num_tapes(); ++j) {
    std::vector<std::size_t> cells;
    for (std::int64_t i = -r; i <= r; ++i) cells.push_back(rng.below(m.alphabet().size()));
    c.tapes.emplace_back(-r, std::move(cells), m.blank());
  }
  return c;
}

}  // namespace smoothtm

// SPDX-License-Identifier: Apache-2.0
#pragma once

// Reference computations written against the definitions with plain loops and
// dense windows. They use the library only for machine tables and for
// converting to and from its configuration types.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "smoothtm/machine.hpp"
#include "smoothtm/smooth_step.hpp"

namespace oracle {

/// A tape as index -> weights; missing indices are the blank point mass.
struct DenseTape {
  std::map<std::int64_t, std::vector<double>> cells;
};

struct DenseConfig {
  std::vector<double> state;
  std::vector<DenseTape> tapes;
};

inline DenseConfig from_library(const smoothtm::SmoothConfig& s) {
  DenseConfig d;
  d.state.assign(s.state.weights().begin(), s.state.weights().end());
  for (const auto& t : s.tapes) {
    DenseTape dt;
    for (std::int64_t i = t.lo(); i <= t.hi(); ++i) {
      const auto w = t.at(i).weights();
      dt.cells[i] = std::vector<double>(w.begin(), w.end());
    }
    d.tapes.push_back(std::move(dt));
  }
  return d;
}

inline std::vector<double> cell(const DenseTape& t, std::int64_t i, std::size_t symbols, std::size_t blank) {
  auto it = t.cells.find(i);
  if (it != t.cells.end()) return it->second;
  std::vector<double> b(symbols, 0.0);
  b[blank] = 1.0;
  return b;
}

/// One smooth step by enumerating Q × Σⁿ: the joint weight of (q, a₁..aₙ) is
/// q(q)·Π y⁽ʲ⁾₀(aⱼ); the new state, writes and directions accumulate that
/// weight at the transition's outputs; cell i of tape j becomes
/// Σ_d dir(d)·(i+d == 0 ? write : yᵢ₊d).
inline DenseConfig step(const smoothtm::Machine& m, const DenseConfig& c) {
  const std::size_t nq = m.states().size(), ns = m.alphabet().size(), n = m.num_tapes();
  const std::size_t blank = m.blank();
  std::vector<std::vector<double>> head(n);
  for (std::size_t j = 0; j < n; ++j) head[j] = cell(c.tapes[j], 0, ns, blank);

  DenseConfig out;
  out.state.assign(nq, 0.0);
  std::vector<std::vector<double>> write(n, std::vector<double>(ns, 0.0));
  std::vector<std::vector<double>> dir(n, std::vector<double>(3, 0.0));
  std::vector<std::size_t> read(n, 0);
  for (std::size_t q = 0; q < nq; ++q) {
    std::fill(read.begin(), read.end(), 0);
    while (true) {
      double w = c.state[q];
      for (std::size_t j = 0; j < n; ++j) w *= head[j][read[j]];
      if (w != 0.0) {
        std::size_t l = q;
        for (std::size_t j = 0; j < n; ++j) l = l * ns + read[j];
        out.state[m.next_state(l)] += w;
        for (std::size_t j = 0; j < n; ++j) {
          write[j][m.write(l, j)] += w;
          dir[j][static_cast<std::size_t>(smoothtm::offset(m.move(l, j)) + 1)] += w;
        }
      }
      std::size_t k = n;
      while (k > 0 && ++read[k - 1] == ns) read[--k] = 0;
      if (k == 0) break;
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    const DenseTape& t = c.tapes[j];
    std::int64_t lo = 0, hi = 0;
    if (!t.cells.empty()) {
      lo = std::min<std::int64_t>(0, t.cells.begin()->first);
      hi = std::max<std::int64_t>(0, t.cells.rbegin()->first);
    }
    DenseTape nt;
    for (std::int64_t i = lo - 1; i <= hi + 1; ++i) {
      std::vector<double> v(ns, 0.0);
      for (int d = -1; d <= 1; ++d) {
        const double p = dir[j][static_cast<std::size_t>(d + 1)];
        if (p == 0.0) continue;
        const std::vector<double> src = i + d == 0 ? write[j] : cell(t, i + d, ns, blank);
        for (std::size_t a = 0; a < ns; ++a) v[a] += p * src[a];
      }
      nt.cells[i] = v;
    }
    out.tapes.push_back(std::move(nt));
  }
  return out;
}

/// Max per-coordinate difference, blanks filled in where windows differ.
inline double deviation(const DenseConfig& a, const smoothtm::SmoothConfig& b) {
  double worst = 0.0;
  for (std::size_t q = 0; q < a.state.size(); ++q) worst = std::max(worst, std::abs(a.state[q] - b.state[q]));
  for (std::size_t j = 0; j < a.tapes.size(); ++j) {
    const auto& bt = b.tapes[j];
    const std::size_t ns = bt.alphabet().size();
    std::int64_t lo = bt.lo(), hi = bt.hi();
    if (!a.tapes[j].cells.empty()) {
      lo = std::min(lo, a.tapes[j].cells.begin()->first);
      hi = std::max(hi, a.tapes[j].cells.rbegin()->first);
    }
    for (std::int64_t i = lo; i <= hi; ++i) {
      const auto x = cell(a.tapes[j], i, ns, bt.blank());
      const auto& y = bt.at(i);
      for (std::size_t s = 0; s < ns; ++s) worst = std::max(worst, std::abs(x[s] - y[s]));
    }
  }
  return worst;
}

}  // namespace oracle

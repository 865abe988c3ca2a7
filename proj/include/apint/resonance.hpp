#pragma once

// Three-wave triads k = k1 + k2 of the discretised system and their
// resonance mismatch
//
//   Omega = omega(k1, a1) + omega(k2, a2) - omega(k, a).
//
// Triads with |Omega| <= direct_resonance_tol are direct resonances (shell 0);
// the rest are binned into near-resonant shells by |Omega| / eps.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "apint/detail/number_format.hpp"
#include "apint/spectral_rswe.hpp"

namespace apint {

inline constexpr double direct_resonance_tol = 1e-10;

struct Triad {
  int k = 0, k1 = 0, k2 = 0;
  int alpha = 0, alpha1 = 0, alpha2 = 0;
  double mismatch = 0.0;
  int shell = -1;  // -1 until classified

  bool direct() const { return std::abs(mismatch) <= direct_resonance_tol; }
  friend bool operator==(const Triad&, const Triad&) = default;
};

struct TriadTable {
  std::vector<Triad> triads;
  std::vector<double> shell_edges;  // shell_edges[0] == 0
  std::size_t overflow = 0;         // triads above the last edge

  bool empty() const { return triads.empty(); }
  int overflow_shell() const { return static_cast<int>(shell_edges.size()); }
};

inline TriadTable enumerate_triads(const ModelConfig& cfg, int k_max) {
  cfg.validate();
  if (k_max < 0 || k_max > cfg.dealias_cutoff())
    throw std::invalid_argument("k_max " + std::to_string(k_max) +
                                " exceeds the dealiased band " +
                                std::to_string(cfg.dealias_cutoff()));
  TriadTable table;
  table.shell_edges = {0.0};
  for (int k = -k_max; k <= k_max; ++k) {
    for (int k1 = -k_max; k1 <= k_max; ++k1) {
      const int k2 = k - k1;
      if (std::abs(k2) > k_max) continue;
      for (int a = -1; a <= 1; ++a)
        for (int a1 = -1; a1 <= 1; ++a1)
          for (int a2 = -1; a2 <= 1; ++a2) {
            const double omega =
                cfg.frequency(k1, a1) + cfg.frequency(k2, a2) - cfg.frequency(k, a);
            table.triads.push_back({k, k1, k2, a, a1, a2, omega, -1});
          }
    }
  }
  return table;
}

// Geometric edges 1, 2, 4, ... until the largest |Omega| / eps is covered.
inline std::vector<double> default_shell_edges(const TriadTable& table, double epsilon) {
  double top = 0.0;
  for (const auto& t : table.triads) top = std::max(top, std::abs(t.mismatch) / epsilon);
  std::vector<double> edges{1.0};
  while (edges.back() < top) edges.push_back(2.0 * edges.back());
  return edges;
}

// Labels each triad with its shell. `edges` lists eps_1 < eps_2 < ...; the
// overflow shell index is edges.size() + 1.
inline TriadTable classify_shells(TriadTable table, double epsilon,
                                  const std::vector<double>& edges) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (edges.empty()) throw std::invalid_argument("shell edges must be nonempty");
  if (!(edges.front() > 0.0) || !std::is_sorted(edges.begin(), edges.end()) ||
      std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    throw std::invalid_argument("shell edges must be positive and strictly ascending");

  table.shell_edges.assign(1, 0.0);
  table.shell_edges.insert(table.shell_edges.end(), edges.begin(), edges.end());
  table.overflow = 0;
  for (auto& t : table.triads) {
    if (t.direct()) {
      t.shell = 0;
      continue;
    }
    const double scaled = std::abs(t.mismatch) / epsilon;
    const auto it = std::lower_bound(edges.begin(), edges.end(), scaled);
    t.shell = static_cast<int>(it - edges.begin()) + 1;
    if (it == edges.end()) ++table.overflow;
  }
  return table;
}

// Sorted distinct lambda_n = |Omega| / eps; direct resonances map to 0.
// Duplicates are merged with a relative tolerance of 1e-12, which keeps the
// spectrum exactly covariant under eps -> eps / 2.
inline std::vector<double> mismatch_spectrum(const TriadTable& table, double epsilon) {
  if (table.empty()) throw std::invalid_argument("empty triad table");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  std::vector<double> values;
  values.reserve(table.triads.size());
  for (const auto& t : table.triads)
    values.push_back(t.direct() ? 0.0 : std::abs(t.mismatch) / epsilon);
  std::sort(values.begin(), values.end());
  std::vector<double> unique;
  for (double v : values)
    if (unique.empty() || v - unique.back() > 1e-12 * v) unique.push_back(v);
  return unique;
}

inline void write_triad_csv(std::ostream& os, const TriadTable& table) {
  os << "# apint triad table v1\n";
  os << "k,k1,k2,alpha,alpha1,alpha2,Omega,shell\n";
  for (const auto& t : table.triads) {
    os << t.k << ',' << t.k1 << ',' << t.k2 << ',' << t.alpha << ',' << t.alpha1 << ','
       << t.alpha2 << ',' << detail::format_double(t.mismatch) << ',' << t.shell << '\n';
  }
}

}  // namespace apint

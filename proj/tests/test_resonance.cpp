#include <catch_amalgamated.hpp>

#include <cmath>
#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <tuple>

#include "apint/resonance.hpp"

using namespace apint;

namespace {

double omega(int k, int a, double F) { return a == 0 ? 0.0 : a * std::sqrt(1.0 + k * k / F); }

// Independent lexicographic scan over (k, k1, a, a1, a2).
std::vector<Triad> brute_force(int k_max, double F) {
  std::vector<Triad> out;
  for (int k = -k_max; k <= k_max; ++k)
    for (int k1 = -k_max; k1 <= k_max; ++k1) {
      const int k2 = k - k1;
      if (k2 < -k_max || k2 > k_max) continue;
      for (int a : {-1, 0, 1})
        for (int a1 : {-1, 0, 1})
          for (int a2 : {-1, 0, 1})
            out.push_back({k, k1, k2, a, a1, a2,
                           omega(k1, a1, F) + omega(k2, a2, F) - omega(k, a, F), -1});
    }
  return out;
}

}  // namespace

TEST_CASE("enumeration matches a brute-force scan bitwise") {
  for (double F : {1.0, 0.03}) {
    ModelConfig c;
    c.froude = F;
    for (int k_max : {0, 4, c.dealias_cutoff()}) {
      const auto table = enumerate_triads(c, k_max);
      const auto oracle = brute_force(k_max, F);
      REQUIRE(table.triads.size() == oracle.size());
      for (std::size_t i = 0; i < oracle.size(); ++i) CHECK(table.triads[i] == oracle[i]);
    }
  }
  ModelConfig c;
  CHECK_THROWS_AS(enumerate_triads(c, c.dealias_cutoff() + 1), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_triads(c, -1), std::invalid_argument);
}

TEST_CASE("structural resonances") {
  ModelConfig c;
  const auto table = classify_shells(enumerate_triads(c, 8), 1.0, {1.0, 2.0, 4.0});
  for (const auto& t : table.triads) {
    CHECK(t.k == t.k1 + t.k2);
    if (t.alpha == 0 && t.alpha1 == 0 && t.alpha2 == 0) {
      CHECK(t.mismatch == 0.0);
      CHECK(t.shell == 0);
    }
    if (t.k2 == 0 && t.alpha2 == 0 && t.alpha1 == t.alpha) CHECK(t.mismatch == 0.0);
    CHECK((t.shell == 0) == t.direct());
  }
}

TEST_CASE("exact resonance count against exhaustive scan") {
  ModelConfig c;
  const auto table = enumerate_triads(c, 4);
  std::size_t expected = 0;
  for (int k1 = -4; k1 <= 4; ++k1)
    for (int k2 = -4; k2 <= 4; ++k2) {
      const int k = k1 + k2;
      if (std::abs(k) > 4) continue;
      for (int a = -1; a <= 1; ++a)
        for (int a1 = -1; a1 <= 1; ++a1)
          for (int a2 = -1; a2 <= 1; ++a2) {
            if (a == 0 && a1 == 0 && a2 == 0) continue;
            const double w = std::sqrt(1.0 + k1 * k1) * a1 +
                             std::sqrt(1.0 + k2 * k2) * a2 - std::sqrt(1.0 + k * k) * a;
            if (std::abs(w) < 1e-10) ++expected;
          }
    }
  std::size_t counted = 0;
  for (const auto& t : table.triads)
    if (t.direct() && (t.alpha || t.alpha1 || t.alpha2)) ++counted;
  CHECK(counted == expected);
  CHECK(counted > 0);
}

TEST_CASE("swap symmetry") {
  ModelConfig c;
  const auto table = enumerate_triads(c, 6);
  std::map<std::tuple<int, int, int, int, int>, double> lookup;
  for (const auto& t : table.triads) lookup[{t.k1, t.k2, t.alpha, t.alpha1, t.alpha2}] = t.mismatch;
  for (const auto& t : table.triads) {
    const auto it = lookup.find({t.k2, t.k1, t.alpha, t.alpha2, t.alpha1});
    REQUIRE(it != lookup.end());
    CHECK(std::abs(it->second - t.mismatch) <= 1e-12);
  }
}

TEST_CASE("shell classification") {
  TriadTable one;
  one.triads.push_back({1, 1, 0, 1, 1, 0, 0.5, -1});
  const auto a = classify_shells(one, 0.5, {0.9, 1.1});
  CHECK(a.triads[0].shell == 2);
  CHECK(a.shell_edges == std::vector<double>{0.0, 0.9, 1.1});
  CHECK(a.overflow == 0);

  const auto b = classify_shells(one, 0.1, {0.9, 1.1});
  CHECK(b.triads[0].shell == b.overflow_shell());
  CHECK(b.overflow == 1);

  CHECK_THROWS_AS(classify_shells(one, 0.5, {}), std::invalid_argument);
  CHECK_THROWS_AS(classify_shells(one, 0.5, {1.1, 0.9}), std::invalid_argument);
  CHECK_THROWS_AS(classify_shells(one, 0.5, {0.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(classify_shells(one, 0.0, {1.0}), std::invalid_argument);

  ModelConfig c;
  const auto raw = enumerate_triads(c, 6);
  const auto edges = default_shell_edges(raw, 0.25);
  CHECK(edges.front() == 1.0);
  for (std::size_t i = 1; i < edges.size(); ++i) CHECK(edges[i] == 2.0 * edges[i - 1]);
  const auto coarse = classify_shells(raw, 0.5, edges);
  const auto fine = classify_shells(raw, 0.25, edges);
  CHECK(fine.overflow == 0);
  for (std::size_t i = 0; i < raw.triads.size(); ++i) {
    CHECK(fine.triads[i].shell >= coarse.triads[i].shell);
    CHECK(fine.triads[i].shell >= 0);
  }
}

TEST_CASE("mismatch spectrum") {
  TriadTable direct;
  direct.triads.push_back({0, 0, 0, 0, 0, 0, 0.0, -1});
  direct.triads.push_back({1, 1, 0, 0, 0, 0, 0.0, -1});
  CHECK(mismatch_spectrum(direct, 0.3) == std::vector<double>{0.0});
  CHECK_THROWS_AS(mismatch_spectrum(TriadTable{}, 1.0), std::invalid_argument);

  ModelConfig c;
  const auto table = enumerate_triads(c, 4);
  const auto s1 = mismatch_spectrum(table, 1.0);
  const auto s2 = mismatch_spectrum(table, 0.5);
  REQUIRE(s1.size() == s2.size());
  CHECK(s1.front() == 0.0);
  for (std::size_t i = 0; i < s1.size(); ++i) CHECK(s2[i] == 2.0 * s1[i]);
  CHECK(std::is_sorted(s1.begin(), s1.end()));

  double top = 0.0;
  for (const auto& t : brute_force(4, 1.0)) top = std::max(top, std::abs(t.mismatch));
  CHECK(s1.back() == top);
}

TEST_CASE("triad csv export") {
  ModelConfig c;
  const auto table = classify_shells(enumerate_triads(c, 1), 1.0, {1.0, 2.0, 4.0});
  std::ostringstream os;
  write_triad_csv(os, table);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("#", 0) == 0);
  std::getline(in, line);
  CHECK(line == "k,k1,k2,alpha,alpha1,alpha2,Omega,shell");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 7);
  }
  CHECK(rows == table.triads.size());
}

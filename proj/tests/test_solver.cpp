#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "prodtri/solver.hpp"

#include <algorithm>

using namespace prodtri;

namespace {

Permutation perm(std::initializer_list<int> one_based) {
  Permutation p;
  for (int v : one_based) p.order.push_back(v - 1);
  return p;
}

// Independent count: triangulations are exactly the simplex_count-cliques of
// the pairwise proper-intersection graph on spanning trees.
uint64_t clique_count(const Shape& s) {
  auto tr = spanning_trees(s);
  size_t n = tr.size();
  size_t k = (size_t)simplex_count(s);
  size_t words = (n + 63) / 64;
  std::vector<std::vector<uint64_t>> adj(n, std::vector<uint64_t>(words, 0));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if (properly_intersect(tr[i], tr[j], s)) {
        adj[i][j / 64] |= 1ull << (j % 64);
        adj[j][i / 64] |= 1ull << (i % 64);
      }
  uint64_t total = 0;
  std::vector<uint64_t> cur(words);
  auto rec = [&](auto&& self, std::vector<uint64_t> avail, size_t from, size_t depth) -> void {
    if (depth == k) {
      ++total;
      return;
    }
    for (size_t i = from; i < n; ++i) {
      if (!(avail[i / 64] >> (i % 64) & 1)) continue;
      std::vector<uint64_t> next(words);
      for (size_t w = 0; w < words; ++w) next[w] = avail[w] & adj[i][w];
      self(self, std::move(next), i + 1, depth + 1);
    }
  };
  std::vector<uint64_t> all(words, 0);
  for (size_t i = 0; i < n; ++i) all[i / 64] |= 1ull << (i % 64);
  rec(rec, all, 0, 0);
  return total;
}

uint64_t solver_count(const Shape& s, uint64_t shuffle = 0, int jobs = 1) {
  return solve(s, Constraints{}, SolveMode::Count, 0, jobs, shuffle).count;
}

}  // namespace

TEST_CASE("prism counts are n!") {
  CHECK(solver_count({2, 2}) == 2);
  CHECK(solver_count({3, 2}) == 6);
  CHECK(solver_count({4, 2}) == 24);
  CHECK(solver_count({5, 2}) == 120);
}

TEST_CASE("candidate cells under a fixed system") {
  Constraints c;
  c.system = PermSystem{2, 2, {perm({1, 2})}};
  auto cand = candidate_cells({2, 2}, c);
  Triangulation st = staircase(perm({1, 2}));
  REQUIRE(cand.size() == 2);
  CHECK(cand[0] == st.cells[0]);
  CHECK(cand[1] == st.cells[1]);

  CHECK(candidate_cells({3, 4}, Constraints{}).size() == 432);
}

TEST_CASE("completeness audit against clique counting") {
  for (Shape s : {Shape{2, 2}, Shape{3, 2}, Shape{2, 3}, Shape{4, 2}, Shape{3, 3}}) {
    uint64_t brute = clique_count(s);
    CHECK(solver_count(s) == brute);
    CHECK(solver_count(s, /*shuffle=*/12345) == brute);
    CHECK(solver_count(s, /*shuffle=*/0, /*jobs=*/4) == brute);
    CHECK(solver_count(s, /*shuffle=*/99, /*jobs=*/3) == brute);
  }
}

TEST_CASE("the 3x3 product has 108 triangulations") {
  CHECK(solver_count({3, 3}) == 108);
}

TEST_CASE("enumerate returns valid, constraint-matching, sorted results") {
  Shape s{3, 3};
  auto res = solve(s, Constraints{}, SolveMode::Enumerate);
  CHECK(res.count == 108);
  CHECK(std::is_sorted(res.found.begin(), res.found.end(),
                       [](auto& a, auto& b) { return a.cells < b.cells; }));
  for (auto& t : res.found) CHECK(is_triangulation(t));

  auto limited = solve(s, Constraints{}, SolveMode::Enumerate, 10);
  CHECK(limited.found.size() == 10);
}

TEST_CASE("decide is deterministic, also under shuffle and jobs") {
  Shape s{3, 3};
  auto base = solve(s, Constraints{}, SolveMode::Decide);
  REQUIRE(base.sat);
  REQUIRE(base.found.size() == 1);
  CHECK(is_triangulation(base.found[0]));
  auto shuffled = solve(s, Constraints{}, SolveMode::Decide, 0, 1, 777);
  CHECK(shuffled.found == base.found);
  auto parallel = solve(s, Constraints{}, SolveMode::Decide, 0, 4);
  CHECK(parallel.found == base.found);
}

TEST_CASE("system constraints: results restrict to the prescribed staircases") {
  Shape s{3, 3};
  auto all = solve(s, Constraints{}, SolveMode::Enumerate);
  Triangulation t0 = all.found[42];
  Constraints c;
  c.system = system_from_triangulation(t0);
  auto res = solve(s, c, SolveMode::Enumerate);
  CHECK(std::count(res.found.begin(), res.found.end(), t0) == 1);
  for (auto& t : res.found) CHECK(system_from_triangulation(t) == *c.system);
}

TEST_CASE("must-contain constraints") {
  Shape s{3, 3};
  auto all = solve(s, Constraints{}, SolveMode::Enumerate);
  Triangulation t0 = all.found[7];

  Constraints c;
  c.must_contain = t0.cells;  // the whole triangulation: unique completion
  auto res = solve(s, c, SolveMode::Enumerate);
  REQUIRE(res.count == 1);
  CHECK(res.found[0] == t0);

  Constraints c2;
  c2.must_contain = {t0.cells[0], t0.cells[3]};
  auto res2 = solve(s, c2, SolveMode::Enumerate);
  CHECK(std::count(res2.found.begin(), res2.found.end(), t0) == 1);
  for (auto& t : res2.found)
    for (Mask m : c2.must_contain)
      CHECK(std::binary_search(t.cells.begin(), t.cells.end(), m));
  // seed partition and plain DFS agree with brute force: every result is
  // among the unconstrained ones
  for (auto& t : res2.found) CHECK(std::count(all.found.begin(), all.found.end(), t) == 1);
}

TEST_CASE("position constraints pin the unmixed cells") {
  Shape s{3, 3};
  auto all = solve(s, Constraints{}, SolveMode::Enumerate);
  Triangulation t0 = all.found[100];
  PositionSystem u = unmixed_positions(t0);
  Constraints c;
  for (auto& v : u.vectors) c.positions.push_back(v);
  auto res = solve(s, c, SolveMode::Enumerate);
  CHECK(std::count(res.found.begin(), res.found.end(), t0) == 1);
  for (auto& t : res.found) CHECK(unmixed_positions(t).vectors == u.vectors);
}

TEST_CASE("inconsistent constraints are input errors") {
  Shape s{3, 3};
  Constraints clash;
  uint32_t all_rows = 0b111;
  clash.faces.push_back({Face{all_rows, 0b011}, staircase(perm({1, 2, 3}))});
  clash.faces.push_back({Face{all_rows, 0b011}, staircase(perm({3, 2, 1}))});
  CHECK_THROWS_AS(solve(s, clash, SolveMode::Count), std::invalid_argument);

  Constraints badsys;
  badsys.system = PermSystem{2, 2, {perm({1, 2})}};
  CHECK_THROWS_AS(solve(s, badsys, SolveMode::Count), std::invalid_argument);

  Constraints badmc;
  badmc.must_contain = {0b1u};
  CHECK_THROWS_AS(solve(s, badmc, SolveMode::Count), std::invalid_argument);
}

TEST_CASE("degenerate shapes") {
  CHECK(solver_count({1, 1}) == 1);
  CHECK(solver_count({1, 4}) == 1);
  CHECK(solver_count({4, 1}) == 1);
}

TEST_CASE("boundary completions of the square are unique") {
  PermSystem sys{2, 2, {perm({1, 2})}};
  auto bc = count_boundary_completions({2, 2}, sys);
  CHECK(bc.completions.size() == 1);
}

TEST_CASE("every full triangulation's boundary appears among the completions") {
  Shape s{3, 3};
  auto all = solve(s, Constraints{}, SolveMode::Enumerate);
  Triangulation t0 = all.found[17];
  PermSystem sys = system_from_triangulation(t0);
  auto bc = count_boundary_completions(s, sys);
  REQUIRE(!bc.completions.empty());
  bool seen = false;
  for (auto& comp : bc.completions) {
    bool match = true;
    for (auto& [face, tri] : comp)
      if (!(restrict_triangulation(t0, face) == tri)) { match = false; break; }
    seen |= match;
  }
  CHECK(seen);
}

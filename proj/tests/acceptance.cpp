// Acceptance battery: one pass/fail line per criterion, nonzero exit when any
// fails. Heavy stages run once and their manifests are reused by the
// determinism criterion at the end.

#include <chrono>
#include <cstdio>
#include <functional>
#include <vector>

#include "prodtri/geometry.hpp"
#include "prodtri/pipeline.hpp"
#include "prodtri/realize.hpp"

using namespace prodtri;

namespace {

int failures = 0;

void criterion(int num, const char* label, const std::function<bool()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  bool ok = false;
  std::string err;
  try {
    ok = body();
  } catch (const std::exception& e) {
    err = e.what();
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!ok) ++failures;
  std::printf("criterion %2d (%s): %s (%.2f s)%s%s\n", num, label, ok ? "PASS" : "FAIL", secs,
              err.empty() ? "" : " exception: ", err.c_str());
  std::fflush(stdout);
}

Permutation perm1(std::initializer_list<int> one_based) {
  Permutation p;
  for (int v : one_based) p.order.push_back(v - 1);
  return p;
}

Mask cell34(std::initializer_list<const char*> toks) {
  return parse_cell(std::vector<std::string>(toks.begin(), toks.end()), Shape{3, 4});
}

// manifests reused across criteria (computed once)
RunManifest man_s31, man_s32, man_chain;

// stage output with run-dependent diagnostics (timing, search effort) removed
json canonical(const RunManifest& m) {
  json j = manifest_to_json(m);
  j.erase("wall_seconds");
  j.erase("nodes");
  return j;
}

}  // namespace

int main() {
  criterion(1, "prism triangulation counts are n!", [] {
    uint64_t expect[] = {2, 6, 24, 120};
    for (int n = 2; n <= 5; ++n) {
      auto r = solve(Shape{n, 2}, Constraints{}, SolveMode::Count);
      if (r.count != expect[n - 2]) return false;
    }
    return true;
  });

  criterion(2, "worked four-symbol example: dual pairs and positions", [] {
    PermSystem sys{4, 3, {perm1({1, 2, 3, 4}), perm1({4, 2, 1, 3}), perm1({4, 3, 2, 1})}};
    if (!is_acyclic(sys)) return false;
    // node letters: 0=A, 1=B, 2=C
    auto want = [&](int i, int j, std::vector<int> nodes) {
      auto o = pair_order(sys, i, j);
      return o && o->order == nodes;
    };
    if (!want(0, 1, {2, 0, 1})) return false;  // pair 12 -> C A B
    if (!want(0, 2, {0, 2, 1})) return false;  // pair 13 -> A C B
    if (!want(0, 3, {2, 0, 1})) return false;  // pair 14 -> C A B
    PositionSystem u = positions_from_system(sys);
    return u.vectors == std::vector<PositionVector>{{1, 0, 2}, {1, 1, 1}, {0, 2, 1}, {0, 3, 0}};
  });

  criterion(3, "three-row stage: realizations, bad boundary, forced-cell diagnosis", [] {
    man_s31 = run_pipeline("s31");
    const json& a = man_s31.artifacts;
    if (man_s31.verdict != "UNSAT") return false;
    if (a.at("qualifying_systems").get<int>() < 1) return false;
    if (a.at("realizations").size() != 3) return false;
    if (a.at("boundary_completions").get<int>() != 4) return false;
    if (a.at("bad_boundary_verdict") != "UNSAT") return false;
    Shape s{3, 4};
    if (cell_from_json(a.at("diagnosis").at("missing"), s) !=
        cell34({"A1", "D1", "B2", "D2", "A3", "C3"}))
      return false;
    std::vector<Mask> want = {cell34({"A1", "A3", "B3", "C3", "D1", "D2"}),
                              cell34({"A1", "A3", "B3", "C2", "D1", "D2"}),
                              cell34({"A1", "A3", "B2", "C2", "D1", "D2"})};
    std::sort(want.begin(), want.end());
    std::vector<Mask> got;
    for (const auto& c : a.at("diagnosis").at("candidates")) got.push_back(cell_from_json(c, s));
    std::sort(got.begin(), got.end());
    return got == want;
  });

  criterion(4, "five-symbol lift: unique facets, deletion, UNSAT, positions", [] {
    man_s32 = run_pipeline("s32");
    const json& a = man_s32.artifacts;
    if (man_s32.verdict != "UNSAT" || a.at("verdict") != "UNSAT") return false;
    if (!a.at("facet_extensions_unique").get<bool>()) return false;
    if (!a.at("positions_match").get<bool>()) return false;
    PermSystem lifted = system_from_json(a.at("system"));
    PermSystem base = system_from_json(a.at("base_system"));
    if (!is_acyclic(lifted)) return false;
    if (!(delete_symbols(lifted, 0b11000).system == base)) return false;
    // the deletion target is the system selected by the previous stage
    return base == system_from_json(man_s31.artifacts.at("system"));
  });

  criterion(5, "documented position chain reduces and realizes", [] {
    man_chain = run_pipeline("spread-chain");
    const json& a = man_chain.artifacts;
    if (man_chain.verdict != "SAT") return false;
    if (!a.at("positions_verified").get<bool>()) return false;
    PositionSystem u{{{0, 3, 1, 0}, {2, 1, 1, 0}, {0, 1, 1, 2}, {1, 0, 2, 1}, {1, 2, 0, 1}}};
    if (!is_spread_out(u)) return false;
    auto r1 = reduce_positive_coordinate(u);
    if (!r1 || r1->first.vectors != std::vector<PositionVector>{
                                        {0, 3, 0, 0}, {2, 1, 0, 0}, {0, 1, 0, 2}, {1, 0, 1, 1}})
      return false;
    if (!is_spread_out(r1->first)) return false;
    auto r2 = reduce_positive_coordinate(r1->first);
    if (!r2 ||
        r2->first.vectors != std::vector<PositionVector>{{0, 2, 0, 0}, {2, 0, 0, 0}, {0, 0, 0, 2}})
      return false;
    if (!is_spread_out(r2->first)) return false;
    auto real = realize_positions(u);
    return real && unmixed_positions(real->tri).vectors == u.vectors;
  });

  criterion(6, "four equivalent acyclicity tests agree on every system", [] {
    RunManifest m = run_pipeline("lemma1");
    if (m.verdict != "OK" || !m.artifacts.at("flags_agree").get<bool>()) return false;
    for (const auto& sh : m.artifacts.at("shapes"))
      if (sh.at("violations").get<int>() != 0) return false;
    return m.artifacts.at("shapes").size() == 3;
  });

  criterion(7, "three columns: spread-out if and only if realizable (n <= 5)", [] {
    for (int n = 2; n <= 5; ++n) {
      std::vector<PositionVector> triples;
      for (int x = 0; x <= n - 1; ++x)
        for (int y = 0; x + y <= n - 1; ++y) triples.push_back({x, y, n - 1 - x - y});
      // multisets of n triples; realizability is invariant under reordering
      // vectors and under permuting the three coordinates, so only test
      // multisets that are canonically least in their coordinate orbit
      std::vector<int> pick(n, 0);
      std::function<bool(int, int)> rec = [&](int depth, int from) {
        if (depth == n) {
          PositionSystem u;
          for (int i : pick) u.vectors.push_back(triples[i]);
          std::vector<int> axes = {0, 1, 2};
          auto sorted_vecs = u.vectors;
          std::sort(sorted_vecs.begin(), sorted_vecs.end());
          while (std::next_permutation(axes.begin(), axes.end())) {
            std::vector<PositionVector> alt;
            for (const auto& v : u.vectors) alt.push_back({v[axes[0]], v[axes[1]], v[axes[2]]});
            std::sort(alt.begin(), alt.end());
            if (alt < sorted_vecs) return true;  // orbit handled at its least member
          }
          bool spread = is_spread_out(u);
          auto r = realize_positions(u);
          if (spread != r.has_value()) return false;
          if (r && unmixed_positions(r->tri).vectors != u.vectors) return false;
          return true;
        }
        for (int i = from; i < (int)triples.size(); ++i) {
          pick[depth] = i;
          if (!rec(depth + 1, i)) return false;
        }
        return true;
      };
      if (!rec(0, 0)) return false;
    }
    return true;
  });

  criterion(8, "combinatorial intersection test matches the exact oracle", [] {
    for (Shape s : {Shape{3, 3}, Shape{4, 3}}) {
      auto trees = spanning_trees(s);
      for (size_t x = 0; x < trees.size(); ++x)
        for (size_t y = x; y < trees.size(); ++y)
          if (properly_intersect(trees[x], trees[y], s) !=
              oracle_properly_intersect(trees[x], trees[y], s))
            return false;
      auto r = solve(s, Constraints{}, SolveMode::Enumerate);
      long long cells = 1, total = 1;
      for (int k = 1; k <= s.n - 1; ++k) cells *= s.n + s.d - 1 - k, total *= k;
      long long full_volume = cells / total;  // binomial(n+d-2, n-1)
      for (const auto& t : r.found) {
        if (volume_sum(t.cells, s) != full_volume) return false;
        for (Mask c : t.cells)
          if (normalized_volume(c, s) != 1) return false;
      }
    }
    return true;
  });

  criterion(9, "skeleton extendability by level, with both blocked witnesses", [] {
    RunManifest m = run_pipeline("parity");
    if (m.verdict != "OK") return false;
    const json& a = m.artifacts;
    if (!a.at("cyclic_prism_blocked").get<bool>()) return false;
    if (!a.at("unrealized_boundary_blocked").get<bool>()) return false;
    for (const auto& sh : a.at("shapes")) {
      if (!sh.at("level_1_to_2").get<bool>()) return false;
      if (sh.contains("level_3_to_4_all") && !sh.at("level_3_to_4_all").get<bool>()) return false;
    }
    return a.at("shapes").size() > 0;
  });

  criterion(10, "stage outputs are independent of worker count and search order", [] {
    StageOptions varied;
    varied.jobs = 3;
    varied.shuffle_seed = 0x5eed5eed1234abcdULL;
    if (canonical(run_pipeline("s31", varied)) != canonical(man_s31)) return false;
    if (canonical(run_pipeline("s32", varied)) != canonical(man_s32)) return false;
    if (canonical(run_pipeline("spread-chain", varied)) != canonical(man_chain)) return false;
    StageOptions varied2;
    varied2.jobs = 2;
    varied2.shuffle_seed = 42;
    return canonical(run_pipeline("spread-chain", varied2)) == canonical(man_chain);
  });

  std::printf("acceptance: %d/10 passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "prodtri/skeleton.hpp"

using namespace prodtri;

namespace {

Permutation perm(std::initializer_list<int> one_based) {
  Permutation p;
  for (int v : one_based) p.order.push_back(v - 1);
  return p;
}

}  // namespace

TEST_CASE("restrict_to_skeleton") {
  Shape s{3, 3};
  Triangulation t = solve(s, Constraints{}, SolveMode::Decide).found[0];

  SkeletonTriangulation full = restrict_to_skeleton(t, s.dim());
  CHECK(full.assignment.at(full_face(s)) == t);
  CHECK(is_coherent(full));

  SkeletonTriangulation edges = restrict_to_skeleton(t, 1);
  CHECK(is_coherent(edges));
  for (const auto& [f, tri] : edges.assignment) {
    CHECK(f.dim() <= 1);
    CHECK(tri.cells.size() == 1);  // vertices and edges subdivide trivially
  }

  SkeletonTriangulation bdry = restrict_to_skeleton(t, s.dim() - 1);
  CHECK(is_coherent(bdry));
  CHECK(!bdry.assignment.count(full_face(s)));
}

TEST_CASE("skeleton_from_system places the staircases") {
  PermSystem sys{4, 3, {perm({1, 2, 3, 4}), perm({4, 2, 1, 3}), perm({4, 3, 2, 1})}};
  Shape s{4, 3};
  SkeletonTriangulation sk = skeleton_from_system(s, sys, false);
  CHECK(is_coherent(sk));
  uint32_t all_rows = 0b1111;
  CHECK(sk.assignment.at(Face{all_rows, 0b011}) == staircase(perm({1, 2, 3, 4})));
  CHECK(sk.assignment.at(Face{all_rows, 0b101}) == staircase(perm({4, 2, 1, 3})));
  CHECK(sk.assignment.at(Face{all_rows, 0b110}) == staircase(perm({4, 3, 2, 1})));

  SkeletonTriangulation both = skeleton_from_system(s, sys, true);
  CHECK(is_coherent(both));
  CHECK(both.assignment.size() > sk.assignment.size());

  PermSystem cyclic{2, 3, {perm({1, 2}), perm({2, 1}), perm({1, 2})}};
  CHECK_THROWS_AS(skeleton_from_system({2, 3}, cyclic, true), std::invalid_argument);
  CHECK_NOTHROW(skeleton_from_system({2, 3}, cyclic, false));
}

TEST_CASE("acyclic iff the dual staircases cohere, exhaustively at (3,3)") {
  Shape s{3, 3};
  std::vector<Permutation> perms3;
  std::vector<int> base = {0, 1, 2};
  do perms3.push_back(Permutation{base});
  while (std::next_permutation(base.begin(), base.end()));
  for (auto& a : perms3)
    for (auto& b : perms3)
      for (auto& c : perms3) {
        PermSystem sys{3, 3, {a, b, c}};
        bool dual_ok;
        try {
          dual_ok = is_coherent(skeleton_from_system(s, sys, true));
        } catch (const std::invalid_argument&) {
          dual_ok = false;
        }
        CHECK(dual_ok == is_acyclic(sys));
      }
}

TEST_CASE("the unique level-1 skeleton always extends to level 2") {
  for (Shape s : {Shape{2, 2}, Shape{3, 2}, Shape{2, 3}, Shape{3, 3}, Shape{4, 2}}) {
    Triangulation t = solve(s, Constraints{}, SolveMode::Decide).found[0];
    SkeletonTriangulation lvl1 = restrict_to_skeleton(t, 1);
    auto r = extend_skeleton(lvl1, 2);
    REQUIRE(r.sk.has_value());
    CHECK(is_coherent(*r.sk));
  }
}

TEST_CASE("cyclically triangulated prism squares do not extend") {
  Shape s{3, 2};
  SkeletonTriangulation sk = restrict_to_skeleton(staircase(perm({1, 2, 3})), 2);
  // re-triangulate the three squares with the cyclic diagonals 1->2->3->1
  auto square = [&](int i, int j, bool forward) {
    Face f{(1u << i) | (1u << j), 0b11};
    sk.assignment[f] = staircase(forward ? perm({1, 2}) : perm({2, 1}));
  };
  square(0, 1, true);   // 1 -> 2
  square(1, 2, true);   // 2 -> 3
  square(0, 2, false);  // 3 -> 1
  REQUIRE(is_coherent(sk));
  auto r = extend_skeleton(sk, 3);
  CHECK(!r.sk.has_value());
  REQUIRE(r.witness.has_value());
  CHECK(*r.witness == full_face(s));

  // the acyclic choice extends
  SkeletonTriangulation ok = restrict_to_skeleton(staircase(perm({1, 2, 3})), 2);
  auto r2 = extend_skeleton(ok, 3);
  REQUIRE(r2.sk.has_value());
  CHECK(r2.sk->assignment.at(full_face(s)) == staircase(perm({1, 2, 3})));
}

TEST_CASE("skeleton constraints pin the boundary in a full solve") {
  Shape s{3, 3};
  auto all = solve(s, Constraints{}, SolveMode::Enumerate);
  Triangulation t0 = all.found[60];
  SkeletonTriangulation bdry = restrict_to_skeleton(t0, s.dim() - 1);
  Constraints c;
  c.faces = skeleton_constraints(bdry);
  auto res = solve(s, c, SolveMode::Enumerate);
  CHECK(std::count(res.found.begin(), res.found.end(), t0) == 1);
  for (auto& t : res.found)
    CHECK(restrict_to_skeleton(t, s.dim() - 1).assignment == bdry.assignment);
}

TEST_CASE("extending a boundary skeleton to the full product") {
  Shape s{3, 3};
  Triangulation t0 = solve(s, Constraints{}, SolveMode::Decide).found[0];
  SkeletonTriangulation bdry = restrict_to_skeleton(t0, s.dim() - 1);
  auto r = extend_skeleton(bdry, s.dim());
  REQUIRE(r.sk.has_value());
  CHECK(is_coherent(*r.sk));
  Triangulation got = r.sk->assignment.at(full_face(s));
  CHECK(is_triangulation(got));
  CHECK(restrict_to_skeleton(got, s.dim() - 1).assignment == bdry.assignment);
}

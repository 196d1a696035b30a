#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "prodtri/core.hpp"
#include "prodtri/geometry.hpp"

#include <random>

using namespace prodtri;

namespace {

Mask cell(const Shape& s, std::initializer_list<const char*> toks) {
  return parse_cell(std::vector<std::string>(toks.begin(), toks.end()), s);
}

}  // namespace

TEST_CASE("full simplex detection") {
  Shape s22{2, 2};
  CHECK(is_full_simplex(cell(s22, {"1A", "1B", "2B"}), s22));
  CHECK_FALSE(is_full_simplex(cell(s22, {"1A", "1B", "2A", "2B"}), s22));

  Shape s34{3, 4};
  CHECK(is_full_simplex(cell(s34, {"1A", "3A", "3B", "3C", "1D", "2D"}), s34));

  CHECK_THROWS_AS(parse_cell({"7A"}, s22), std::invalid_argument);
}

TEST_CASE("proper intersection, small cases") {
  Shape s22{2, 2};
  Mask t1 = cell(s22, {"1A", "1B", "2B"});
  Mask t2 = cell(s22, {"1A", "2A", "2B"});
  Mask t3 = cell(s22, {"1A", "1B", "2A"});
  CHECK(properly_intersect(t1, t2, s22));
  CHECK_FALSE(properly_intersect(t1, t3, s22));
  CHECK(properly_intersect(t1, t1, s22));
}

TEST_CASE("proper intersection, the forced-simplex pair") {
  Shape s{3, 4};
  Mask a = cell(s, {"1A", "3A", "3B", "3C", "1D", "2D"});
  Mask b = cell(s, {"1A", "1D", "2B", "2D", "3A", "3C"});
  CHECK(is_full_simplex(b, s));
  CHECK_FALSE(properly_intersect(a, b, s));
  CHECK_FALSE(oracle_properly_intersect(a, b, s));
}

TEST_CASE("simplex counts") {
  CHECK(simplex_count(Shape{2, 2}) == 2);
  for (int n = 2; n <= 5; ++n) CHECK(simplex_count(Shape{n, 2}) == n);
  CHECK(simplex_count(Shape{3, 4}) == 10);
}

TEST_CASE("spanning tree enumeration matches the bipartite count") {
  auto count = [](int n, int d) {
    long long c = 1;
    for (int i = 0; i < d - 1; ++i) c *= n;
    for (int i = 0; i < n - 1; ++i) c *= d;
    return c;
  };
  for (auto [n, d] : {std::pair{2, 2}, {3, 2}, {3, 3}, {3, 4}, {4, 3}}) {
    Shape s{n, d};
    auto trees = spanning_trees(s);
    CHECK((long long)trees.size() == count(n, d));
    for (Mask t : trees) CHECK(is_full_simplex(t, s));
  }
}

TEST_CASE("is_triangulation on the square") {
  Shape s{2, 2};
  std::vector<Mask> good = {cell(s, {"1A", "1B", "2B"}), cell(s, {"1A", "2A", "2B"})};
  std::vector<Mask> bad = {cell(s, {"1A", "1B", "2B"}), cell(s, {"1B", "2A", "2B"})};
  CHECK(is_triangulation(good, s));
  CHECK_FALSE(is_triangulation(bad, s));
}

TEST_CASE("properties: symmetry and oracle agreement at (3,3)") {
  Shape s{3, 3};
  auto trees = spanning_trees(s);
  std::mt19937 rng(7);
  for (int iter = 0; iter < 400; ++iter) {
    Mask a = trees[rng() % trees.size()];
    Mask b = trees[rng() % trees.size()];
    bool p = properly_intersect(a, b, s);
    CHECK(p == properly_intersect(b, a, s));
    CHECK(p == oracle_properly_intersect(a, b, s));
  }
}

TEST_CASE("restriction of a triangulation to faces") {
  Shape s{2, 2};
  Triangulation t{s, {cell(s, {"1A", "1B", "2B"}), cell(s, {"1A", "2A", "2B"})}};
  t.canonicalize();
  auto whole = restrict_triangulation(t, full_face(s));
  CHECK(whole == t);
  auto edge = restrict_triangulation(t, Face{0b01, 0b11});  // row 1 x both cols
  CHECK(edge.cells.size() == 1);
  CHECK(edge.shape == Shape{1, 2});
}

TEST_CASE("boundary ridge test") {
  Shape s{2, 2};
  CHECK(is_boundary_ridge(cell(s, {"1A", "1B"}), s));       // misses row 2
  CHECK_FALSE(is_boundary_ridge(cell(s, {"1A", "2B"}), s)); // the diagonal
}

TEST_CASE("degenerate shapes have the unique trivial triangulation") {
  for (Shape s : {Shape{1, 4}, Shape{4, 1}, Shape{1, 1}}) {
    auto trees = spanning_trees(s);
    REQUIRE(trees.size() == 1);
    CHECK(trees[0] == s.grid());
    CHECK(simplex_count(s) == 1);
    CHECK(is_triangulation(trees, s));
  }
}

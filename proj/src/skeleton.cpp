#include "prodtri/skeleton.hpp"

#include <bit>

namespace prodtri {

namespace {

bool subface(const Face& g, const Face& f) {
  return (g.rows & ~f.rows) == 0 && (g.cols & ~f.cols) == 0;
}

// position of each set bit of `sub` within the set bits of `sup`
uint32_t pack_bits(uint32_t sub, uint32_t sup) {
  uint32_t out = 0;
  int idx = 0;
  for (uint32_t bits = sup; bits; bits &= bits - 1, ++idx)
    if (sub & bits & (~bits + 1)) out |= 1u << idx;
  return out;
}

}  // namespace

Face face_in_face(const Face& g, const Face& f) {
  if (!subface(g, f)) throw std::invalid_argument("not a subface");
  return Face{pack_bits(g.rows, f.rows), pack_bits(g.cols, f.cols)};
}

bool is_coherent(const SkeletonTriangulation& sk) {
  std::vector<std::pair<Face, Triangulation>> lifted;
  for (const auto& [f, t] : sk.assignment) {
    if (!f.valid(sk.shape) || t.shape != face_shape(f) || !is_triangulation(t)) return false;
    lifted.emplace_back(f, lift_triangulation(t, f, sk.shape));
  }
  for (size_t i = 0; i < lifted.size(); ++i)
    for (size_t j = i + 1; j < lifted.size(); ++j) {
      Face h{lifted[i].first.rows & lifted[j].first.rows,
             lifted[i].first.cols & lifted[j].first.cols};
      if (h.rows == 0 || h.cols == 0) continue;
      if (!(restrict_triangulation(lifted[i].second, h) ==
            restrict_triangulation(lifted[j].second, h)))
        return false;
    }
  return true;
}

SkeletonTriangulation restrict_to_skeleton(const Triangulation& t, int k) {
  if (k < 0 || k > t.shape.dim()) throw std::invalid_argument("bad skeleton level");
  SkeletonTriangulation sk{t.shape, k, {}};
  for (const Face& f : faces_up_to(t.shape, k)) sk.assignment[f] = restrict_triangulation(t, f);
  return sk;
}

SkeletonTriangulation skeleton_from_system(const Shape& s, const PermSystem& sys, bool with_dual) {
  if (sys.symbols != s.n || sys.nodes != s.d)
    throw std::invalid_argument("permutation system does not match the shape");
  SkeletonTriangulation sk{s, 0, {}};

  auto insert_with_subfaces = [&](const Face& f, const Triangulation& t) {
    Triangulation big = lift_triangulation(t, f, s);
    for (uint32_t rs = f.rows; rs; rs = (rs - 1) & f.rows) {
      for (uint32_t cs = f.cols; cs; cs = (cs - 1) & f.cols) {
        Face g{rs, cs};
        Triangulation sub = restrict_triangulation(big, g);
        auto [it, fresh] = sk.assignment.emplace(g, sub);
        if (!fresh && !(it->second == sub))
          throw std::logic_error("system faces clash on " + mask_to_string(face_grid(g, s), s));
        sk.level = std::max(sk.level, g.dim());
      }
    }
  };

  uint32_t all_rows = (1u << s.n) - 1, all_cols = (1u << s.d) - 1;
  for (int x = 0; x < s.d; ++x)
    for (int y = x + 1; y < s.d; ++y)
      insert_with_subfaces(Face{all_rows, (1u << x) | (1u << y)},
                           staircase(sys.perms[edge_id(x, y, s.d)]));
  if (s.d == 1) insert_with_subfaces(Face{all_rows, 1u}, Triangulation{{s.n, 1}, {Shape{s.n, 1}.grid()}});

  if (with_dual) {
    PermSystem dual = dual_system(sys);  // throws with the cyclic triple
    for (int i = 0; i < s.n; ++i)
      for (int j = i + 1; j < s.n; ++j)
        insert_with_subfaces(Face{(1u << i) | (1u << j), all_cols},
                             transpose_triangulation(staircase(dual.perms[edge_id(i, j, s.n)])));
  }
  return sk;
}

std::vector<FaceConstraint> skeleton_constraints(const SkeletonTriangulation& sk) {
  std::vector<FaceConstraint> out;
  for (const auto& [f, t] : sk.assignment) out.push_back({f, t});
  return out;
}

ExtendResult extend_skeleton(const SkeletonTriangulation& sk, int to_level, int jobs) {
  const Shape& s = sk.shape;
  if (to_level < sk.level || to_level > s.dim())
    throw std::invalid_argument("bad target level");
  for (const Face& f : faces_up_to(s, sk.level))
    if (!sk.assignment.count(f))
      throw std::invalid_argument("skeleton is missing a level-" + std::to_string(f.dim()) +
                                  " face");
  if (!is_coherent(sk)) throw std::invalid_argument("skeleton is not coherent");

  SkeletonTriangulation cur = sk;
  for (int lvl = sk.level + 1; lvl <= to_level; ++lvl) {
    for (const Face& f : faces_up_to(s, lvl)) {
      if (f.dim() != lvl) continue;
      // the face's boundary is fixed by the previous level, so each face is
      // independent and the result stays coherent
      Constraints c;
      for (uint32_t bits = f.rows; std::popcount(f.rows) > 1 && bits; bits &= bits - 1) {
        Face g{f.rows & ~(bits & (~bits + 1)), f.cols};
        c.faces.push_back({face_in_face(g, f), cur.assignment.at(g)});
      }
      for (uint32_t bits = f.cols; std::popcount(f.cols) > 1 && bits; bits &= bits - 1) {
        Face g{f.rows, f.cols & ~(bits & (~bits + 1))};
        c.faces.push_back({face_in_face(g, f), cur.assignment.at(g)});
      }
      SolveResult r = solve(face_shape(f), c, SolveMode::Decide, 0, jobs);
      if (!r.sat) return {std::nullopt, f};
      cur.assignment[f] = r.found[0];
    }
    cur.level = lvl;
  }
  return {std::move(cur), std::nullopt};
}

}  // namespace prodtri

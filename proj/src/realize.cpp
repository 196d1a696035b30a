#include "prodtri/realize.hpp"

#include <algorithm>

#include "prodtri/solver.hpp"

namespace prodtri {

namespace {

Triangulation permute_rows(const Triangulation& t, const std::vector<int>& new_of_old) {
  const Shape& s = t.shape;
  Triangulation out{s, {}};
  for (Mask c : t.cells) {
    Mask m = 0;
    for (int r = 0; r < s.n; ++r)
      for (int col = 0; col < s.d; ++col)
        if (has_vertex(c, s, r, col)) m |= Mask(1) << vbit(s, new_of_old[r], col);
    out.cells.push_back(m);
  }
  out.canonicalize();
  return out;
}

PositionVector without_coordinate(const PositionVector& v, int i) {
  PositionVector out;
  for (int c = 0; c < (int)v.size(); ++c)
    if (c != i) out.push_back(v[c]);
  return out;
}

std::optional<Triangulation> solve_with_positions(const PositionSystem& u, Constraints c,
                                                  int jobs) {
  Shape s{u.count(), u.dims()};
  for (const auto& v : u.vectors) c.positions.push_back(v);
  SolveResult r = solve(s, c, SolveMode::Decide, 0, jobs);
  if (!r.sat) return std::nullopt;
  return r.found[0];
}

}  // namespace

std::optional<std::pair<PositionSystem, ReductionStep>> reduce_positive_coordinate(
    const PositionSystem& u) {
  int n = u.count(), d = u.dims();
  if (n < 2) return std::nullopt;
  // prefer removing the latest vector, then the lowest coordinate
  int best_c = -1, best_v = -1;
  for (int c = 0; c < d; ++c) {
    int zero_at = -1, zeros = 0;
    for (int v = 0; v < n; ++v)
      if (u.vectors[v][c] == 0) {
        zero_at = v;
        ++zeros;
      }
    if (zeros == 1 && zero_at > best_v) {
      best_c = c;
      best_v = zero_at;
    }
  }
  if (best_c < 0) return std::nullopt;
  PositionSystem red;
  for (int v = 0; v < n; ++v) {
    if (v == best_v) continue;
    PositionVector w = u.vectors[v];
    w[best_c] -= 1;
    red.vectors.push_back(std::move(w));
  }
  return std::make_pair(std::move(red), ReductionStep{ReductionStep::Kind::StripPositive, best_c,
                                                      u.vectors[best_v], best_v});
}

std::optional<std::pair<PositionSystem, ReductionStep>> drop_null_coordinate(
    const PositionSystem& u) {
  int n = u.count(), d = u.dims();
  if (d < 2) return std::nullopt;
  for (int c = 0; c < d; ++c) {
    bool null = true;
    for (int v = 0; v < n; ++v) null &= u.vectors[v][c] == 0;
    if (!null) continue;
    PositionSystem red;
    for (int v = 0; v < n; ++v) red.vectors.push_back(without_coordinate(u.vectors[v], c));
    return std::make_pair(std::move(red),
                          ReductionStep{ReductionStep::Kind::DropNull, c, std::nullopt, -1});
  }
  return std::nullopt;
}

Triangulation glue_and_cone(const Triangulation& t1, const Triangulation& t2, int opposite_col) {
  int n = t2.shape.n, d = t1.shape.d;
  if (t1.shape.n != n - 1 || t2.shape.d != d - 1 || opposite_col < 0 || opposite_col >= d)
    throw std::invalid_argument("glue_and_cone: shapes do not fit");
  Shape s{n, d};
  uint32_t all_rows = (1u << n) - 1, all_cols = (1u << d) - 1;
  Face f1{all_rows >> 1, all_cols};                         // rows 1..n-1
  Face f2{all_rows, all_cols & ~(1u << opposite_col)};      // all but one column
  Triangulation big1 = lift_triangulation(t1, f1, s);
  Triangulation big2 = lift_triangulation(t2, f2, s);
  Face common{f1.rows, f2.cols};
  if (!(restrict_triangulation(big1, common) == restrict_triangulation(big2, common)))
    throw std::invalid_argument("glue_and_cone: facet triangulations disagree on " +
                                mask_to_string(face_grid(common, s), s));
  Mask apex = Mask(1) << vbit(s, n - 1, opposite_col);
  Triangulation out{s, {}};
  for (Mask c : big1.cells) out.cells.push_back(c | apex);
  for (Mask c : big2.cells) out.cells.push_back(c | apex);
  out.canonicalize();
  if (!is_triangulation(out)) throw std::logic_error("glue_and_cone: cone is not a triangulation");
  return out;
}

std::optional<Triangulation> inull_lift(const Triangulation& t_prime, int i, int jobs) {
  int n = t_prime.shape.n, d = t_prime.shape.d + 1;
  if (i < 0 || i >= d) throw std::invalid_argument("bad coordinate");
  PositionSystem old = unmixed_positions(t_prime);
  PositionSystem goal;
  for (auto& v : old.vectors) {
    PositionVector w = v;
    w.insert(w.begin() + i, 0);
    goal.vectors.push_back(std::move(w));
  }
  Constraints c;
  c.faces.push_back({Face{(1u << n) - 1, ((1u << d) - 1) & ~(1u << i)}, t_prime});
  if (auto t = solve_with_positions(goal, std::move(c), jobs)) return t;
  return solve_with_positions(goal, Constraints{}, jobs);
}

std::optional<Triangulation> realize_direct(const PositionSystem& u, int jobs) {
  check_position_sums(u);
  if (!is_spread_out(u)) return std::nullopt;
  return solve_with_positions(u, Constraints{}, jobs);
}

bool minimal_counterexample_screen(const PositionSystem& u) {
  int n = u.count(), d = u.dims();
  for (int c = 0; c < d; ++c) {
    int zeros = 0;
    for (int v = 0; v < n; ++v) zeros += u.vectors[v][c] == 0;
    if (zeros < 2 || zeros == n) return false;
  }
  return true;
}

std::optional<Realization> realize_positions(const PositionSystem& u, int jobs) {
  check_position_sums(u);
  if (!is_spread_out(u)) return std::nullopt;

  // reduce to a core, remembering the system before each step
  std::vector<ReductionStep> steps;
  std::vector<PositionSystem> before;
  PositionSystem cur = u;
  for (;;) {
    if (auto r = drop_null_coordinate(cur)) {
      before.push_back(cur);
      steps.push_back(r->second);
      cur = std::move(r->first);
      continue;
    }
    if (auto r = reduce_positive_coordinate(cur)) {
      before.push_back(cur);
      steps.push_back(r->second);
      cur = std::move(r->first);
      continue;
    }
    break;
  }

  std::optional<Triangulation> t = realize_direct(cur, jobs);
  if (!t) return std::nullopt;

  for (size_t k = steps.size(); k-- > 0;) {
    const PositionSystem& goal = before[k];
    const ReductionStep& st = steps[k];
    int n = goal.count(), d = goal.dims();
    uint32_t all_cols = (1u << d) - 1;

    std::optional<Triangulation> next;
    if (st.kind == ReductionStep::Kind::DropNull) {
      next = inull_lift(*t, st.coordinate, jobs);
    } else {
      // find the companion facet triangulation and cone; the removed vector
      // goes to the last row first, then rows are renumbered back
      Constraints c2;
      Triangulation mid = restrict_triangulation(
          *t, Face{(1u << (n - 1)) - 1, all_cols & ~(1u << st.coordinate)});
      c2.faces.push_back({Face{(1u << (n - 1)) - 1, (1u << (d - 1)) - 1}, std::move(mid)});
      c2.positions.assign(n, std::nullopt);
      c2.positions[n - 1] = without_coordinate(*st.removed, st.coordinate);
      SolveResult r2 = solve(Shape{n, d - 1}, c2, SolveMode::Decide, 0, jobs);
      if (r2.sat) {
        Triangulation glued = glue_and_cone(*t, r2.found[0], st.coordinate);
        // rows of the reduced system occupy 1..n-1 in order; move the removed
        // vector's row from the end back to its place
        std::vector<int> new_of_old(n);
        for (int r = 0; r < n - 1; ++r) new_of_old[r] = r < st.removed_index ? r : r + 1;
        new_of_old[n - 1] = st.removed_index;
        next = permute_rows(glued, new_of_old);
      }
    }
    if (!next) next = solve_with_positions(goal, Constraints{}, jobs);  // complete fallback
    if (!next) return std::nullopt;
    t = std::move(next);
  }

  if (!(unmixed_positions(*t).vectors == u.vectors))
    throw std::logic_error("realization does not reproduce the requested positions");
  return Realization{std::move(*t), std::move(steps)};
}

}  // namespace prodtri

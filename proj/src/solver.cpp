#include "prodtri/solver.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>
#include <unordered_map>

namespace prodtri {

namespace {

// ---------------------------------------------------------------------------
// constraint plumbing

PermSystem delete_node(const PermSystem& s, int x) {
  PermSystem out;
  out.symbols = s.symbols;
  out.nodes = s.nodes - 1;
  std::vector<int> remap(s.nodes, -1);
  int next = 0;
  for (int v = 0; v < s.nodes; ++v)
    if (v != x) remap[v] = next++;
  out.perms.resize(edge_count(out.nodes));
  for (int a = 0; a < s.nodes; ++a)
    for (int b = a + 1; b < s.nodes; ++b) {
      if (a == x || b == x) continue;
      out.perms[edge_id(remap[a], remap[b], out.nodes)] = s.perms[edge_id(a, b, s.nodes)];
    }
  return out;
}

// All face constraints, explicit and system-derived, canonicalized.
std::vector<FaceConstraint> all_face_constraints(const Shape& s, const Constraints& c) {
  std::vector<FaceConstraint> out = c.faces;
  if (c.system) {
    auto derived = system_face_constraints(s, *c.system);
    out.insert(out.end(), derived.begin(), derived.end());
  }
  for (auto& fc : out) {
    if (!fc.face.valid(s)) throw std::invalid_argument("face constraint outside the grid");
    if (fc.tri.shape != face_shape(fc.face))
      throw std::invalid_argument("face constraint triangulation has the wrong shape");
    fc.tri.canonicalize();
    if (!is_triangulation(fc.tri))
      throw std::invalid_argument("face constraint is not a triangulation of its face");
  }
  // overlapping constraints must agree on the common subface
  for (size_t i = 0; i < out.size(); ++i)
    for (size_t j = i + 1; j < out.size(); ++j) {
      Face h{out[i].face.rows & out[j].face.rows, out[i].face.cols & out[j].face.cols};
      if (h.rows == 0 || h.cols == 0) continue;
      Triangulation a = restrict_triangulation(lift_triangulation(out[i].tri, out[i].face, s), h);
      Triangulation b = restrict_triangulation(lift_triangulation(out[j].tri, out[j].face, s), h);
      if (!(a == b))
        throw std::invalid_argument("face constraints clash on " + mask_to_string(face_grid(h, s), s));
    }
  return out;
}

void validate(const Shape& s, const Constraints& c) {
  if (!s.valid()) throw std::invalid_argument("bad shape");
  if (c.system) {
    if (!c.system->valid()) throw std::invalid_argument("malformed permutation system");
    if (c.system->symbols != s.n || c.system->nodes != s.d)
      throw std::invalid_argument("permutation system does not match the shape");
  }
  if (!c.positions.empty()) {
    if ((int)c.positions.size() != s.n)
      throw std::invalid_argument("need one (optional) position vector per row");
    for (const auto& v : c.positions) {
      if (!v) continue;
      if ((int)v->size() != s.d) throw std::invalid_argument("position vector has wrong length");
      int sum = 0;
      for (int x : *v) {
        if (x < 0) throw std::invalid_argument("negative position coordinate");
        sum += x;
      }
      if (sum != s.n - 1) throw std::invalid_argument("position vector sum is not n-1");
    }
  }
  for (Mask m : c.must_contain)
    if (!is_full_simplex(m, s))
      throw std::invalid_argument("must-contain cell is not a full simplex: " + mask_to_string(m, s));
  for (size_t i = 0; i < c.must_contain.size(); ++i)
    for (size_t j = i + 1; j < c.must_contain.size(); ++j)
      if (!properly_intersect(c.must_contain[i], c.must_contain[j], s))
        throw std::invalid_argument("must-contain cells intersect improperly");
}

bool passes_faces(Mask t, const Shape& s, const std::vector<FaceConstraint>& fcs) {
  for (const auto& fc : fcs) {
    Mask sub = project_mask(t & face_grid(fc.face, s), fc.face, s);
    bool ok = false;
    for (Mask cell : fc.tri.cells)
      if ((sub & ~cell) == 0) { ok = true; break; }
    if (!ok) return false;
  }
  return true;
}

bool passes_positions(Mask t, const Shape& s, const Constraints& c) {
  if (c.positions.empty() || s.d < 2) return true;
  MixedCell m = cell_to_minkowski(t, s);
  auto row = unmixed_row(m, s.d);
  if (!row || !c.positions[*row]) return true;
  return unmixed_position(m, s.d) == *c.positions[*row];
}

// ---------------------------------------------------------------------------
// compatibility table: bitset rows over the candidate list, built on demand

using Words = std::vector<uint64_t>;

class CompatTable {
 public:
  CompatTable(const Shape& s, const std::vector<Mask>& cand)
      : s_(s), cand_(cand), words_((cand.size() + 63) / 64), rows_(cand.size()) {
    if (cand.size() <= 4096)
      for (size_t i = 0; i < cand.size(); ++i) build(i);
  }

  size_t words() const { return words_; }

  const Words& row(size_t i) {
    {
      std::lock_guard lk(mu_);
      if (!rows_[i].empty() || cand_.empty()) return rows_[i];
    }
    Words w = compute(i);
    std::lock_guard lk(mu_);
    if (rows_[i].empty()) rows_[i] = std::move(w);
    return rows_[i];
  }

 private:
  void build(size_t i) { rows_[i] = compute(i); }

  Words compute(size_t i) const {
    Words w(words_, 0);
    for (size_t j = 0; j < cand_.size(); ++j)
      if (j != i && properly_intersect(cand_[i], cand_[j], s_)) w[j / 64] |= 1ull << (j % 64);
    if (w.empty()) w.resize(1);  // nonempty marks the row as built
    return w;
  }

  const Shape s_;
  const std::vector<Mask>& cand_;
  size_t words_;
  std::vector<Words> rows_;
  std::mutex mu_;
};

// ---------------------------------------------------------------------------
// ridge-frontier DFS

struct Shared {
  const Shape& s;
  const Constraints& constr;
  const std::vector<Mask>& cand;
  const std::vector<FaceConstraint>& fcs;
  CompatTable& compat;
  SolveMode mode;
  uint64_t limit;
  const std::vector<uint32_t>& order_key;  // branch exploration order
  size_t total;                            // simplex_count(s)

  std::mutex mu;
  std::vector<std::pair<size_t, Triangulation>> found;  // (seed, witness)
  std::atomic<uint64_t> count{0};
  std::atomic<uint64_t> nodes{0};
  std::atomic<size_t> best_seed{SIZE_MAX};  // decide: lowest seed with a hit
  std::atomic<bool> stop{false};
};

void verify_result(const Triangulation& t, const Shared& sh) {
  if (!is_triangulation(t)) throw std::logic_error("search produced a non-triangulation");
  for (const auto& fc : sh.fcs)
    if (!(restrict_triangulation(t, fc.face) == fc.tri))
      throw std::logic_error("search result violates a face constraint");
  if (!sh.constr.positions.empty() && sh.s.d >= 2) {
    PositionSystem u = unmixed_positions(t);
    for (int r = 0; r < sh.s.n; ++r)
      if (sh.constr.positions[r] && !(u.vectors[r] == *sh.constr.positions[r]))
        throw std::logic_error("search result violates a position constraint");
  }
  for (Mask m : sh.constr.must_contain)
    if (!std::binary_search(t.cells.begin(), t.cells.end(), m))
      throw std::logic_error("search result misses a must-contain cell");
}

class Dfs {
 public:
  Dfs(Shared& sh, size_t seed) : sh_(sh), seed_(seed) {}

  // chosen: indices into sh.cand; alive: candidates still compatible
  void run(std::vector<uint32_t> chosen, Words alive) {
    chosen_ = std::move(chosen);
    for (uint32_t i : chosen_)
      if (!push_ridges(i)) return;  // seed cells already clash
    descend(std::move(alive));
  }

  uint64_t nodes() const { return nodes_; }

 private:
  bool push_ridges(uint32_t idx) {
    Mask c = sh_.cand[idx];
    for (Mask bits = c; bits;) {
      Mask v = bits & (~bits + 1);
      bits ^= v;
      Mask r = c ^ v;
      int& cnt = ridges_[r];
      cnt += 1;
      trail_.push_back(r);
      int cap = is_boundary_ridge(r, sh_.s) ? 1 : 2;
      if (cnt > cap) return false;
    }
    return true;
  }

  void pop_ridges(size_t mark) {
    while (trail_.size() > mark) {
      Mask r = trail_.back();
      trail_.pop_back();
      if (--ridges_[r] == 0) ridges_.erase(r);
    }
  }

  void accept() {
    Triangulation t{sh_.s, {}};
    for (uint32_t i : chosen_) t.cells.push_back(sh_.cand[i]);
    t.canonicalize();
    verify_result(t, sh_);
    switch (sh_.mode) {
      case SolveMode::Decide: {
        std::lock_guard lk(sh_.mu);
        sh_.found.emplace_back(seed_, std::move(t));
        size_t cur = sh_.best_seed.load();
        while (seed_ < cur && !sh_.best_seed.compare_exchange_weak(cur, seed_)) {}
        done_ = true;
        break;
      }
      case SolveMode::Enumerate: {
        std::lock_guard lk(sh_.mu);
        sh_.found.emplace_back(seed_, std::move(t));
        if (sh_.limit && sh_.found.size() >= sh_.limit) sh_.stop.store(true);
        break;
      }
      case SolveMode::Count:
        sh_.count.fetch_add(1);
        break;
    }
  }

  void descend(Words alive) {
    if (done_ || sh_.stop.load(std::memory_order_relaxed)) return;
    if (sh_.mode == SolveMode::Decide && sh_.best_seed.load(std::memory_order_relaxed) < seed_)
      return;
    ++nodes_;

    // the open frontier: interior ridges covered exactly once
    int best_deg = INT32_MAX;
    Mask pivot = 0;
    bool open = false;
    std::vector<uint32_t> branch;
    std::vector<uint32_t> scratch;
    for (const auto& [r, cnt] : ridges_) {
      if (cnt != 1 || is_boundary_ridge(r, sh_.s)) continue;
      open = true;
      scratch.clear();
      for (size_t w = 0; w < alive.size(); ++w)
        for (uint64_t bits = alive[w]; bits;) {
          uint64_t b = bits & (~bits + 1);
          bits ^= b;
          uint32_t j = (uint32_t)(w * 64 + std::countr_zero(b));
          if ((sh_.cand[j] & r) == r) {
            scratch.push_back(j);
            if ((int)scratch.size() >= best_deg) break;
          }
        }
      if ((int)scratch.size() < best_deg) {
        best_deg = (int)scratch.size();
        pivot = r;
        branch = scratch;
        if (best_deg == 0) return;  // dead end
      }
    }
    (void)pivot;

    if (!open) {
      if (chosen_.size() == sh_.total) accept();
      return;  // smaller boundary-closed complex: impossible geometrically, dead otherwise
    }
    if (chosen_.size() >= sh_.total) return;

    std::sort(branch.begin(), branch.end(),
              [&](uint32_t a, uint32_t b) { return sh_.order_key[a] < sh_.order_key[b]; });
    for (uint32_t j : branch) {
      size_t mark = trail_.size();
      chosen_.push_back(j);
      if (push_ridges(j)) {
        Words next = alive;
        const Words& row = sh_.compat.row(j);
        for (size_t w = 0; w < next.size(); ++w) next[w] &= row[w];
        next[j / 64] &= ~(1ull << (j % 64));
        descend(std::move(next));
      }
      chosen_.pop_back();
      pop_ridges(mark);
      if (done_ || sh_.stop.load(std::memory_order_relaxed)) return;
    }
  }

  Shared& sh_;
  size_t seed_;
  std::vector<uint32_t> chosen_;
  std::unordered_map<Mask, int> ridges_;
  std::vector<Mask> trail_;
  uint64_t nodes_ = 0;
  bool done_ = false;
};

SolveResult solve_impl(const Shape& s, const Constraints& c, SolveMode mode, uint64_t limit,
                       int jobs, uint64_t shuffle_seed) {
  auto fcs = all_face_constraints(s, c);
  std::vector<Mask> cand = candidate_cells(s, c);
  size_t nc = cand.size();
  CompatTable compat(s, cand);

  std::vector<uint32_t> order_key(nc);
  std::iota(order_key.begin(), order_key.end(), 0);
  if (shuffle_seed) {
    std::mt19937_64 rng(shuffle_seed);
    std::shuffle(order_key.begin(), order_key.end(), rng);
  }

  Shared sh{s, c, cand, fcs, compat, mode, limit, order_key, (size_t)simplex_count(s)};

  Words full((nc + 63) / 64, 0);
  for (size_t j = 0; j < nc; ++j) full[j / 64] |= 1ull << (j % 64);

  if (!c.must_contain.empty()) {
    // a fixed nonempty seed makes the plain DFS duplicate-free
    std::vector<uint32_t> chosen;
    Words alive = full;
    std::vector<Mask> mc = c.must_contain;
    std::sort(mc.begin(), mc.end());
    mc.erase(std::unique(mc.begin(), mc.end()), mc.end());
    for (Mask m : mc) {
      auto it = std::lower_bound(cand.begin(), cand.end(), m);
      if (it == cand.end() || *it != m)
        throw std::invalid_argument("must-contain cell violates the other constraints: " +
                                    mask_to_string(m, s));
      uint32_t idx = (uint32_t)(it - cand.begin());
      chosen.push_back(idx);
      const Words& row = compat.row(idx);
      for (size_t w = 0; w < alive.size(); ++w) alive[w] &= row[w];
    }
    for (uint32_t i : chosen) alive[i / 64] &= ~(1ull << (i % 64));
    Dfs dfs(sh, 0);
    dfs.run(std::move(chosen), std::move(alive));
    sh.nodes += dfs.nodes();
  } else if (nc > 0) {
    // partition by the lowest-index cell: seed k forbids candidates below k
    std::atomic<size_t> next{0};
    auto worker = [&] {
      uint64_t local_nodes = 0;
      for (;;) {
        size_t k = next.fetch_add(1);
        if (k >= nc || sh.stop.load()) break;
        if (mode == SolveMode::Decide && sh.best_seed.load() < k) break;
        Words alive = full;
        const Words& row = compat.row(k);
        for (size_t w = 0; w < alive.size(); ++w) alive[w] &= row[w];
        for (size_t j = 0; j <= k; ++j) alive[j / 64] &= ~(1ull << (j % 64));
        Dfs dfs(sh, k);
        dfs.run({(uint32_t)k}, std::move(alive));
        local_nodes += dfs.nodes();
      }
      sh.nodes.fetch_add(local_nodes);
    };
    int nt = std::max(1, jobs);
    if (nt == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
      for (auto& t : pool) t.join();
    }
  }

  SolveResult out;
  out.nodes = sh.nodes.load();
  switch (mode) {
    case SolveMode::Decide: {
      size_t best = sh.best_seed.load();
      for (auto& [seed, t] : sh.found)
        if (seed == best) {
          out.found = {std::move(t)};
          break;
        }
      out.sat = !out.found.empty();
      out.count = out.sat ? 1 : 0;
      break;
    }
    case SolveMode::Enumerate: {
      std::vector<Triangulation> all;
      for (auto& [seed, t] : sh.found) all.push_back(std::move(t));
      std::sort(all.begin(), all.end(),
                [](const Triangulation& a, const Triangulation& b) { return a.cells < b.cells; });
      all.erase(std::unique(all.begin(), all.end()), all.end());
      if (limit && all.size() > limit) all.resize(limit);
      out.found = std::move(all);
      out.sat = !out.found.empty();
      out.count = out.found.size();
      break;
    }
    case SolveMode::Count:
      out.count = sh.count.load();
      out.sat = out.count > 0;
      break;
  }
  return out;
}

}  // namespace

std::vector<FaceConstraint> system_face_constraints(const Shape& s, const PermSystem& sys) {
  if (sys.symbols != s.n || sys.nodes != s.d)
    throw std::invalid_argument("permutation system does not match the shape");
  std::vector<FaceConstraint> out;
  uint32_t all_rows = (1u << s.n) - 1;
  for (int x = 0; x < s.d; ++x)
    for (int y = x + 1; y < s.d; ++y)
      out.push_back({Face{all_rows, (1u << x) | (1u << y)},
                     staircase(sys.perms[edge_id(x, y, s.d)])});
  return out;
}

std::vector<Mask> candidate_cells(const Shape& s, const Constraints& c) {
  validate(s, c);
  auto fcs = all_face_constraints(s, c);
  std::vector<Mask> out;
  for (Mask t : spanning_trees(s))
    if (passes_faces(t, s, fcs) && passes_positions(t, s, c)) out.push_back(t);
  return out;
}

Triangulation lift_triangulation(const Triangulation& local, const Face& f, const Shape& ambient) {
  Triangulation out{ambient, {}};
  for (Mask m : local.cells) out.cells.push_back(lift_mask(m, f, ambient));
  out.canonicalize();
  return out;
}

SolveResult solve(const Shape& s, const Constraints& c, SolveMode mode, uint64_t limit, int jobs,
                  uint64_t shuffle_seed) {
  if (mode == SolveMode::Decide && shuffle_seed) {
    // audit run in shuffled order, then a canonical run for the witness
    SolveResult audit = solve_impl(s, c, mode, limit, jobs, shuffle_seed);
    SolveResult canon = solve_impl(s, c, mode, limit, jobs, 0);
    if (audit.sat != canon.sat)
      throw std::logic_error("verdict changed under shuffled candidate order");
    canon.nodes += audit.nodes;
    return canon;
  }
  return solve_impl(s, c, mode, limit, jobs, shuffle_seed);
}

BoundaryCompletions count_boundary_completions(const Shape& s, const PermSystem& sys, int jobs) {
  if (sys.symbols != s.n || sys.nodes != s.d)
    throw std::invalid_argument("permutation system does not match the shape");
  if (!is_acyclic(sys)) throw std::invalid_argument("system is cyclic");

  std::vector<Face> fs = facets(s);
  std::vector<std::vector<Triangulation>> options(fs.size());
  for (size_t i = 0; i < fs.size(); ++i) {
    Constraints c;
    uint32_t all_rows = (1u << s.n) - 1, all_cols = (1u << s.d) - 1;
    if (fs[i].rows != all_rows) {
      int gone = std::countr_zero(~fs[i].rows & all_rows);
      c.system = delete_symbols(sys, 1u << gone).system;
    } else {
      int gone = std::countr_zero(~fs[i].cols & all_cols);
      c.system = delete_node(sys, gone);
    }
    if (c.system->nodes == 1) c.system.reset();  // a segment face has no pair constraints
    options[i] = solve(face_shape(fs[i]), c, SolveMode::Enumerate, 0, jobs).found;
  }

  // lift once for the pairwise coherence checks
  std::vector<std::vector<Triangulation>> lifted(fs.size());
  for (size_t i = 0; i < fs.size(); ++i)
    for (const auto& t : options[i]) lifted[i].push_back(lift_triangulation(t, fs[i], s));

  BoundaryCompletions out;
  std::vector<size_t> pick(fs.size(), 0);
  std::vector<std::map<Face, Triangulation>>& acc = out.completions;
  auto coherent = [&](size_t i) {
    for (size_t j = 0; j < i; ++j) {
      Face h{fs[i].rows & fs[j].rows, fs[i].cols & fs[j].cols};
      if (h.rows == 0 || h.cols == 0) continue;
      if (!(restrict_triangulation(lifted[i][pick[i]], h) ==
            restrict_triangulation(lifted[j][pick[j]], h)))
        return false;
    }
    return true;
  };
  auto rec = [&](auto&& self, size_t i) -> void {
    if (i == fs.size()) {
      std::map<Face, Triangulation> done;
      for (size_t j = 0; j < fs.size(); ++j) done[fs[j]] = options[j][pick[j]];
      acc.push_back(std::move(done));
      return;
    }
    for (pick[i] = 0; pick[i] < options[i].size(); ++pick[i])
      if (coherent(i)) self(self, i + 1);
  };
  rec(rec, 0);
  return out;
}

}  // namespace prodtri

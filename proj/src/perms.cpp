#include "prodtri/perms.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <string>

namespace prodtri {

bool valid_permutation(const Permutation& p, int k) {
  if ((int)p.order.size() != k) return false;
  uint32_t seen = 0;
  for (int v : p.order) {
    if (v < 0 || v >= k || (seen >> v & 1)) return false;
    seen |= 1u << v;
  }
  return true;
}

Permutation reversed(const Permutation& p) {
  Permutation r = p;
  std::reverse(r.order.begin(), r.order.end());
  return r;
}

int edge_count(int k) { return k * (k - 1) / 2; }

int edge_id(int x, int y, int k) {
  if (x > y) std::swap(x, y);
  if (x < 0 || x == y || y >= k) throw std::invalid_argument("bad edge");
  // edges 0y come first, then 1y, ...
  return x * k - x * (x + 1) / 2 + (y - x - 1);
}

std::pair<int, int> edge_nodes(int id, int k) {
  for (int x = 0; x < k; ++x) {
    int cnt = k - x - 1;
    if (id < cnt) return {x, x + 1 + id};
    id -= cnt;
  }
  throw std::invalid_argument("bad edge id");
}

bool PermSystem::valid() const {
  if (symbols < 1 || nodes < 1) return false;
  if ((int)perms.size() != edge_count(nodes)) return false;
  for (const auto& p : perms)
    if (!valid_permutation(p, symbols)) return false;
  return true;
}

namespace {

std::vector<int> symbol_positions(const Permutation& p) {
  std::vector<int> pos(p.size());
  for (int idx = 0; idx < p.size(); ++idx) pos[p.order[idx]] = idx;
  return pos;
}

}  // namespace

std::optional<Permutation> pair_order(const PermSystem& s, int i, int j) {
  if (i == j || i < 0 || j < 0 || i >= s.symbols || j >= s.symbols)
    throw std::invalid_argument("bad symbol pair");
  int k = s.nodes;
  if (k == 1) return Permutation{{0}};
  // outdegree of each node in the (i -> j) tournament
  std::vector<int> outdeg(k, 0);
  for (int x = 0; x < k; ++x)
    for (int y = x + 1; y < k; ++y) {
      auto pos = symbol_positions(s.perms[edge_id(x, y, k)]);
      bool x_to_y = pos[i] < pos[j];  // i precedes j reading from x
      outdeg[x_to_y ? x : y] += 1;
    }
  // a tournament is acyclic iff its score sequence is {0, ..., k-1}
  std::vector<int> nodes_by_score(k, -1);
  for (int x = 0; x < k; ++x) {
    if (nodes_by_score[k - 1 - outdeg[x]] != -1) return std::nullopt;
    nodes_by_score[k - 1 - outdeg[x]] = x;
  }
  return Permutation{nodes_by_score};
}

bool is_acyclic(const PermSystem& s) {
  for (int i = 0; i < s.symbols; ++i)
    for (int j = i + 1; j < s.symbols; ++j)
      if (!pair_order(s, i, j)) return false;
  return true;
}

std::optional<CyclicTriple> find_cyclic_triple(const PermSystem& s) {
  int k = s.nodes;
  for (int i = 0; i < s.symbols; ++i)
    for (int j = i + 1; j < s.symbols; ++j) {
      if (pair_order(s, i, j)) continue;
      auto dir = [&](int x, int y) {  // true: x -> y for pair (i, j)
        auto pos = symbol_positions(s.perms[edge_id(x, y, k)]);
        bool x_to_y = (x < y) ? pos[i] < pos[j] : pos[i] > pos[j];
        return x_to_y;
      };
      for (int x = 0; x < k; ++x)
        for (int y = 0; y < k; ++y)
          for (int z = 0; z < k; ++z) {
            if (x == y || y == z || x == z) continue;
            if (dir(x, y) && dir(y, z) && dir(z, x)) return CyclicTriple{i, j, x, y, z};
          }
    }
  return std::nullopt;
}

namespace {

[[noreturn]] void throw_cyclic(const CyclicTriple& t) {
  std::string msg = "cyclic system: pair (" + std::to_string(t.i + 1) + "," +
                    std::to_string(t.j + 1) + ") cycles through nodes " +
                    std::to_string(t.x) + "->" + std::to_string(t.y) + "->" +
                    std::to_string(t.z);
  throw std::invalid_argument(msg);
}

}  // namespace

PermSystem dual_system(const PermSystem& s) {
  PermSystem dual;
  dual.symbols = s.nodes;
  dual.nodes = s.symbols;
  dual.perms.resize(edge_count(s.symbols));
  for (int i = 0; i < s.symbols; ++i)
    for (int j = i + 1; j < s.symbols; ++j) {
      auto order = pair_order(s, i, j);
      if (!order) throw_cyclic(*find_cyclic_triple(s));
      dual.perms[edge_id(i, j, s.symbols)] = *order;
    }
  return dual;
}

PositionSystem positions_from_system(const PermSystem& s) {
  PositionSystem u;
  u.vectors.assign(s.symbols, PositionVector(s.nodes, 0));
  for (int i = 0; i < s.symbols; ++i)
    for (int j = i + 1; j < s.symbols; ++j) {
      auto order = pair_order(s, i, j);
      if (!order) throw_cyclic(*find_cyclic_triple(s));
      u.vectors[i][order->order.front()] += 1;  // source of (i -> j)
      u.vectors[j][order->order.back()] += 1;   // source of (j -> i)
    }
  return u;
}

Deletion delete_symbols(const PermSystem& s, uint32_t kill) {
  uint32_t all = (1u << s.symbols) - 1;
  if ((kill & all) == all) throw std::invalid_argument("cannot delete every symbol");
  if (kill & ~all) throw std::invalid_argument("killed symbol out of range");
  Deletion out;
  out.old_to_new.assign(s.symbols, -1);
  int next = 0;
  for (int v = 0; v < s.symbols; ++v)
    if (!(kill >> v & 1)) out.old_to_new[v] = next++;
  out.system.symbols = next;
  out.system.nodes = s.nodes;
  out.system.perms.resize(s.perms.size());
  for (size_t e = 0; e < s.perms.size(); ++e) {
    for (int v : s.perms[e].order)
      if (out.old_to_new[v] >= 0)
        out.system.perms[e].order.push_back(out.old_to_new[v]);
  }
  return out;
}

void check_position_sums(const PositionSystem& u) {
  int n = u.count();
  for (const auto& v : u.vectors) {
    int sum = 0;
    for (int x : v) {
      if (x < 0) throw std::invalid_argument("negative position coordinate");
      sum += x;
    }
    if (sum != n - 1) throw std::invalid_argument("position vector sum is not n-1");
  }
}

bool is_spread_out(const PositionSystem& u) {
  check_position_sums(u);
  int n = u.count(), d = u.dims();
  if (n > 20) throw std::invalid_argument("spread-out check limited to n <= 20");
  for (uint32_t sub = 1; sub < (1u << n); ++sub) {
    int k = std::popcount(sub);
    int total = 0;
    for (int c = 0; c < d; ++c) {
      int mn = INT32_MAX;
      for (int v = 0; v < n; ++v)
        if (sub >> v & 1) mn = std::min(mn, u.vectors[v][c]);
      total += mn;
    }
    if (total > n - k) return false;
  }
  return true;
}

std::vector<CoordClass> classify_coordinates(const PositionSystem& u) {
  int n = u.count(), d = u.dims();
  std::vector<CoordClass> out(d, CoordClass::Neither);
  for (int c = 0; c < d; ++c) {
    uint32_t seen = 0;
    bool all_zero = true;
    for (int v = 0; v < n; ++v) {
      int val = u.vectors[v][c];
      if (val != 0) all_zero = false;
      if (val < n) seen |= 1u << val;
    }
    if (all_zero) out[c] = CoordClass::Null;
    else if (seen == (n >= 32 ? ~0u : (1u << n) - 1)) out[c] = CoordClass::Spread;
  }
  return out;
}

Triangulation staircase(const Permutation& sigma) {
  int n = sigma.size();
  if (!valid_permutation(sigma, n)) throw std::invalid_argument("not a permutation");
  Shape s{n, 2};
  Triangulation t{s, {}};
  for (int k = 0; k < n; ++k) {
    Mask c = 0;
    for (int a = 0; a <= k; ++a) c |= Mask(1) << vbit(s, sigma.order[a], 1);
    for (int b = k; b < n; ++b) c |= Mask(1) << vbit(s, sigma.order[b], 0);
    t.cells.push_back(c);
  }
  t.canonicalize();
  return t;
}

Permutation extract_permutation(const Triangulation& t, int from_col) {
  const Shape& s = t.shape;
  if (s.d != 2) throw std::invalid_argument("extraction needs a prism shape (n,2)");
  if (!is_triangulation(t)) throw std::domain_error("not a triangulation of the prism");
  int n = s.n;
  // i precedes j iff some cell uses the diagonal (Y,i)-(X,j)
  std::vector<int> outdeg(n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      Mask diag = (Mask(1) << vbit(s, i, 1)) | (Mask(1) << vbit(s, j, 0));
      for (Mask c : t.cells)
        if ((c & diag) == diag) { outdeg[i] += 1; break; }
    }
  std::vector<int> by_score(n, -1);
  for (int i = 0; i < n; ++i) {
    if (outdeg[i] >= n || by_score[n - 1 - outdeg[i]] != -1)
      throw std::domain_error("prism triangulation has no consistent order");
    by_score[n - 1 - outdeg[i]] = i;
  }
  Permutation p{by_score};
  return from_col == 0 ? p : reversed(p);
}

PermSystem system_from_triangulation(const Triangulation& t) {
  const Shape& s = t.shape;
  PermSystem sys;
  sys.symbols = s.n;
  sys.nodes = s.d;
  sys.perms.resize(edge_count(s.d));
  for (int x = 0; x < s.d; ++x)
    for (int y = x + 1; y < s.d; ++y) {
      Face f{(1u << s.n) - 1, (1u << x) | (1u << y)};
      sys.perms[edge_id(x, y, s.d)] = extract_permutation(restrict_triangulation(t, f), 0);
    }
  return sys;
}

}  // namespace prodtri

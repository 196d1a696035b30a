#include "prodtri/core.hpp"

#include <algorithm>
#include <bit>

namespace prodtri {

std::string vertex_name(const Shape& s, int row, int col) {
  if (row < 0 || row >= s.n || col < 0 || col >= s.d)
    throw std::invalid_argument("vertex label out of range");
  return std::to_string(row + 1) + char('A' + col);
}

std::string mask_to_string(Mask m, const Shape& s) {
  std::string out = "{";
  bool first = true;
  for (int r = 0; r < s.n; ++r)
    for (int c = 0; c < s.d; ++c)
      if (has_vertex(m, s, r, c)) {
        if (!first) out += ",";
        out += vertex_name(s, r, c);
        first = false;
      }
  out += "}";
  return out;
}

Mask parse_cell(const std::vector<std::string>& tokens, const Shape& s) {
  Mask m = 0;
  for (const auto& t : tokens) {
    int row = -1, col = -1;
    std::string digits, letters;
    for (char ch : t) {
      if (ch >= '0' && ch <= '9') digits += ch;
      else if (ch >= 'A' && ch <= 'Z') letters += ch;
      else throw std::invalid_argument("bad vertex token: " + t);
    }
    if (digits.empty() || letters.size() != 1)
      throw std::invalid_argument("bad vertex token: " + t);
    row = std::stoi(digits) - 1;
    col = letters[0] - 'A';
    if (row < 0 || row >= s.n || col < 0 || col >= s.d)
      throw std::invalid_argument("vertex out of shape: " + t);
    m |= Mask(1) << vbit(s, row, col);
  }
  return m;
}

uint32_t touched_rows(Mask m, const Shape& s) {
  uint32_t rows = 0;
  for (int r = 0; r < s.n; ++r) {
    Mask rowbits = ((Mask(1) << s.d) - 1) << (r * s.d);
    if (m & rowbits) rows |= 1u << r;
  }
  return rows;
}

uint32_t touched_cols(Mask m, const Shape& s) {
  uint32_t cols = 0;
  for (int c = 0; c < s.d; ++c)
    for (int r = 0; r < s.n; ++r)
      if (has_vertex(m, s, r, c)) { cols |= 1u << c; break; }
  return cols;
}

namespace {

struct UnionFind {
  int parent[64];
  void init(int k) { for (int i = 0; i < k; ++i) parent[i] = i; }
  int find(int x) { while (parent[x] != x) x = parent[x] = parent[parent[x]]; return x; }
  // returns false if x and y were already connected
  bool unite(int x, int y) {
    x = find(x); y = find(y);
    if (x == y) return false;
    parent[x] = y;
    return true;
  }
};

}  // namespace

bool is_forest(Mask m, const Shape& s) {
  UnionFind uf;
  uf.init(s.n + s.d);
  for (int r = 0; r < s.n; ++r)
    for (int c = 0; c < s.d; ++c)
      if (has_vertex(m, s, r, c) && !uf.unite(r, s.n + c)) return false;
  return true;
}

bool is_full_simplex(Mask m, const Shape& s) {
  if (!s.valid()) throw std::invalid_argument("invalid shape");
  if (m & ~s.grid()) throw std::invalid_argument("cell outside shape grid");
  if (std::popcount(m) != s.n + s.d - 1) return false;
  return is_forest(m, s);  // n+d-1 edges + acyclic => spanning tree
}

long long binomial(int a, int b) {
  if (b < 0 || b > a) return 0;
  b = std::min(b, a - b);
  long long r = 1;
  for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
  return r;
}

long long simplex_count(const Shape& s) {
  if (!s.valid()) throw std::invalid_argument("invalid shape");
  return binomial(s.n + s.d - 2, s.n - 1);
}

std::vector<Mask> spanning_trees(const Shape& s) {
  if (!s.valid()) throw std::invalid_argument("invalid shape");
  int nd = s.n * s.d, k = s.n + s.d - 1;
  std::vector<Mask> out;
  if (k > nd) return out;
  if (k == nd) {  // n==1 or d==1
    out.push_back(s.grid());
    return out;
  }
  if (binomial(nd, k) > 50'000'000LL)
    throw std::invalid_argument("shape too large for tree enumeration");
  Mask m = (Mask(1) << k) - 1;
  Mask last = m << (nd - k);
  while (true) {
    if (is_forest(m, s)) out.push_back(m);
    if (m == last) break;
    Mask c = m & -m, r = m + c;  // Gosper's hack
    m = (((r ^ m) >> 2) / c) | r;
  }
  return out;
}

bool properly_intersect(Mask a, Mask b, const Shape& s) {
  if ((a | b) & ~s.grid()) throw std::invalid_argument("cell outside shape grid");
  // Edges of the union graph; nodes 0..n-1 are rows, n..n+d-1 columns.
  struct Edge { int r, c; bool in_a, in_b; };
  std::vector<Edge> edges;
  std::vector<std::vector<int>> adj(s.n + s.d);
  for (int r = 0; r < s.n; ++r)
    for (int c = 0; c < s.d; ++c) {
      bool ia = has_vertex(a, s, r, c), ib = has_vertex(b, s, r, c);
      if (!ia && !ib) continue;
      adj[r].push_back((int)edges.size());
      adj[s.n + c].push_back((int)edges.size());
      edges.push_back({r, c, ia, ib});
    }
  // DFS for a simple cycle whose edges alternate between the two simplices.
  uint64_t visited = 0;
  int start = 0;
  auto usable = [&](const Edge& e, int side) { return side == 0 ? e.in_a : e.in_b; };
  auto dfs = [&](auto&& self, int u, int side, int depth) -> bool {
    for (int ei : adj[u]) {
      const Edge& e = edges[ei];
      if (!usable(e, side)) continue;
      int v = (u < s.n) ? s.n + e.c : e.r;
      if (v == start && depth >= 3) return true;
      if (visited & (uint64_t(1) << v)) continue;
      visited |= uint64_t(1) << v;
      if (self(self, v, side ^ 1, depth + 1)) return true;
      visited &= ~(uint64_t(1) << v);
    }
    return false;
  };
  for (start = 0; start < s.n; ++start)
    for (int side : {0, 1}) {
      visited = uint64_t(1) << start;
      if (dfs(dfs, start, side, 0)) return false;  // alternating cycle: improper
    }
  return true;
}

int Face::dim() const { return std::popcount(rows) + std::popcount(cols) - 2; }

bool Face::valid(const Shape& s) const {
  return rows != 0 && cols != 0 && (rows >> s.n) == 0 && (cols >> s.d) == 0;
}

Face full_face(const Shape& s) {
  return Face{(1u << s.n) - 1, (1u << s.d) - 1};
}

Mask face_grid(const Face& f, const Shape& s) {
  Mask m = 0;
  for (int r = 0; r < s.n; ++r)
    for (int c = 0; c < s.d; ++c)
      if ((f.rows >> r & 1) && (f.cols >> c & 1)) m |= Mask(1) << vbit(s, r, c);
  return m;
}

Shape face_shape(const Face& f) {
  return Shape{std::popcount(f.rows), std::popcount(f.cols)};
}

Mask project_mask(Mask m, const Face& f, const Shape& s) {
  Shape fs = face_shape(f);
  Mask out = 0;
  int rr = 0;
  for (int r = 0; r < s.n; ++r) {
    if (!(f.rows >> r & 1)) continue;
    int cc = 0;
    for (int c = 0; c < s.d; ++c) {
      if (!(f.cols >> c & 1)) continue;
      if (has_vertex(m, s, r, c)) out |= Mask(1) << vbit(fs, rr, cc);
      ++cc;
    }
    ++rr;
  }
  return out;
}

Mask lift_mask(Mask small, const Face& f, const Shape& s) {
  Shape fs = face_shape(f);
  Mask out = 0;
  int rr = 0;
  for (int r = 0; r < s.n; ++r) {
    if (!(f.rows >> r & 1)) continue;
    int cc = 0;
    for (int c = 0; c < s.d; ++c) {
      if (!(f.cols >> c & 1)) continue;
      if (has_vertex(small, fs, rr, cc)) out |= Mask(1) << vbit(s, r, c);
      ++cc;
    }
    ++rr;
  }
  return out;
}

std::vector<Face> faces_up_to(const Shape& s, int max_dim) {
  std::vector<Face> out;
  for (uint32_t rows = 1; rows < (1u << s.n); ++rows)
    for (uint32_t cols = 1; cols < (1u << s.d); ++cols) {
      Face f{rows, cols};
      if (f.dim() <= max_dim) out.push_back(f);
    }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Face> facets(const Shape& s) {
  std::vector<Face> out;
  Face all = full_face(s);
  if (s.n > 1)
    for (int r = 0; r < s.n; ++r) out.push_back(Face{all.rows & ~(1u << r), all.cols});
  if (s.d > 1)
    for (int c = 0; c < s.d; ++c) out.push_back(Face{all.rows, all.cols & ~(1u << c)});
  std::sort(out.begin(), out.end());
  return out;
}

void Triangulation::canonicalize() {
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
}

bool is_triangulation(const std::vector<Mask>& cells, const Shape& s) {
  if ((long long)cells.size() != simplex_count(s)) return false;
  for (const Mask& m : cells)
    if (!is_full_simplex(m, s)) return false;
  for (size_t i = 0; i < cells.size(); ++i)
    for (size_t j = i + 1; j < cells.size(); ++j) {
      if (cells[i] == cells[j]) return false;
      if (!properly_intersect(cells[i], cells[j], s)) return false;
    }
  return true;
}

bool is_triangulation(const Triangulation& t) { return is_triangulation(t.cells, t.shape); }

Triangulation restrict_triangulation(const Triangulation& t, const Face& f) {
  if (!f.valid(t.shape)) throw std::invalid_argument("face out of shape");
  Shape fs = face_shape(f);
  Mask grid = face_grid(f, t.shape);
  Triangulation out{fs, {}};
  for (Mask c : t.cells) {
    Mask piece = project_mask(c & grid, f, t.shape);
    if (is_full_simplex(piece, fs)) out.cells.push_back(piece);
  }
  out.canonicalize();
  return out;
}

Mask transpose_mask(Mask m, const Shape& s) {
  Shape ts{s.d, s.n};
  Mask out = 0;
  for (int r = 0; r < s.n; ++r)
    for (int c = 0; c < s.d; ++c)
      if (has_vertex(m, s, r, c)) out |= Mask(1) << vbit(ts, c, r);
  return out;
}

Triangulation transpose_triangulation(const Triangulation& t) {
  Triangulation out{{t.shape.d, t.shape.n}, {}};
  for (Mask c : t.cells) out.cells.push_back(transpose_mask(c, t.shape));
  out.canonicalize();
  return out;
}

bool is_boundary_ridge(Mask ridge, const Shape& s) {
  return std::popcount(touched_rows(ridge, s)) < s.n ||
         std::popcount(touched_cols(ridge, s)) < s.d;
}

}  // namespace prodtri

#include "prodtri/io.hpp"

#include <algorithm>

namespace prodtri {

std::string column_label(int c) {
  if (c < 0 || c >= 26) throw std::invalid_argument("column index out of range");
  return std::string(1, char('A' + c));
}

int column_index(const std::string& label) {
  if (label.size() != 1 || label[0] < 'A' || label[0] > 'Z')
    throw std::invalid_argument("bad column label: " + label);
  return label[0] - 'A';
}

json cell_to_json(Mask m, const Shape& s) {
  json out = json::array();
  for (int r = 0; r < s.n; ++r)
    for (int c = 0; c < s.d; ++c)
      if (has_vertex(m, s, r, c)) out.push_back(vertex_name(s, r, c));
  return out;
}

Mask cell_from_json(const json& j, const Shape& s) {
  std::vector<std::string> toks;
  for (const auto& t : j) toks.push_back(t.get<std::string>());
  return parse_cell(toks, s);
}

json shape_to_json(const Shape& s) { return json{{"n", s.n}, {"d", s.d}}; }

Shape shape_from_json(const json& j) {
  Shape s{j.at("n").get<int>(), j.at("d").get<int>()};
  if (!s.valid()) throw std::invalid_argument("bad shape");
  return s;
}

json triangulation_to_json(const Triangulation& t) {
  json cells = json::array();
  for (Mask m : t.cells) cells.push_back(cell_to_json(m, t.shape));
  return json{{"shape", shape_to_json(t.shape)}, {"cells", cells}};
}

Triangulation triangulation_from_json(const json& j) {
  Triangulation t{shape_from_json(j.at("shape")), {}};
  for (const auto& c : j.at("cells")) t.cells.push_back(cell_from_json(c, t.shape));
  t.canonicalize();
  return t;
}

namespace {

std::string node_label(int x, bool columns) {
  return columns ? column_label(x) : std::to_string(x + 1);
}

int node_index(const std::string& s, bool columns) {
  if (columns) return column_index(s);
  return std::stoi(s) - 1;
}

}  // namespace

json system_to_json(const PermSystem& s, bool columns) {
  json perms = json::object();
  for (int e = 0; e < (int)s.perms.size(); ++e) {
    auto [x, y] = edge_nodes(e, s.nodes);
    json arr = json::array();
    for (int v : s.perms[e].order) arr.push_back(v + 1);
    perms[node_label(x, columns) + node_label(y, columns)] = arr;
  }
  json nodes = json::array();
  for (int x = 0; x < s.nodes; ++x) nodes.push_back(node_label(x, columns));
  return json{{"n", s.symbols}, {"columns", nodes}, {"perms", perms}};
}

PermSystem system_from_json(const json& j) {
  PermSystem s;
  s.symbols = j.at("n").get<int>();
  const auto& nodes = j.at("columns");
  s.nodes = (int)nodes.size();
  bool columns = nodes.size() > 0 && nodes[0].is_string() &&
                 nodes[0].get<std::string>().size() == 1 && std::isupper(nodes[0].get<std::string>()[0]);
  s.perms.resize(edge_count(s.nodes));
  int seen = 0;
  for (const auto& [key, arr] : j.at("perms").items()) {
    if (key.size() != 2) throw std::invalid_argument("bad edge key: " + key);
    int x = node_index(key.substr(0, 1), columns);
    int y = node_index(key.substr(1, 1), columns);
    Permutation p;
    for (const auto& v : arr) p.order.push_back(v.get<int>() - 1);
    if (x > y) {
      std::swap(x, y);
      p = reversed(p);
    }
    s.perms[edge_id(x, y, s.nodes)] = std::move(p);
    ++seen;
  }
  if (seen != edge_count(s.nodes)) throw std::invalid_argument("missing edge permutations");
  if (!s.valid()) throw std::invalid_argument("malformed permutation system");
  return s;
}

json positions_to_json(const PositionSystem& u) {
  json out = json::array();
  for (const auto& v : u.vectors) out.push_back(v);
  return out;
}

PositionSystem positions_from_json(const json& j) {
  PositionSystem u;
  for (const auto& v : j) u.vectors.push_back(v.get<PositionVector>());
  if (!u.vectors.empty())
    for (const auto& v : u.vectors)
      if (v.size() != u.vectors[0].size())
        throw std::invalid_argument("ragged position vectors");
  return u;
}

json skeleton_to_json(const SkeletonTriangulation& sk) {
  json faces = json::array();
  for (const auto& [f, t] : sk.assignment) {
    json rows = json::array(), cols = json::array();
    for (int r = 0; r < sk.shape.n; ++r)
      if (f.rows >> r & 1) rows.push_back(r + 1);
    for (int c = 0; c < sk.shape.d; ++c)
      if (f.cols >> c & 1) cols.push_back(column_label(c));
    json cells = json::array();
    for (Mask m : t.cells) cells.push_back(cell_to_json(m, t.shape));
    faces.push_back(json{{"rows", rows}, {"cols", cols}, {"cells", cells}});
  }
  return json{{"shape", shape_to_json(sk.shape)}, {"level", sk.level}, {"faces", faces}};
}

SkeletonTriangulation skeleton_from_json(const json& j) {
  SkeletonTriangulation sk{shape_from_json(j.at("shape")), j.at("level").get<int>(), {}};
  for (const auto& fj : j.at("faces")) {
    Face f{0, 0};
    for (const auto& r : fj.at("rows")) f.rows |= 1u << (r.get<int>() - 1);
    for (const auto& c : fj.at("cols")) f.cols |= 1u << column_index(c.get<std::string>());
    if (!f.valid(sk.shape)) throw std::invalid_argument("face out of shape");
    Triangulation t{face_shape(f), {}};
    for (const auto& c : fj.at("cells")) t.cells.push_back(cell_from_json(c, t.shape));
    t.canonicalize();
    sk.assignment[f] = std::move(t);
  }
  return sk;
}

json manifest_to_json(const RunManifest& m) {
  return json{{"command", m.command},
              {"shape", shape_to_json(m.shape)},
              {"constraint_digest", m.constraint_digest},
              {"verdict", m.verdict},
              {"count", m.count},
              {"nodes", m.nodes},
              {"wall_seconds", m.wall_seconds},
              {"version", m.version},
              {"artifacts", m.artifacts}};
}

std::string digest(const json& j) {
  std::string s = j.dump();
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
  return buf;
}

}  // namespace prodtri

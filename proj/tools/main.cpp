// Command-line front end: combinatorial queries on products of two simplices,
// constrained triangulation search, and the bundled experiment stages.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "prodtri/geometry.hpp"
#include "prodtri/pipeline.hpp"

using namespace prodtri;

namespace {

json read_input(const std::string& path) {
  if (path.empty() || path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return json::parse(ss.str());
  }
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open input file: " + path);
  return json::parse(in);
}

Permutation parse_perm_arg(const std::string& arg) {
  Permutation p;
  std::stringstream ss(arg);
  std::string tok;
  while (std::getline(ss, tok, ',')) p.order.push_back(std::stoi(tok) - 1);
  if (!valid_permutation(p, p.size()))
    throw std::invalid_argument("not a permutation of 1..k: " + arg);
  return p;
}

Constraints constraints_from_json(const json& j, const Shape& s) {
  Constraints c;
  if (j.contains("system")) c.system = system_from_json(j.at("system"));
  if (j.contains("faces")) {
    SkeletonTriangulation sk = skeleton_from_json(
        json{{"shape", shape_to_json(s)}, {"level", 0}, {"faces", j.at("faces")}});
    for (auto& [f, t] : sk.assignment) c.faces.push_back({f, t});
  }
  if (j.contains("positions"))
    for (const auto& v : j.at("positions")) {
      if (v.is_null()) c.positions.push_back(std::nullopt);
      else c.positions.push_back(v.get<PositionVector>());
    }
  return c;
}

void emit(const json& j, const std::string& format) {
  if (format == "json") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  // text: flat key: value lines for scalar fields, JSON for the rest
  if (j.is_object()) {
    for (const auto& [k, v] : j.items())
      std::cout << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
  } else {
    std::cout << j.dump() << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"triangulations of products of two simplices"};
  app.require_subcommand(1);

  std::string input, format = "json", mode = "decide", stage, perm_arg;
  int n = 0, d = 0, jobs = 1, level = -1, from_col = 0;
  uint64_t limit = 0, shuffle = 0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--input", input, "input JSON file (default: stdin)");
    cmd->add_option("--format", format, "json|text")->check(CLI::IsMember({"json", "text"}));
  };

  auto* c_acyc = app.add_subcommand("check-acyclic", "test a permutation system for acyclicity");
  add_common(c_acyc);
  auto* c_dual = app.add_subcommand("dual", "dual permutation system");
  add_common(c_dual);
  auto* c_pos = app.add_subcommand("positions", "position vectors of an acyclic system");
  add_common(c_pos);
  auto* c_spread = app.add_subcommand("spread-out", "test a position system for spread-out");
  add_common(c_spread);
  auto* c_stair = app.add_subcommand("staircase", "staircase prism triangulation");
  c_stair->add_option("--perm", perm_arg, "1-based order, e.g. 3,1,2")->required();
  c_stair->add_option("--format", format, "json|text");
  auto* c_extract = app.add_subcommand("extract", "permutation of a prism triangulation");
  add_common(c_extract);
  c_extract->add_option("--from-col", from_col, "reading direction (0 or 1)");
  auto* c_solve = app.add_subcommand("solve", "constrained triangulation search");
  add_common(c_solve);
  c_solve->add_option("-n", n, "rows")->required();
  c_solve->add_option("-d", d, "columns")->required();
  c_solve->add_option("--mode", mode, "decide|enumerate|count")
      ->check(CLI::IsMember({"decide", "enumerate", "count"}));
  c_solve->add_option("--limit", limit, "cap enumerate output (0 = unlimited)");
  c_solve->add_option("--jobs", jobs, "worker threads");
  c_solve->add_option("--shuffle", shuffle, "randomize candidate order (audit seed)");
  auto* c_bound = app.add_subcommand("boundary", "coherent boundary completions of a system");
  add_common(c_bound);
  c_bound->add_option("-n", n, "rows")->required();
  c_bound->add_option("-d", d, "columns")->required();
  c_bound->add_option("--jobs", jobs, "worker threads");
  auto* c_skel = app.add_subcommand("skeleton", "restrict a triangulation to a skeleton");
  add_common(c_skel);
  c_skel->add_option("--level", level, "skeleton level")->required();
  auto* c_real = app.add_subcommand("realize", "realize a position system");
  add_common(c_real);
  c_real->add_option("--jobs", jobs, "worker threads");
  auto* c_repro = app.add_subcommand("reproduce", "run a bundled experiment stage");
  c_repro->add_option("stage", stage, "s31|s32|spread-chain|parity|lemma1")->required();
  c_repro->add_option("--jobs", jobs, "worker threads");
  c_repro->add_option("--shuffle", shuffle, "randomize candidate order (audit seed)");
  c_repro->add_option("--format", format, "json|text");

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_acyc->parsed()) {
      PermSystem s = system_from_json(read_input(input));
      json out{{"acyclic", is_acyclic(s)}};
      if (auto t = find_cyclic_triple(s))
        out["cyclic_triple"] = json{{"symbols", json::array({t->i + 1, t->j + 1})},
                                    {"nodes", json::array({t->x, t->y, t->z})}};
      emit(out, format);
    } else if (c_dual->parsed()) {
      PermSystem s = system_from_json(read_input(input));
      emit(system_to_json(dual_system(s), /*columns=*/false), format);
    } else if (c_pos->parsed()) {
      PermSystem s = system_from_json(read_input(input));
      emit(positions_to_json(positions_from_system(s)), format);
    } else if (c_spread->parsed()) {
      PositionSystem u = positions_from_json(read_input(input));
      check_position_sums(u);
      emit(json{{"spread_out", is_spread_out(u)}}, format);
    } else if (c_stair->parsed()) {
      emit(triangulation_to_json(staircase(parse_perm_arg(perm_arg))), format);
    } else if (c_extract->parsed()) {
      Triangulation t = triangulation_from_json(read_input(input));
      Permutation p = extract_permutation(t, from_col);
      json arr = json::array();
      for (int v : p.order) arr.push_back(v + 1);
      emit(json{{"perm", arr}}, format);
    } else if (c_solve->parsed()) {
      Shape s{n, d};
      if (!s.valid()) throw std::invalid_argument("bad shape");
      json cj = json::object();
      if (!input.empty()) cj = read_input(input);
      Constraints c = constraints_from_json(cj, s);
      SolveMode sm = mode == "decide"    ? SolveMode::Decide
                     : mode == "enumerate" ? SolveMode::Enumerate
                                           : SolveMode::Count;
      auto r = solve(s, c, sm, limit, jobs, shuffle);
      RunManifest man;
      man.command = "solve";
      man.shape = s;
      man.constraint_digest = digest(cj);
      man.verdict = r.sat ? "SAT" : "UNSAT";
      man.count = r.count;
      man.nodes = r.nodes;
      json found = json::array();
      for (const auto& t : r.found) found.push_back(triangulation_to_json(t));
      man.artifacts = json{{"found", found}};
      emit(manifest_to_json(man), format);
    } else if (c_bound->parsed()) {
      Shape s{n, d};
      if (!s.valid()) throw std::invalid_argument("bad shape");
      PermSystem sys = system_from_json(read_input(input));
      auto bc = count_boundary_completions(s, sys, jobs);
      json comps = json::array();
      for (const auto& comp : bc.completions) {
        SkeletonTriangulation sk{s, s.dim() - 1, comp};
        comps.push_back(skeleton_to_json(sk));
      }
      emit(json{{"count", bc.completions.size()}, {"completions", comps}}, format);
    } else if (c_skel->parsed()) {
      Triangulation t = triangulation_from_json(read_input(input));
      emit(skeleton_to_json(restrict_to_skeleton(t, level)), format);
    } else if (c_real->parsed()) {
      PositionSystem u = positions_from_json(read_input(input));
      check_position_sums(u);
      auto r = realize_positions(u, jobs);
      json out{{"verdict", r ? "SAT" : "UNSAT"}};
      if (r) {
        out["triangulation"] = triangulation_to_json(r->tri);
        json steps = json::array();
        for (const auto& st : r->chain)
          steps.push_back(st.kind == ReductionStep::Kind::StripPositive
                              ? "strip-positive-coordinate"
                              : "drop-null-coordinate");
        out["reduction_chain"] = steps;
      }
      emit(out, format);
    } else if (c_repro->parsed()) {
      StageOptions opt;
      opt.jobs = jobs;
      opt.shuffle_seed = shuffle;
      RunManifest man = run_pipeline(stage, opt);
      emit(manifest_to_json(man), format);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::logic_error& e) {
    std::cerr << "consistency failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "consistency failure: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

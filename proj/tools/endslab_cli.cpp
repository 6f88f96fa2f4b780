// endslab: command-line runs over truncated Cayley graphs.
//
// Exit codes: 0 ok, 1 check failed, 2 invalid input, 3 budget or infeasible.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "endslab/endslab.hpp"

namespace {

using namespace endslab;
using nlohmann::json;

enum Exit { kOk = 0, kCheckFailed = 1, kInvalid = 2, kInfeasible = 3 };

struct Common {
  std::size_t budget = kDefaultNodeBudget;
  bool timing = false;
  std::string out;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParameter("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Accepts inline JSON or a path to a JSON file.
GroupSpec load_group(const std::string& arg) {
  const auto first = arg.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && arg[first] == '{') return parse_group_spec(arg);
  return parse_group_spec(read_file(arg));
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw InvalidParameter("cannot write " + c.out);
  f << text;
}

class Run {
 public:
  Run(const Common& c, std::string command) : common_(c), start_(std::chrono::steady_clock::now()) {
    manifest_.command = std::move(command);
    manifest_.budget = c.budget;
  }

  RunManifest& manifest() { return manifest_; }

  void finish(const json& payload) {
    stamp();
    emit(common_, make_report(manifest_, payload).dump(2) + "\n");
  }

  void finish_csv(const std::string& rows) {
    stamp();
    auto report = make_report(manifest_, json(rows));
    report["manifest"]["output_digest"] = fnv1a_hex(rows);
    emit(common_, "# manifest " + report["manifest"].dump() + "\n" + rows);
  }

 private:
  void stamp() {
    if (common_.timing) {
      manifest_.wall_time_s =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }
  }

  const Common& common_;
  RunManifest manifest_;
  std::chrono::steady_clock::time_point start_;
};

int cmd_growth(const Common& c, const std::string& group, int rmax, const std::string& format) {
  if (rmax < 0) throw InvalidParameter("--rmax must be >= 0");
  const auto spec = load_group(group);
  const auto oracle = make_group(spec);
  const auto g = stream_sphere_sizes(oracle, rmax, c.budget);
  Run run(c, "growth");
  run.manifest().group = spec;
  run.manifest().parameters = {{"rmax", rmax}, {"format", format}};
  run.manifest().budget_used = g.peak_resident;

  std::uint64_t ball = 0;
  json rows = json::array();
  std::ostringstream csv;
  csv << "r,sphere,ball\n";
  for (int r = 0; r <= rmax; ++r) {
    const auto s = g.size_at(r);
    ball += s;
    rows.push_back({{"r", r}, {"sphere", s}, {"ball", ball}});
    csv << r << ',' << s << ',' << ball << '\n';
  }
  if (format == "csv") {
    run.finish_csv(csv.str());
  } else {
    run.finish({{"rows", rows}, {"complete_group", g.complete_group}});
  }
  return kOk;
}

int cmd_end_depth(const Common& c, const std::string& group, int rmax, const std::string& truncation,
                  bool assume_one_ended) {
  const auto spec = load_group(group);
  const auto oracle = make_group(spec);
  EndDepthOptions opt;
  opt.budget = c.budget;
  if (truncation != "auto") {
    try {
      opt.truncation = std::stoi(truncation);
    } catch (const std::exception&) {
      throw InvalidParameter("--truncation must be 'auto' or an integer");
    }
  }
  if (assume_one_ended) opt.assume_one_ended = true;
  const auto profile = end_depth_profile(oracle, rmax, opt);
  const auto check = linear_end_depth_check(profile.values);

  Run run(c, "end-depth");
  run.manifest().group = spec;
  run.manifest().parameters = {{"rmax", rmax}, {"truncation", truncation}, {"assume_one_ended", assume_one_ended}};
  run.manifest().budget_used = profile.table_size;
  run.finish({{"profile", to_json(profile)}, {"linear_check", to_json(check)}});
  if (profile.not_one_ended) std::cerr << "warning: NotOneEnded: V0 is only defined for one-ended groups\n";
  return check.pass ? kOk : kCheckFailed;
}

int cmd_ends(const Common& c, const std::string& group, int rmax, std::vector<int> schedule) {
  if (rmax < 1) throw InvalidParameter("--rmax must be >= 1");
  const auto spec = load_group(group);
  const auto oracle = make_group(spec);
  if (schedule.empty()) schedule = {rmax + 3, rmax + 6};
  const auto table = explore(oracle, schedule.back(), c.budget);
  const auto est = end_count_estimate(table, rmax, schedule);
  Run run(c, "ends");
  run.manifest().group = spec;
  run.manifest().parameters = {{"rmax", rmax}, {"schedule", schedule}};
  run.manifest().budget_used = table.size();
  run.finish(to_json(est));
  return kOk;
}

int cmd_glpartition(const Common& c, const std::string& input, int a) {
  json j;
  try {
    j = json::parse(read_file(input));
  } catch (const json::exception& e) {
    throw InvalidParameter(std::string("metric space JSON: ") + e.what());
  }
  const auto space = metric_space_from_json(j);
  const auto p = build_gl_partition(space, a);
  const auto check = verify_gl_partition(space, p.block_labels(space), a);
  Run run(c, "glpartition");
  run.manifest().parameters = {{"input", input}, {"a", a}, {"points", space.size()}};
  run.manifest().budget_used = space.size();
  json verification = {{"labels_valid", check.labels_valid}, {"equal_or_disjoint", check.equal_or_disjoint},
                       {"covers", check.covers},             {"separated", check.separated},
                       {"nontrivial", check.nontrivial},     {"valid", check.valid()},
                       {"failures", check.failures}};
  run.finish({{"partition", to_json(p, space)}, {"verification", verification}});
  if (!p.trivial && !check.valid()) return kCheckFailed;
  return kOk;
}

// Witness file: {"n": N, "items": [{"K": [...], "r": R, "A": [...], "B": [...]}]},
// elements in the group's JSON layout.
int cmd_obss(const Common& c, const std::string& group, const std::string& witness_path) {
  const auto spec = load_group(group);
  const auto oracle = make_group(spec);
  json wj;
  try {
    wj = json::parse(read_file(witness_path));
  } catch (const json::exception& e) {
    throw InvalidParameter(std::string("witness JSON: ") + e.what());
  }
  struct RawItem {
    std::vector<Element> k, a, b;
    int r;
  };
  std::vector<RawItem> raw;
  int n = 0;
  try {
    n = wj.at("n").get<int>();
    for (const auto& it : wj.at("items")) {
      RawItem ri;
      for (const auto& e : it.at("K")) ri.k.push_back(oracle.from_json(e));
      for (const auto& e : it.at("A")) ri.a.push_back(oracle.from_json(e));
      for (const auto& e : it.at("B")) ri.b.push_back(oracle.from_json(e));
      ri.r = it.at("r").get<int>();
      raw.push_back(std::move(ri));
    }
  } catch (const json::exception& e) {
    throw InvalidParameter(std::string("witness JSON: ") + e.what());
  }

  // Grow the table until every named element is inside and the checks are
  // exact: reach of N(K, r) and diameters of all named sets.
  int R = 1;
  for (const auto& it : raw) R = std::max(R, it.r);
  for (;;) {
    const auto table = explore(oracle, R, c.budget);
    int need = R;
    bool found = true;
    ObssWitness w;
    w.n = n;
    for (const auto& it : raw) {
      ObssItem item;
      item.radius = it.r;
      int core_reach = 0, span = 0;
      auto place = [&](const std::vector<Element>& src, std::vector<VertexId>& dst, bool core) {
        for (const auto& e : src) {
          auto v = table.find(e);
          if (!v) {
            found = false;
            return;
          }
          dst.push_back(*v);
          span = std::max(span, table.distance(*v));
          if (core) core_reach = std::max(core_reach, table.distance(*v));
        }
      };
      place(it.k, item.core, true);
      place(it.a, item.side_a, false);
      place(it.b, item.side_b, false);
      need = std::max({need, core_reach + it.r, 3 * span});
      w.items.push_back(std::move(item));
    }
    if (!found) {
      if (table.complete_group()) throw InvalidParameter("witness element not in group");
      R *= 2;
      continue;
    }
    if (need > R) {
      R = need;
      continue;
    }
    const auto report = check_obss_witness(table, w);
    Run run(c, "obss");
    run.manifest().group = spec;
    run.manifest().parameters = {{"witness", witness_path}, {"n", n}, {"table_radius", R}};
    run.manifest().budget_used = table.size();
    run.finish(to_json(report));
    return report.passed() ? kOk : kCheckFailed;
  }
}

int cmd_classify(const Common& c, const std::string& group, const std::string& mode, int a, int n, int rmax) {
  const auto spec = load_group(group);
  const auto oracle = make_group(spec);
  Run run(c, "classify");
  run.manifest().group = spec;
  Verdict v;
  if (mode == "criterion") {
    run.manifest().parameters = {{"mode", mode}, {"a", a}, {"n", n}};
    v = sphere_bound_criterion(oracle, a, n, c.budget);
  } else if (mode == "spheres") {
    run.manifest().parameters = {{"mode", mode}, {"rmax", rmax}};
    if (rmax < kDetectorMinRadius) throw InvalidParameter("--rmax must be >= 20 for the sphere detector");
    try {
      const auto g = stream_sphere_sizes(oracle, rmax, c.budget);
      run.manifest().budget_used = g.peak_resident;
      std::vector<std::uint64_t> sizes;
      for (int r = 0; r <= rmax; ++r) sizes.push_back(g.size_at(r));
      v = bounded_sphere_detector(sizes);
      v.numbers["sizes_exact_to"] = rmax;
    } catch (const BudgetExceeded& e) {
      v.kind = VerdictKind::infeasible;
      v.details = std::string("sphere sizes unavailable: ") + e.what();
      v.numbers = {{"radius_reached", e.radius_reached()}, {"rmax", rmax}};
    }
  } else {
    throw InvalidParameter("--mode must be 'spheres' or 'criterion'");
  }
  run.finish(to_json(v));
  return v.kind == VerdictKind::infeasible ? kInfeasible : kOk;
}

int cmd_demo_cover(const Common& c, const std::string& group, int a, int n) {
  const auto spec = load_group(group);
  const auto oracle = make_group(spec);
  const auto rep = sphere_cover_demo(oracle, a, n, c.budget);
  Run run(c, "demo-cover");
  run.manifest().group = spec;
  run.manifest().parameters = {{"a", a}, {"n", n}};
  run.manifest().budget_used = static_cast<std::size_t>(rep.table_radius);
  run.finish(to_json(rep));
  if (!rep.hypothesis_met) return kOk;
  return rep.all_passed() ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"endslab: ends, end depth and sphere criteria on truncated Cayley graphs"};
  app.require_subcommand(1);
  Common common;
  if (const char* env = std::getenv("ENDSLAB_BUDGET")) {
    try {
      common.budget = std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "error: ENDSLAB_BUDGET is not a number\n";
      return kInvalid;
    }
  }
  app.add_option("--budget", common.budget, "node budget (also ENDSLAB_BUDGET)");
  app.add_flag("--timing", common.timing, "record wall time in the manifest");

  std::string group, format = "csv", truncation = "auto", input, witness, mode = "spheres";
  int rmax = 0, a = 3, n = 2;
  bool assume_one_ended = false;
  std::vector<int> schedule;

  auto add_group = [&](CLI::App* s) { s->add_option("--group", group, "group spec JSON or file")->required(); };
  auto add_out = [&](CLI::App* s) { s->add_option("--out", common.out, "output path (default stdout)"); };

  auto* growth = app.add_subcommand("growth", "sphere and ball sizes");
  add_group(growth);
  growth->add_option("--rmax", rmax)->required();
  growth->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
  add_out(growth);

  auto* depth = app.add_subcommand("end-depth", "end depth profile and the 4r check");
  add_group(depth);
  depth->add_option("--rmax", rmax)->required();
  depth->add_option("--truncation", truncation, "auto or N");
  depth->add_flag("--assume-one-ended", assume_one_ended);
  add_out(depth);

  auto* ends = app.add_subcommand("ends", "ends estimate");
  add_group(ends);
  ends->add_option("--rmax", rmax)->required();
  ends->add_option("--schedule", schedule, "increasing truncation radii");
  add_out(ends);

  auto* gl = app.add_subcommand("glpartition", "gl-partition of a finite metric space");
  gl->add_option("--input", input)->required();
  gl->add_option("--a", a);
  add_out(gl);

  auto* obss = app.add_subcommand("obss", "check a two-sided separation witness");
  add_group(obss);
  obss->add_option("--witness", witness)->required();
  add_out(obss);

  auto* classify = app.add_subcommand("classify", "virtual cyclicity evidence");
  add_group(classify);
  classify->add_option("--mode", mode)->check(CLI::IsMember({"spheres", "criterion"}));
  classify->add_option("--a", a);
  classify->add_option("--n", n);
  classify->add_option("--rmax", rmax)->default_val(30);
  add_out(classify);

  auto* demo = app.add_subcommand("demo-cover", "small-parameter sphere covering walk-through");
  add_group(demo);
  demo->add_option("--a", a);
  demo->add_option("--n", n);
  add_out(demo);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (*growth) return cmd_growth(common, group, rmax, format);
    if (*depth) return cmd_end_depth(common, group, rmax, truncation, assume_one_ended);
    if (*ends) return cmd_ends(common, group, rmax, schedule);
    if (*gl) return cmd_glpartition(common, input, a);
    if (*obss) return cmd_obss(common, group, witness);
    if (*classify) return cmd_classify(common, group, mode, a, n, rmax);
    if (*demo) return cmd_demo_cover(common, group, a, n);
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget: " << e.what() << '\n';
    return kInfeasible;
  } catch (const Infeasible& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const NotGeodesic& e) {
    std::cerr << "check failed: " << e.what() << '\n';
    return kCheckFailed;
  } catch (const TrivialPartition& e) {
    std::cerr << "check failed: " << e.what() << '\n';
    return kCheckFailed;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  }
  return kInvalid;
}

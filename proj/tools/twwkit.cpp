// twwkit: solve, verify and kernelize twin-width instances.
//
// Exit codes: 0 ok, 1 usage or unreadable input, 2 verification failure,
// 3 budget exceeded.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "tww/tww.hpp"

using json = nlohmann::json;
using namespace tww;

namespace {

constexpr int kUsage = 1;
constexpr int kVerify = 2;
constexpr int kBudget = 3;

struct Exit {
  int code;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "cannot read " << path << '\n';
    throw Exit{kUsage};
  }
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void spill(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    std::cerr << "cannot write " << path << '\n';
    throw Exit{kUsage};
  }
}

Trigraph load_graph(const std::string& path) {
  try {
    return parse_graph(slurp(path));
  } catch (const Error& e) {
    std::cerr << path << ": " << e.what() << '\n';
    throw Exit{kUsage};
  }
}

// File index (1-based) of each vertex label, in label order.
std::map<VertexId, std::size_t> file_index(const Trigraph& g) {
  std::map<VertexId, std::size_t> idx;
  for (VertexId v : g.vertices()) idx.emplace(v, idx.size() + 1);
  return idx;
}

json trace_json(const std::vector<RuleRecord>& trace, const std::map<VertexId, std::size_t>& idx) {
  json out = json::array();
  for (const auto& r : trace) {
    json site = r.site;
    // Sites are labels of intermediate trigraphs; original ones get their file index.
    if (auto it = idx.find(r.site); it != idx.end()) site = it->second;
    out.push_back({{"rule", r.rule}, {"site", site}});
  }
  return out;
}

json meta_json(const KernelMeta& m, const std::map<VertexId, std::size_t>& idx) {
  return {{"k", m.k},
          {"h_trajectory", m.core_sizes},
          {"floors", m.floors},
          {"path_lengths", m.path_lengths},
          {"rule_trace", trace_json(m.trace, idx)}};
}

json pairs_json(const std::vector<VertexPair>& ps, const std::map<VertexId, std::size_t>& idx) {
  json out = json::array();
  for (auto [a, b] : ps) out.push_back({idx.at(a), idx.at(b)});
  return out;
}

const char* kind_name(StumpKind k) {
  switch (k) {
    case StumpKind::Half: return "half";
    case StumpKind::Black: return "black";
    case StumpKind::Red: return "red";
  }
  return "?";
}

int cmd_solve(const std::string& path, const std::string& policy_text, std::optional<std::size_t> cap,
              unsigned threads, std::optional<std::uint64_t> seed, const std::string& report, bool join, bool fallback,
              std::size_t max_n) {
  Trigraph g = load_graph(path);
  if (g.empty()) {
    std::cerr << "empty graph\n";
    return kUsage;
  }
  BoundPolicy policy;
  try {
    policy = BoundPolicy::parse(policy_text);
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return kUsage;
  }
  SolverConfig cfg;
  cfg.threads = threads;
  cfg.max_n = max_n;
  SolveOptions so;
  so.join_roots = join;
  so.greedy_fallback = fallback;
  SolveReport rep;
  try {
    rep = solve(g, policy, cfg, so);
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return e.code() == Errc::BudgetExceeded ? kBudget : kUsage;
  }
  std::cout << emit_sequence(g, rep.sequence);
  if (!report.empty()) {
    auto idx = file_index(g);
    json j = meta_json(rep.meta, idx);
    j["width"] = rep.width;
    j["optimality"] = optimality_name(rep.optimality);
    j["method"] = rep.method;
    j["policy"] = policy.name();
    j["seed"] = seed ? json(*seed) : json(nullptr);
    spill(report, j.dump(2) + "\n");
  }
  if (cap && rep.width > *cap) {
    std::cerr << "width " << rep.width << " exceeds cap " << *cap << '\n';
    return kVerify;
  }
  return 0;
}

int cmd_verify(const std::string& gpath, const std::string& spath) {
  Trigraph g = load_graph(gpath);
  try {
    auto seq = parse_sequence(g, slurp(spath));
    std::cout << "width " << verify(g, seq, Completeness::PerComponent) << '\n';
    return 0;
  } catch (const Error& e) {
    std::cerr << spath << ": " << e.what() << '\n';
    return kVerify;
  }
}

int cmd_kernelize(const std::string& path, const std::string& target, const std::string& policy_text,
                  const std::string& trace_path) {
  Trigraph g = load_graph(path);
  KernelOutcome out;
  ReduceOptions opt;
  try {
    if (target == "tww2") {
      out = tww2_bikernel(g, opt);
    } else if (target == "general") {
      out = general_kernel(g, BoundPolicy::parse(policy_text), opt);
    } else {
      std::cerr << "--target must be tww2 or general\n";
      return kUsage;
    }
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return e.code() == Errc::BudgetExceeded ? kBudget : kUsage;
  }
  auto idx = file_index(g);
  json j;
  if (auto* s = std::get_if<KernelSolved>(&out)) {
    // Nothing left to kernelize; the instance is its own certificate.
    std::size_t w = verify(g, s->sequence, Completeness::Full);
    std::cout << "c solved during pruning, width " << w << '\n' << emit_graph(Trigraph::from_edges(1, {}));
    j = meta_json(s->meta, idx);
    j["solved"] = true;
    j["width"] = w;
  } else {
    const auto& k = std::get<KernelReduced>(out);
    std::cout << emit_graph(k.kernel);
    j = meta_json(k.meta, idx);
    j["solved"] = false;
    j["kernel_vertices"] = k.kernel.vertex_count();
    j["lift_chain"] = k.lift.chain();
  }
  j["target"] = target;
  if (!trace_path.empty()) spill(trace_path, j.dump(2) + "\n");
  return 0;
}

int cmd_fes(const std::string& path) {
  Trigraph g = load_graph(path);
  auto idx = file_index(g);
  json j = {{"k", feedback_edge_number(g)},
            {"feedback_edges", pairs_json(feedback_edge_set(g).edges, idx)},
            {"bridges", pairs_json(find_bridges(g), idx)}};
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_info(const std::string& path) {
  Trigraph g = load_graph(path);
  auto idx = file_index(g);
  json j = {{"n", g.vertex_count()},
            {"m", g.edge_count()},
            {"red_edges", g.red_edge_count()},
            {"max_red_degree", g.max_red_degree()},
            {"components", components(g).size()},
            {"k", feedback_edge_number(g)},
            {"bridges", find_bridges(g).size()}};
  if (is_connected(g) && !g.empty()) {
    json trees = json::array();
    for (const auto& t : find_dangling_trees(g)) {
      trees.push_back({{"anchor", idx.at(t.anchor)},
                       {"root", idx.at(t.root)},
                       {"size", t.vertices.size()},
                       {"black", t.black}});
    }
    j["dangling_trees"] = trees;
  } else {
    j["dangling_trees"] = nullptr;
  }
  json stumps = json::array();
  for (const auto& [owner, list] : classify_stumps(g)) {
    for (const Stump& s : list) {
      json vs = json::array();
      for (VertexId x : s.vertices()) vs.push_back(idx.at(x));
      stumps.push_back({{"owner", idx.at(owner)}, {"kind", kind_name(s.kind)}, {"vertices", vs}});
    }
  }
  j["stumps"] = stumps;
  std::cout << j.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"twin-width toolkit"};
  app.require_subcommand(1);

  std::string graph, seq, report, policy = "practical:12", target = "tww2", trace;
  std::optional<std::size_t> cap;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  std::size_t max_n = SolverConfig{}.max_n;
  bool join = false, fallback = false;

  auto* solve = app.add_subcommand("solve", "print a contraction sequence for a graph");
  solve->add_option("graph", graph, "graph file")->required();
  solve->add_option("--policy", policy, "path floor: theory or practical:<L>");
  solve->add_option("--cap", cap, "fail with exit 2 if the width exceeds this");
  solve->add_option("--threads", threads, "solver worker threads")->check(CLI::Range(1u, 256u));
  solve->add_option("--seed", seed, "recorded in the report");
  solve->add_option("--report", report, "write a JSON report here");
  solve->add_option("--max-n", max_n, "largest kernel the exact solver accepts");
  solve->add_flag("--join", join, "merge component roots into one vertex");
  solve->add_flag("--greedy-fallback", fallback, "use a greedy sequence when the kernel is too large");

  auto* ver = app.add_subcommand("verify", "replay a sequence and print its width");
  ver->add_option("graph", graph, "graph file")->required();
  ver->add_option("sequence", seq, "sequence file")->required();

  auto* ker = app.add_subcommand("kernelize", "print the kernel trigraph");
  ker->add_option("graph", graph, "graph file")->required();
  ker->add_option("--target", target, "tww2 or general");
  ker->add_option("--policy", policy, "path floor for --target general");
  ker->add_option("--trace", trace, "write the rule trace as JSON here");

  auto* fes = app.add_subcommand("fes", "feedback edge set and bridges");
  fes->add_option("graph", graph, "graph file")->required();

  auto* info = app.add_subcommand("info", "structural summary");
  info->add_option("graph", graph, "graph file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  try {
    if (*solve) return cmd_solve(graph, policy, cap, threads, seed, report, join, fallback, max_n);
    if (*ver) return cmd_verify(graph, seq);
    if (*ker) return cmd_kernelize(graph, target, policy, trace);
    if (*fes) return cmd_fes(graph);
    if (*info) return cmd_info(graph);
  } catch (const Exit& e) {
    return e.code;
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return e.code() == Errc::BudgetExceeded ? kBudget : kUsage;
  }
  return kUsage;
}

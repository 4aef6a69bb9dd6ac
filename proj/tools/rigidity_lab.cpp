// rigidity-lab: certify sparsity classes, build construction traces, assemble
// rigidity matrices, and run theorem-verification campaigns.
//
// usage: rigidity-lab <verb> [options] [files]
//   verbs: sparsity construct reduce rank flex decide fdcheck verify
//   global flags: --seed <u64>  --json  --tol <real>
//   exit codes: 0 success, 1 verification failure, 2 usage or input error

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rigidity/contexts.hpp"
#include "rigidity/coloured_graph.hpp"
#include "rigidity/harness.hpp"
#include "rigidity/moves.hpp"
#include "rigidity/numeric.hpp"
#include "rigidity/sparsity.hpp"

namespace {

using namespace rigidity;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string verb;
  std::uint64_t seed = 0;
  bool json = false;
  double tol = 1e-9;
  std::optional<std::string> cls;
  std::optional<std::string> theorem;
  std::optional<std::string> context_file;
  int n = -1;
  int samples = 50;
  int n_min = 2;
  int n_max = 10;
  double q = 3.0;
  int trials = 5;
  std::vector<std::string> files;
};

const char* kUsage =
    "usage: rigidity-lab <verb> [options] [files]\n"
    "verbs:\n"
    "  sparsity --class <name> <graph-file>          certify class membership\n"
    "  construct --class <name> -n <int> --seed <s>  sample a member with its trace\n"
    "  reduce --class <name> <graph-file>            reduce a member to a base\n"
    "  rank <placement-file> <graph-file>            assemble and rank the matrix\n"
    "  flex <placement-file> <graph-file>            nullspace and internal flexes\n"
    "  decide --context <file> <graph-file>          rigidity decision at random placements\n"
    "  fdcheck <placement-file> <graph-file>         finite-difference row validation\n"
    "  verify --theorem <name> [--samples N] [--nmin N] [--nmax N] [--q x] [--trials N]\n"
    "global flags: --seed <u64>  --json  --tol <real>\n"
    "classes: tight23 tight22 blue-limited mono-limited separable(b1,r1)\n"
    "theorems: sphere-23 cylinder-22 mixed-plane direction-length-lq\n"
    "          direction-length-euclidean separable\n";

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string row_label(const RowLabel& label) {
  if (label.is_normal) return "normal " + std::to_string(label.vertex);
  return std::string("edge ") + std::to_string(label.edge.u) + " " +
         std::to_string(label.edge.v) + " " + colour_code(label.edge.colour);
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open file: " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("cannot parse " + path + ": " + e.what());
  }
}

BiColouredMultigraph read_graph(const std::string& path) {
  try {
    return graph_from_json(read_json_file(path));
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    throw UsageError("bad graph file " + path + ": " + e.what());
  }
}

SparsityClass parse_class(const std::string& name) {
  if (name == "tight23") return SparsityClass::tight23();
  if (name == "tight22") return SparsityClass::tight22();
  if (name == "blue-limited") return SparsityClass::blue_limited();
  if (name == "mono-limited") return SparsityClass::mono_limited();
  if (name.rfind("separable(", 0) == 0 && name.back() == ')') {
    std::vector<std::pair<Colour, int>> blocks;
    std::string body = name.substr(10, name.size() - 11);
    std::stringstream ss(body);
    std::string part;
    while (std::getline(ss, part, ',')) {
      if (part.size() < 2) throw UsageError("bad separable block: " + part);
      Colour c = colour_from_code(part.substr(0, 1));
      blocks.emplace_back(c, std::stoi(part.substr(1)));
    }
    try {
      return SparsityClass::separable(blocks);
    } catch (const std::exception& e) {
      throw UsageError(std::string("bad separable class: ") + e.what());
    }
  }
  throw UsageError("unknown class: " + name);
}

ContextSpec matching_context(const SparsityClass& cls) {
  // default geometric context for a class when only a class is named
  if (cls.name() == "tight23") return ContextSpec::sphere();
  if (cls.name() == "tight22") return ContextSpec::cylinder();
  if (cls.name() == "blue-limited") return ContextSpec::mixed_lq(3.0);
  if (cls.name() == "mono-limited") return ContextSpec::dl_euclidean();
  return ContextSpec::separable(cls.blocks);
}

Options parse_args(int argc, char** argv) {
  Options opt;
  if (argc < 2) throw UsageError("missing verb");
  opt.verb = argv[1];
  auto need = [&](int i, const char* flag) {
    if (i + 1 >= argc) throw UsageError(std::string(flag) + " needs a value");
    return std::string(argv[i + 1]);
  };
  for (int i = 2; i < argc; ++i) {
    std::string a = argv[i];
    try {
      if (a == "--seed") opt.seed = std::stoull(need(i++, "--seed"));
      else if (a == "--json") opt.json = true;
      else if (a == "--tol") opt.tol = std::stod(need(i++, "--tol"));
      else if (a == "--class") opt.cls = need(i++, "--class");
      else if (a == "--theorem") opt.theorem = need(i++, "--theorem");
      else if (a == "--context") opt.context_file = need(i++, "--context");
      else if (a == "-n") opt.n = std::stoi(need(i++, "-n"));
      else if (a == "--samples") opt.samples = std::stoi(need(i++, "--samples"));
      else if (a == "--nmin") opt.n_min = std::stoi(need(i++, "--nmin"));
      else if (a == "--nmax") opt.n_max = std::stoi(need(i++, "--nmax"));
      else if (a == "--q") opt.q = std::stod(need(i++, "--q"));
      else if (a == "--trials") opt.trials = std::stoi(need(i++, "--trials"));
      else if (!a.empty() && a[0] == '-') throw UsageError("unknown flag: " + a);
      else opt.files.push_back(a);
    } catch (const std::invalid_argument&) {
      throw UsageError("bad value for " + a);
    } catch (const std::out_of_range&) {
      throw UsageError("bad value for " + a);
    }
  }
  return opt;
}

int run_sparsity(const Options& opt) {
  if (!opt.cls) throw UsageError("sparsity needs --class");
  if (opt.files.size() != 1) throw UsageError("sparsity needs one graph file");
  SparsityClass cls = parse_class(*opt.cls);
  auto g = read_graph(opt.files[0]);
  auto report = class_check(g, cls);
  if (opt.json) {
    nlohmann::ordered_json j;
    j["class"] = cls.name();
    j["verdict"] = report.verdict;
    j["witness"] = report.witness ? subgraph_to_json(*report.witness)
                                  : nlohmann::ordered_json(nullptr);
    std::cout << j.dump() << "\n";
  } else {
    std::cout << "class: " << cls.name() << "\n";
    std::cout << "verdict: " << (report.verdict ? "member" : "not a member") << "\n";
    if (report.witness)
      std::cout << "witness: " << subgraph_to_json(*report.witness).dump() << "\n";
  }
  return 0;
}

int run_construct(const Options& opt) {
  if (!opt.cls) throw UsageError("construct needs --class");
  if (opt.n < 1) throw UsageError("construct needs -n <positive int>");
  if (!opt.files.empty()) throw UsageError("construct takes no files");
  SparsityClass cls = parse_class(*opt.cls);
  auto [g, trace] = random_construct(cls, opt.n, opt.seed);
  nlohmann::ordered_json j;
  j["graph"] = graph_to_json(g);
  j["trace"] = trace_to_json(trace);
  std::cout << j.dump() << "\n";
  return 0;
}

int run_reduce(const Options& opt) {
  if (!opt.cls) throw UsageError("reduce needs --class");
  if (opt.files.size() != 1) throw UsageError("reduce needs one graph file");
  SparsityClass cls = parse_class(*opt.cls);
  auto g = read_graph(opt.files[0]);
  ConstructionTrace trace = reduce_fully(g, cls);
  std::cout << trace_to_json(trace).dump() << "\n";
  return 0;
}

std::pair<ContextSpec, Placement> read_placement(const std::string& path) {
  try {
    return placement_from_json(read_json_file(path));
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    throw UsageError("bad placement file " + path + ": " + e.what());
  }
}

int run_rank(const Options& opt) {
  if (opt.files.size() != 2) throw UsageError("rank needs <placement-file> <graph-file>");
  auto [ctx, p] = read_placement(opt.files[0]);
  auto g = read_graph(opt.files[1]);
  auto m = assemble(ctx, g, p);
  auto r = numerical_rank(m.m, opt.tol);
  if (opt.json) {
    nlohmann::ordered_json j;
    j["rows"] = m.m.rows();
    j["cols"] = m.m.cols();
    j["rank"] = r.rank;
    j["tol"] = r.tol;
    j["singular_values"] = r.singular_values;
    auto labels = nlohmann::ordered_json::array();
    for (const auto& label : m.labels) labels.push_back(row_label(label));
    j["labels"] = labels;
    auto rows = nlohmann::ordered_json::array();
    for (Eigen::Index i = 0; i < m.m.rows(); ++i) {
      auto row = nlohmann::ordered_json::array();
      for (Eigen::Index c = 0; c < m.m.cols(); ++c) row.push_back(m.m(i, c));
      rows.push_back(row);
    }
    j["matrix"] = rows;
    std::cout << j.dump() << "\n";
  } else {
    std::cout << "rows: " << m.m.rows() << "\ncols: " << m.m.cols() << "\nrank: " << r.rank
              << "\ntol: " << fmt(r.tol) << "\nsingular values:";
    for (double s : r.singular_values) std::cout << " " << fmt(s);
    std::cout << "\nmatrix:\n";
    for (Eigen::Index i = 0; i < m.m.rows(); ++i) {
      std::cout << row_label(m.labels[static_cast<size_t>(i)]) << " |";
      for (Eigen::Index c = 0; c < m.m.cols(); ++c) std::cout << " " << fmt(m.m(i, c));
      std::cout << "\n";
    }
  }
  return 0;
}

int run_flex(const Options& opt) {
  if (opt.files.size() != 2) throw UsageError("flex needs <placement-file> <graph-file>");
  auto [ctx, p] = read_placement(opt.files[0]);
  auto g = read_graph(opt.files[1]);
  auto m = assemble(ctx, g, p);
  auto kernel = nullspace_basis(m.m, opt.tol);
  int nullity = static_cast<int>(kernel.cols());
  int trivial = trivial_dim(ctx);
  int internal = std::max(0, nullity - trivial);
  if (opt.json) {
    nlohmann::ordered_json j;
    j["nullity"] = nullity;
    j["trivial_dim"] = trivial;
    j["internal_flexes"] = internal;
    auto basis = nlohmann::ordered_json::array();
    for (Eigen::Index c = 0; c < kernel.cols(); ++c) {
      auto col = nlohmann::ordered_json::array();
      for (Eigen::Index i = 0; i < kernel.rows(); ++i) col.push_back(kernel(i, c));
      basis.push_back(col);
    }
    j["basis"] = basis;
    std::cout << j.dump() << "\n";
  } else {
    std::cout << "nullity: " << nullity << "\ntrivial dimension: " << trivial
              << "\ninternal flexes: " << internal << "\n";
    for (Eigen::Index c = 0; c < kernel.cols(); ++c) {
      std::cout << "flex " << c << ":";
      for (Eigen::Index i = 0; i < kernel.rows(); ++i) std::cout << " " << fmt(kernel(i, c));
      std::cout << "\n";
    }
  }
  return 0;
}

int run_decide(const Options& opt) {
  if (!opt.context_file) throw UsageError("decide needs --context <file>");
  if (opt.files.size() != 1) throw UsageError("decide needs one graph file");
  ContextSpec ctx;
  try {
    ctx = context_from_json(read_json_file(*opt.context_file));
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    throw UsageError(std::string("bad context file: ") + e.what());
  }
  auto g = read_graph(opt.files[0]);
  auto v = decide_rigidity(ctx, g, opt.trials, opt.seed, opt.tol);
  if (opt.json) {
    std::cout << verdict_to_json(v).dump() << "\n";
  } else {
    std::cout << "status: " << status_string(v.status) << "\nachieved rank: " << v.achieved_rank
              << "\nrequired rank: " << v.required_rank << "\ntrials: " << v.trials << "\n";
  }
  return 0;
}

int run_fdcheck(const Options& opt) {
  if (opt.files.size() != 2) throw UsageError("fdcheck needs <placement-file> <graph-file>");
  auto [ctx, p] = read_placement(opt.files[0]);
  auto g = read_graph(opt.files[1]);
  double worst = 0.0;
  auto per_edge = nlohmann::ordered_json::array();
  for (const auto& e : g.edges()) {
    double err = fd_check(ctx, e, p);
    worst = std::max(worst, err);
    per_edge.push_back({{"edge", {e.u, e.v, std::string(1, colour_code(e.colour))}},
                        {"error", err}});
  }
  if (opt.json) {
    nlohmann::ordered_json j;
    j["max_error"] = worst;
    j["per_edge"] = per_edge;
    std::cout << j.dump() << "\n";
  } else {
    std::cout << "max relative error: " << fmt(worst) << "\n";
    for (const auto& item : per_edge)
      std::cout << "edge " << item["edge"][0] << " " << item["edge"][1] << " "
                << item["edge"][2].get<std::string>() << ": "
                << fmt(item["error"].get<double>()) << "\n";
  }
  return 0;
}

int run_verify(const Options& opt) {
  if (!opt.theorem) throw UsageError("verify needs --theorem <name>");
  CampaignConfig cfg;
  try {
    cfg.theorem = theorem_from_string(*opt.theorem);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  cfg.samples = opt.samples;
  cfg.n_min = opt.n_min;
  cfg.n_max = opt.n_max;
  cfg.seed = opt.seed;
  cfg.q = opt.q;
  cfg.trials = opt.trials;
  cfg.tol = opt.tol;
  auto rep = verify_theorem(cfg);
  if (opt.json) {
    std::cout << rep.report.dump() << "\n";
  } else {
    std::cout << "theorem: " << rep.report["theorem"].get<std::string>() << "\n";
    if (rep.report["supplementary"].get<bool>()) std::cout << "supplementary: yes\n";
    std::cout << "context: " << rep.report["context"].dump() << "\nclass: "
              << rep.report["class"].get<std::string>() << "\npositives: "
              << (rep.report["positives"]["total"].get<int>() -
                  rep.report["positives"]["failed"].get<int>())
              << "/" << rep.report["positives"]["total"].get<int>() << "\nnegatives: "
              << (rep.report["negatives"]["total"].get<int>() -
                  rep.report["negatives"]["failed"].get<int>())
              << "/" << rep.report["negatives"]["total"].get<int>() << "\nok: "
              << (rep.ok ? "yes" : "no") << "\n";
  }
  return rep.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    Options opt = parse_args(argc, argv);
    if (opt.verb == "sparsity") return run_sparsity(opt);
    if (opt.verb == "construct") return run_construct(opt);
    if (opt.verb == "reduce") return run_reduce(opt);
    if (opt.verb == "rank") return run_rank(opt);
    if (opt.verb == "flex") return run_flex(opt);
    if (opt.verb == "decide") return run_decide(opt);
    if (opt.verb == "fdcheck") return run_fdcheck(opt);
    if (opt.verb == "verify") return run_verify(opt);
    throw UsageError("unknown verb: " + opt.verb);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n" << kUsage;
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

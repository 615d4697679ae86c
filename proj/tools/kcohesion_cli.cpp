// kcohesion: structural-cohesion analysis of networks from edge lists.
// Subcommands tie together ingestion, k-component detection, null-model
// comparison, verification, layout and benchmarking with reproducible seeds.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "kcohesion/kcohesion.hpp"

namespace {

using nlohmann::json;
using namespace kcohesion;

constexpr int exit_ok = 0;
constexpr int exit_input_error = 1;
constexpr int exit_config_error = 2;
constexpr int exit_size_refused = 3;

std::string fmt_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

struct InputFlags {
  std::string path;
  bool bipartite = false;
  bool infer_parts = false;
  bool drop_self_loops = false;
};

void add_input_flags(CLI::App* cmd, InputFlags& flags) {
  cmd->add_option("--input", flags.path, "edge-list file (two tokens per line)")
      ->required();
  cmd->add_flag("--bipartite", flags.bipartite,
                "treat columns as bipartite parts (left = part A)");
  cmd->add_flag("--infer-parts", flags.infer_parts,
                "derive the bipartition by 2-coloring instead of columns");
  cmd->add_flag("--drop-self-loops", flags.drop_self_loops,
                "drop self-loops instead of rejecting the input");
}

EdgeListData read_graph(const InputFlags& flags) {
  std::ifstream in(flags.path);
  if (!in) throw std::invalid_argument("cannot open input file: " + flags.path);
  ReadOptions options;
  options.bipartite_columns = flags.bipartite;
  options.infer_parts = flags.infer_parts;
  options.self_loops =
      flags.drop_self_loops ? SelfLoopPolicy::drop : SelfLoopPolicy::reject;
  return read_edge_list(in, options);
}

struct DetectorFlags {
  std::string method = "approx";
  double min_density = 0.95;
  std::string relaxation = "density";
  int degree_spread = 2;
  std::string avg = "store";
  bool rebuild_aux = false;
  int threads = 1;
};

void add_detector_flags(CLI::App* cmd, DetectorFlags& flags) {
  cmd->add_option("--method", flags.method, "detector")
      ->check(CLI::IsMember({"approx", "exact-flow", "moody-white", "brute-force"}))
      ->capture_default_str();
  cmd->add_option("--min-density", flags.min_density,
                  "density threshold of the candidate relaxation")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd->add_option("--relaxation", flags.relaxation, "candidate relaxation criterion")
      ->check(CLI::IsMember({"density", "degree-spread"}))
      ->capture_default_str();
  cmd->add_option("--degree-spread", flags.degree_spread,
                  "max-min degree allowed by the degree-spread criterion")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--avg", flags.avg,
                  "average-connectivity policy: store pair values, recompute "
                  "inside each component, or off")
      ->check(CLI::IsMember({"store", "recompute", "off"}))
      ->capture_default_str();
  cmd->add_flag("--rebuild-aux", flags.rebuild_aux,
                "rebuild the auxiliary graph inside each candidate (slower, "
                "more accurate)");
  cmd->add_option("--threads", flags.threads, "worker threads (1 = serial)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

DetectorConfig make_detector(const DetectorFlags& flags) {
  DetectorConfig config;
  if (flags.method == "approx") config.method = DetectionMethod::heuristic_approx;
  else if (flags.method == "exact-flow") config.method = DetectionMethod::heuristic_exact_flow;
  else if (flags.method == "moody-white") config.method = DetectionMethod::moody_white;
  else config.method = DetectionMethod::brute_force;
  if (flags.min_density <= 0.0)
    throw CLI::ValidationError("--min-density must be in (0, 1]");
  config.heuristic.min_density = flags.min_density;
  config.heuristic.relaxation = flags.relaxation == "degree-spread"
                                    ? Relaxation::degree_spread
                                    : Relaxation::density;
  config.heuristic.degree_spread = flags.degree_spread;
  config.heuristic.compute_average = flags.avg != "off";
  config.heuristic.cache_policy = flags.avg == "store"      ? CachePolicy::store
                                  : flags.avg == "recompute" ? CachePolicy::recompute
                                                             : CachePolicy::off;
  config.heuristic.rebuild_auxiliary = flags.rebuild_aux;
  config.heuristic.threads = flags.threads;
  return config;
}

std::optional<Part> parse_side(const std::string& side) {
  if (side.empty()) return std::nullopt;
  return side == "a" ? Part::a : Part::b;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

void write_manifest(const std::filesystem::path& dir, const std::string& command,
                    const json& config, const std::vector<std::string>& outputs,
                    double wall_seconds, json extra = json::object()) {
  json manifest;
  manifest["command"] = command;
  manifest["version"] = kcohesion::version;
  manifest["config"] = config;
  manifest["outputs"] = outputs;
  manifest["wall_seconds"] = wall_seconds;
  if (!extra.empty()) manifest["details"] = extra;
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

std::string knumbers_csv(const KNumberMap& kn, const LabelMap& labels) {
  std::ostringstream out;
  out << "node,k,avg_k\n";
  for (std::size_t i = 0; i < kn.ids.size(); ++i)
    out << labels.label_of(kn.ids[i]) << ',' << kn.k[i] << ','
        << fmt_double(kn.average_k[i]) << '\n';
  return out.str();
}

// --- compute ---------------------------------------------------------------

struct ComputeArgs {
  InputFlags input;
  DetectorFlags detector;
  std::string project_side;
  std::string out_dir = ".";
  std::string dot_path;
  std::string export_json_path;
  bool with_members = false;
  bool paper_filters = false;
  std::uint64_t seed = 0;
};

int run_compute(const ComputeArgs& args) {
  const auto started = std::chrono::steady_clock::now();
  EdgeListData data = read_graph(args.input);
  Graph g = data.graph;
  if (auto side = parse_side(args.project_side)) g = one_mode_projection(g, *side);

  const DetectorConfig detector = make_detector(args.detector);
  if (detector.method == DetectionMethod::brute_force && g.node_count() > 14) {
    std::cerr << "brute-force detector refused: graph has " << g.node_count()
              << " nodes (limit 14)\n";
    return exit_size_refused;
  }

  const DetectionResult result = detect(g, detector);
  const CohesiveBlockTree tree = build_block_tree(result.levels);
  for (const auto& warning : tree.warnings)
    std::cerr << "warning: " << warning << "\n";

  const std::filesystem::path dir(args.out_dir);
  std::filesystem::create_directories(dir);
  ExportFilters full;
  full.with_members = true;
  write_file(dir / "components.json",
             export_block_tree_json(tree, full, &data.labels.labels));
  write_file(dir / "knumbers.csv", knumbers_csv(result.k_numbers, data.labels));
  std::vector<std::string> outputs{"components.json", "knumbers.csv"};

  ExportFilters presentation;
  presentation.with_members = args.with_members;
  presentation.paper_filters = args.paper_filters;
  if (!args.dot_path.empty()) {
    write_file(args.dot_path, export_block_tree_dot(tree, presentation));
    outputs.push_back(args.dot_path);
  }
  if (!args.export_json_path.empty()) {
    write_file(args.export_json_path,
               export_block_tree_json(tree, presentation, &data.labels.labels));
    outputs.push_back(args.export_json_path);
  }

  json config;
  config["input"] = args.input.path;
  config["bipartite"] = args.input.bipartite;
  config["infer_parts"] = args.input.infer_parts;
  config["project"] = args.project_side;
  config["method"] = args.detector.method;
  config["min_density"] = args.detector.min_density;
  config["relaxation"] = args.detector.relaxation;
  config["degree_spread"] = args.detector.degree_spread;
  config["avg"] = args.detector.avg;
  config["rebuild_aux"] = args.detector.rebuild_aux;
  config["threads"] = args.detector.threads;
  config["seed"] = args.seed;
  config["paper_filters"] = args.paper_filters;
  config["with_members"] = args.with_members;
  json extra;
  extra["warnings"] = tree.warnings;
  extra["n"] = g.node_count();
  extra["m"] = g.edge_count();
  const std::chrono::duration<double> wall =
      std::chrono::steady_clock::now() - started;
  write_manifest(dir, "compute", config, outputs, wall.count(), extra);
  return exit_ok;
}

// --- nullmodel ---------------------------------------------------------------

struct NullModelArgs {
  InputFlags input;
  DetectorFlags detector;
  std::string project_side;
  int replicates = 64;
  int only_replicate = -1;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
};

int run_nullmodel(const NullModelArgs& args) {
  const auto started = std::chrono::steady_clock::now();
  EdgeListData data = read_graph(args.input);
  if (!data.graph.has_parts()) {
    std::cerr << "nullmodel requires a bipartite input "
                 "(--bipartite or --infer-parts)\n";
    return exit_config_error;
  }

  FrequencyOptions options;
  options.replicates = args.replicates;
  options.seed = args.seed;
  options.only_replicate = args.only_replicate;
  if (auto side = parse_side(args.project_side)) {
    options.project = true;
    options.projection_side = *side;
  }
  options.detector = make_detector(args.detector);
  options.threads = args.detector.threads;
  const FrequencyTable table = knumber_frequencies(data.graph, options);

  std::ostringstream csv;
  if (table.replicates == 0) {
    csv << "k,actual\n";
    for (const auto& [k, count] : table.actual) csv << k << ',' << count << '\n';
  } else {
    csv << "k,actual,null_mean,null_std\n";
    std::map<int, std::size_t> actual = table.actual;
    std::vector<int> levels;
    for (const auto& [k, c] : actual) levels.push_back(k);
    for (const auto& [k, s] : table.null_stats) levels.push_back(k);
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    for (int k : levels) {
      const auto a = actual.count(k) ? actual.at(k) : 0;
      double mean = 0, sd = 0;
      if (auto it = table.null_stats.find(k); it != table.null_stats.end()) {
        mean = it->second.first;
        sd = it->second.second;
      }
      csv << k << ',' << a << ',' << fmt_double(mean) << ',' << fmt_double(sd)
          << '\n';
    }
  }
  const std::filesystem::path dir(args.out_dir);
  std::filesystem::create_directories(dir);
  write_file(dir / "frequencies.csv", csv.str());

  json config;
  config["input"] = args.input.path;
  config["project"] = args.project_side;
  config["replicates"] = args.replicates;
  config["only_replicate"] = args.only_replicate;
  config["seed"] = args.seed;
  config["method"] = args.detector.method;
  config["min_density"] = args.detector.min_density;
  config["avg"] = args.detector.avg;
  config["threads"] = args.detector.threads;
  json extra;
  extra["removed_edge_fraction"] = table.removed_edge_fraction;
  const std::chrono::duration<double> wall =
      std::chrono::steady_clock::now() - started;
  write_manifest(dir, "nullmodel", config, {"frequencies.csv"}, wall.count(), extra);
  return exit_ok;
}

// --- verify ------------------------------------------------------------------

struct VerifyArgs {
  InputFlags input;
  std::string project_side;
  std::string components_path;
  int min_k = 1;
  std::string out_dir = ".";
};

int run_verify(const VerifyArgs& args) {
  const auto started = std::chrono::steady_clock::now();
  EdgeListData data = read_graph(args.input);
  Graph g = data.graph;
  if (auto side = parse_side(args.project_side)) g = one_mode_projection(g, *side);

  std::ifstream in(args.components_path);
  if (!in) {
    std::cerr << "cannot open components file: " << args.components_path << "\n";
    return exit_input_error;
  }
  json components_json = json::parse(in, nullptr, false);
  if (components_json.is_discarded() || !components_json.is_array()) {
    std::cerr << "components file is not a JSON array\n";
    return exit_input_error;
  }

  LevelMap detected;
  for (const auto& item : components_json) {
    if (!item.contains("nodes")) {
      std::cerr << "component " << item.value("id", -1)
                << " has no node list; run compute with members\n";
      return exit_input_error;
    }
    KComponent comp;
    comp.id = item.value("id", -1);
    comp.k = item.value("k", 0);
    for (const auto& label : item.at("nodes")) {
      auto it = data.labels.index.find(label.get<std::string>());
      if (it == data.labels.index.end()) {
        std::cerr << "unknown node label in components file: " << label << "\n";
        return exit_input_error;
      }
      comp.nodes.push_back(it->second);
    }
    std::sort(comp.nodes.begin(), comp.nodes.end());
    detected[comp.k].push_back(std::move(comp));
  }

  const VerificationReport report = verify_components(g, detected, args.min_k);
  json out;
  out["confirmed_fraction"] = report.confirmed_fraction();
  out["records"] = json::array();
  for (const auto& rec : report.records) {
    json r;
    r["id"] = rec.id;
    r["k"] = rec.claimed_k;
    r["actual_kappa"] = rec.actual_kappa;
    r["verdict"] = rec.confirmed ? "confirmed" : "under-connected";
    if (!rec.confirmed) {
      json refinement = json::array();
      for (const auto& comp : rec.refinement) {
        json c;
        c["k"] = comp.k;
        c["order"] = comp.nodes.size();
        json members = json::array();
        for (int v : comp.nodes) members.push_back(data.labels.label_of(v));
        c["nodes"] = std::move(members);
        refinement.push_back(std::move(c));
      }
      r["refinement"] = std::move(refinement);
    }
    out["records"].push_back(std::move(r));
  }
  const std::filesystem::path dir(args.out_dir);
  std::filesystem::create_directories(dir);
  write_file(dir / "verification.json", out.dump(2) + "\n");

  json config;
  config["input"] = args.input.path;
  config["components"] = args.components_path;
  config["min_k"] = args.min_k;
  const std::chrono::duration<double> wall =
      std::chrono::steady_clock::now() - started;
  write_manifest(dir, "verify", config, {"verification.json"}, wall.count());
  std::cout << "confirmed " << fmt_double(report.confirmed_fraction() * 100.0)
            << "% of " << report.records.size() << " components\n";
  return exit_ok;
}

// --- generate ----------------------------------------------------------------

int write_graph_output(const Graph& g, const LabelMap& labels,
                       const std::string& out_path) {
  std::ostringstream body;
  write_edge_list(body, g, labels);
  if (out_path.empty())
    std::cout << body.str();
  else
    write_file(out_path, body.str());
  return exit_ok;
}

// --- layout --------------------------------------------------------------------

struct LayoutArgs {
  InputFlags input;
  std::string knumbers_path;
  std::uint64_t seed = 0;
  std::string out = "layout.csv";
};

int run_layout(const LayoutArgs& args) {
  EdgeListData data = read_graph(args.input);
  std::ifstream kn(args.knumbers_path);
  if (!kn) {
    std::cerr << "cannot open knumbers file: " << args.knumbers_path << "\n";
    return exit_input_error;
  }
  // node -> raw avg_k text; copying the text keeps z bit-identical.
  std::unordered_map<std::string, std::string> avg_text;
  std::string line;
  std::getline(kn, line);  // header
  std::size_t line_no = 1;
  while (std::getline(kn, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) {
      std::cerr << "knumbers line " << line_no << ": expected node,k,avg_k\n";
      return exit_input_error;
    }
    avg_text[line.substr(0, c1)] = line.substr(c2 + 1);
  }
  KNumberMap kmap;
  kmap.ids = data.graph.nodes();
  kmap.k.assign(kmap.ids.size(), 0);
  kmap.average_k.assign(kmap.ids.size(), 0.0);
  for (std::size_t i = 0; i < kmap.ids.size(); ++i) {
    auto it = avg_text.find(data.labels.label_of(kmap.ids[i]));
    if (it == avg_text.end()) {
      std::cerr << "node '" << data.labels.label_of(kmap.ids[i])
                << "' missing from " << args.knumbers_path << "\n";
      return exit_input_error;
    }
    kmap.average_k[i] = std::strtod(it->second.c_str(), nullptr);
  }

  const auto points = layout_scatter(data.graph, kmap, args.seed);
  std::ostringstream csv;
  csv << "node,x,y,z\n";
  for (const auto& p : points)
    csv << data.labels.label_of(p.node) << ',' << fmt_double(p.x) << ','
        << fmt_double(p.y) << ','
        << avg_text.at(data.labels.label_of(p.node)) << '\n';
  write_file(args.out, csv.str());
  return exit_ok;
}

// --- bench -----------------------------------------------------------------------

struct BenchArgs {
  std::string plan_path;
  bool single_thread = false;
  int threads = 1;
  std::string out = "bench.csv";
};

int run_bench(const BenchArgs& args) {
  std::ifstream in(args.plan_path);
  if (!in) {
    std::cerr << "cannot open plan file: " << args.plan_path << "\n";
    return exit_input_error;
  }
  std::vector<BenchmarkCell> plan;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream tokens(line);
    std::string token;
    BenchmarkCell cell;
    bool any = false;
    bool have_method = false;
    while (tokens >> token) {
      if (token.front() == '#') break;
      const auto eq = token.find('=');
      if (eq == std::string::npos) {
        std::cerr << "plan line " << line_no << ": expected key=value, got '"
                  << token << "'\n";
        return exit_input_error;
      }
      const std::string key = token.substr(0, eq);
      const std::string value = token.substr(eq + 1);
      any = true;
      if (key == "generator") cell.generator = value;
      else if (key == "n") cell.n = std::stoi(value);
      else if (key == "avg_degree") cell.avg_degree = std::stod(value);
      else if (key == "alpha") cell.alpha = std::stod(value);
      else if (key == "seed") cell.seed = std::stoull(value);
      else if (key == "timeout") cell.timeout_seconds = std::stod(value);
      else if (key == "method") {
        have_method = true;
        if (value == "approx") cell.method = DetectionMethod::heuristic_approx;
        else if (value == "exact-flow") cell.method = DetectionMethod::heuristic_exact_flow;
        else if (value == "moody-white") cell.method = DetectionMethod::moody_white;
        else if (value == "brute-force") cell.method = DetectionMethod::brute_force;
        else {
          std::cerr << "plan line " << line_no << ": unknown method '" << value << "'\n";
          return exit_input_error;
        }
      } else {
        std::cerr << "plan line " << line_no << ": unknown key '" << key << "'\n";
        return exit_input_error;
      }
    }
    if (!any) continue;
    if (cell.generator.empty() || !have_method) {
      std::cerr << "plan line " << line_no << ": generator and method are required\n";
      return exit_input_error;
    }
    plan.push_back(std::move(cell));
  }

  const int threads = args.single_thread ? 1 : args.threads;
  const auto records = run_benchmark(plan, threads);
  std::ostringstream csv;
  csv << "generator,n,m,method,seconds,status\n";
  for (const auto& rec : records) {
    char seconds[32];
    std::snprintf(seconds, sizeof seconds, "%.6f", rec.wall_seconds);
    csv << rec.generator << ',' << rec.n << ',' << rec.m << ','
        << to_string(rec.method) << ',' << seconds << ',' << rec.status << '\n';
  }
  write_file(args.out, csv.str());
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"structural-cohesion analysis: k-components, average "
               "connectivity, null models"};
  app.require_subcommand(1);
  app.fallthrough();  // lets --config follow the subcommand name
  app.set_config("--config", "",
                 "INI config; subcommand options go in a [section] named "
                 "after the subcommand");

  ComputeArgs compute;
  auto* compute_cmd = app.add_subcommand(
      "compute", "detect the k-component hierarchy of a network");
  add_input_flags(compute_cmd, compute.input);
  add_detector_flags(compute_cmd, compute.detector);
  compute_cmd->add_option("--project", compute.project_side,
                          "analyze the one-mode projection onto this side")
      ->check(CLI::IsMember({"a", "b"}));
  compute_cmd->add_option("--seed", compute.seed, "seed recorded in the manifest")
      ->envname("KCOHESION_SEED");
  compute_cmd->add_option("--out-dir", compute.out_dir, "output directory")
      ->capture_default_str();
  compute_cmd->add_option("--dot", compute.dot_path, "also export the block tree as DOT");
  compute_cmd->add_option("--export-json", compute.export_json_path,
                          "also export a presentation block tree (honors filters)");
  compute_cmd->add_flag("--with-members", compute.with_members,
                        "include node lists in the presentation export");
  compute_cmd->add_flag("--paper-filters", compute.paper_filters,
                        "drop small components from exports (1-comp < 20, "
                        "2-comp < 15, 3-comp < 10 nodes)");

  NullModelArgs nullmodel;
  auto* null_cmd = app.add_subcommand(
      "nullmodel", "k-number frequencies against configuration-model replicates");
  add_input_flags(null_cmd, nullmodel.input);
  add_detector_flags(null_cmd, nullmodel.detector);
  null_cmd->add_option("--project", nullmodel.project_side,
                       "project each network onto this side before detection")
      ->check(CLI::IsMember({"a", "b"}));
  null_cmd->add_option("--replicates", nullmodel.replicates, "number of null networks")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  null_cmd->add_option("--only-replicate", nullmodel.only_replicate,
                       "run a single replicate by index, for reproduction");
  null_cmd->add_option("--seed", nullmodel.seed, "base seed; replicate i uses a seed derived from (seed, i)")
      ->envname("KCOHESION_SEED");
  null_cmd->add_option("--out-dir", nullmodel.out_dir, "output directory")
      ->capture_default_str();

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand(
      "verify", "check detected components against exact connectivity");
  add_input_flags(verify_cmd, verify.input);
  verify_cmd->add_option("--project", verify.project_side,
                         "verify against the one-mode projection onto this side")
      ->check(CLI::IsMember({"a", "b"}));
  verify_cmd->add_option("--components", verify.components_path,
                         "components.json from a compute run")
      ->required();
  verify_cmd->add_option("--min-k", verify.min_k, "verify components of level >= k")
      ->capture_default_str();
  verify_cmd->add_option("--out-dir", verify.out_dir, "output directory")
      ->capture_default_str();

  auto* gen_cmd = app.add_subcommand("generate", "seeded graph generators");
  gen_cmd->require_subcommand(1);
  std::string gen_out;
  std::uint64_t gen_seed = 0;
  int gen_n = 1000;
  double gen_avg = 6.0;
  double gen_alpha = 2.0;
  InputFlags gen_input;

  auto* gen_appendix = gen_cmd->add_subcommand(
      "appendix-a", "the 99-node / 200-edge synthetic benchmark graph");
  gen_appendix->add_option("--out", gen_out, "output file (default stdout)");

  auto* gen_er = gen_cmd->add_subcommand("er", "Erdos-Renyi with fixed average degree");
  gen_er->add_option("--n", gen_n, "nodes")->required();
  gen_er->add_option("--avg-degree", gen_avg, "average degree")->required();
  gen_er->add_option("--seed", gen_seed, "seed")->envname("KCOHESION_SEED");
  gen_er->add_option("--out", gen_out, "output file (default stdout)");

  auto* gen_pl = gen_cmd->add_subcommand(
      "powerlaw", "configuration model with power-law degrees");
  gen_pl->add_option("--n", gen_n, "nodes")->required();
  gen_pl->add_option("--alpha", gen_alpha, "power-law exponent")->capture_default_str();
  gen_pl->add_option("--seed", gen_seed, "seed")->envname("KCOHESION_SEED");
  gen_pl->add_option("--out", gen_out, "output file (default stdout)");

  auto* gen_null = gen_cmd->add_subcommand(
      "null-model", "bipartite configuration-model replicate of an input network");
  add_input_flags(gen_null, gen_input);
  gen_null->add_option("--seed", gen_seed, "seed")->envname("KCOHESION_SEED");
  gen_null->add_option("--out", gen_out, "output file (default stdout)");

  LayoutArgs layout;
  auto* layout_cmd = app.add_subcommand(
      "layout", "Kamada-Kawai scatter with average k-number as the z column");
  add_input_flags(layout_cmd, layout.input);
  layout_cmd->add_option("--knumbers", layout.knumbers_path,
                         "knumbers.csv from a compute run")
      ->required();
  layout_cmd->add_option("--seed", layout.seed, "seed")->envname("KCOHESION_SEED");
  layout_cmd->add_option("--out", layout.out, "output CSV")->capture_default_str();

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "timed detector runs over a plan file");
  bench_cmd->add_option("--plan", bench.plan_path,
                        "plan file: one cell per line of key=value pairs "
                        "(generator, n, avg_degree, alpha, seed, method, timeout)")
      ->required();
  bench_cmd->add_flag("--single-thread", bench.single_thread,
                      "force serial execution for comparable timings");
  bench_cmd->add_option("--threads", bench.threads, "worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench_cmd->add_option("--out", bench.out, "output CSV")->capture_default_str();

  // Config entries mirror the flags; explicit flags take precedence.
  for (CLI::App* sub : app.get_subcommands({})) sub->configurable();
  for (CLI::App* sub : {gen_appendix, gen_er, gen_pl, gen_null})
    sub->configurable();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config_error;
  }

  try {
    if (compute_cmd->parsed()) return run_compute(compute);
    if (null_cmd->parsed()) return run_nullmodel(nullmodel);
    if (verify_cmd->parsed()) return run_verify(verify);
    if (gen_cmd->parsed()) {
      if (gen_appendix->parsed()) {
        const Graph g = appendix_a_fixture();
        return write_graph_output(g, LabelMap::identity(g.node_count()), gen_out);
      }
      if (gen_er->parsed()) {
        const Graph g = erdos_renyi(gen_n, gen_avg, gen_seed);
        return write_graph_output(g, LabelMap::identity(g.node_count()), gen_out);
      }
      if (gen_pl->parsed()) {
        const Graph g = powerlaw_configuration(gen_n, gen_alpha, gen_seed);
        return write_graph_output(g, LabelMap::identity(g.node_count()), gen_out);
      }
      if (gen_null->parsed()) {
        EdgeListData data = read_graph(gen_input);
        if (!data.graph.has_parts()) {
          std::cerr << "null-model requires a bipartite input\n";
          return exit_config_error;
        }
        auto replicate = bipartite_configuration_null(data.graph, gen_seed);
        return write_graph_output(replicate.graph, data.labels, gen_out);
      }
    }
    if (layout_cmd->parsed()) return run_layout(layout);
    if (bench_cmd->parsed()) return run_bench(bench);
  } catch (const CLI::ValidationError& err) {
    std::cerr << err.what() << "\n";
    return exit_config_error;
  } catch (const std::invalid_argument& err) {
    std::cerr << err.what() << "\n";
    return exit_input_error;
  } catch (const std::domain_error& err) {
    std::cerr << err.what() << "\n";
    return exit_config_error;
  } catch (const std::exception& err) {
    std::cerr << err.what() << "\n";
    return exit_input_error;
  }
  return exit_ok;
}

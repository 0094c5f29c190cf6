#include "gsana/cli.h"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gsana/aligner.h"
#include "gsana/anchors.h"
#include "gsana/bench.h"
#include "gsana/embedding.h"
#include "gsana/graph.h"
#include "gsana/similarity.h"
#include "gsana/text.h"

#ifndef GSANA_VERSION
#define GSANA_VERSION "unknown"
#endif

namespace gsana {
namespace {

namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class AbortError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// `[vertices,]edges`
AttributedGraph load_graph_spec(const std::string& spec) {
  const auto parts = text::split(spec, ',');
  if (parts.size() == 1 && !parts[0].empty()) return load_graph(std::nullopt, fs::path(parts[0]));
  if (parts.size() == 2 && !parts[0].empty() && !parts[1].empty()) {
    return load_graph(fs::path(parts[0]), fs::path(parts[1]));
  }
  throw UsageError("graph must be given as EDGES or VERTICES,EDGES: '" + spec + "'");
}

std::pair<fs::path, fs::path> output_graph_spec(const std::string& spec) {
  const auto parts = text::split(spec, ',');
  if (parts.size() != 2 || parts[0].empty() || parts[1].empty()) {
    throw UsageError("output graph must be given as VERTICES,EDGES: '" + spec + "'");
  }
  return {fs::path(parts[0]), fs::path(parts[1])};
}

ComponentMask parse_components(const std::string& list) {
  ComponentMask mask;
  for (const auto name : text::split(list, ',')) {
    if (name == "vtypes") {
      mask.neighbor_vertex_types = true;
    } else if (name == "etypes") {
      mask.neighbor_edge_types = true;
    } else if (name == "vattrs") {
      mask.vertex_attrs = true;
    } else if (name == "eattrs") {
      mask.edge_attrs = true;
    } else if (!name.empty()) {
      throw UsageError("unknown similarity component '" + std::string(name) + "'");
    }
  }
  return mask;
}

struct SimilarityOptions {
  std::string weights;
  std::string external;
  std::string components = "auto";
  double close_epsilon = 1.0;

  void add(CLI::App* cmd) {
    cmd->add_option("--weights", weights, "token weight file (token TAB weight)");
    cmd->add_option("--similarity", external, "external pair similarity file (u TAB v TAB value)");
    cmd->add_option("--components", components,
                    "'auto' or a comma list of vtypes,etypes,vattrs,eattrs")
        ->capture_default_str();
    cmd->add_option("--close-epsilon", close_epsilon, "tolerance for numeric edge attributes")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  }

  SimilarityConfig build(const AttributedGraph& g1, const AttributedGraph& g2) const {
    SimilarityConfig cfg;
    cfg.close_epsilon = close_epsilon;
    if (!weights.empty()) cfg.token_weights = load_token_weights(weights);
    if (!external.empty()) {
      cfg.external = std::make_shared<ExternalSimilarity>(load_external_similarity(external, g1, g2));
    }
    if (components != "auto") cfg.components = parse_components(components);
    return cfg;
  }
};

void add_aligner_options(CLI::App* cmd, AlignerConfig& c, bool& no_neighbors) {
  cmd->add_option("--bucket-size", c.bucket_capacity, "quadtree leaf capacity B")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--top-k", c.top_k, "candidates kept per vertex")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--iterations", c.max_iterations, "maximum iterations")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--epsilon", c.convergence_ratio, "stop once |mu| / |mu_prev| <= epsilon")
      ->capture_default_str();
  cmd->add_option("--anchor-cap", c.anchor_cap, "anchor growth cap before reset")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--central-threshold", c.central_threshold,
                  "minimum hop distance between central anchors")
      ->capture_default_str();
  cmd->add_flag("--no-neighbors", no_neighbors, "compare within a bucket only");
  cmd->add_option("--bootstrap-log-base", c.bootstrap_log_base)->capture_default_str();
  cmd->add_option("--central-log-base", c.central_log_base)->capture_default_str();
}

void write_file(const std::string& path, const auto& writer) {
  auto out = text::open_output(path);
  writer(out);
  out.flush();
  if (!out) throw InputError(path, 0, "write failed");
}

// Fills options not given on the command line from a `key = value` file, so
// flags win over the file and the file over built-in defaults.
void apply_config_file(CLI::App* cmd, const std::string& path) {
  if (!std::filesystem::exists(path)) throw InputError(path, 0, "cannot open file");
  for (const auto& item : CLI::ConfigINI().from_file(path)) {
    if (!item.parents.empty()) throw UsageError(path + ": sections are not supported");
    if (item.name == "config") throw UsageError(path + ": config files cannot nest");
    CLI::Option* opt = cmd->get_option_no_throw("--" + item.name);
    if (opt == nullptr) {
      throw UsageError(path + ": unknown key '" + item.name + "' for " + cmd->get_name());
    }
    if (opt->count() > 0) continue;
    for (const auto& value : item.inputs) opt->add_result(value);
    opt->run_callback();
  }
}

void echo_config(const CLI::App* cmd) {
  spdlog::info("effective configuration:\n{}", cmd->config_to_str(true, false));
}

// --- align -----------------------------------------------------------------

struct AlignCommand {
  std::string g1, g2, anchors, out, report, profile, scopes;
  std::uint64_t seed = 0;
  bool no_neighbors = false;
  AlignerConfig config;
  SimilarityOptions similarity;

  void add(CLI::App* cmd) {
    cmd->add_option("--g1", g1, "first graph: [VERTICES,]EDGES")->required();
    cmd->add_option("--g2", g2, "second graph: [VERTICES,]EDGES")->required();
    cmd->add_option("--anchors", anchors, "known pairs (u TAB v); bootstrapped when omitted");
    cmd->add_option("--out", out, "mapping output (TSV)")->required();
    cmd->add_option("--report", report, "run report (JSON); stdout when omitted");
    cmd->add_option("--profile", profile, "per-phase wall-clock seconds (JSON)");
    cmd->add_option("--scopes", scopes, "comparison scope log, for evaluate");
    cmd->add_option("--seed", seed, "run seed (the aligner itself draws no random numbers)")
        ->capture_default_str();
    add_aligner_options(cmd, config, no_neighbors);
    similarity.add(cmd);
  }

  int run(unsigned threads) {
    config.scan_neighbors = !no_neighbors;
    config.threads = threads;
    config.record_scopes = !scopes.empty();
    config.validate();
    const auto first = load_graph_spec(g1);
    const auto second = load_graph_spec(g2);
    spdlog::info("graphs: {} vertices / {} edges, {} vertices / {} edges", first.num_vertices(),
                 first.num_edges(), second.num_vertices(), second.num_edges());
    const SimilarityContext sim(first, second, similarity.build(first, second));
    std::optional<AnchorMap> given;
    if (!anchors.empty()) given = load_anchor_map(anchors, first, second);

    const auto result = align(sim, given, config);
    write_file(out, [&](std::ostream& os) { write_mapping(os, result.mapping, first, second); });
    if (report.empty()) {
      write_run_report(std::cout, result.report);
    } else {
      write_file(report, [&](std::ostream& os) { write_run_report(os, result.report); });
    }
    if (!profile.empty()) {
      write_file(profile, [&](std::ostream& os) { write_profile(os, result.profile); });
    }
    if (!scopes.empty()) {
      write_file(scopes, [&](std::ostream& os) { write_scope_log(os, result.scopes); });
    }
    if (result.aborted()) throw AbortError(*result.report.abort_reason);
    spdlog::info("mapped {} pairs in {} iterations ({})", result.mapping.size(),
                 result.report.iterations.size(), result.report.stop_reason);
    return kExitOk;
  }
};

// --- evaluate --------------------------------------------------------------

struct EvaluateCommand {
  std::string mapping, truth, scopes, out;

  void add(CLI::App* cmd) {
    cmd->add_option("--mapping", mapping, "mapping written by align")->required();
    cmd->add_option("--truth", truth, "ground-truth pairs (u TAB v)")->required();
    cmd->add_option("--scopes", scopes, "scope log written by align; enables hit count and gain");
    cmd->add_option("--out", out, "report output (JSON); stdout when omitted");
  }

  int run() {
    std::vector<MappingRow> rows;
    {
      auto in = text::open_input(mapping);
      rows = read_mapping(in, mapping);
    }
    std::vector<std::pair<std::string, std::string>> pairs;
    {
      auto in = text::open_input(truth);
      pairs = read_external_pairs(in, truth);
    }
    std::optional<ScopeLog> log;
    if (!scopes.empty()) {
      auto in = text::open_input(scopes);
      log = read_scope_log(in, scopes);
    }
    const auto report = evaluate_external(rows, pairs, log ? &*log : nullptr);
    if (out.empty()) {
      write_eval_report(std::cout, report);
    } else {
      write_file(out, [&](std::ostream& os) { write_eval_report(os, report); });
    }
    return kExitOk;
  }
};

// --- perturb ---------------------------------------------------------------

struct PerturbCommand {
  std::string graph, out_graph, out_truth, prior_out;
  PerturbationSpec spec;
  std::size_t prior_decoys = 5;
  double prior_noise = 0.0;

  void add(CLI::App* cmd) {
    cmd->add_option("--graph", graph, "input graph: [VERTICES,]EDGES")->required();
    cmd->add_option("--out-graph", out_graph, "output graph: VERTICES,EDGES")->required();
    cmd->add_option("--out-truth", out_truth, "ground truth output (input id TAB new id)")
        ->required();
    cmd->add_option("--edges", spec.remove_edges, "fraction of edges removed")
        ->capture_default_str();
    cmd->add_option("--add-vertices", spec.add_vertices, "fraction of vertices added")
        ->capture_default_str();
    cmd->add_option("--add-edges", spec.add_edges, "fraction of edges added")
        ->capture_default_str();
    cmd->add_option("--attr-noise", spec.attr_noise, "fraction of vertex tokens replaced")
        ->capture_default_str();
    cmd->add_option("--seed", spec.seed)->capture_default_str();
    cmd->add_option("--prior-out", prior_out,
                    "also write a prior similarity table between input and output graphs");
    cmd->add_option("--prior-decoys", prior_decoys, "wrong candidates per true pair in the prior")
        ->capture_default_str();
    cmd->add_option("--prior-noise", prior_noise, "fraction of prior entries rewritten")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
  }

  int run() {
    spec.validate();
    const auto [vertex_path, edge_path] = output_graph_spec(out_graph);
    const auto input = load_graph_spec(graph);
    const auto result = perturb(input, spec);
    save_graph(result.graph, vertex_path, edge_path);
    write_file(out_truth, [&](std::ostream& os) {
      os << "# perturb edges=" << spec.remove_edges << " add-vertices=" << spec.add_vertices
         << " add-edges=" << spec.add_edges << " attr-noise=" << spec.attr_noise
         << " seed=" << spec.seed << '\n';
      write_vertex_pairs(os, result.truth.pairs, input, result.graph);
    });
    if (!prior_out.empty()) {
      auto table = make_prior_table(result.truth, result.graph.num_vertices(), prior_decoys,
                                    spec.seed);
      if (prior_noise > 0.0) table = perturb_external(table, prior_noise, spec.seed);
      write_file(prior_out, [&](std::ostream& os) {
        write_external_similarity(os, table, input, result.graph);
      });
    }
    spdlog::info("perturbed graph: {} vertices, {} edges (input {} / {})",
                 result.graph.num_vertices(), result.graph.num_edges(), input.num_vertices(),
                 input.num_edges());
    return kExitOk;
  }
};

// --- heatmap ---------------------------------------------------------------

struct HeatmapCommand {
  std::string g1, g2, anchors, out;
  double cell = 0.1;
  bool no_neighbors = false;
  AlignerConfig config;
  SimilarityOptions similarity;

  void add(CLI::App* cmd) {
    cmd->add_option("--g1", g1, "first graph: [VERTICES,]EDGES")->required();
    cmd->add_option("--g2", g2, "second graph: [VERTICES,]EDGES")->required();
    cmd->add_option("--anchors", anchors, "known pairs; bootstrapped when omitted");
    cmd->add_option("--out", out, "density grid output (CSV)")->required();
    cmd->add_option("--cell", cell, "grid cell edge length")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    add_aligner_options(cmd, config, no_neighbors);
    similarity.add(cmd);
  }

  int run(unsigned threads) {
    config.threads = threads;
    config.validate();
    const auto first = load_graph_spec(g1);
    const auto second = load_graph_spec(g2);
    AnchorMap pairs;
    if (!anchors.empty()) {
      pairs = load_anchor_map(anchors, first, second);
    } else {
      const SimilarityContext sim(first, second, similarity.build(first, second));
      pairs = bootstrap_anchors(
          first, second, [&](VertexId u, VertexId v) { return sim.total(u, v, nullptr); },
          config.bootstrap_log_base);
    }
    DistanceTable d;
    AnchorEmbedding embedding;
    try {
      embedding = embed_anchors(first, second, pairs.pairs, d, config);
    } catch (const InsufficientVantageAnchors& e) {
      throw AbortError(e.what());
    }
    const auto grid = export_density_grid(embedding.positions, cell);
    write_file(out, [&](std::ostream& os) { write_density_csv(grid, os); });
    spdlog::info("{} x {} grid from {} vantage pairs", grid.bins, grid.bins,
                 embedding.pairs.size());
    return kExitOk;
  }
};

// --- sweep -----------------------------------------------------------------

struct SweepCommand {
  std::string g1, g2, truth, anchors, out, name;
  std::vector<std::size_t> bucket_sizes{250, 500, 1000, 2000};
  SyntheticSpec graph;
  PerturbationSpec noise{.remove_edges = 0.1};
  std::size_t anchor_count = 40;
  std::size_t prior_decoys = 0;
  bool no_neighbors = false;
  AlignerConfig config;
  SimilarityOptions similarity;

  void add(CLI::App* cmd) {
    cmd->add_option("--bucket-sizes", bucket_sizes, "bucket sizes to sweep")
        ->delimiter(',')
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--out", out, "sweep output (CSV)")->required();
    cmd->add_option("--name", name, "scenario name in the CSV");
    auto* files = cmd->add_option_group("files", "align a given pair of graphs");
    files->add_option("--g1", g1, "first graph: [VERTICES,]EDGES");
    files->add_option("--g2", g2, "second graph: [VERTICES,]EDGES");
    files->add_option("--truth", truth, "ground-truth pairs");
    files->add_option("--anchors", anchors, "known pairs; bootstrapped when omitted");
    auto* synthetic = cmd->add_option_group("synthetic", "generate a perturbed random graph pair");
    synthetic->add_option("--vertices", graph.vertices)->capture_default_str();
    synthetic->add_option("--degree", graph.average_degree)->capture_default_str();
    synthetic->add_option("--types", graph.vertex_types)->capture_default_str();
    synthetic->add_option("--edges", noise.remove_edges, "fraction of edges removed")
        ->capture_default_str();
    synthetic->add_option("--add-vertices", noise.add_vertices)->capture_default_str();
    synthetic->add_option("--add-edges", noise.add_edges)->capture_default_str();
    synthetic->add_option("--attr-noise", noise.attr_noise)->capture_default_str();
    synthetic->add_option("--anchor-count", anchor_count)->capture_default_str();
    synthetic->add_option("--prior-decoys", prior_decoys,
                          "build a prior similarity table with this many decoys (0: none)")
        ->capture_default_str();
    synthetic->add_option("--seed", graph.seed)->capture_default_str();
    add_aligner_options(cmd, config, no_neighbors);
    similarity.add(cmd);
  }

  int run(unsigned threads) {
    config.scan_neighbors = !no_neighbors;
    config.threads = threads;
    config.validate();
    std::vector<Scenario> scenarios(1);
    auto& s = scenarios.front();
    if (!g1.empty() || !g2.empty() || !truth.empty()) {
      if (g1.empty() || g2.empty() || truth.empty()) {
        throw UsageError("file sweeps need --g1, --g2 and --truth");
      }
      s.name = name.empty() ? "files" : name;
      s.first = load_graph_spec(g1);
      s.second = load_graph_spec(g2);
      s.truth = load_ground_truth(truth, s.first, s.second);
      if (!anchors.empty()) s.anchors = load_anchor_map(anchors, s.first, s.second);
    } else {
      noise.seed = graph.seed;
      noise.validate();
      s = make_scenario(name.empty() ? "er-" + std::to_string(graph.vertices) : name, graph,
                        noise, anchor_count);
      if (prior_decoys > 0) {
        s.external = std::make_shared<ExternalSimilarity>(
            make_prior_table(s.truth, s.second.num_vertices(), prior_decoys, graph.seed));
      }
    }
    const auto cells = sweep(scenarios, bucket_sizes, config, similarity.build(s.first, s.second));
    write_file(out, [&](std::ostream& os) { write_sweep_csv(os, cells); });
    return kExitOk;
  }
};

void configure_logging(const std::string& level) {
  auto logger = std::make_shared<spdlog::logger>(
      "gsana", std::make_shared<spdlog::sinks::stderr_sink_mt>());
  logger->set_pattern("[%l] %v");
  logger->set_level(spdlog::level::from_str(level));
  spdlog::set_default_logger(std::move(logger));
}

}  // namespace

int run_cli(std::vector<std::string> args) {
  CLI::App app{"Iterative global-structure-assisted attributed graph aligner", "gsana"};
  app.set_version_flag("--version", GSANA_VERSION);
  app.require_subcommand(1);
  app.fallthrough();
  unsigned threads = 1;
  std::string log_level = "info";
  app.add_option("--threads", threads, "worker thread bound")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--log-level", log_level, "trace, debug, info, warn, error or off")
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "off"}))
      ->capture_default_str();

  AlignCommand align_cmd;
  EvaluateCommand evaluate_cmd;
  PerturbCommand perturb_cmd;
  HeatmapCommand heatmap_cmd;
  SweepCommand sweep_cmd;
  auto* align_app = app.add_subcommand("align", "align two graphs");
  auto* evaluate_app = app.add_subcommand("evaluate", "score a mapping against ground truth");
  auto* perturb_app = app.add_subcommand("perturb", "make a perturbed relabeled copy of a graph");
  auto* heatmap_app = app.add_subcommand("heatmap", "export the first-iteration density grid");
  auto* sweep_app = app.add_subcommand("sweep", "align over several bucket sizes");
  align_cmd.add(align_app);
  evaluate_cmd.add(evaluate_app);
  perturb_cmd.add(perturb_app);
  heatmap_cmd.add(heatmap_app);
  sweep_cmd.add(sweep_app);
  std::string config_file;
  for (auto* sub : app.get_subcommands({})) {
    sub->add_option("--config", config_file, "key = value configuration file");
  }

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  CLI::App* chosen = app.get_subcommands().front();
  try {
    configure_logging(log_level);
    if (!config_file.empty()) {
      try {
        apply_config_file(chosen, config_file);
      } catch (const CLI::ParseError& e) {
        throw UsageError(config_file + ": " + e.what());
      }
    }
    echo_config(chosen);
    if (chosen == align_app) return align_cmd.run(threads);
    if (chosen == evaluate_app) return evaluate_cmd.run();
    if (chosen == perturb_app) return perturb_cmd.run();
    if (chosen == heatmap_app) return heatmap_cmd.run(threads);
    return sweep_cmd.run(threads);
  } catch (const AbortError& e) {
    spdlog::error("alignment aborted: {}", e.what());
    return kExitAbort;
  } catch (const InputError& e) {
    spdlog::error("{}", e.what());
    return kExitInput;
  } catch (const UsageError& e) {
    spdlog::error("{}", e.what());
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    spdlog::error("invalid configuration: {}", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitInput;
  }
}

}  // namespace gsana

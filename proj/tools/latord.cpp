// latord: command-line front end. JSON on stdout, diagnostics on stderr.
// Exit codes: 0 ok, 1 validation or input error, 2 usage error.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "latent_order/batch.hpp"
#include "latent_order/bregman.hpp"
#include "latent_order/decode.hpp"
#include "latent_order/error.hpp"
#include "latent_order/greedy.hpp"
#include "latent_order/json_io.hpp"
#include "latent_order/masks.hpp"
#include "latent_order/metrics.hpp"
#include "latent_order/order_ops.hpp"
#include "latent_order/perturb.hpp"
#include "latent_order/toyvae.hpp"
#include "latent_order/verify.hpp"

using namespace latent_order;

namespace {

constexpr int kUsage = 2;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("LATENT_ORDER_SEED")) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError("LATENT_ORDER_SEED must be an unsigned integer");
  }
  return 0;
}

void emit(const Json& j) { std::cout << j.dump() << "\n"; }

Instance load_instance(const std::string& path) { return parse_instance(read_text(path)); }

// A nested array is the raw W; an object may carry w_raw and its own masks.
LogitSet load_logits(const std::string& path, const Instance& inst, const MaskOptions& options) {
  const Json j = parse_json_text(read_text(path), path);
  const MaskPair masks = build_masks(inst, options);
  LogitSet set{Matrix(), masks.a_mask, masks.s_mask};
  if (j.is_array()) {
    set.w_raw = matrix_from_json(j, "logits");
  } else if (j.is_object() && j.contains("w_raw")) {
    set.w_raw = matrix_from_json(j["w_raw"], "w_raw");
    if (j.contains("a_mask")) set.a_mask = matrix_from_json(j["a_mask"], "a_mask");
    if (j.contains("s_mask")) set.s_mask = matrix_from_json(j["s_mask"], "s_mask");
  } else {
    throw ParseError("logits: expected a matrix or an object with w_raw");
  }
  const std::size_t n = inst.n(), m = inst.m();
  if (set.w_raw.rows() != n + m || set.w_raw.cols() != m + 1)
    throw DimensionError("logits: expected shape " + std::to_string(n + m) + "x" +
                         std::to_string(m + 1));
  if (set.a_mask.rows() != n || set.a_mask.cols() != m + 1 || set.s_mask.rows() != m ||
      set.s_mask.cols() != m + 1)
    throw DimensionError("logits: mask shapes do not match the instance");
  return set;
}

Json violations_json(const GenerationOrder& o, bool discrete) {
  Json v = Json::array();
  for (const auto& s : validate_order(o, discrete)) v.push_back(s);
  return v;
}

Json solve_json(const SolveResult& r, const SolverConfig& cfg) {
  const bool discrete = cfg.mode != OutputMode::soft;
  return {{"mode", std::string(to_string(cfg.mode))},
          {"tau", cfg.tau},
          {"order", order_to_json(r.order)},
          {"residual", r.residual},
          {"iterations", r.iterations_run},
          {"violations", violations_json(r.order, discrete)}};
}

Segmentation load_segmentation(const std::string& path, std::optional<double>& density) {
  const Json j = parse_json_text(read_text(path), path);
  if (j.is_object() && j.contains("groups")) {
    Segmentation s = j["groups"].get<Segmentation>();
    std::size_t nodes = 0;
    for (auto& g : s) {
      std::sort(g.begin(), g.end());
      nodes += g.size();
    }
    std::sort(s.begin(), s.end());
    // chains of sizes c_i contribute c_i - 1 links each
    if (nodes > 0) density = double(nodes - s.size()) / double(nodes);
    return s;
  }
  if (j.is_object() && j.contains("S")) {
    const Matrix S = matrix_from_json(j["S"], path + ".S");
    density = segmentation_density(S);
    return segmentation_from_S(S);
  }
  if (j.is_object() && j.contains("order")) {
    const GenerationOrder o = order_from_json(j["order"], path + ".order");
    density = segmentation_density(o.segmentation());
    return segmentation_from_order(o);
  }
  if (j.is_array()) {
    const Matrix S = matrix_from_json(j, path);
    density = segmentation_density(S);
    return segmentation_from_S(S);
  }
  throw ParseError(path + ": expected groups, S, order or a matrix");
}

EdgeScores load_scores(const std::string& path) {
  const Json j = parse_json_text(read_text(path), path);
  EdgeScores s;
  try {
    s.labels = j.at("labels").get<std::vector<std::string>>();
    s.null_label = j.value("null_label", std::size_t{0});
    s.root_score = j.at("root_score").get<std::vector<double>>();
    if (j.contains("node_labels")) s.node_labels = j["node_labels"].get<std::vector<std::string>>();
    const Json& lp = j.at("label_logprob");
    s.m = lp.size();
    s.label_logprob.assign(s.m * s.m * s.labels.size(), 0.0);
    for (std::size_t a = 0; a < s.m; ++a) {
      if (lp[a].size() != s.m) throw ParseError("label_logprob[" + std::to_string(a) + "]: expected m rows");
      for (std::size_t b = 0; b < s.m; ++b) {
        const Json& cell = lp[a][b];
        if (cell.size() != s.labels.size())
          throw ParseError("label_logprob[" + std::to_string(a) + "][" + std::to_string(b) +
                           "]: expected one entry per label");
        for (std::size_t l = 0; l < s.labels.size(); ++l)
          s.logprob(a, b, l) = cell[l].is_string() && cell[l] == "-inf"
                                   ? kMasked
                                   : cell[l].get<double>();
      }
    }
  } catch (const Json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Latent generation orders: projection, sampling, masks and decoding"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  bool seed_given = false;

  // solve
  auto* solve = app.add_subcommand("solve", "Project logits onto the order polytope");
  std::string instance_path, logits_path;
  SolverConfig cfg;
  std::string mode_text = "soft";
  std::size_t samples = 0;
  bool no_prune = false;
  solve->add_option("--instance", instance_path, "Instance JSON (- for stdin)")->required();
  solve->add_option("--logits", logits_path, "Logits JSON")->required();
  solve->add_option("--tau", cfg.tau, "Temperature");
  solve->add_option("--iters", cfg.iterations, "Iteration budget");
  solve->add_option("--mode", mode_text, "soft, rounded or straight_through");
  solve->add_option("--samples", samples,
                    "Draw this many Gumbel perturbations and solve each (0 = solve as given)");
  solve->add_option("--seed", seed, "Base seed for --samples")->each([&](const std::string&) {
    seed_given = true;
  });
  solve->add_flag("--no-prune", no_prune, "Keep entries no feasible order can use");

  // sample
  auto* sample = app.add_subcommand("sample", "Perturb logits with Gumbel noise");
  double lambda = 0.0;
  sample->add_option("--instance", instance_path, "Instance JSON")->required();
  sample->add_option("--logits", logits_path, "Logits JSON (default: zero logits)");
  sample->add_option("--seed", seed, "Seed")->each([&](const std::string&) { seed_given = true; });
  sample->add_option("--lambda", lambda, "Free-bits floor");

  // mask
  auto* mask = app.add_subcommand("mask", "Build the alignment and segmentation masks");
  std::string prefix_path;
  bool no_copy = false;
  mask->add_option("--instance", instance_path, "Instance JSON")->required();
  mask->add_option("--prefixed-S", prefix_path, "Discrete S to freeze (JSON matrix)");
  mask->add_flag("--no-copy-alignment", no_copy, "Do not restrict copyable nodes to their tokens");

  // greedy
  auto* greedy = app.add_subcommand("greedy", "Greedy segmentation baseline");
  int T = 4;
  bool prefix_masks = false;
  greedy->add_option("--instance", instance_path, "Instance JSON")->required();
  greedy->add_option("-T,--max-nodes", T, "Largest subgraph");
  greedy->add_flag("--prefix-masks", prefix_masks, "Also emit the masks that freeze this S");

  // derive
  auto* derive = app.add_subcommand("derive", "B, A_inf and chains of an order");
  std::string order_path;
  derive->add_option("--order", order_path, "Order JSON")->required();
  derive->add_option("-T,--steps", T, "Propagation steps");

  // decode
  auto* decode = app.add_subcommand("decode", "Assemble a graph from edge and root scores");
  std::string scores_path;
  double threshold = 0.5;
  int max_reent = 5;
  decode->add_option("--scores", scores_path, "Scores JSON")->required();
  decode->add_option("--threshold", threshold, "Reentrancy probability threshold");
  decode->add_option("--max-reentrancies", max_reent, "Reentrancy cap");

  // metrics
  auto* metrics = app.add_subcommand("metrics", "Density and same-subgraph F1 of segmentations");
  std::vector<std::string> seg_paths;
  metrics->add_option("files", seg_paths, "Two or three segmentation files")
      ->required()
      ->expected(2, 3);

  // verify
  auto* verify = app.add_subcommand("verify", "Run the property battery");
  std::size_t seeds = 100;
  verify->add_option("--seeds", seeds, "Trials per property");
  verify->add_option("--seed", seed, "Base seed")->each([&](const std::string&) { seed_given = true; });

  // train-toy
  auto* train = app.add_subcommand("train-toy", "Straight-through training on a planted decoder");
  std::string theta_path;
  TrainConfig tc;
  std::string train_mode = "straight_through";
  train->add_option("--instance", instance_path, "Instance JSON")->required();
  train->add_option("--theta", theta_path, "Decoder theta (JSON matrix)")->required();
  train->add_option("--steps", tc.steps, "Gradient steps");
  train->add_option("--lr", tc.learning_rate, "Learning rate");
  train->add_option("--lambda", tc.lambda, "Free-bits floor");
  train->add_option("--seed", seed, "Seed")->each([&](const std::string&) { seed_given = true; });
  train->add_option("--mode", train_mode, "soft, rounded or straight_through");
  train->add_option("--tau", tc.tau, "Temperature of the soft solution");

  if (argc <= 1) {
    std::cerr << app.help();
    return kUsage;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (!seed_given) seed = default_seed();

    if (*solve) {
      cfg.mode = parse_mode(mode_text);
      cfg.prune_forced_zeros = !no_prune;
      cfg.check();
      const Instance inst = load_instance(instance_path);
      const LogitSet logits = load_logits(logits_path, inst, {});
      if (samples == 0) {
        const SolveResult r = entropic_projection(logits.masked(), inst.m(), cfg);
        emit(solve_json(r, cfg));
      } else {
        const auto results = perturb_and_solve(logits, samples, seed, cfg);
        Json arr = Json::array();
        for (std::size_t i = 0; i < results.size(); ++i) {
          Json one = solve_json(results[i], cfg);
          one["seed"] = mix_seed(seed, i);
          arr.push_back(std::move(one));
        }
        emit({{"base_seed", seed}, {"samples", arr}});
      }
    } else if (*sample) {
      const Instance inst = load_instance(instance_path);
      LogitSet logits;
      if (logits_path.empty()) {
        const MaskPair masks = build_masks(inst);
        logits = zero_logits(masks.a_mask, masks.s_mask);
      } else {
        logits = load_logits(logits_path, inst, {});
      }
      const Matrix w = sample_perturbed_logits(logits, seed);
      emit({{"seed", seed},
            {"perturbed", matrix_to_json(w)},
            {"kl", kl_gumbel(logits)},
            {"kl_free_bits", kl_free_bits(logits, lambda)}});
    } else if (*mask) {
      const Instance inst = load_instance(instance_path);
      MaskOptions opt;
      opt.enforce_copy_alignment = !no_copy;
      if (!prefix_path.empty())
        opt.prefixed_S = matrix_from_json(parse_json_text(read_text(prefix_path), prefix_path),
                                          "prefixed_S");
      const MaskPair masks = build_masks(inst, opt);
      emit({{"dfs_order", dfs_order(inst.graph)},
            {"a_mask", matrix_to_json(masks.a_mask)},
            {"s_mask", matrix_to_json(masks.s_mask)}});
    } else if (*greedy) {
      const Instance inst = load_instance(instance_path);
      const Matrix S = greedy_segment(inst.graph, T);
      Json out{{"S", matrix_to_json(S)}, {"density", segmentation_density(S)}};
      if (prefix_masks) {
        MaskOptions opt;
        opt.prefixed_S = S;
        const MaskPair masks = build_masks(inst, opt);
        out["a_mask"] = matrix_to_json(masks.a_mask);
        out["s_mask"] = matrix_to_json(masks.s_mask);
      }
      emit(out);
    } else if (*derive) {
      const Json j = parse_json_text(read_text(order_path), order_path);
      const GenerationOrder o = order_from_json(j.is_object() && j.contains("order") ? j["order"] : j,
                                                "order");
      const auto problems = validate_order(o, o.discrete);
      if (!problems.empty()) throw ValidationError("order: " + problems.front());
      const AlignmentResult a = derive_alignment(o, T);
      Json out{{"B", matrix_to_json(a.b)}, {"A_inf", matrix_to_json(a.a_inf)}};
      if (o.discrete) {
        Json segs = Json::array();
        for (const auto& g : extract_segmentation(o))
          segs.push_back({{"token", g.token}, {"chain", g.chain}});
        out["segmentation"] = segs;
      }
      emit(out);
    } else if (*decode) {
      const EdgeScores s = load_scores(scores_path);
      const DecodeResult d = decode_graph_detailed(s, threshold, max_reent);
      Json out = graph_to_json(d.graph);
      out["tree_weight"] = d.tree_weight;
      out["reentrancies"] = d.reentrancies;
      emit(out);
    } else if (*metrics) {
      std::vector<Segmentation> segs;
      Json files = Json::array();
      for (const auto& p : seg_paths) {
        std::optional<double> density;
        segs.push_back(load_segmentation(p, density));
        Json f{{"file", p}, {"subgraphs", segs.back().size()}};
        f["density"] = density ? Json(*density) : Json(nullptr);
        files.push_back(f);
      }
      Json pairs = Json::array();
      for (std::size_t a = 0; a < segs.size(); ++a)
        for (std::size_t b = a + 1; b < segs.size(); ++b)
          pairs.push_back({{"a", seg_paths[a]},
                           {"b", seg_paths[b]},
                           {"f1", same_subgraph_f1(segs[a], segs[b])}});
      emit({{"files", files}, {"same_subgraph_f1", pairs}});
    } else if (*verify) {
      const auto results = run_verify(seeds, seed);
      Json checks = Json::array();
      bool all = true;
      for (const auto& r : results) {
        all = all && r.passed();
        Json c{{"property", r.name}, {"trials", r.trials}, {"failures", r.failures},
               {"passed", r.passed()}};
        if (!r.passed()) c["first_failure"] = r.first_failure;
        checks.push_back(c);
        std::cerr << (r.passed() ? "PASS " : "FAIL ") << r.name << " (" << r.trials
                  << " trials)\n";
      }
      emit({{"seed", seed}, {"all_passed", all}, {"checks", checks}});
      return all ? 0 : 1;
    } else if (*train) {
      tc.mode = parse_mode(train_mode);
      tc.seed = seed;
      const Instance inst = load_instance(instance_path);
      ToyDecoder dec{matrix_from_json(parse_json_text(read_text(theta_path), theta_path), "theta")};
      const TrainResult r = train_toy(inst, dec, tc);
      for (std::size_t s = 0; s < r.elbo_trace.size(); ++s)
        std::cout << Json{{"step", s}, {"elbo", r.elbo_trace[s]}}.dump() << "\n";
      std::cout << Json{{"w", matrix_to_json(r.w)},
                        {"recovered", r.recovered},
                        {"learned", order_to_json(r.learned)},
                        {"target", order_to_json(r.target)}}
                       .dump()
                << "\n";
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

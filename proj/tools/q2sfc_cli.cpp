// Command-line front end: topology generation, training, evaluation,
// baseline comparison and LLDP codec utilities.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "q2sfc/baselines.hpp"
#include "q2sfc/config.hpp"
#include "q2sfc/harness.hpp"

namespace fs = std::filesystem;
using namespace q2sfc;

namespace {

struct CommonOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "override the config seed");
  cmd->add_option("--out", o.out, "output directory (overrides output_dir)");
}

ExperimentConfig load(const CommonOptions& o) {
  ExperimentConfig cfg = load_config(o.config);
  if (o.seed) {
    cfg.seed = *o.seed;
    cfg.train.seed = derive_seed(cfg.seed, SeedStream::kTraining);
  }
  if (!o.out.empty()) cfg.output_dir = o.out;
  fs::create_directories(cfg.output_dir);
  return cfg;
}

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::vector<lldp::CapturedFrame> load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_frame_corpus(in);
}

int cmd_generate_topology(const CommonOptions& o) {
  const ExperimentConfig cfg = load(o);
  const RawTopology raw = experiment_topology(cfg);
  const OverlayGraph g = simplify(raw);
  const fs::path path = fs::path(cfg.output_dir) / "topology.txt";
  auto out = open_out(path);
  write_topology(out, raw);
  std::printf("%zu types, %zu instances, %zu servers, %zu aggregated links -> %s\n", g.types().size(),
              g.instances().size(), g.servers().size(), g.links().size(), path.c_str());
  return 0;
}

int cmd_train(const CommonOptions& o) {
  const ExperimentConfig cfg = load(o);
  const RawTopology raw = experiment_topology(cfg);
  const OverlayGraph g = simplify(raw);
  SfcEnv env = make_env(cfg, g);
  RequestGenerator requests(g, cfg.qoe, cfg.requests, derive_seed(cfg.seed, SeedStream::kTrainRequests));
  const TrainResult result = train(env, requests, cfg.train, cfg.policy);
  const fs::path dir(cfg.output_dir);
  {
    auto out = open_out(dir / "topology.txt");
    write_topology(out, raw);
  }
  {
    auto out = open_out(dir / "metrics.csv");
    write_metrics_csv(out, cfg, result.metrics);
  }
  save_checkpoint((dir / "model.ckpt").string(), result.network);
  if (!result.metrics.empty()) {
    const auto& last = result.metrics.back();
    std::printf("trained %zu episodes, %llu updates; last episode mean_qoe=%.6g violation_rate=%.4g\n",
                result.metrics.size(), static_cast<unsigned long long>(result.gradient_steps),
                last.mean_qoe, last.violation_rate);
  }
  return 0;
}

int cmd_evaluate(const CommonOptions& o, const std::string& model, const std::string& request_file) {
  const ExperimentConfig cfg = load(o);
  const OverlayGraph g = simplify(experiment_topology(cfg));
  SfcEnv env = make_env(cfg, g);
  const QNetwork net = load_checkpoint(model);
  if (net.input_width() != env.state_width() || net.output_width() != env.action_width()) {
    throw std::runtime_error("checkpoint shape does not fit this topology");
  }
  std::vector<SfcRequest> requests;
  if (!request_file.empty()) {
    requests = load_requests(request_file, g);
  } else {
    RequestGenerator gen(g, cfg.qoe, cfg.requests, derive_seed(cfg.seed, SeedStream::kHeldOut));
    requests = gen.batch(cfg.evaluation.requests);
  }
  const auto records = evaluate(net, requests, env);
  auto out = open_out(fs::path(cfg.output_dir) / "evaluation.csv");
  write_evaluation_csv(out, cfg, g, requests, records);
  std::size_t complete = 0, violated = 0;
  double qoe = 0.0;
  for (const auto& r : records) {
    if (r.complete) {
      ++complete;
      qoe += r.chain.qoe;
    }
    if (r.violated) ++violated;
  }
  std::printf("%zu requests: %zu complete, %zu violating, mean qoe %.6g\n", records.size(), complete,
              violated, complete ? qoe / static_cast<double>(complete) : 0.0);
  return 0;
}

int cmd_compare(const CommonOptions& o) {
  const ExperimentConfig cfg = load(o);
  const OverlayGraph g = simplify(experiment_topology(cfg));
  const CompareResult result = run_compare(cfg, g);
  const fs::path dir(cfg.output_dir);
  {
    auto out = open_out(dir / "compare.csv");
    write_compare_csv(out, cfg, result.rows);
  }
  {
    auto out = open_out(dir / "metrics.csv");
    write_metrics_csv(out, cfg, result.metrics);
  }
  {
    auto out = open_out(dir / "summary.csv");
    write_summary_csv(out, cfg, result.summary);
  }
  save_checkpoint((dir / "model.ckpt").string(), result.network);
  if (result.violent_skipped) {
    std::fprintf(stderr, "warning: %zu requests exceeded the enumeration cap; violent search skipped\n",
                 result.violent_skipped);
  }
  for (const auto& s : result.summary) {
    std::printf("%-8s mean_time=%.3gs heldout_qoe=%.6g violation_rate=%.4g\n", s.method.c_str(),
                s.mean_time_s, s.heldout_qoe, s.heldout_violation_rate);
  }
  return 0;
}

int cmd_codec_roundtrip(const std::string& file, const std::string& qos_scheme) {
  const auto frames = load_corpus(file);
  const auto checks = roundtrip_corpus(frames, qos_scheme);
  std::size_t failed = 0;
  for (const auto& c : checks) {
    if (!c.ok) {
      ++failed;
      std::printf("frame %zu FAIL %s\n", c.index, c.message.c_str());
    }
  }
  std::printf("%zu discovery frames, %zu passed, %zu failed\n", checks.size(), checks.size() - failed, failed);
  return failed ? 1 : 0;
}

int cmd_codec_dump(const std::string& file, const std::string& qos_scheme) {
  const auto frames = load_corpus(file);
  dump_corpus(std::cout, frames);
  const auto checks = roundtrip_corpus(frames, qos_scheme);
  for (const auto& c : checks) {
    if (!c.ok) return 1;
  }
  return 0;
}

int cmd_codec_report(const std::string& file) {
  const auto frames = load_corpus(file);
  write_overhead_report(std::cout, lldp::overhead_report(frames));
  return 0;
}

int cmd_codec_generate(const std::string& topology, const std::string& out_path, std::uint64_t seed,
                       std::size_t data_frames) {
  const RawTopology raw = load_topology(topology);
  const auto frames = generate_frame_corpus(raw, seed, data_frames);
  auto out = open_out(out_path);
  write_frame_corpus(out, frames);
  std::printf("%zu frames -> %s\n", frames.size(), out_path.c_str());
  return 0;
}

int cmd_codec_refresh(const std::string& topology, const std::string& corpus, const std::string& out_path) {
  RawTopology raw = load_topology(topology);
  const std::size_t applied = refresh_topology(raw, load_corpus(corpus));
  auto out = open_out(out_path);
  write_topology(out, raw);
  std::printf("%zu device records refreshed -> %s\n", applied, out_path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QoE-aware service function chaining with deep Q-learning"};
  app.require_subcommand(1);

  CommonOptions gen_opts, train_opts, eval_opts, cmp_opts;
  add_common(app.add_subcommand("generate-topology", "generate and persist a random topology"), gen_opts);
  add_common(app.add_subcommand("train", "train the agent, write metrics and a checkpoint"), train_opts);
  auto* eval_cmd = app.add_subcommand("evaluate", "greedy evaluation of a checkpoint");
  add_common(eval_cmd, eval_opts);
  std::string model, request_file;
  eval_cmd->add_option("--model", model, "checkpoint file")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--requests", request_file, "request file (default: generated held-out set)")
      ->check(CLI::ExistingFile);
  add_common(app.add_subcommand("compare", "train and compare against random and exhaustive search"),
             cmp_opts);

  auto* codec = app.add_subcommand("codec", "LLDP QoS TLV utilities");
  codec->require_subcommand(1);
  std::string corpus, topology, out_path, qos_scheme = "qos";
  std::uint64_t corpus_seed = 1;
  std::size_t data_frames = 8;
  auto* dump = codec->add_subcommand("dump", "describe every frame of a corpus");
  dump->add_option("corpus", corpus)->required()->check(CLI::ExistingFile);
  dump->add_option("--qos-scheme", qos_scheme, "scheme whose frames must carry the QoS TLV");
  auto* roundtrip = codec->add_subcommand("roundtrip", "parse and rebuild every discovery frame");
  roundtrip->add_option("corpus", corpus)->required()->check(CLI::ExistingFile);
  roundtrip->add_option("--qos-scheme", qos_scheme, "scheme whose frames must carry the QoS TLV");
  auto* report = codec->add_subcommand("report", "per-scheme discovery traffic overhead");
  report->add_option("corpus", corpus)->required()->check(CLI::ExistingFile);
  auto* generate = codec->add_subcommand("generate", "discovery corpus for a topology's devices");
  generate->add_option("--topology", topology)->required()->check(CLI::ExistingFile);
  generate->add_option("--out", out_path)->required();
  generate->add_option("--seed", corpus_seed);
  generate->add_option("--data-frames", data_frames, "non-discovery frames per device");
  auto* refresh = codec->add_subcommand("refresh", "apply QoS frames to a topology file");
  refresh->add_option("--topology", topology)->required()->check(CLI::ExistingFile);
  refresh->add_option("--corpus", corpus)->required()->check(CLI::ExistingFile);
  refresh->add_option("--out", out_path)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("generate-topology")) return cmd_generate_topology(gen_opts);
    if (app.got_subcommand("train")) return cmd_train(train_opts);
    if (app.got_subcommand("evaluate")) return cmd_evaluate(eval_opts, model, request_file);
    if (app.got_subcommand("compare")) return cmd_compare(cmp_opts);
    if (dump->parsed()) return cmd_codec_dump(corpus, qos_scheme);
    if (roundtrip->parsed()) return cmd_codec_roundtrip(corpus, qos_scheme);
    if (report->parsed()) return cmd_codec_report(corpus);
    if (generate->parsed()) return cmd_codec_generate(topology, out_path, corpus_seed, data_frames);
    if (refresh->parsed()) return cmd_codec_refresh(topology, corpus, out_path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}

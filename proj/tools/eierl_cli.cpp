// Command-line experiment harness: runs one agent variant over a seed list
// and writes per-seed CSVs, the cross-seed mean CSV and a learning-curve SVG.

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "eierl/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"EIERL dialogue-policy laboratory"};

  std::string config_path;
  std::string schema_ref;
  std::string agent;
  double epsilon = -1.0;
  int epochs = -1;
  std::string seeds_csv;
  int pop_evo = -1;
  int pop_drl = -1;
  double mut_strength = -1.0;
  bool no_eii = false;
  std::string out_dir;
  int jobs = -1;

  app.add_option("--config", config_path, "Config file (flat key = value)");
  app.add_option("--schema", schema_ref,
                 "Schema file path or builtin name (movie|restaurant|taxi)");
  app.add_option("--agent", agent, "Agent variant: eierl|erl|ea|dqn");
  app.add_option("--epsilon", epsilon, "Exploration rate of the dqn variant");
  app.add_option("--epochs", epochs, "Training epochs per seed");
  app.add_option("--seeds", seeds_csv, "Comma-separated seed list");
  app.add_option("--pop-evo", pop_evo, "EA population size m");
  app.add_option("--pop-drl", pop_drl, "DRL population size n");
  app.add_option("--mut-strength", mut_strength, "Mutation strength sigma");
  app.add_flag("--no-eii", no_eii, "Disable elite injection (alias for --agent erl)");
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--jobs", jobs, "Parallel per-seed runs");

  CLI11_PARSE(app, argc, argv);

  try {
    eierl::ExperimentConfig cfg;
    if (!config_path.empty()) cfg = eierl::load_config_file(config_path);
    if (!schema_ref.empty()) cfg.schema = eierl::resolve_schema(schema_ref);
    if (!agent.empty()) cfg.variant = eierl::parse_variant(agent);
    if (no_eii) cfg.variant = eierl::AgentVariant::kErl;
    if (epsilon >= 0.0) cfg.dqn_epsilon = epsilon;
    if (epochs >= 0) cfg.epochs = epochs;
    if (!seeds_csv.empty()) cfg.seeds = eierl::parse_seed_list(seeds_csv);
    if (pop_evo >= 0) cfg.orch.evo.pop_size = pop_evo;
    if (pop_drl >= 0) cfg.orch.pop_policy_size = pop_drl;
    if (mut_strength > 0.0) cfg.orch.evo.mut_strength = mut_strength;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (jobs >= 1) cfg.jobs = jobs;

    const eierl::ExperimentResult result = eierl::run_experiment(cfg);

    const eierl::EpochMetrics& last = result.mean.back();
    std::printf("agent=%s schema=%s epochs=%d seeds=%zu\n",
                eierl::variant_name(cfg.variant).c_str(),
                cfg.schema.name.c_str(), cfg.epochs, cfg.seeds.size());
    std::printf("final mean: success=%.4f reward=%.2f turns=%.2f\n",
                last.success_rate, last.avg_reward, last.avg_turns);
    for (const std::string& f : result.files_written)
      std::printf("wrote %s\n", f.c_str());
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

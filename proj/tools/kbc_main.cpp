#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "kbc/commands.hpp"

namespace {

void add_dataset_flags(CLI::App* cmd, kbc::DatasetPaths& data, bool train_required) {
    auto* t = cmd->add_option("--train", data.train, "training triple file");
    if (train_required) t->required();
    cmd->add_option("--valid", data.valid, "validation triple file");
    cmd->add_option("--test", data.test, "test triple file");
}

void add_config_flags(CLI::App* cmd, kbc::TrainConfig& cfg, std::string* regime) {
    cmd->add_option("--dim", cfg.dim, "embedding dimension");
    cmd->add_option("--lambda", cfg.lambda, "regularization weight");
    cmd->add_option("--alpha", cfg.alpha, "L1/L2 balance in [0,1]");
    cmd->add_option("--eta", cfg.eta, "learning rate");
    cmd->add_option("--epochs", cfg.epochs, "training epochs");
    cmd->add_option("--negatives", cfg.negatives_per_positive,
                    "negative samples per positive");
    if (regime) cmd->add_option("--regime", *regime, "l2 | std-l1 | mul-l1");
    cmd->add_option("--minibatch", cfg.minibatch, "positive groups per optimizer step");
    cmd->add_option("--seed", cfg.seed, "master random seed");
    cmd->add_flag("--rda-global-clock", cfg.rda_global_clock,
                  "use the global step count for RDA clocks");
}

kbc::Regime parse_regime(const std::string& s) {
    auto r = kbc::regime_from_string(s);
    if (!r) throw CLI::ValidationError("--regime", "expected l2, std-l1 or mul-l1");
    return *r;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ComplEx knowledge-base completion with symmetry-adaptive "
                 "sparse regularization"};
    app.require_subcommand(1);

    kbc::TrainCmdOptions train_opts;
    std::string train_regime = "l2";
    auto* train = app.add_subcommand("train", "train a model");
    add_dataset_flags(train, train_opts.data, true);
    add_config_flags(train, train_opts.config, &train_regime);
    train->add_option("--out", train_opts.out, "output model archive")->required();
    train->add_option("--record", train_opts.record_out,
                      "run record path (default <out>.run.json)");
    train->add_option("--checkpoint-every", train_opts.checkpoint_every,
                      "validation cadence in epochs (0 = off)");
    train->add_option("--resume", train_opts.resume, "continue from a saved archive");
    train->add_option("--subsample-train", train_opts.subsample_train,
                      "keep this fraction of train rows (seeded)");
    train->add_flag("--grid", train_opts.grid,
                    "grid-search lambda/alpha/eta by validation filtered MRR");
    train->add_option("--grid-lambdas", train_opts.grid_lambdas, "grid lambda values");
    train->add_option("--grid-alphas", train_opts.grid_alphas, "grid alpha values");
    train->add_option("--grid-etas", train_opts.grid_etas, "grid eta values");
    train->add_option("--jobs", train_opts.jobs, "parallel grid trials");
    train->add_option("--threads", train_opts.eval_threads,
                      "threads for checkpoint evaluation (0 = all cores)");
    train->add_flag("--quiet", train_opts.quiet, "suppress progress output");

    kbc::EvalCmdOptions eval_opts;
    auto* eval = app.add_subcommand("eval", "evaluate a saved model");
    eval->add_option("--model", eval_opts.model, "model archive")->required();
    add_dataset_flags(eval, eval_opts.data, true);
    eval->add_option("--task", eval_opts.task, "rank | classify");
    eval->add_option("--split", eval_opts.split, "test | valid | train");
    eval->add_flag("--per-relation", eval_opts.per_relation, "per-relation breakdown");
    eval->add_flag("--pretty", eval_opts.pretty, "human-readable output");
    eval->add_option("--threads", eval_opts.threads, "ranking threads (0 = all cores)");

    kbc::SynthCmdOptions synth_opts;
    std::string synth_classes = "sym,anti,other";
    std::string synth_mechanism = "factored";
    double synth_fraction = 0.913;
    auto* synth = app.add_subcommand("synth", "generate a synthetic labeled KB");
    synth->add_option("--out", synth_opts.out_dir, "output directory")->required();
    synth->add_option("--entities", synth_opts.config.n_entities, "number of entities");
    synth->add_option("--relations", synth_classes,
                      "comma list of relation classes (sym|anti|other)");
    synth->add_option("--fraction", synth_fraction, "ordered-pair sample fraction");
    synth->add_option("--train-ratio", synth_opts.config.train_ratio, "train split ratio");
    synth->add_option("--p1", synth_opts.config.antisym_density,
                      "antisymmetric one-direction density");
    synth->add_option("--mechanism", synth_mechanism, "factored | iid");
    synth->add_option("--latent-dim", synth_opts.config.latent_dim,
                      "latent dimension (factored mechanism)");
    synth->add_option("--seed", synth_opts.config.seed, "generator seed");

    kbc::AnalyzeCmdOptions analyze_opts;
    auto* analyze = app.add_subcommand("analyze",
                                       "per-relation symmetry and sparsity of a model");
    analyze->add_option("--model", analyze_opts.model, "model archive")->required();
    add_dataset_flags(analyze, analyze_opts.data, true);
    analyze->add_option("--out", analyze_opts.out, "output TSV (default stdout)");
    analyze->add_option("--pattern", analyze_opts.pattern_out,
                        "also write the nonzero-pattern grid here");

    kbc::VarianceCmdOptions var_opts;
    std::string var_regimes = "mul-l1,std-l1,l2";
    std::string var_seeds;
    auto* variance = app.add_subcommand("variance",
                                        "seeded repeat-training spread per regime");
    add_dataset_flags(variance, var_opts.data, true);
    add_config_flags(variance, var_opts.base, nullptr);
    variance->add_option("--regimes", var_regimes, "comma list of regimes to compare");
    variance->add_option("--trials", var_opts.trials, "trials per regime (>= 2)");
    variance->add_option("--trial-seeds", var_seeds, "comma list of explicit trial seeds");
    variance->add_option("--metric", var_opts.metric, "mrr | accuracy");
    variance->add_option("--jobs", var_opts.jobs, "parallel trials");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*train) {
            train_opts.config.regime = parse_regime(train_regime);
            kbc::run_train(train_opts, std::cerr);
        } else if (*eval) {
            kbc::run_eval(eval_opts, std::cout);
        } else if (*synth) {
            auto mech = kbc::synth_mechanism_from_string(synth_mechanism);
            if (!mech) throw std::invalid_argument("synth: unknown mechanism");
            synth_opts.config.mechanism = *mech;
            synth_opts.config.pair_sample_fraction = {synth_fraction};
            synth_opts.config.classes.clear();
            std::stringstream ss(synth_classes);
            std::string item;
            while (std::getline(ss, item, ',')) {
                auto cls = kbc::relation_class_from_string(item);
                if (!cls)
                    throw std::invalid_argument("synth: unknown relation class \"" + item +
                                                "\"");
                synth_opts.config.classes.push_back(*cls);
            }
            kbc::run_synth(synth_opts, std::cerr);
        } else if (*analyze) {
            kbc::run_analyze(analyze_opts, std::cout);
        } else if (*variance) {
            var_opts.regimes.clear();
            std::stringstream ss(var_regimes);
            std::string item;
            while (std::getline(ss, item, ',')) var_opts.regimes.push_back(parse_regime(item));
            if (!var_seeds.empty()) {
                std::stringstream s2(var_seeds);
                while (std::getline(s2, item, ','))
                    var_opts.seeds.push_back(std::stoull(item));
            }
            kbc::run_variance(var_opts, std::cout);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

#include "kbc/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

#include <json.hpp>

#include "kbc/common.hpp"
#include "kbc/metrics.hpp"
#include "kbc/objective.hpp"
#include "kbc/sampling.hpp"

namespace kbc {

namespace {

bool has_negative_labels(const std::vector<LabeledTriplet>& split) {
    return std::any_of(split.begin(), split.end(),
                       [](const LabeledTriplet& lt) { return lt.label == -1; });
}

}  // namespace

Trainer::Trainer(const KnowledgeBase& kb, const TrainConfig& config)
    : Trainer(kb, config, init_params(config, kb, config.seed),
              init_optimizer_state(config, kb)) {}

Trainer::Trainer(const KnowledgeBase& kb, const TrainConfig& config, ModelParams params,
                 OptimizerState opt)
    : kb_(kb), cfg_(config), params_(std::move(params)), opt_(std::move(opt)) {
    cfg_.validate();
    if (params_.entities.size() != kb.entities.size() ||
        params_.relations.size() != kb.relations.size() || params_.dim != cfg_.dim)
        throw std::invalid_argument("trainer: parameter shapes do not match the KB");
    labeled_mode_ = has_negative_labels(kb.train);
}

void Trainer::step(const std::vector<LabeledTriplet>& batch) {
    step_subgradient(batch, params_, cfg_, scratch_);
    ++opt_.global_step;

    for (const auto& [id, grad] : scratch_.entities)
        adagrad_update(params_.entities[id], opt_.entities[id], grad, cfg_.eta);

    const double beta = cfg_.lambda * cfg_.alpha;
    for (const auto& [id, grad] : scratch_.relations) {
        if (cfg_.regime == Regime::L2Only) {
            adagrad_update(params_.relations[id], opt_.relations_adagrad[id], grad, cfg_.eta);
            continue;
        }
        RdaState& st = opt_.relations_rda[id];
        if (cfg_.rda_global_clock)
            st.step_count = opt_.global_step;
        else
            ++st.step_count;
        if (cfg_.regime == Regime::MulL1)
            rda_relation_update(params_.relations[id], st, grad, beta, cfg_.eta);
        else
            rda_std_l1_update(params_.relations[id], st, grad, beta, cfg_.eta);
    }
}

void Trainer::run_epoch(std::uint64_t epoch_index) {
    auto order = epoch_permutation(kb_.train.size(), cfg_.seed, epoch_index);
    NegativeSampler sampler(cfg_.negatives_per_positive,
                            make_rng(cfg_.seed, "sampling", epoch_index));

    std::vector<LabeledTriplet> batch;
    std::uint32_t groups_in_batch = 0;
    auto flush = [&] {
        if (!batch.empty()) step(batch);
        batch.clear();
        groups_in_batch = 0;
    };

    for (std::uint32_t idx : order) {
        const LabeledTriplet& lt = kb_.train[idx];
        batch.push_back(lt);
        if (!labeled_mode_) sampler.sample_negatives(lt.triplet, kb_, batch);
        if (++groups_in_batch >= cfg_.minibatch) flush();
    }
    flush();
}

ModelArchive TrainOutcome::to_archive(const KnowledgeBase& kb, bool prefer_best) const {
    ModelArchive a;
    bool use_best = prefer_best && has_best;
    a.params = use_best ? best_params : params;
    a.opt = use_best ? best_opt : opt;
    a.next_epoch = use_best ? best_epoch : next_epoch;
    a.config = record.config;
    a.entity_names = kb.entities.names();
    a.relation_names = kb.relations.names();
    return a;
}

TrainOutcome train_model(const KnowledgeBase& kb, const TrainOptions& options,
                         const ModelArchive* resume) {
    const TrainConfig& cfg = options.config;
    cfg.validate();
    auto t0 = std::chrono::steady_clock::now();

    std::uint64_t start_epoch = 0;
    std::optional<Trainer> trainer;
    if (resume) {
        if (resume->params.dim != cfg.dim)
            throw std::invalid_argument("resume: dimension mismatch");
        start_epoch = resume->next_epoch;
        trainer.emplace(kb, cfg, resume->params, resume->opt);
    } else {
        trainer.emplace(kb, cfg);
    }

    TrainOutcome out;
    out.record.config = cfg;
    out.record.labeled_train = trainer->labeled_mode();

    std::vector<LabeledTriplet> valid_positives;
    for (const auto& lt : kb.valid)
        if (lt.label == 1) valid_positives.push_back(lt);
    bool can_checkpoint = options.checkpoint_every > 0 && !valid_positives.empty();

    auto checkpoint = [&](std::uint64_t epoch) {
        RankingReport rep =
            ranking_report(valid_positives, trainer->params(), kb, options.eval_threads);
        out.record.checkpoints.push_back({epoch, rep.mrr_filtered});
        if (!out.has_best || rep.mrr_filtered > out.record.best_valid_mrr) {
            out.has_best = true;
            out.best_params = trainer->params();
            out.best_opt = trainer->opt();
            out.best_epoch = epoch;
            out.record.best_epoch = epoch;
            out.record.best_valid_mrr = rep.mrr_filtered;
        }
    };

    for (std::uint64_t epoch = start_epoch; epoch < cfg.epochs; ++epoch) {
        trainer->run_epoch(epoch);
        if (options.record_objective)
            out.record.epoch_objective.push_back(
                objective_value(kb.train, trainer->params(), cfg));
        std::uint64_t done = epoch + 1;
        if (can_checkpoint &&
            (done % options.checkpoint_every == 0 || done == cfg.epochs))
            checkpoint(done);
    }

    out.params = trainer->params();
    out.opt = trainer->opt();
    out.next_epoch = cfg.epochs;
    out.record.has_best = out.has_best;
    out.record.wall_clock_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

std::string run_record_to_json(const RunRecord& r) {
    nlohmann::json j;
    j["config"] = {{"dim", r.config.dim},
                   {"lambda", r.config.lambda},
                   {"alpha", r.config.alpha},
                   {"eta", r.config.eta},
                   {"epochs", r.config.epochs},
                   {"negatives", r.config.negatives_per_positive},
                   {"regime", std::string(to_string(r.config.regime))},
                   {"minibatch", r.config.minibatch},
                   {"seed", r.config.seed},
                   {"rda_global_clock", r.config.rda_global_clock}};
    j["labeled_train"] = r.labeled_train;
    j["epoch_objective"] = r.epoch_objective;
    j["checkpoints"] = nlohmann::json::array();
    for (const auto& c : r.checkpoints)
        j["checkpoints"].push_back({{"epoch", c.epoch}, {"valid_mrr_filtered", c.valid_mrr_filtered}});
    if (r.has_best) {
        j["best_epoch"] = r.best_epoch;
        j["best_valid_mrr_filtered"] = r.best_valid_mrr;
    }
    j["wall_clock_sec"] = r.wall_clock_sec;
    return j.dump(2);
}

}  // namespace kbc

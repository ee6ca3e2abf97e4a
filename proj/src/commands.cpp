#include "kbc/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "kbc/common.hpp"
#include "kbc/objective.hpp"
#include "kbc/sampling.hpp"

namespace kbc {

namespace {

// The run record echoes the full command surface, defaults included, so a
// run is reproducible from the record alone.
void write_run_record(const std::string& path, const RunRecord& record,
                      const TrainCmdOptions& options) {
    nlohmann::json j = nlohmann::json::parse(run_record_to_json(record));
    j["command"] = {{"train", options.data.train},
                    {"valid", options.data.valid},
                    {"test", options.data.test},
                    {"out", options.out},
                    {"resume", options.resume},
                    {"subsample_train", options.subsample_train},
                    {"checkpoint_every", options.checkpoint_every},
                    {"grid", options.grid},
                    {"jobs", options.jobs},
                    {"eval_threads", options.eval_threads}};
    if (options.grid) {
        j["command"]["grid_lambdas"] = options.grid_lambdas;
        j["command"]["grid_alphas"] = options.grid_alphas;
        j["command"]["grid_etas"] = options.grid_etas;
    }
    std::ofstream rec(path);
    if (!rec) throw std::runtime_error("cannot write run record: " + path);
    rec << j.dump(2) << '\n';
}

std::vector<LabeledTriplet> positives_of(const std::vector<LabeledTriplet>& split) {
    std::vector<LabeledTriplet> out;
    for (const auto& lt : split)
        if (lt.label == 1) out.push_back(lt);
    return out;
}

void subsample_train(KnowledgeBase& kb, double fraction, std::uint64_t seed) {
    if (fraction >= 1.0) return;
    if (fraction <= 0.0) throw std::invalid_argument("train subsample fraction must be > 0");
    auto order = epoch_permutation(kb.train.size(), seed, 0);
    auto keep = static_cast<std::size_t>(
        std::llround(fraction * static_cast<double>(kb.train.size())));
    std::vector<std::uint32_t> kept(order.begin(), order.begin() + keep);
    std::sort(kept.begin(), kept.end());
    std::vector<LabeledTriplet> rows;
    rows.reserve(kept.size());
    for (auto idx : kept) rows.push_back(kb.train[idx]);
    kb.train = std::move(rows);
    kb.rebuild_true_set();
}

// Runs jobs() workers over [0, n), one task each. Tasks write to
// preallocated slots, so the outcome does not depend on scheduling.
void run_tasks(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& task) {
    if (jobs <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) task(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    unsigned n_workers = static_cast<unsigned>(std::min<std::size_t>(jobs, n));
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < n_workers; ++w)
        pool.emplace_back([&] {
            while (true) {
                std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    task(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

double quantile(std::vector<double> sorted, double p) {
    if (sorted.empty()) return 0.0;
    double pos = p * static_cast<double>(sorted.size() - 1);
    auto lo = static_cast<std::size_t>(pos);
    std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

KnowledgeBase remap_to_archive(const KnowledgeBase& file_kb, const ModelArchive& archive) {
    KnowledgeBase kb;
    for (const auto& n : archive.entity_names) kb.entities.add(n);
    for (const auto& n : archive.relation_names) kb.relations.add(n);

    auto remap = [&](const std::vector<LabeledTriplet>& in) {
        std::vector<LabeledTriplet> out;
        out.reserve(in.size());
        for (const auto& lt : in) {
            auto s = kb.entities.find(file_kb.entities.name(lt.triplet.subject));
            auto r = kb.relations.find(file_kb.relations.name(lt.triplet.relation));
            auto o = kb.entities.find(file_kb.entities.name(lt.triplet.object));
            if (!s || !r || !o)
                throw std::runtime_error(
                    "vocabulary mismatch: dataset names missing from the model (e.g. \"" +
                    (!s ? file_kb.entities.name(lt.triplet.subject)
                        : !r ? file_kb.relations.name(lt.triplet.relation)
                             : file_kb.entities.name(lt.triplet.object)) +
                    "\")");
            out.push_back(LabeledTriplet{Triplet{*s, *r, *o}, lt.label});
        }
        return out;
    };
    kb.train = remap(file_kb.train);
    kb.valid = remap(file_kb.valid);
    kb.test = remap(file_kb.test);
    kb.rebuild_true_set();
    return kb;
}

TrainCmdResult run_train(const TrainCmdOptions& options, std::ostream& log) {
    if (options.data.train.empty()) throw std::invalid_argument("train: --train is required");
    if (options.out.empty()) throw std::invalid_argument("train: --out is required");
    options.config.validate();

    KnowledgeBase kb = load_dataset(options.data.train, options.data.valid, options.data.test);
    subsample_train(kb, options.subsample_train, options.config.seed);
    if (!options.quiet)
        log << "loaded " << kb.entities.size() << " entities, " << kb.relations.size()
            << " relations, " << kb.train.size() << " train / " << kb.valid.size()
            << " valid / " << kb.test.size() << " test rows\n";

    TrainCmdResult result;
    result.out_path = options.out;

    TrainOptions topt;
    topt.checkpoint_every = options.checkpoint_every;
    topt.eval_threads = options.eval_threads;

    ModelArchive resume_archive;
    const ModelArchive* resume = nullptr;
    if (!options.resume.empty()) {
        resume_archive = load_model(options.resume);
        resume = &resume_archive;
    }

    if (!options.grid) {
        topt.config = options.config;
        TrainOutcome outcome = train_model(kb, topt, resume);
        result.has_best = outcome.has_best;
        result.best_epoch = outcome.best_epoch;
        result.best_valid_mrr = outcome.record.best_valid_mrr;
        result.selected = options.config;
        save_model(options.out, outcome.to_archive(kb));
        write_run_record(
            options.record_out.empty() ? options.out + ".run.json" : options.record_out,
            outcome.record, options);
        if (!options.quiet) {
            if (outcome.has_best)
                log << "best epoch " << outcome.best_epoch << " (valid filtered MRR "
                    << outcome.record.best_valid_mrr << ")\n";
            log << "saved " << options.out << "\n";
        }
        return result;
    }

    // Grid search; model selection by validation filtered MRR.
    if (kb.valid.empty() || positives_of(kb.valid).empty())
        throw std::invalid_argument("train --grid requires a validation split with positives");
    if (resume) throw std::invalid_argument("train --grid cannot be combined with --resume");

    struct Cell {
        TrainConfig cfg;
        double mrr = -1.0;
    };
    std::vector<Cell> cells;
    for (double lambda : options.grid_lambdas)
        for (double alpha : options.grid_alphas) {
            if (options.config.regime == Regime::L2Only && alpha != 0.0) continue;
            for (double eta : options.grid_etas) {
                TrainConfig cfg = options.config;
                cfg.lambda = lambda;
                cfg.alpha = alpha;
                cfg.eta = eta;
                cells.push_back({cfg, -1.0});
            }
        }

    run_tasks(cells.size(), options.jobs, [&](std::size_t i) {
        TrainOptions local = topt;
        local.config = cells[i].cfg;
        local.record_objective = false;
        TrainOutcome outcome = train_model(kb, local);
        cells[i].mrr = outcome.has_best ? outcome.record.best_valid_mrr : -1.0;
    });

    std::size_t best = 0;
    for (std::size_t i = 1; i < cells.size(); ++i) {
        const auto& a = cells[i];
        const auto& b = cells[best];
        bool better = a.mrr > b.mrr ||
                      (a.mrr == b.mrr &&
                       (a.cfg.lambda < b.cfg.lambda ||
                        (a.cfg.lambda == b.cfg.lambda && a.cfg.alpha < b.cfg.alpha)));
        if (better) best = i;
    }

    for (const auto& c : cells) {
        result.grid.push_back({c.cfg.lambda, c.cfg.alpha, c.cfg.eta, c.mrr});
        if (!options.quiet)
            log << "grid lambda=" << c.cfg.lambda << " alpha=" << c.cfg.alpha
                << " eta=" << c.cfg.eta << " valid_mrr=" << c.mrr << "\n";
    }

    // Retrain the winner so the saved archive matches a clean single run.
    topt.config = cells[best].cfg;
    TrainOutcome outcome = train_model(kb, topt);
    result.has_best = outcome.has_best;
    result.best_epoch = outcome.best_epoch;
    result.best_valid_mrr = outcome.record.best_valid_mrr;
    result.selected = cells[best].cfg;
    save_model(options.out, outcome.to_archive(kb));
    write_run_record(
        options.record_out.empty() ? options.out + ".run.json" : options.record_out,
        outcome.record, options);
    if (!options.quiet)
        log << "selected lambda=" << cells[best].cfg.lambda
            << " alpha=" << cells[best].cfg.alpha << " eta=" << cells[best].cfg.eta
            << "; saved " << options.out << "\n";
    return result;
}

EvalCmdResult run_eval(const EvalCmdOptions& options, std::ostream& out) {
    if (options.model.empty()) throw std::invalid_argument("eval: --model is required");
    ModelArchive archive = load_model(options.model);
    KnowledgeBase file_kb =
        load_dataset(options.data.train, options.data.valid, options.data.test);
    KnowledgeBase kb = remap_to_archive(file_kb, archive);

    const std::vector<LabeledTriplet>* split = &kb.test;
    if (options.split == "valid")
        split = &kb.valid;
    else if (options.split == "train")
        split = &kb.train;
    else if (options.split != "test")
        throw std::invalid_argument("eval: unknown split " + options.split);

    EvalCmdResult result;
    if (options.task == "rank") {
        auto positives = positives_of(*split);
        result.ranking = ranking_report(positives, archive.params, kb, options.threads);
        result.ranked = true;
        if (options.per_relation) {
            std::map<RelationId, std::vector<LabeledTriplet>> by_relation;
            for (const auto& lt : positives) by_relation[lt.triplet.relation].push_back(lt);
            out << "relation\tmrr_filtered\tmrr_raw\tn_queries\n";
            char buf[128];
            for (const auto& [rel, group] : by_relation) {
                auto rep = ranking_report(group, archive.params, kb, options.threads);
                std::snprintf(buf, sizeof(buf), "%s\t%.6f\t%.6f\t%zu\n",
                              kb.relations.name(rel).c_str(), rep.mrr_filtered, rep.mrr_raw,
                              rep.n_queries);
                out << buf;
            }
        }
        const auto& r = result.ranking;
        if (options.pretty) {
            char buf[160];
            std::snprintf(buf, sizeof(buf),
                          "MRR(filter) %.1f  MRR(raw) %.1f  Hits@1 %.1f  Hits@3 %.1f  "
                          "Hits@10 %.1f  (%% over %zu queries)\n",
                          100.0 * r.mrr_filtered, 100.0 * r.mrr_raw,
                          100.0 * r.hits_at.at(1), 100.0 * r.hits_at.at(3),
                          100.0 * r.hits_at.at(10), r.n_queries);
            out << buf;
        } else {
            char buf[160];
            out << "mrr_filtered\tmrr_raw\thits1\thits3\thits10\tn_queries\n";
            std::snprintf(buf, sizeof(buf), "%.6f\t%.6f\t%.6f\t%.6f\t%.6f\t%zu\n",
                          r.mrr_filtered, r.mrr_raw, r.hits_at.at(1), r.hits_at.at(3),
                          r.hits_at.at(10), r.n_queries);
            out << buf;
        }
    } else if (options.task == "classify") {
        result.classification = classify(*split, archive.params);
        result.classified = true;
        out << "relation\tn\taccuracy\n";
        char buf[96];
        if (options.per_relation) {
            for (const auto& [rel, acc] : result.classification.per_relation) {
                std::snprintf(buf, sizeof(buf), "%s\t%zu\t%.6f\n",
                              kb.relations.name(rel).c_str(), acc.second, acc.first);
                out << buf;
            }
        }
        std::snprintf(buf, sizeof(buf), "ALL\t%zu\t%.6f\n", result.classification.n_total,
                      result.classification.overall);
        out << buf;
    } else {
        throw std::invalid_argument("eval: unknown task " + options.task);
    }
    return result;
}

SynthCmdResult run_synth(const SynthCmdOptions& options, std::ostream& log) {
    if (options.out_dir.empty()) throw std::invalid_argument("synth: --out is required");
    SynthResult gen = generate(options.config);
    std::filesystem::create_directories(options.out_dir);

    SynthCmdResult result;
    auto path = [&](const char* name) {
        return (std::filesystem::path(options.out_dir) / name).string();
    };
    result.train_path = path("train.tsv");
    result.valid_path = path("valid.tsv");
    result.test_path = path("test.tsv");
    write_triple_file(result.train_path, gen.kb, gen.kb.train);
    write_triple_file(result.valid_path, gen.kb, gen.kb.valid);
    write_triple_file(result.test_path, gen.kb, gen.kb.test);
    result.n_train = gen.kb.train.size();
    result.n_valid = gen.kb.valid.size();
    result.n_test = gen.kb.test.size();
    log << "wrote " << result.n_train << " train / " << result.n_valid << " valid / "
        << result.n_test << " test labeled triples to " << options.out_dir << "\n";
    return result;
}

std::vector<RelationAnalysisRow> run_analyze(const AnalyzeCmdOptions& options,
                                             std::ostream& out) {
    if (options.model.empty()) throw std::invalid_argument("analyze: --model is required");
    if (options.data.train.empty()) throw std::invalid_argument("analyze: --train is required");
    ModelArchive archive = load_model(options.model);
    KnowledgeBase file_kb =
        load_dataset(options.data.train, options.data.valid, options.data.test);
    KnowledgeBase kb = remap_to_archive(file_kb, archive);

    auto rows = relation_analysis(kb, archive.params);
    if (options.out.empty()) {
        write_analysis_tsv(out, kb, rows);
    } else {
        std::ofstream f(options.out);
        if (!f) throw std::runtime_error("cannot write " + options.out);
        write_analysis_tsv(f, kb, rows);
    }

    if (!options.pattern_out.empty()) {
        std::ofstream f(options.pattern_out);
        if (!f) throw std::runtime_error("cannot write " + options.pattern_out);
        f << "relation\tpart\tnonzero_cells\n";
        for (std::size_t r = 0; r < archive.params.relations.size(); ++r) {
            const auto& w = archive.params.relations[r];
            for (const char* part : {"re", "im"}) {
                f << kb.relations.name(static_cast<RelationId>(r)) << '\t' << part << '\t';
                const auto& v = part[0] == 'r' ? w.re : w.im;
                for (double x : v) f << (x != 0.0 ? '1' : '0');
                f << '\n';
            }
        }
    }
    return rows;
}

std::vector<VarianceSummary> run_variance(const VarianceCmdOptions& options,
                                          std::ostream& out) {
    if (options.trials < 2) throw std::invalid_argument("variance: trials must be >= 2");
    if (options.metric != "mrr" && options.metric != "accuracy")
        throw std::invalid_argument("variance: metric must be mrr or accuracy");
    for (Regime regime : options.regimes) {
        TrainConfig probe = options.base;
        probe.regime = regime;
        if (regime == Regime::L2Only) probe.alpha = 0.0;
        probe.validate();
    }

    KnowledgeBase kb = load_dataset(options.data.train, options.data.valid, options.data.test);
    auto test_positives = positives_of(kb.test);
    if (options.metric == "mrr" && test_positives.empty())
        throw std::invalid_argument("variance: test split has no positives");

    std::vector<std::uint64_t> seeds = options.seeds;
    if (seeds.empty())
        for (std::uint32_t i = 0; i < options.trials; ++i)
            seeds.push_back(derive_seed(options.base.seed, "variance-trial", i));
    if (seeds.size() != options.trials)
        throw std::invalid_argument("variance: seed list length must equal trials");

    struct Task {
        std::size_t regime_idx, trial_idx;
    };
    std::vector<Task> tasks;
    for (std::size_t r = 0; r < options.regimes.size(); ++r)
        for (std::size_t t = 0; t < options.trials; ++t) tasks.push_back({r, t});

    std::vector<std::vector<double>> values(options.regimes.size(),
                                            std::vector<double>(options.trials, 0.0));
    run_tasks(tasks.size(), options.jobs, [&](std::size_t i) {
        const Task& task = tasks[i];
        TrainOptions topt;
        topt.config = options.base;
        topt.config.regime = options.regimes[task.regime_idx];
        if (topt.config.regime == Regime::L2Only) topt.config.alpha = 0.0;
        topt.config.seed = seeds[task.trial_idx];
        topt.checkpoint_every = 0;
        topt.record_objective = false;
        TrainOutcome outcome = train_model(kb, topt);
        double v = options.metric == "mrr"
                       ? ranking_report(test_positives, outcome.params, kb).mrr_filtered
                       : classify(kb.test, outcome.params).overall;
        values[task.regime_idx][task.trial_idx] = v;
    });

    std::vector<VarianceSummary> summaries;
    out << "regime\tmin\tq1\tmedian\tq3\tmax\n";
    for (std::size_t r = 0; r < options.regimes.size(); ++r) {
        VarianceSummary s;
        s.regime = options.regimes[r];
        s.values = values[r];
        std::vector<double> sorted = values[r];
        std::sort(sorted.begin(), sorted.end());
        s.min = sorted.front();
        s.q1 = quantile(sorted, 0.25);
        s.median = quantile(sorted, 0.5);
        s.q3 = quantile(sorted, 0.75);
        s.max = sorted.back();
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%s\t%.6f\t%.6f\t%.6f\t%.6f\t%.6f\n",
                      std::string(to_string(s.regime)).c_str(), s.min, s.q1, s.median, s.q3,
                      s.max);
        out << buf;
        summaries.push_back(std::move(s));
    }
    return summaries;
}

}  // namespace kbc

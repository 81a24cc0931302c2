// SPDX-FileCopyrightText: (c) 2026 The tweetinform authors
//
// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "tweetinform/baselines.hpp"
#include "tweetinform/bpe.hpp"
#include "tweetinform/checkpoint.hpp"
#include "tweetinform/corpus.hpp"
#include "tweetinform/ensemble.hpp"
#include "tweetinform/error.hpp"
#include "tweetinform/metrics.hpp"
#include "tweetinform/model.hpp"
#include "tweetinform/run_config.hpp"
#include "tweetinform/trainer.hpp"

namespace fs = std::filesystem;
using namespace ti;

namespace {

void log(const std::string& msg)
{
    std::cerr << "[tweetinform] " << msg << '\n';
}

std::string read_text(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "' for reading");
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_text(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    const fs::path p(path);
    if (p.has_parent_path()) {
        fs::create_directories(p.parent_path());
    }
    std::ofstream out(p, std::ios::binary);
    if (!out || !(out << text) || !out.flush()) {
        throw IoError("cannot write '" + p.string() + "'");
    }
}

HeaderMode header_mode(bool no_header)
{
    return no_header ? HeaderMode::Absent : HeaderMode::Auto;
}

LabeledCorpus load_labeled(const fs::path& path, bool no_header, SplitTag tag = SplitTag::Train)
{
    auto corpus = load_corpus(path, {true, header_mode(no_header), tag});
    corpus.validate();
    return corpus;
}

/// Labeled or unlabeled, whichever parses.
LabeledCorpus load_any_corpus(const fs::path& path, bool no_header)
{
    try {
        return load_corpus(path, {true, header_mode(no_header), SplitTag::Test});
    } catch (const ParseError&) {
        return load_corpus(path, {false, header_mode(no_header), SplitTag::Test});
    }
}

std::size_t thread_cap()
{
    if (const char* env = std::getenv("TWEETINFORM_THREADS")) {
        try {
            const auto n = std::stoul(env);
            if (n > 0) {
                return n;
            }
        } catch (const std::exception&) {
        }
        throw ValidationError(std::string("TWEETINFORM_THREADS must be a positive integer, got '") + env + "'");
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs `fn(i)` for i in [0, n), at most thread_cap() at a time. Results keep index order.
template <typename Fn>
auto fan_out(std::size_t n, Fn fn) -> std::vector<decltype(fn(std::size_t{}))>
{
    std::vector<decltype(fn(std::size_t{}))> out(n);
    const auto cap = thread_cap();
    for (std::size_t start = 0; start < n; start += cap) {
        const auto stop = std::min(n, start + cap);
        std::vector<std::future<decltype(fn(std::size_t{}))>> jobs;
        for (std::size_t i = start; i < stop; ++i) {
            jobs.push_back(std::async(cap == 1 ? std::launch::deferred : std::launch::async, fn, i));
        }
        for (std::size_t i = start; i < stop; ++i) {
            out[i] = jobs[i - start].get();
        }
    }
    return out;
}

std::string model_id(const fs::path& path)
{
    return path.stem().string();
}

// ---- prepare ----

struct PrepareArgs {
    std::string train, valid, out_dir = ".";
    bool resplit = false, no_header = false;
    std::uint64_t seed = 1;
};

void run_prepare(const PrepareArgs& a)
{
    auto train = load_labeled(a.train, a.no_header, SplitTag::Train);
    auto valid = load_labeled(a.valid, a.no_header, SplitTag::Validation);
    if (a.resplit) {
        std::tie(train, valid) = resplit(train, valid, a.seed);
    }
    const fs::path dir(a.out_dir);
    fs::create_directories(dir);
    save_corpus(train, dir / "train.tsv");
    save_corpus(valid, dir / "valid.tsv");
    log("train " + std::to_string(train.size()) + " (" + std::to_string(train.count(ClassLabel::Informative)) +
        " informative), valid " + std::to_string(valid.size()) + " (" +
        std::to_string(valid.count(ClassLabel::Informative)) + " informative)");
}

// ---- train-bpe ----

struct BpeArgs {
    std::vector<std::string> inputs;
    std::size_t vocab_size = kDefaultBpeVocabSize;
    std::string out;
    bool no_header = false;
};

void run_train_bpe(const BpeArgs& a)
{
    std::vector<std::string> texts;
    for (const auto& in : a.inputs) {
        const auto t = load_any_corpus(in, a.no_header).texts();
        texts.insert(texts.end(), t.begin(), t.end());
    }
    const auto table = MergeTable::train(texts, a.vocab_size);
    table.save(a.out);
    log("tokenizer: " + std::to_string(table.vocab_size()) + " tokens, " + std::to_string(table.merges().size()) +
        " merges");
}

// ---- train-baseline ----

struct BaselineArgs {
    std::string kind = "logreg", train, data_dir, valid, out;
    BaselineOptions options;
    bool no_header = false;
};

void run_train_baseline(BaselineArgs a)
{
    if (a.train.empty() == a.data_dir.empty()) {
        throw ValidationError("give exactly one of --train or --data-dir");
    }
    if (!a.data_dir.empty()) {
        a.train = (fs::path(a.data_dir) / "train.tsv").string();
        if (a.valid.empty() && fs::exists(fs::path(a.data_dir) / "valid.tsv")) {
            a.valid = (fs::path(a.data_dir) / "valid.tsv").string();
        }
    }
    const auto kind = parse_baseline_kind(a.kind);
    const auto train = load_labeled(a.train, a.no_header);
    const auto pipeline = train_baseline(kind, train.texts(), train.labels(), a.options);
    pipeline.to_arrays().save(a.out);
    log("trained " + pipeline.kind_name() + " on " + std::to_string(train.size()) + " tweets");
    if (!a.valid.empty()) {
        const auto valid = load_labeled(a.valid, a.no_header, SplitTag::Validation);
        std::vector<ClassLabel> pred;
        for (const auto& t : valid.texts()) {
            pred.push_back(classify(pipeline.predict(t)));
        }
        log("valid " + f1_informative(pred, valid.labels()).summary_line());
    }
}

// ---- train ----

struct TrainArgs {
    std::string config, data_dir, out;
    std::vector<std::string> sets;
    std::optional<std::uint64_t> seed;
    bool no_header = false;
};

void run_train(const TrainArgs& a)
{
    ConfigOverrides overrides;
    for (const auto& s : a.sets) {
        overrides.push_back(split_assignment(s));
    }
    if (a.no_header) {
        overrides.emplace_back("data.header", "absent");
    }
    if (a.seed) {
        overrides.emplace_back("seed", std::to_string(*a.seed));
    }
    const auto rc = load_run_config(a.config, overrides);
    const fs::path dir(a.data_dir);
    const auto train = load_corpus(dir / rc.train_file, {true, rc.header, SplitTag::Train});
    const auto valid = load_corpus(dir / rc.valid_file, {true, rc.header, SplitTag::Validation});
    train.validate();
    valid.validate();

    MergeTable tokenizer;
    if (rc.bpe_path.empty()) {
        tokenizer = MergeTable::train(train.texts(), rc.bpe_vocab_size);
        log("trained tokenizer with " + std::to_string(tokenizer.vocab_size()) + " tokens");
    } else {
        tokenizer = MergeTable::load(rc.bpe_path);
    }
    auto spec = rc.model;
    spec.encoder.vocab_size = tokenizer.vocab_size();
    auto model = make_model(spec, std::move(tokenizer));

    TrainHooks hooks;
    hooks.log = log;
    const auto result = train_two_phase(*model, train, valid, rc.plan, hooks);
    result.best.file.save(a.out);
    log("best valid_f1 " + std::to_string(result.best.valid_f1) + " at phase " + std::to_string(result.best.phase) +
        " epoch " + std::to_string(result.best.epoch));
}

// ---- predict ----

struct PredictArgs {
    std::vector<std::string> models;
    std::string input, out, out_dir, tokenizer;
    bool unlabeled = false, no_header = false;
};

std::vector<PredictionVector> predict_checkpoint(const fs::path& path, std::span<const std::string> texts,
                                                 const MergeTable* tokenizer)
{
    const auto file = ArrayFile::load(path);
    if (file.config_value_or("model_kind", "") == "baseline") {
        const auto pipeline = BaselinePipeline::from_arrays(file);
        std::vector<PredictionVector> out;
        out.reserve(texts.size());
        for (const auto& t : texts) {
            out.push_back(pipeline.predict(t));
        }
        return out;
    }
    try {
        return predict(file, texts, tokenizer);
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

void run_predict(const PredictArgs& a)
{
    if (a.out.empty() == a.out_dir.empty()) {
        throw ValidationError("give exactly one of --out or --out-dir");
    }
    if (!a.out.empty() && a.models.size() != 1) {
        throw ValidationError("--out takes a single --model; use --out-dir for several");
    }
    const auto corpus = load_corpus(a.input, {!a.unlabeled, header_mode(a.no_header), SplitTag::Test});
    corpus.validate();
    std::vector<std::string> ids;
    for (const auto& r : corpus.records) {
        ids.push_back(r.id);
    }
    const auto texts = corpus.texts();
    std::optional<MergeTable> tokenizer;
    if (!a.tokenizer.empty()) {
        tokenizer = MergeTable::load(a.tokenizer);
    }
    const auto* tok = tokenizer ? &*tokenizer : nullptr;
    const auto preds =
        fan_out(a.models.size(), [&](std::size_t i) { return predict_checkpoint(a.models[i], texts, tok); });
    for (std::size_t i = 0; i < a.models.size(); ++i) {
        const auto dest =
            a.out.empty() ? (fs::path(a.out_dir) / (model_id(a.models[i]) + ".tsv")).string() : a.out;
        write_text(dest, format_predictions(ids, preds[i]));
        log(a.models[i] + ": " + std::to_string(ids.size()) + " predictions");
    }
}

// ---- ensemble / bucket-select ----

std::vector<ModelPredictions> load_prediction_files(const std::vector<std::string>& paths,
                                                    std::vector<std::string>& ids)
{
    std::vector<ModelPredictions> models;
    for (const auto& p : paths) {
        auto file = load_predictions(p);
        if (models.empty()) {
            ids = file.ids;
        } else if (file.ids != ids) {
            throw ValidationError("'" + p + "' covers different tweet ids than '" + paths.front() + "'");
        }
        const auto id = model_id(p);
        for (const auto& m : models) {
            if (m.id == id) {
                throw ValidationError("two prediction files share the model id '" + id + "'");
            }
        }
        models.push_back({id, std::move(file.predictions)});
    }
    return models;
}

struct EnsembleArgs {
    std::string rule = "vote", combine = "vote", bucket_map, input, out;
    std::vector<std::string> preds;
    bool no_header = false;
};

void run_ensemble(const EnsembleArgs& a)
{
    std::vector<std::string> ids;
    const auto models = load_prediction_files(a.preds, ids);
    EnsembleSpec spec;
    for (const auto& m : models) {
        spec.model_ids.push_back(m.id);
    }
    std::vector<std::string> texts(ids.size());
    if (a.rule == "bucketed") {
        if (a.bucket_map.empty() || a.input.empty()) {
            throw ValidationError("--rule bucketed needs --bucket-map and --input");
        }
        spec.rule = parse_rule(a.combine);
        spec.bucket_map = parse_bucket_map(read_text(a.bucket_map));
        const auto corpus = load_any_corpus(a.input, a.no_header);
        std::map<std::string, std::string> text_of;
        for (const auto& r : corpus.records) {
            text_of[r.id] = r.text;
        }
        for (std::size_t i = 0; i < ids.size(); ++i) {
            const auto it = text_of.find(ids[i]);
            if (it == text_of.end()) {
                throw ValidationError("tweet id '" + ids[i] + "' is missing from '" + a.input + "'");
            }
            texts[i] = it->second;
        }
    } else {
        spec.rule = parse_rule(a.rule);
    }
    const auto labels = ensemble_predict(spec, models, texts);
    write_text(a.out, format_labels(ids, labels));
    log("ensembled " + std::to_string(models.size()) + " models over " + std::to_string(ids.size()) + " tweets");
}

struct BucketSelectArgs {
    std::vector<std::string> preds;
    std::string reference, out;
    std::size_t k = 7;
    bool no_header = false;
};

void run_bucket_select(const BucketSelectArgs& a)
{
    std::vector<std::string> ids;
    const auto models = load_prediction_files(a.preds, ids);
    const auto reference = load_labeled(a.reference, a.no_header);
    for (std::size_t i = 0; i < reference.size(); ++i) {
        if (i >= ids.size() || ids[i] != reference.records[i].id) {
            throw ValidationError("prediction ids do not follow the order of '" + a.reference + "'");
        }
    }
    if (ids.size() != reference.size()) {
        throw ValidationError("prediction files and '" + a.reference + "' differ in length");
    }
    write_text(a.out, format_bucket_map(select_top_models_per_bucket(models, reference, a.k)));
}

// ---- evaluate ----

struct EvaluateArgs {
    std::string pred, gold;
    bool no_header = false;
};

std::vector<std::pair<std::string, ClassLabel>> read_predicted_labels(const std::string& path)
{
    const auto text = read_text(path);
    try {
        return parse_labels(text);
    } catch (const ParseError&) {
    }
    const auto file = parse_predictions(text);
    std::vector<std::pair<std::string, ClassLabel>> out;
    for (std::size_t i = 0; i < file.ids.size(); ++i) {
        out.emplace_back(file.ids[i], classify(file.predictions[i]));
    }
    return out;
}

void run_evaluate(const EvaluateArgs& a)
{
    const auto gold = load_labeled(a.gold, a.no_header, SplitTag::Validation);
    std::map<std::string, ClassLabel> predicted;
    for (const auto& [id, label] : read_predicted_labels(a.pred)) {
        if (!predicted.emplace(id, label).second) {
            throw ValidationError("tweet id '" + id + "' predicted twice");
        }
    }
    if (predicted.size() != gold.size()) {
        throw ValidationError("'" + a.pred + "' has " + std::to_string(predicted.size()) + " predictions for " +
                              std::to_string(gold.size()) + " gold tweets");
    }
    std::vector<ClassLabel> pred;
    for (const auto& r : gold.records) {
        const auto it = predicted.find(r.id);
        if (it == predicted.end()) {
            throw ValidationError("no prediction for tweet id '" + r.id + "'");
        }
        pred.push_back(it->second);
    }
    const auto m = f1_informative(pred, gold.labels());
    std::cout << m.summary_line() << '\n' << m.to_json() << '\n';
}

int fail(const char* kind, std::string msg, int code = 1)
{
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    std::cerr << "error: " << kind << ": " << msg << '\n';
    return code;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Informative tweet classification pipeline"};
    app.require_subcommand(1);
    app.fallthrough();
    bool no_header = false;
    app.add_flag("--no-header", no_header, "input TSV files have no header row");

    PrepareArgs prep;
    auto* c_prep = app.add_subcommand("prepare", "validate the corpus and optionally re-split it 90/10");
    c_prep->add_option("--train", prep.train, "training TSV")->required()->check(CLI::ExistingFile);
    c_prep->add_option("--valid", prep.valid, "validation TSV")->required()->check(CLI::ExistingFile);
    c_prep->add_flag("--resplit", prep.resplit, "pool both files and re-split 90/10");
    c_prep->add_option("--seed", prep.seed, "re-split seed")->capture_default_str();
    c_prep->add_option("--out-dir", prep.out_dir, "receives train.tsv and valid.tsv")->capture_default_str();

    BpeArgs bpe;
    auto* c_bpe = app.add_subcommand("train-bpe", "learn a BPE tokenizer from corpus texts");
    c_bpe->add_option("--input", bpe.inputs, "corpus TSV files")->required()->check(CLI::ExistingFile);
    c_bpe->add_option("--vocab-size", bpe.vocab_size, "target vocabulary size")->capture_default_str();
    c_bpe->add_option("--out", bpe.out, "tokenizer file")->required();

    BaselineArgs base;
    auto* c_base = app.add_subcommand("train-baseline", "train a LogReg, NB or SVM baseline");
    c_base->add_option("--kind", base.kind, "logreg | nb | svm")->capture_default_str();
    c_base->add_option("--train", base.train, "training TSV");
    c_base->add_option("--data-dir", base.data_dir, "directory with train.tsv (and valid.tsv)");
    c_base->add_option("--valid", base.valid, "validation TSV, scored after training");
    c_base->add_option("--out", base.out, "checkpoint file")->required();
    c_base->add_option("--l2", base.options.linear.l2, "L2 strength")->capture_default_str();
    c_base->add_option("--lr", base.options.linear.lr, "gradient step")->capture_default_str();
    c_base->add_option("--epochs", base.options.linear.epochs, "full-batch epochs")->capture_default_str();
    c_base->add_option("--alpha", base.options.alpha, "NB additive smoothing")->capture_default_str();

    TrainArgs tr;
    auto* c_train = app.add_subcommand("train", "two-phase training of a transformer classifier");
    c_train->add_option("--config", tr.config, "key = value config file")->required();
    c_train->add_option("--data-dir", tr.data_dir, "directory with the training and validation files")
        ->required();
    c_train->add_option("--out", tr.out, "checkpoint file")->required();
    c_train->add_option("--set", tr.sets, "override a config key (key=value), repeatable");
    c_train->add_option("--seed", tr.seed, "overrides the seed key");
    c_train->footer(run_config_help());

    PredictArgs pr;
    auto* c_pred = app.add_subcommand("predict", "write per-tweet class probabilities");
    c_pred->add_option("--model", pr.models, "checkpoint files")->required()->check(CLI::ExistingFile);
    c_pred->add_option("--input", pr.input, "tweets TSV")->required()->check(CLI::ExistingFile);
    c_pred->add_flag("--unlabeled", pr.unlabeled, "input has no label column");
    c_pred->add_option("--out", pr.out, "prediction file (single model)");
    c_pred->add_option("--out-dir", pr.out_dir, "one <model>.tsv per checkpoint");
    c_pred->add_option("--tokenizer", pr.tokenizer, "must match the tokenizer inside each checkpoint")
        ->check(CLI::ExistingFile);

    EnsembleArgs ens;
    auto* c_ens = app.add_subcommand("ensemble", "combine prediction files into labels");
    c_ens->add_option("--rule", ens.rule, "vote | average | bucketed")->capture_default_str();
    c_ens->add_option("--preds", ens.preds, "prediction files; model id = file stem")
        ->required()
        ->check(CLI::ExistingFile);
    c_ens->add_option("--bucket-map", ens.bucket_map, "bucket map from bucket-select")->check(CLI::ExistingFile);
    c_ens->add_option("--input", ens.input, "tweets TSV, for word counts")->check(CLI::ExistingFile);
    c_ens->add_option("--combine", ens.combine, "rule inside a bucket: vote | average")->capture_default_str();
    c_ens->add_option("--out", ens.out, "label file, default stdout");

    BucketSelectArgs bs;
    auto* c_bs = app.add_subcommand("bucket-select", "pick the top-k models for each length bucket");
    c_bs->add_option("--preds", bs.preds, "prediction files over the reference set")
        ->required()
        ->check(CLI::ExistingFile);
    c_bs->add_option("--reference", bs.reference, "labeled TSV the predictions cover")
        ->required()
        ->check(CLI::ExistingFile);
    c_bs->add_option("--k", bs.k, "models per bucket")->capture_default_str();
    c_bs->add_option("--out", bs.out, "bucket map file, default stdout");

    EvaluateArgs ev;
    auto* c_ev = app.add_subcommand("evaluate", "F1 of the INFORMATIVE class");
    c_ev->add_option("--pred", ev.pred, "label or prediction file")->required()->check(CLI::ExistingFile);
    c_ev->add_option("--gold", ev.gold, "labeled TSV")->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail("usage", e.what(), 2);
    }

    try {
        if (*c_prep) {
            prep.no_header = no_header;
            run_prepare(prep);
        } else if (*c_bpe) {
            bpe.no_header = no_header;
            run_train_bpe(bpe);
        } else if (*c_base) {
            base.no_header = no_header;
            run_train_baseline(base);
        } else if (*c_train) {
            tr.no_header = no_header;
            run_train(tr);
        } else if (*c_pred) {
            pr.no_header = no_header;
            run_predict(pr);
        } else if (*c_ens) {
            ens.no_header = no_header;
            run_ensemble(ens);
        } else if (*c_bs) {
            bs.no_header = no_header;
            run_bucket_select(bs);
        } else if (*c_ev) {
            ev.no_header = no_header;
            run_evaluate(ev);
        }
    } catch (const Error& e) {
        return fail(e.kind(), e.what());
    } catch (const std::exception& e) {
        return fail("internal", e.what());
    }
    return 0;
}

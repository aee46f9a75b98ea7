//
// Project RxnAug - Copyright 2026 RxnAug Contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Command-line pipeline: ingest -> augment -> train -> predict -> score ->
// report, plus replay of any stage from its manifest. Every subcommand
// writes a manifest.json capturing the resolved configuration and input
// digests; with the default deterministic mode the manifest is sufficient to
// reproduce the run bit for bit.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rxnaug/model/checkpoint.hpp"
#include "rxnaug/model/decode.hpp"
#include "rxnaug/model/train.hpp"
#include "rxnaug/reaction/augment.hpp"
#include "rxnaug/reaction/dataset_io.hpp"
#include "rxnaug/reaction/filter.hpp"
#include "rxnaug/score/reports.hpp"
#include "rxnaug/smiles/canonical.hpp"
#include "rxnaug/smiles/enumerate.hpp"
#include "rxnaug/smiles/fragments.hpp"
#include "rxnaug/smiles/parse.hpp"
#include "rxnaug/util/io.hpp"
#include "rxnaug/util/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rxnaug;

namespace {

constexpr const char *kVersion = "0.1.0";

// Flat key=value configuration of one run, as recorded in the manifest and
// consumed by `replay`.
using ConfigMap = std::map<std::string, std::string>;

struct RunContext {
  std::string subcommand;
  ConfigMap config;
  std::vector<fs::path> inputs;
  std::vector<fs::path> outputs;
  std::chrono::steady_clock::time_point started =
      std::chrono::steady_clock::now();
};

std::string utc_now() {
  const std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

std::string hex64(std::uint64_t value) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(value));
  return buf;
}

void write_manifest(const RunContext &ctx, const fs::path &out_dir) {
  json manifest;
  manifest["tool"] = "rxnaug";
  manifest["version"] = kVersion;
  manifest["subcommand"] = ctx.subcommand;
  manifest["config"] = ctx.config;
  json inputs = json::array();
  for (const fs::path &path : ctx.inputs) {
    inputs.push_back({{"path", path.string()},
                      {"fnv64", hex64(file_digest(path))}});
  }
  manifest["inputs"] = inputs;
  json outputs = json::array();
  for (const fs::path &path : ctx.outputs) {
    outputs.push_back(path.string());
  }
  manifest["outputs"] = outputs;
  manifest["started_utc"] = utc_now();
  manifest["wall_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                    ctx.started)
          .count();
  write_file_atomic(out_dir / "manifest.json", manifest.dump(2) + "\n");
}

std::vector<int> parse_int_list(const std::string &text) {
  std::vector<int> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string piece =
        text.substr(start, comma == std::string::npos ? comma : comma - start);
    if (!piece.empty()) {
      values.push_back(std::stoi(piece));
    }
    if (comma == std::string::npos) {
      break;
    }
    start = comma + 1;
  }
  if (values.empty()) {
    throw DataError("expected a comma-separated integer list: " + text);
  }
  return values;
}

std::vector<double> parse_double_list(const std::string &text) {
  std::vector<double> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string piece =
        text.substr(start, comma == std::string::npos ? comma : comma - start);
    if (!piece.empty()) {
      values.push_back(std::stod(piece));
    }
    if (comma == std::string::npos) {
      break;
    }
    start = comma + 1;
  }
  return values;
}

std::vector<std::string> parse_string_list(const std::string &text) {
  std::vector<std::string> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string piece =
        text.substr(start, comma == std::string::npos ? comma : comma - start);
    if (!piece.empty()) {
      values.push_back(piece);
    }
    if (comma == std::string::npos) {
      break;
    }
    start = comma + 1;
  }
  return values;
}

// ---- shared option bundles ----

struct IngestOptions {
  std::string input;
  std::string format = "mixed";
  std::string direction = "retro";
  int min_reactant_atoms = 5;
  int min_product_chars = 5;
  bool keep_empty_products = false;
  bool no_dedup = false;
  std::string out = "ingest_out";
};

struct AugmentOptions {
  std::string input;
  std::string format = "pair";
  std::string direction = "retro";
  std::string protocol = "x1";
  int n = 0;  // 0 = take from the protocol literal, else required
  std::uint64_t seed = 0;
  int keep_largest = 0;  // 0 = keep all
  bool drop_reagents = false;
  std::string out = "augment_out";
};

struct TrainOptions {
  std::string pairs;
  int epochs = 100;
  int batch_chars = 3000;
  int layers = 2;
  int heads = 4;
  int width = 64;
  int ffn = 256;
  double dropout = 0.1;
  int max_seq_len = 256;
  double lr_scale = 1.0;
  int warmup = 400;
  int eval_sample = 512;
  std::uint64_t seed = 0;
  bool deterministic = true;
  bool quiet = false;
  std::string out = "train_out";
};

struct PredictOptions {
  std::string checkpoint;
  std::string input;
  std::string format = "pair";
  std::string direction = "retro";
  int test_aug_n = 1;
  int beam = 5;
  double temperature = 1.0;
  int max_len = 0;  // 0 = model max
  std::uint64_t seed = 0;
  std::string out = "predict_out";
};

struct ScoreOptions {
  std::string predictions;
  std::string targets;
  std::string top = "1,2,5,10";
  bool maxfrag = false;
  std::string mode = "dedup_first";
  std::string groups = "stereo";
  std::string bins = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9";
  bool cumulative_left = false;
  std::string confidence_metric = "top_n";
  std::string out = "score_out";
};

struct ReportOptions {
  std::string runs;
  std::string out = "report_out";
};

// ---- subcommand implementations ----

int run_ingest(const IngestOptions &opt);
int run_augment(const AugmentOptions &opt);
int run_train(const TrainOptions &opt);
int run_predict(const PredictOptions &opt);
int run_score(const ScoreOptions &opt);
int run_report(const ReportOptions &opt);

int run_ingest(const IngestOptions &opt) {
  RunContext ctx;
  ctx.subcommand = "ingest";
  ctx.config = {{"input", opt.input},
                {"format", opt.format},
                {"direction", opt.direction},
                {"min-reactant-atoms", std::to_string(opt.min_reactant_atoms)},
                {"min-product-chars", std::to_string(opt.min_product_chars)},
                {"keep-empty-products", opt.keep_empty_products ? "1" : "0"},
                {"no-dedup", opt.no_dedup ? "1" : "0"},
                {"out", opt.out}};
  ctx.inputs = {opt.input};

  const auto format = reaction::line_format_from_name(opt.format);
  const auto direction = opt.direction == "forward"
                             ? reaction::Direction::kForward
                             : reaction::Direction::kRetro;
  const auto lines = read_lines(opt.input);

  std::vector<reaction::ReactionRecord> records;
  std::vector<std::string> kept_lines;
  std::vector<reaction::Rejection> rejected;
  std::vector<std::string> record_lines;
  std::map<std::string, std::size_t> record_line_index;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) {
      continue;
    }
    const std::string id = "r" + std::to_string(i);
    try {
      auto record = reaction::parse_reaction(lines[i], format, direction);
      record.id = id;
      records.push_back(std::move(record));
      record_line_index[id] = record_lines.size();
      record_lines.push_back(lines[i]);
    } catch (const std::exception &e) {
      rejected.push_back({id, "unparseable", e.what()});
    }
  }

  reaction::FilterRules rules;
  rules.min_reactant_atoms = opt.min_reactant_atoms;
  rules.min_product_chars = opt.min_product_chars;
  rules.drop_empty_products = !opt.keep_empty_products;
  rules.deduplicate = !opt.no_dedup;
  auto result = reaction::filter_dataset(std::move(records), rules);
  for (auto &rejection : result.rejected) {
    rejected.push_back(std::move(rejection));
  }

  if (result.kept.empty()) {
    throw DataError("no records survived ingestion");
  }
  // Kept records pass through as their original lines.
  std::string dataset;
  for (const auto &record : result.kept) {
    dataset += record_lines[record_line_index.at(record.id)];
    dataset += '\n';
  }

  std::string log = "# rxnaug report v1\nid,rule,detail\n";
  for (const auto &rejection : rejected) {
    std::string detail = rejection.detail;
    for (char &c : detail) {
      if (c == ',' || c == '\n') {
        c = ';';
      }
    }
    log += rejection.id + "," + rejection.rule + "," + detail + "\n";
  }

  const fs::path out_dir(opt.out);
  write_file_atomic(out_dir / "dataset.txt", dataset);
  write_file_atomic(out_dir / "rejections.csv", log);
  ctx.outputs = {out_dir / "dataset.txt", out_dir / "rejections.csv"};
  write_manifest(ctx, out_dir);
  std::printf("ingest: kept %zu records, rejected %zu\n", result.kept.size(),
              rejected.size());
  return 0;
}

int run_augment(const AugmentOptions &opt) {
  RunContext ctx;
  ctx.subcommand = "augment";
  ctx.config = {{"input", opt.input},
                {"format", opt.format},
                {"direction", opt.direction},
                {"protocol", opt.protocol},
                {"n", std::to_string(opt.n)},
                {"seed", std::to_string(opt.seed)},
                {"keep-largest", std::to_string(opt.keep_largest)},
                {"drop-reagents", opt.drop_reagents ? "1" : "0"},
                {"out", opt.out}};
  ctx.inputs = {opt.input};

  const auto [protocol, literal_n] = reaction::protocol_from_name(opt.protocol);
  int n = opt.n;
  if (literal_n.has_value()) {
    if (n != 0 && n != *literal_n) {
      throw DataError("--n conflicts with the protocol literal " + opt.protocol);
    }
    n = *literal_n;
  }
  if (n <= 0) {
    throw DataError("augmentation requires --n >= 1 (or a literal protocol like x5F)");
  }

  const auto format = reaction::line_format_from_name(opt.format);
  const auto direction = opt.direction == "forward"
                             ? reaction::Direction::kForward
                             : reaction::Direction::kRetro;
  const auto lines = read_lines(opt.input);
  std::vector<reaction::ReactionRecord> records;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) {
      continue;
    }
    auto record = reaction::parse_reaction(lines[i], format, direction);
    record.id = "r" + std::to_string(records.size());
    if (opt.drop_reagents) {
      record.reagents.clear();
    }
    records.push_back(std::move(record));
  }

  reaction::AugmentationSpec spec;
  spec.protocol = protocol;
  spec.n = n;
  spec.master_seed = opt.seed;
  if (opt.keep_largest > 0) {
    spec.keep_largest_k = opt.keep_largest;
  }
  const auto pairs = reaction::augment(records, spec);

  const fs::path out_dir(opt.out);
  reaction::write_dataset(pairs, out_dir / "pairs.txt");
  ctx.outputs = {out_dir / "pairs.txt"};
  write_manifest(ctx, out_dir);
  std::printf("augment: %zu records -> %zu pairs (%s, n=%d)\n", records.size(),
              pairs.size(), reaction::protocol_name(protocol).c_str(), n);
  return 0;
}

int run_train(const TrainOptions &opt) {
  RunContext ctx;
  ctx.subcommand = "train";
  ctx.config = {{"pairs", opt.pairs},
                {"epochs", std::to_string(opt.epochs)},
                {"batch-chars", std::to_string(opt.batch_chars)},
                {"layers", std::to_string(opt.layers)},
                {"heads", std::to_string(opt.heads)},
                {"width", std::to_string(opt.width)},
                {"ffn", std::to_string(opt.ffn)},
                {"dropout", std::to_string(opt.dropout)},
                {"max-seq-len", std::to_string(opt.max_seq_len)},
                {"lr-scale", std::to_string(opt.lr_scale)},
                {"warmup", std::to_string(opt.warmup)},
                {"eval-sample", std::to_string(opt.eval_sample)},
                {"seed", std::to_string(opt.seed)},
                {"deterministic", opt.deterministic ? "1" : "0"},
                {"quiet", opt.quiet ? "1" : "0"},
                {"out", opt.out}};
  ctx.inputs = {opt.pairs};

  const auto pairs = reaction::read_dataset(opt.pairs);
  std::vector<std::string> texts;
  for (const auto &pair : pairs) {
    texts.push_back(pair.source);
    texts.push_back(pair.target);
  }
  const model::Vocabulary vocab = model::Vocabulary::build(texts);

  model::ModelConfig config;
  config.layers = opt.layers;
  config.heads = opt.heads;
  config.model_width = opt.width;
  config.ffn_width = opt.ffn;
  config.dropout = opt.dropout;
  config.max_seq_len = opt.max_seq_len;
  config.validate();

  Rng init_rng(derive_seed(opt.seed, 0x1417));
  model::TransformerParams params =
      model::TransformerParams::init(config, vocab.size(), init_rng);

  model::TrainConfig tc;
  tc.epochs = opt.epochs;
  tc.batch_chars = opt.batch_chars;
  tc.lr_scale = opt.lr_scale;
  tc.warmup_steps = opt.warmup;
  tc.seed = opt.seed;
  tc.eval_sample = opt.eval_sample;
  tc.verbose = !opt.quiet;
  const model::TrainResult result =
      model::train_model(params, config, vocab, pairs, tc);

  const fs::path out_dir(opt.out);
  std::string log = "# rxnaug report v1\nepoch,loss,char_accuracy,exact_accuracy\n";
  char row[128];
  for (const auto &stats : result.log) {
    std::snprintf(row, sizeof(row), "%d,%.6f,%.6f,%.6f\n", stats.epoch,
                  stats.loss, stats.char_accuracy, stats.exact_accuracy);
    log += row;
  }
  write_file_atomic(out_dir / "train_log.csv", log);
  ctx.outputs.push_back(out_dir / "train_log.csv");

  for (std::size_t i = 0; i < result.best.size(); ++i) {
    const fs::path path =
        out_dir / ("checkpoint_rank" + std::to_string(i + 1) + ".bin");
    model::save_checkpoint(result.best[i], path);
    ctx.outputs.push_back(path);
  }
  model::Checkpoint averaged = model::average_checkpoints(result.best);
  {
    const model::TransformerParams restored = averaged.restore();
    averaged.train_exact_match = model::evaluate_exact_match(
        restored, config, vocab, pairs, tc.eval_sample, tc.seed);
  }
  model::save_checkpoint(averaged, out_dir / "averaged.bin");
  ctx.outputs.push_back(out_dir / "averaged.bin");
  write_manifest(ctx, out_dir);
  std::printf("train: %d epochs, best exact %.4f, averaged exact %.4f\n",
              opt.epochs, result.best.front().train_exact_match,
              averaged.train_exact_match);
  return 0;
}

int run_predict(const PredictOptions &opt) {
  RunContext ctx;
  ctx.subcommand = "predict";
  ctx.config = {{"checkpoint", opt.checkpoint},
                {"input", opt.input},
                {"format", opt.format},
                {"direction", opt.direction},
                {"test-aug-n", std::to_string(opt.test_aug_n)},
                {"beam", std::to_string(opt.beam)},
                {"temperature", std::to_string(opt.temperature)},
                {"max-len", std::to_string(opt.max_len)},
                {"seed", std::to_string(opt.seed)},
                {"out", opt.out}};
  ctx.inputs = {opt.checkpoint, opt.input};
  if (opt.test_aug_n < 1) {
    throw DataError("--test-aug-n must be >= 1");
  }

  const model::Checkpoint checkpoint = model::load_checkpoint(opt.checkpoint);
  const model::TransformerParams params = checkpoint.restore();
  const model::Vocabulary vocab = checkpoint.vocabulary();
  model::DecodeConfig decode;
  decode.beam = opt.beam;
  decode.temperature = opt.temperature;
  decode.max_output_length = opt.max_len > 0
                                 ? opt.max_len
                                 : checkpoint.config.max_seq_len - 1;
  decode.validate(vocab.size());

  // Collect (id, source molecule, forward flag) from the input file.
  struct SourceEntry {
    std::string id;
    smiles::Molecule mol;
    bool forward = false;
  };
  std::vector<SourceEntry> sources;
  const auto lines = read_lines(opt.input);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) {
      continue;
    }
    const std::string id = "r" + std::to_string(i);
    if (opt.format == "sources") {
      std::string text = lines[i];
      bool forward = false;
      if (!text.empty() && text.front() == '.') {
        forward = true;
        text.erase(text.begin());
      }
      sources.push_back({id, smiles::parse_smiles(text), forward});
      continue;
    }
    const auto format = reaction::line_format_from_name(opt.format);
    const auto direction = opt.direction == "forward"
                               ? reaction::Direction::kForward
                               : reaction::Direction::kRetro;
    auto record = reaction::parse_reaction(lines[i], format, direction);
    smiles::Molecule combined;
    for (const smiles::Molecule *mol : record.source_molecules()) {
      const int offset = static_cast<int>(combined.atoms.size());
      for (smiles::Atom atom : mol->atoms) {
        for (int &entry : atom.chiral_ref) {
          if (entry >= 0) {
            entry += offset;
          }
        }
        combined.atoms.push_back(std::move(atom));
      }
      for (smiles::Bond bond : mol->bonds) {
        bond.a += offset;
        bond.b += offset;
        combined.bonds.push_back(bond);
      }
    }
    sources.push_back({id, std::move(combined),
                       record.direction == reaction::Direction::kForward});
  }
  if (sources.empty()) {
    throw DataError("no sources found in " + opt.input);
  }

  std::vector<score::PredictionEntry> entries;
  for (const SourceEntry &source : sources) {
    Rng rng(derive_seed(opt.seed, fnv1a64(source.id)));
    // Variant 0 mirrors the training serialization: canonical fragments in
    // their original order.
    std::string canonical_ordered;
    {
      const auto fragments = smiles::split_fragments(source.mol);
      for (std::size_t f = 0; f < fragments.size(); ++f) {
        canonical_ordered += (f > 0 ? "." : "") + smiles::canonicalize(fragments[f]);
      }
    }
    for (int variant = 0; variant < opt.test_aug_n; ++variant) {
      std::string text = variant == 0
                             ? canonical_ordered
                             : smiles::enumerate_random(source.mol, {rng()});
      if (source.forward) {
        text = "." + text;
      }
      const std::vector<int> tokens = vocab.encode(text, source.id);
      model::TransformerScorer scorer(params, checkpoint.config, vocab, tokens,
                                      opt.temperature);
      const auto decoded = model::beam_decode(scorer, decode);
      for (std::size_t b = 0; b < decoded.size(); ++b) {
        entries.push_back({source.id, variant, static_cast<int>(b),
                           decoded[b].score, vocab.decode(decoded[b].tokens)});
      }
    }
  }

  const fs::path out_dir(opt.out);
  score::write_predictions(entries, out_dir / "predictions.tsv");
  ctx.outputs = {out_dir / "predictions.tsv"};
  write_manifest(ctx, out_dir);
  std::printf("predict: %zu sources x %d variants -> %zu predictions\n",
              sources.size(), opt.test_aug_n, entries.size());
  return 0;
}

int run_score(const ScoreOptions &opt) {
  RunContext ctx;
  ctx.subcommand = "score";
  ctx.config = {{"predictions", opt.predictions},
                {"targets", opt.targets},
                {"top", opt.top},
                {"maxfrag", opt.maxfrag ? "1" : "0"},
                {"mode", opt.mode},
                {"groups", opt.groups},
                {"bins", opt.bins},
                {"cumulative-left", opt.cumulative_left ? "1" : "0"},
                {"confidence-metric", opt.confidence_metric},
                {"out", opt.out}};
  ctx.inputs = {opt.predictions, opt.targets};

  const auto entries = score::read_predictions(opt.predictions);
  std::vector<score::TargetInfo> targets;
  const auto lines = read_lines(opt.targets);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) {
      continue;
    }
    const auto first = lines[i].find(',');
    if (first == std::string::npos) {
      throw DataError("targets line " + std::to_string(i + 1) +
                      ": expected source,target[,label]");
    }
    const auto second = lines[i].find(',', first + 1);
    score::TargetInfo info;
    info.reaction_id = "r" + std::to_string(i);
    info.target_text = lines[i].substr(
        first + 1, second == std::string::npos ? second : second - first - 1);
    if (second != std::string::npos) {
      info.class_label = lines[i].substr(second + 1);
    }
    targets.push_back(std::move(info));
  }

  const auto mode = score::aggregation_mode_from_name(opt.mode);
  const auto scored = score::score_reactions(entries, targets, mode);

  const std::vector<int> n_values = parse_int_list(opt.top);
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    if (n_values[i] < 1 || (i > 0 && n_values[i] <= n_values[i - 1])) {
      throw DataError("--top values must be positive and ascending: " + opt.top);
    }
  }
  const auto groups = parse_string_list(opt.groups);
  const auto rows = score::subset_report(scored, groups, n_values, opt.maxfrag);

  const fs::path out_dir(opt.out);
  write_file_atomic(out_dir / "metrics.csv", score::render_metric_rows(rows));
  ctx.outputs.push_back(out_dir / "metrics.csv");

  // Confidence curve over per-reaction confidence and correctness.
  const int confidence_n = n_values.front();
  std::vector<std::pair<double, bool>> observations;
  for (const auto &reaction : scored) {
    if (!reaction.confidence.has_value()) {
      continue;  // no valid predictions: no confidence estimate
    }
    const bool correct = opt.confidence_metric == "maxfrag"
                             ? reaction.correct_maxfrag(confidence_n)
                             : reaction.correct_top_n(confidence_n);
    observations.emplace_back(*reaction.confidence, correct);
  }
  if (!observations.empty()) {
    const auto bins = score::confidence_bins(
        observations, parse_double_list(opt.bins), opt.cumulative_left);
    write_file_atomic(out_dir / "confidence_curve.csv",
                      score::render_confidence_curve(bins));
    write_file_atomic(out_dir / "confidence_density.csv",
                      score::render_confidence_density(bins));
    ctx.outputs.push_back(out_dir / "confidence_curve.csv");
    ctx.outputs.push_back(out_dir / "confidence_density.csv");
  }

  write_file_atomic(out_dir / "beam_position.csv",
                    score::render_beam_positions(score::beam_position_report(scored)));
  ctx.outputs.push_back(out_dir / "beam_position.csv");
  write_manifest(ctx, out_dir);

  for (const auto &row : rows) {
    if (row.group == "all") {
      std::printf("%s top-%d: %.4f  (%zu reactions)\n", row.metric.c_str(),
                  row.n, row.value, row.count);
    }
  }
  return 0;
}

int run_report(const ReportOptions &opt) {
  RunContext ctx;
  ctx.subcommand = "report";
  ctx.config = {{"runs", opt.runs}, {"out", opt.out}};

  const auto run_dirs = parse_string_list(opt.runs);
  if (run_dirs.empty()) {
    throw DataError("report requires at least one run directory");
  }
  std::string summary = "# rxnaug report v1\nrun,metric,group,n,value,count\n";
  std::string manifests = "[";
  bool first_manifest = true;
  for (const std::string &dir : run_dirs) {
    const fs::path run(dir);
    if (!fs::exists(run / "manifest.json")) {
      throw DataError("missing manifest: " + (run / "manifest.json").string());
    }
    ctx.inputs.push_back(run / "manifest.json");
    if (!first_manifest) {
      manifests += ",";
    }
    manifests += read_file(run / "manifest.json");
    first_manifest = false;

    const fs::path metrics = run / "metrics.csv";
    if (fs::exists(metrics)) {
      ctx.inputs.push_back(metrics);
      for (const std::string &line : read_lines(metrics)) {
        if (line.empty() || line[0] == '#' || line.rfind("metric,", 0) == 0) {
          continue;
        }
        summary += run.filename().string() + "," + line + "\n";
      }
    }
    for (const char *plot : {"confidence_curve.csv", "confidence_density.csv",
                             "beam_position.csv", "train_log.csv"}) {
      const fs::path source = run / plot;
      if (fs::exists(source)) {
        const fs::path target =
            fs::path(opt.out) / (run.filename().string() + "_" + plot);
        write_file_atomic(target, read_file(source));
        ctx.outputs.push_back(target);
      }
    }
  }
  manifests += "]\n";

  const fs::path out_dir(opt.out);
  write_file_atomic(out_dir / "summary.csv", summary);
  write_file_atomic(out_dir / "manifests.json", manifests);
  ctx.outputs.push_back(out_dir / "summary.csv");
  ctx.outputs.push_back(out_dir / "manifests.json");
  write_manifest(ctx, out_dir);
  std::printf("report: %zu runs summarized into %s\n", run_dirs.size(),
              opt.out.c_str());
  return 0;
}

// Re-executes the subcommand recorded in a manifest, optionally redirecting
// its output directory.
int run_replay(const std::string &manifest_path, const std::string &out_override);

int dispatch(const std::string &subcommand, const ConfigMap &config,
             const std::string &out_override) {
  auto get = [&](const std::string &key, const std::string &fallback) {
    const auto it = config.find(key);
    return it == config.end() ? fallback : it->second;
  };
  auto out_of = [&](const std::string &fallback) {
    return out_override.empty() ? get("out", fallback) : out_override;
  };
  if (subcommand == "ingest") {
    IngestOptions opt;
    opt.input = get("input", "");
    opt.format = get("format", "mixed");
    opt.direction = get("direction", "retro");
    opt.min_reactant_atoms = std::stoi(get("min-reactant-atoms", "5"));
    opt.min_product_chars = std::stoi(get("min-product-chars", "5"));
    opt.keep_empty_products = get("keep-empty-products", "0") == "1";
    opt.no_dedup = get("no-dedup", "0") == "1";
    opt.out = out_of("ingest_out");
    return run_ingest(opt);
  }
  if (subcommand == "augment") {
    AugmentOptions opt;
    opt.input = get("input", "");
    opt.format = get("format", "pair");
    opt.direction = get("direction", "retro");
    opt.protocol = get("protocol", "x1");
    opt.n = std::stoi(get("n", "0"));
    opt.seed = std::stoull(get("seed", "0"));
    opt.keep_largest = std::stoi(get("keep-largest", "0"));
    opt.drop_reagents = get("drop-reagents", "0") == "1";
    opt.out = out_of("augment_out");
    return run_augment(opt);
  }
  if (subcommand == "train") {
    TrainOptions opt;
    opt.pairs = get("pairs", "");
    opt.epochs = std::stoi(get("epochs", "100"));
    opt.batch_chars = std::stoi(get("batch-chars", "3000"));
    opt.layers = std::stoi(get("layers", "2"));
    opt.heads = std::stoi(get("heads", "4"));
    opt.width = std::stoi(get("width", "64"));
    opt.ffn = std::stoi(get("ffn", "256"));
    opt.dropout = std::stod(get("dropout", "0.1"));
    opt.max_seq_len = std::stoi(get("max-seq-len", "256"));
    opt.lr_scale = std::stod(get("lr-scale", "1.0"));
    opt.warmup = std::stoi(get("warmup", "400"));
    opt.eval_sample = std::stoi(get("eval-sample", "512"));
    opt.seed = std::stoull(get("seed", "0"));
    opt.deterministic = get("deterministic", "1") == "1";
    opt.quiet = get("quiet", "0") == "1";
    opt.out = out_of("train_out");
    return run_train(opt);
  }
  if (subcommand == "predict") {
    PredictOptions opt;
    opt.checkpoint = get("checkpoint", "");
    opt.input = get("input", "");
    opt.format = get("format", "pair");
    opt.direction = get("direction", "retro");
    opt.test_aug_n = std::stoi(get("test-aug-n", "1"));
    opt.beam = std::stoi(get("beam", "5"));
    opt.temperature = std::stod(get("temperature", "1.0"));
    opt.max_len = std::stoi(get("max-len", "0"));
    opt.seed = std::stoull(get("seed", "0"));
    opt.out = out_of("predict_out");
    return run_predict(opt);
  }
  if (subcommand == "score") {
    ScoreOptions opt;
    opt.predictions = get("predictions", "");
    opt.targets = get("targets", "");
    opt.top = get("top", "1,2,5,10");
    opt.maxfrag = get("maxfrag", "0") == "1";
    opt.mode = get("mode", "dedup_first");
    opt.groups = get("groups", "stereo");
    opt.bins = get("bins", "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9");
    opt.cumulative_left = get("cumulative-left", "0") == "1";
    opt.confidence_metric = get("confidence-metric", "top_n");
    opt.out = out_of("score_out");
    return run_score(opt);
  }
  if (subcommand == "report") {
    ReportOptions opt;
    opt.runs = get("runs", "");
    opt.out = out_of("report_out");
    return run_report(opt);
  }
  throw DataError("manifest names an unknown subcommand: " + subcommand);
}

int run_replay(const std::string &manifest_path,
               const std::string &out_override) {
  const json manifest = json::parse(read_file(manifest_path));
  const std::string subcommand = manifest.at("subcommand").get<std::string>();
  ConfigMap config;
  for (const auto &[key, value] : manifest.at("config").items()) {
    config[key] = value.get<std::string>();
  }
  std::printf("replay: %s from %s\n", subcommand.c_str(), manifest_path.c_str());
  return dispatch(subcommand, config, out_override);
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"SMILES-augmentation toolkit for reaction prediction"};
  app.require_subcommand(1);

  IngestOptions ingest;
  auto *cmd_ingest = app.add_subcommand(
      "ingest", "Parse, filter, and deduplicate a reaction file");
  cmd_ingest->add_option("--input", ingest.input, "Reaction file")->required();
  cmd_ingest->add_option("--format", ingest.format,
                         "Line format: separated|mixed|pair");
  cmd_ingest->add_option("--direction", ingest.direction,
                         "Record direction: retro|forward");
  cmd_ingest->add_option("--min-reactant-atoms", ingest.min_reactant_atoms,
                         "Reject records whose reactants total fewer heavy atoms");
  cmd_ingest->add_option("--min-product-chars", ingest.min_product_chars,
                         "Reject records whose largest product canonical "
                         "string is shorter");
  cmd_ingest->add_flag("--keep-empty-products", ingest.keep_empty_products,
                       "Keep records with an empty product side");
  cmd_ingest->add_flag("--no-dedup", ingest.no_dedup,
                       "Keep duplicate reactions");
  cmd_ingest->add_option("--out", ingest.out, "Output directory");

  AugmentOptions augment;
  auto *cmd_augment = app.add_subcommand(
      "augment", "Expand a dataset under an augmentation protocol");
  cmd_augment->add_option("--input", augment.input, "Ingested dataset file")
      ->required();
  cmd_augment->add_option("--format", augment.format,
                          "Line format: separated|mixed|pair");
  cmd_augment->add_option("--direction", augment.direction,
                          "Record direction: retro|forward");
  cmd_augment->add_option("--protocol", augment.protocol,
                          "x1|xN|xNR|xNF|xNS|xNM or a literal like x5F");
  cmd_augment->add_option("--n", augment.n, "Variants per reaction");
  cmd_augment->add_option("--seed", augment.seed, "Master seed");
  cmd_augment->add_option("--keep-largest", augment.keep_largest,
                          "Reduce targets to the K largest fragments");
  cmd_augment->add_flag("--drop-reagents", augment.drop_reagents,
                        "Exclude reagents from the target side");
  cmd_augment->add_option("--out", augment.out, "Output directory");

  TrainOptions train;
  auto *cmd_train =
      app.add_subcommand("train", "Train the character transformer");
  cmd_train->add_option("--pairs", train.pairs, "source,target pair file")
      ->required();
  cmd_train->add_option("--epochs", train.epochs, "Training epochs");
  cmd_train->add_option("--batch-chars", train.batch_chars,
                        "Greedy batch budget in characters");
  cmd_train->add_option("--layers", train.layers, "Encoder/decoder layers");
  cmd_train->add_option("--heads", train.heads, "Attention heads");
  cmd_train->add_option("--width", train.width, "Model width");
  cmd_train->add_option("--ffn", train.ffn, "Feed-forward width");
  cmd_train->add_option("--dropout", train.dropout, "Dropout rate");
  cmd_train->add_option("--max-seq-len", train.max_seq_len,
                        "Maximum sequence length");
  cmd_train->add_option("--lr-scale", train.lr_scale,
                        "Learning-rate scale factor");
  cmd_train->add_option("--warmup", train.warmup, "Warmup steps");
  cmd_train->add_option("--eval-sample", train.eval_sample,
                        "Training subsample for per-epoch exact-match "
                        "evaluation (0 = all)");
  cmd_train->add_option("--seed", train.seed, "Master seed");
  cmd_train->add_flag("--deterministic,!--no-deterministic",
                      train.deterministic,
                      "Deterministic mode (default on; all current code "
                      "paths are deterministic either way)");
  cmd_train->add_flag("--quiet", train.quiet, "Suppress per-epoch progress");
  cmd_train->add_option("--out", train.out, "Output directory");

  PredictOptions predict;
  auto *cmd_predict = app.add_subcommand(
      "predict", "Beam-decode predictions for a test file");
  cmd_predict->add_option("--checkpoint", predict.checkpoint,
                          "Checkpoint file")->required();
  cmd_predict->add_option("--input", predict.input, "Test file")->required();
  cmd_predict->add_option("--format", predict.format,
                          "pair|separated|mixed|sources");
  cmd_predict->add_option("--direction", predict.direction,
                          "Record direction: retro|forward");
  cmd_predict->add_option("--test-aug-n", predict.test_aug_n,
                          "Input variants per reaction (variant 0 canonical)");
  cmd_predict->add_option("--beam", predict.beam, "Beam size");
  cmd_predict->add_option("--temperature", predict.temperature,
                          "Logit temperature");
  cmd_predict->add_option("--max-len", predict.max_len,
                          "Maximum decoded length (0 = model limit)");
  cmd_predict->add_option("--seed", predict.seed,
                          "Seed for test-set enumeration");
  cmd_predict->add_option("--out", predict.out, "Output directory");

  ScoreOptions score_opt;
  auto *cmd_score =
      app.add_subcommand("score", "Rank predictions and compute metrics");
  cmd_score->add_option("--predictions", score_opt.predictions,
                        "predictions.tsv from predict")->required();
  cmd_score->add_option("--targets", score_opt.targets,
                        "pair file with gold targets")->required();
  cmd_score->add_option("--top", score_opt.top, "Top-n values, e.g. 1,2,5,10");
  cmd_score->add_flag("--maxfrag", score_opt.maxfrag,
                      "Also compute MaxFrag accuracy");
  cmd_score->add_option("--mode", score_opt.mode, "dedup_first|keep_all");
  cmd_score->add_option("--groups", score_opt.groups,
                        "Subset keys: stereo,class");
  cmd_score->add_option("--bins", score_opt.bins,
                        "Interior confidence bin edges");
  cmd_score->add_flag("--cumulative-left", score_opt.cumulative_left,
                      "Left-cumulative confidence-bin averaging");
  cmd_score->add_option("--confidence-metric", score_opt.confidence_metric,
                        "top_n|maxfrag correctness for the confidence curve");
  cmd_score->add_option("--out", score_opt.out, "Output directory");

  ReportOptions report;
  auto *cmd_report = app.add_subcommand(
      "report", "Join score outputs and manifests into plot-ready bundles");
  cmd_report->add_option("--runs", report.runs,
                         "Comma-separated run directories")->required();
  cmd_report->add_option("--out", report.out, "Output directory");

  // Flat key=value configuration files bind per subcommand; unknown keys
  // are rejected.
  for (CLI::App *sub : {cmd_ingest, cmd_augment, cmd_train, cmd_predict,
                        cmd_score, cmd_report}) {
    sub->set_config("--config", "", "Flat key=value configuration file");
    sub->allow_config_extras(false);
  }

  std::string replay_manifest;
  std::string replay_out;
  auto *cmd_replay = app.add_subcommand(
      "replay", "Re-execute a stage from its manifest.json");
  cmd_replay->add_option("--manifest", replay_manifest, "Manifest file")
      ->required();
  cmd_replay->add_option("--out", replay_out, "Override output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (cmd_ingest->parsed()) {
      return run_ingest(ingest);
    }
    if (cmd_augment->parsed()) {
      return run_augment(augment);
    }
    if (cmd_train->parsed()) {
      return run_train(train);
    }
    if (cmd_predict->parsed()) {
      return run_predict(predict);
    }
    if (cmd_score->parsed()) {
      return run_score(score_opt);
    }
    if (cmd_report->parsed()) {
      return run_report(report);
    }
    if (cmd_replay->parsed()) {
      return run_replay(replay_manifest, replay_out);
    }
  } catch (const NumericError &e) {
    std::fprintf(stderr, "numeric failure: %s\n", e.what());
    return 3;
  } catch (const smiles::ParseError &e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return 2;
  } catch (const std::exception &e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return 2;
  }
  return 1;
}

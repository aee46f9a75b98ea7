//
// Project RxnAug - Copyright 2026 RxnAug Contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance runner: one line per criterion, [PASS]/[FAIL] with timing and
// detail, non-zero exit when anything fails. Criteria can be filtered by
// passing name substrings as arguments.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "rxnaug/model/checkpoint.hpp"
#include "rxnaug/model/decode.hpp"
#include "rxnaug/model/train.hpp"
#include "rxnaug/reaction/augment.hpp"
#include "rxnaug/score/metrics.hpp"
#include "rxnaug/score/ranking.hpp"
#include "rxnaug/smiles/canonical.hpp"
#include "rxnaug/smiles/enumerate.hpp"
#include "rxnaug/smiles/fragments.hpp"
#include "rxnaug/smiles/parse.hpp"
#include "rxnaug/util/io.hpp"
#include "rxnaug/util/rng.hpp"
#include "support/table_model.hpp"
#include "support/toy_grammar.hpp"

using namespace rxnaug;
using Clock = std::chrono::steady_clock;

namespace {

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool condition, const std::string &message) {
    if (!condition && ok) {
      ok = false;
      detail = message;
    }
  }
  void note(const std::string &message) {
    if (ok) {
      detail = message;
    }
  }
};

std::string norm(const std::string &text) {
  return *score::normalize_prediction(text);
}

score::PredictionEntry entry(const std::string &id, int variant, int position,
                             const std::string &text) {
  return {id, variant, position, 0.0, text};
}

std::vector<score::PredictionEntry> ranking_fixture_entries() {
  return {
      entry("r", 0, 0, "CC(C)"),  entry("r", 0, 1, "C(C)CC"),
      entry("r", 0, 2, "NNC"),    entry("r", 1, 0, "CNN"),
      entry("r", 1, 1, "CCC"),    entry("r", 1, 2, "CC="),
      entry("r", 2, 0, "CC.CCC"), entry("r", 2, 1, "CCC.CC"),
      entry("r", 2, 2, "C#"),
  };
}

// ---- criterion 1: Eq. 1 fixtures ----

Check criterion_eq1() {
  Check check;
  const double w1 = 1.0 / 1.001;
  const double w2 = 1.0 / 1.002;

  const auto dedup = score::rank_predictions(ranking_fixture_entries(),
                                             score::AggregationMode::kDedupFirst);
  check.require(dedup.size() == 4, "expected 4 dedup_first candidates");
  if (!check.ok) {
    return check;
  }
  const std::vector<std::pair<std::string, double>> expected = {
      {norm("CCC"), 1.0 + w1},
      {norm("CNN"), w2 + 1.0},
      {norm("CC.CCC"), 1.0},
      {norm("CCCC"), w1},
  };
  for (std::size_t i = 0; i < expected.size(); ++i) {
    check.require(dedup[i].canonical_text == expected[i].first,
                  "dedup_first candidate order mismatch at " + std::to_string(i));
    check.require(std::abs(dedup[i].rank_value - expected[i].second) < 1e-12,
                  "dedup_first rank mismatch at " + std::to_string(i));
  }
  check.require(dedup[0].canonical_text == norm("CCC") &&
                    dedup[1].canonical_text == norm("CNN"),
                "dedup_first Top-2 is not {CCC, CNN}");

  const auto keep_all = score::rank_predictions(ranking_fixture_entries(),
                                                score::AggregationMode::kKeepAll);
  check.require(keep_all.size() == 4, "expected 4 keep_all candidates");
  if (!check.ok) {
    return check;
  }
  check.require(keep_all[0].canonical_text == norm("CCC"),
                "keep_all Top-1 is not CCC");
  check.require(keep_all[1].canonical_text == norm("CC.CCC"),
                "keep_all Top-2 is not CC.CCC");
  check.require(std::abs(keep_all[1].rank_value - (1.0 + w1)) < 1e-12,
                "keep_all CC.CCC rank is not 1.999");
  check.note("ranks 1.999001/1.998004/1.0/0.999001 reproduced in both modes");
  return check;
}

// ---- criterion 2: confidence fixtures ----

Check criterion_confidence_fixture() {
  Check check;
  std::vector<score::PredictionEntry> high;
  for (int i = 0; i < 926; ++i) {
    high.push_back(entry("r", i, 0, "CCO"));
  }
  const char *fillers[] = {"CCC", "CCN", "CCCC", "OCO", "CNC", "COC", "NCN"};
  for (int i = 0; i < 73; ++i) {
    high.push_back(entry("r", 1000 + i, 0, fillers[i % 7]));
  }
  const auto high_conf = score::confidence(score::normalize_entries(high));
  check.require(high_conf.has_value(), "926/999 confidence undefined");
  check.require(std::abs(*high_conf - 0.93) < 0.005,
                "926/999 confidence outside 0.93 +- 0.005");

  std::vector<score::PredictionEntry> low;
  for (int i = 0; i < 203; ++i) {
    low.push_back(entry("r", i, 0, "CCO"));
  }
  for (int i = 0; i < 796; ++i) {
    low.push_back(entry("r", 300 + i, 0,
                        "C" + std::string(1 + (i % 100), 'C') + "N"));
  }
  const auto low_conf = score::confidence(score::normalize_entries(low));
  check.require(low_conf.has_value(), "203/999 confidence undefined");
  check.require(std::abs(*low_conf - 0.20) < 0.005,
                "203/999 confidence outside 0.20 +- 0.005");
  char buf[96];
  std::snprintf(buf, sizeof(buf), "926/999 -> %.4f, 203/999 -> %.4f",
                *high_conf, *low_conf);
  check.note(buf);
  return check;
}

// ---- criterion 3: relative error reduction ----

Check criterion_relative_error() {
  Check check;
  const double value = score::relative_error_reduction(94.2, 96.1);
  check.require(std::abs(value - 0.327) <= 0.001,
                "(94.2, 96.1) outside 0.327 +- 0.001");
  char buf[64];
  std::snprintf(buf, sizeof(buf), "(94.2, 96.1) -> %.6f", value);
  check.note(buf);
  return check;
}

// ---- criterion 4: canonicalization invariance over the corpus ----

Check criterion_canonical_invariance() {
  Check check;
  const auto lines =
      read_lines(std::string(RXNAUG_TEST_DATA_DIR) + "/corpus.smi");
  std::vector<std::string> corpus;
  for (const auto &line : lines) {
    if (!line.empty()) {
      corpus.push_back(line);
    }
  }
  check.require(corpus.size() >= 200, "corpus holds fewer than 200 molecules");
  int stereo = 0;
  for (const auto &text : corpus) {
    stereo += smiles::contains_stereo(text) ? 1 : 0;
  }
  check.require(stereo >= 20, "corpus holds fewer than 20 stereo molecules");
  for (const char *table_s2 :
       {"CC(c1ccc(Br)nc1)N(C)C", "CC(=O)c1ccc(Br)nc1", "CNC",
        "O=Cc1cncc(Br)c1", "O=C(O)c1cncc(Br)c1"}) {
    check.require(std::find(corpus.begin(), corpus.end(), table_s2) !=
                      corpus.end(),
                  std::string("corpus is missing ") + table_s2);
  }

  int failures = 0;
  for (const auto &text : corpus) {
    const smiles::Molecule mol = smiles::parse_smiles(text);
    std::set<std::string> forms;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      forms.insert(smiles::canonicalize(
          smiles::parse_smiles(smiles::enumerate_random(mol, {seed}))));
    }
    if (forms.size() != 1) {
      ++failures;
      check.require(false, "multiple canonical forms for " + text);
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof(buf),
                "%zu molecules (%d stereo) x 50 enumerations, %d failures",
                corpus.size(), stereo, failures);
  check.note(buf);
  return check;
}

// ---- criterion 5: augmentation protocol fixtures ----

Check criterion_table_s2_protocols() {
  Check check;
  std::vector<reaction::ReactionRecord> records;
  records.push_back(reaction::parse_reaction(
      "CC(c1ccc(Br)nc1)N(C)C,CC(=O)c1ccc(Br)nc1.CNC", reaction::LineFormat::kPair));
  records.back().id = "amine";
  records.push_back(reaction::parse_reaction(
      "O=Cc1cncc(Br)c1,O=C(O)c1cncc(Br)c1", reaction::LineFormat::kPair));
  records.back().id = "acid";

  const std::string canonical_source[2] = {norm("CC(c1ccc(Br)nc1)N(C)C"),
                                           norm("O=Cc1cncc(Br)c1")};
  const std::string canonical_target_sorted[2] = {
      norm("CC(=O)c1ccc(Br)nc1.CNC"), norm("O=C(O)c1cncc(Br)c1")};

  auto augmented = [&](reaction::Protocol protocol, int n) {
    reaction::AugmentationSpec spec;
    spec.protocol = protocol;
    spec.n = n;
    spec.master_seed = 17;
    return reaction::augment(records, spec);
  };
  auto equivalent_source = [&](const std::string &text, int record) {
    return norm(text) == canonical_source[record];
  };
  auto equivalent_target = [&](const std::string &text, int record) {
    return norm(text) == canonical_target_sorted[record];
  };

  {  // x2: random source, canonical target fixed
    const auto pairs = augmented(reaction::Protocol::kXN, 2);
    check.require(pairs.size() == 4, "x2 expected 4 lines");
    for (int r = 0; r < 2; ++r) {
      const auto &v0 = pairs[static_cast<std::size_t>(2 * r)];
      const auto &v1 = pairs[static_cast<std::size_t>(2 * r + 1)];
      check.require(v0.source == reaction::canonical_side(
                                     records[static_cast<std::size_t>(r)]
                                         .source_molecules()),
                    "x2 variant 0 source is not canonical");
      check.require(v1.target == v0.target, "x2 target changed across variants");
      check.require(equivalent_source(v1.source, r),
                    "x2 random source not equivalent to the bold row");
      check.require(equivalent_target(v1.target, r),
                    "x2 target not equivalent to the bold row");
    }
  }
  {  // x2R: one fixed random target shared by all variants
    const auto pairs = augmented(reaction::Protocol::kXNR, 2);
    check.require(pairs.size() == 4, "x2R expected 4 lines");
    for (int r = 0; r < 2; ++r) {
      const auto &v0 = pairs[static_cast<std::size_t>(2 * r)];
      const auto &v1 = pairs[static_cast<std::size_t>(2 * r + 1)];
      check.require(v0.source == reaction::canonical_side(
                                     records[static_cast<std::size_t>(r)]
                                         .source_molecules()),
                    "x2R variant 0 source is not canonical");
      check.require(v1.target == v0.target,
                    "x2R fixed target differs across variants");
      check.require(equivalent_target(v0.target, r),
                    "x2R target not equivalent to the bold row");
      check.require(equivalent_source(v1.source, r),
                    "x2R random source not equivalent to the bold row");
    }
  }
  {  // x2F: both sides random, fragment order preserved
    const auto pairs = augmented(reaction::Protocol::kXNF, 2);
    check.require(pairs.size() == 4, "x2F expected 4 lines");
    const auto &v1 = pairs[1];  // amine record, random variant
    const auto fragments =
        smiles::split_fragments(smiles::parse_smiles(v1.target));
    check.require(fragments.size() == 2, "x2F target lost a fragment");
    if (fragments.size() == 2) {
      check.require(smiles::canonicalize(fragments[0]) ==
                        norm("CC(=O)c1ccc(Br)nc1"),
                    "x2F fragment order changed");
      check.require(smiles::canonicalize(fragments[1]) == norm("CNC"),
                    "x2F fragment order changed");
    }
    for (int r = 0; r < 2; ++r) {
      check.require(equivalent_target(pairs[static_cast<std::size_t>(2 * r + 1)].target, r),
                    "x2F target not equivalent to the bold row");
    }
  }
  {  // x3S: shuffling permutes, never drops
    const auto pairs = augmented(reaction::Protocol::kXNS, 3);
    check.require(pairs.size() == 6, "x3S expected 6 lines");
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const int record = static_cast<int>(i / 3);
      check.require(equivalent_target(pairs[i].target, record),
                    "x3S target multiset changed");
      check.require(equivalent_source(pairs[i].source, record),
                    "x3S source not equivalent to the bold row");
    }
  }
  {  // x2M: inverted forward lines with "." prefixes
    const auto pairs = augmented(reaction::Protocol::kXNM, 2);
    check.require(pairs.size() == 8, "x2M expected 8 lines");
    for (std::size_t i = 0; i + 1 < pairs.size(); i += 2) {
      const auto &retro = pairs[i];
      const auto &forward = pairs[i + 1];
      check.require(!retro.source.empty() && retro.source.front() != '.',
                    "x2M retro line starts with '.'");
      check.require(!forward.source.empty() && forward.source.front() == '.',
                    "x2M forward line does not start with '.'");
      check.require(forward.source.substr(1) == retro.target,
                    "x2M forward source is not the retro target");
      check.require(forward.target == retro.source,
                    "x2M forward target is not the retro source");
    }
  }
  check.note("x2/x2R/x2F/x3S/x2M shapes, fixed targets and '.' prefixes hold");
  return check;
}

// ---- criterion 6: transformer numerics ----

Check criterion_transformer_numerics() {
  Check check;

  // Gradient check on a width-16, 2-layer model, every parameter group.
  const model::Vocabulary vocab =
      model::Vocabulary::build(std::vector<std::string>{std::string("CON=")});
  model::ModelConfig config;
  config.layers = 2;
  config.heads = 4;
  config.model_width = 16;
  config.ffn_width = 32;
  config.dropout = 0.0;
  config.max_seq_len = 32;
  Rng rng(77);
  model::TransformerParams params =
      model::TransformerParams::init(config, vocab.size(), rng);
  const std::vector<int> source = vocab.encode("CC=O");
  const std::vector<int> target = vocab.encode("OC=C");
  const double normalizer = static_cast<double>(target.size()) + 1.0;

  model::TransformerParams grads =
      model::TransformerParams::zeros_like(config, vocab.size());
  model::sequence_loss_grad(params, config, source, target, grads, normalizer);

  auto loss_at = [&]() {
    model::TransformerParams scratch =
        model::TransformerParams::zeros_like(config, vocab.size());
    return model::sequence_loss_grad(params, config, source, target, scratch,
                                     normalizer) /
           normalizer;
  };

  std::vector<std::pair<std::string, model::Mat *>> grad_tensors;
  model::visit_tensors(grads, [&](const std::string &name, model::Mat &tensor) {
    grad_tensors.emplace_back(name, &tensor);
  });
  const double eps = 1e-5;
  double worst = 0.0;
  std::string worst_name;
  std::size_t cursor = 0;
  model::visit_tensors(params, [&](const std::string &name, model::Mat &tensor) {
    const model::Mat &analytic = *grad_tensors[cursor++].second;
    double diff_sq = 0.0;
    double analytic_sq = 0.0;
    double fd_sq = 0.0;
    for (int r = 0; r < tensor.rows(); ++r) {
      for (int c = 0; c < tensor.cols(); ++c) {
        const double saved = tensor(r, c);
        tensor(r, c) = saved + eps;
        const double up = loss_at();
        tensor(r, c) = saved - eps;
        const double down = loss_at();
        tensor(r, c) = saved;
        const double fd = (up - down) / (2.0 * eps);
        diff_sq += (analytic(r, c) - fd) * (analytic(r, c) - fd);
        analytic_sq += analytic(r, c) * analytic(r, c);
        fd_sq += fd * fd;
      }
    }
    const double scale =
        std::max({std::sqrt(analytic_sq), std::sqrt(fd_sq), 1e-5});
    const double rel = std::sqrt(diff_sq) / scale;
    if (rel > worst) {
      worst = rel;
      worst_name = name;
    }
    check.require(rel < 1e-4, name + " gradient relative error " +
                                  std::to_string(rel));
  });

  // Beam search equals exhaustive enumeration on the hand-built table model.
  rxnaug::testing::TableModel table(5, {
      {1, {0.0, 0.0, 0.5, 0.3, 0.2}},
      {3, {0.0, 0.0, 0.55, 0.27, 0.18}},
      {4, {0.0, 0.0, 0.6, 0.15, 0.25}},
  });
  const auto oracle = table.all_paths(4);
  std::vector<model::DecodedSequence> unique_oracle;
  std::set<std::vector<int>> seen;
  for (const auto &path : oracle) {
    if (seen.insert(path.tokens).second) {
      unique_oracle.push_back(path);
    }
  }
  for (int beam = 1; beam <= 3; ++beam) {
    model::DecodeConfig decode;
    decode.beam = beam;
    decode.max_output_length = 4;
    const auto results = model::beam_decode(table, decode);
    check.require(results.size() == static_cast<std::size_t>(beam),
                  "beam " + std::to_string(beam) + " returned wrong count");
    for (int i = 0; i < beam && i < static_cast<int>(results.size()); ++i) {
      check.require(results[static_cast<std::size_t>(i)].tokens ==
                            unique_oracle[static_cast<std::size_t>(i)].tokens &&
                        std::abs(results[static_cast<std::size_t>(i)].score -
                                 unique_oracle[static_cast<std::size_t>(i)].score) <
                            1e-12,
                    "beam " + std::to_string(beam) +
                        " differs from exhaustive enumeration");
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof(buf),
                "worst gradient group %s at %.2e; beams 1-3 exhaustive-equal",
                worst_name.c_str(), worst);
  check.note(buf);
  return check;
}

// ---- shared toy experiment machinery (criteria 7-9) ----

model::ModelConfig experiment_config() {
  model::ModelConfig config;
  config.layers = 2;
  config.heads = 4;
  config.model_width = 48;
  config.ffn_width = 192;
  config.dropout = 0.0;
  config.max_seq_len = 80;
  return config;
}

std::vector<reaction::AugmentedPair> augment_records(
    const std::vector<reaction::ReactionRecord> &records,
    reaction::Protocol protocol, int n, std::uint64_t seed) {
  reaction::AugmentationSpec spec;
  spec.protocol = protocol;
  spec.n = n;
  spec.master_seed = seed;
  return reaction::augment(records, spec);
}

model::Vocabulary vocab_of(const std::vector<reaction::AugmentedPair> &pairs) {
  std::vector<std::string> texts;
  for (const auto &pair : pairs) {
    texts.push_back(pair.source);
    texts.push_back(pair.target);
  }
  return model::Vocabulary::build(texts);
}

Check criterion_memorization() {
  Check check;
  const auto records = rxnaug::testing::make_toy_reactions(120, 1);
  const auto pairs = augment_records(records, reaction::Protocol::kXN, 1, 0);
  const model::Vocabulary vocab = vocab_of(pairs);

  model::ModelConfig config = experiment_config();
  Rng rng(7);
  model::TransformerParams params =
      model::TransformerParams::init(config, vocab.size(), rng);
  model::TrainConfig tc;
  tc.epochs = 250;
  tc.batch_chars = 600;
  tc.lr_scale = 0.5;
  tc.warmup_steps = 80;
  tc.seed = 11;
  tc.eval_sample = 0;  // evaluate the whole training set
  const model::TrainResult result =
      model::train_model(params, config, vocab, pairs, tc);
  const double best = result.best.front().train_exact_match;
  check.require(best > 0.95,
                "train exact-sequence accuracy " + std::to_string(best));
  int first = -1;
  for (const auto &stats : result.log) {
    if (stats.exact_accuracy > 0.95) {
      first = stats.epoch;
      break;
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof(buf),
                "%zu reactions, best exact %.3f (>0.95 from epoch %d)",
                records.size(), best, first);
  check.note(buf);
  return check;
}

struct ExperimentOutcome {
  std::vector<double> x1_top1;
  std::vector<double> x5f_top1;
  std::vector<std::pair<double, bool>> confidence_observations;  // x5F models
  bool ran = false;
};

ExperimentOutcome g_experiment;

double run_protocol_seed(const std::vector<reaction::ReactionRecord> &train_recs,
                         const std::vector<reaction::ReactionRecord> &test_recs,
                         reaction::Protocol protocol, int n, std::uint64_t seed,
                         std::vector<std::pair<double, bool>> *confidence_out) {
  const auto pairs = augment_records(train_recs, protocol, n, seed);
  const model::Vocabulary vocab = vocab_of(pairs);
  const model::ModelConfig config = experiment_config();

  Rng rng(derive_seed(seed, 0xAB));
  model::TransformerParams params =
      model::TransformerParams::init(config, vocab.size(), rng);
  model::TrainConfig tc;
  tc.epochs = 100;
  tc.batch_chars = 1600;
  tc.lr_scale = 0.7;
  tc.warmup_steps = 300;
  tc.seed = seed;
  tc.eval_sample = 64;
  const model::TrainResult result =
      model::train_model(params, config, vocab, pairs, tc);
  const model::Checkpoint averaged = model::average_checkpoints(result.best);
  const model::TransformerParams final_params = averaged.restore();

  int correct = 0;
  for (const auto &record : test_recs) {
    std::string target;
    for (std::size_t i = 0; i < record.reactants.size(); ++i) {
      target += (i > 0 ? "." : "") + smiles::canonicalize(record.reactants[i]);
    }
    const auto target_norm = score::normalize_prediction(target);
    Rng enum_rng(derive_seed(seed, fnv1a64(record.id)));
    std::vector<score::PredictionEntry> entries;
    for (int variant = 0; variant < 10; ++variant) {
      const std::string source =
          variant == 0
              ? smiles::canonicalize(record.products[0])
              : smiles::enumerate_random(record.products[0], {enum_rng()});
      std::vector<int> tokens;
      try {
        tokens = vocab.encode(source);
      } catch (const DataError &) {
        continue;  // enumeration used a character the training set never had
      }
      model::TransformerScorer scorer(final_params, config, vocab, tokens, 1.0);
      model::DecodeConfig decode;
      decode.beam = 5;
      decode.max_output_length = 60;
      const auto decoded = model::beam_decode(scorer, decode);
      for (std::size_t b = 0; b < decoded.size(); ++b) {
        entries.push_back({record.id, variant, static_cast<int>(b),
                           decoded[b].score, vocab.decode(decoded[b].tokens)});
      }
    }
    const auto normalized = score::normalize_entries(entries);
    const auto ranked =
        score::rank_normalized(normalized, score::AggregationMode::kDedupFirst);
    const bool ok = target_norm.has_value() &&
                    score::top_n_correct(ranked, *target_norm, 1);
    correct += ok ? 1 : 0;
    if (confidence_out != nullptr) {
      const auto conf = score::confidence(normalized);
      if (conf.has_value()) {
        confidence_out->emplace_back(*conf, ok);
      }
    }
  }
  return static_cast<double>(correct) / static_cast<double>(test_recs.size());
}

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2]
                    : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

Check criterion_augmentation_benefit() {
  Check check;
  const auto records = rxnaug::testing::make_toy_reactions(600, 2026);
  const std::vector<reaction::ReactionRecord> train_recs(records.begin(),
                                                         records.begin() + 500);
  const std::vector<reaction::ReactionRecord> test_recs(records.begin() + 500,
                                                        records.end());

  struct Job {
    std::uint64_t seed;
    reaction::Protocol protocol;
    int n;
    double top1 = 0.0;
    std::vector<std::pair<double, bool>> confidence;
  };
  std::vector<Job> jobs;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    jobs.push_back({seed, reaction::Protocol::kXN, 1, 0.0, {}});
    jobs.push_back({seed, reaction::Protocol::kXNF, 5, 0.0, {}});
  }

  // Jobs are independent; two workers cover the available cores while each
  // job stays deterministic in its own seed.
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t index = next.fetch_add(1);
      if (index >= jobs.size()) {
        return;
      }
      Job &job = jobs[index];
      const bool want_confidence = job.protocol == reaction::Protocol::kXNF;
      job.top1 = run_protocol_seed(train_recs, test_recs, job.protocol, job.n,
                                   job.seed,
                                   want_confidence ? &job.confidence : nullptr);
    }
  };
  std::thread a(worker);
  std::thread b(worker);
  a.join();
  b.join();

  std::string per_seed = "per-seed x1 vs x5F:";
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    double x1 = 0.0;
    double x5f = 0.0;
    for (Job &job : jobs) {
      if (job.seed != seed) {
        continue;
      }
      if (job.protocol == reaction::Protocol::kXN) {
        x1 = job.top1;
      } else {
        x5f = job.top1;
        for (auto &obs : job.confidence) {
          g_experiment.confidence_observations.push_back(obs);
        }
      }
    }
    g_experiment.x1_top1.push_back(x1);
    g_experiment.x5f_top1.push_back(x5f);
    char buf[48];
    std::snprintf(buf, sizeof(buf), " [%.2f/%.2f]", x1, x5f);
    per_seed += buf;
  }
  g_experiment.ran = true;

  const double x1_median = median(g_experiment.x1_top1);
  const double x5f_median = median(g_experiment.x5f_top1);
  check.require(x5f_median >= x1_median,
                "median Top-1: x5F " + std::to_string(x5f_median) +
                    " < x1 " + std::to_string(x1_median));
  char buf[64];
  std::snprintf(buf, sizeof(buf), "; medians x1 %.3f, x5F %.3f", x1_median,
                x5f_median);
  check.note(per_seed + buf);
  return check;
}

Check criterion_confidence_correlation() {
  Check check;
  check.require(g_experiment.ran, "toy experiment did not run");
  if (!check.ok) {
    return check;
  }
  const auto bins = score::confidence_bins(g_experiment.confidence_observations,
                                           {0.2, 0.5});
  const score::ConfidenceBin *lowest = nullptr;
  const score::ConfidenceBin *highest = nullptr;
  for (const auto &bin : bins) {
    if (bin.count == 0) {
      continue;
    }
    if (lowest == nullptr) {
      lowest = &bin;
    }
    highest = &bin;
  }
  check.require(lowest != nullptr && highest != nullptr && lowest != highest,
                "confidence observations fell into a single bin");
  if (check.ok) {
    check.require(highest->accuracy > lowest->accuracy,
                  "highest-bin accuracy " + std::to_string(highest->accuracy) +
                      " does not exceed lowest-bin accuracy " +
                      std::to_string(lowest->accuracy));
    char buf[128];
    std::snprintf(buf, sizeof(buf),
                  "bin <=%.1f: acc %.3f (n=%zu); bin >%.1f: acc %.3f (n=%zu)",
                  lowest->upper, lowest->accuracy, lowest->count,
                  highest->lower, highest->accuracy, highest->count);
    check.note(buf);
  }
  return check;
}

// ---- criterion 10: metric algebra on fuzzed ranked lists ----

Check criterion_metric_algebra() {
  Check check;
  const std::vector<std::string> raw_pool = {
      "CCCCC.C", "CCCCC.O", "CCCCC",  "CCCC.N", "CCOCC",  "CCNCC.C",
      "CCC",     "CC.CCC",  "CCCN",   "CCO",    "OCCCO",  "CC(C)C.N"};
  std::vector<std::string> pool;
  for (const auto &raw : raw_pool) {
    pool.push_back(norm(raw));
  }
  Rng rng(20260810);
  int checked = 0;
  for (int round = 0; round < 10000; ++round) {
    // Random ranked list.
    std::vector<score::RankedCandidate> ranked;
    const int k = 1 + static_cast<int>(uniform_index(rng, 6));
    for (int i = 0; i < k; ++i) {
      ranked.push_back(
          {pool[uniform_index(rng, pool.size())], double(k - i), 1});
    }
    const std::string target = pool[uniform_index(rng, pool.size())];
    const std::string target_maxfrag = score::maxfrag_reduce(target);
    bool previous = false;
    for (int n = 1; n <= 7; ++n) {
      const bool full = score::top_n_correct(ranked, target, n);
      const bool frag = score::maxfrag_correct(ranked, target_maxfrag, n);
      check.require(!previous || full, "Top-n not monotone in n");
      check.require(!full || frag, "MaxFrag Top-n below full Top-n");
      previous = full;
    }

    // Duplicate-free beams: dedup_first must equal keep_all.
    std::vector<score::PredictionEntry> entries;
    const int variants = 1 + static_cast<int>(uniform_index(rng, 3));
    for (int v = 0; v < variants; ++v) {
      auto copy = raw_pool;
      shuffle_inplace(rng, copy);
      const int beam = 1 + static_cast<int>(uniform_index(rng, 4));
      for (int i = 0; i < beam; ++i) {
        entries.push_back(entry("r", v, i, copy[static_cast<std::size_t>(i)]));
      }
    }
    const auto dedup =
        score::rank_predictions(entries, score::AggregationMode::kDedupFirst);
    const auto keep =
        score::rank_predictions(entries, score::AggregationMode::kKeepAll);
    check.require(dedup.size() == keep.size(),
                  "dedup_first and keep_all sizes differ on duplicate-free input");
    for (std::size_t i = 0; i < dedup.size() && i < keep.size(); ++i) {
      check.require(dedup[i].canonical_text == keep[i].canonical_text &&
                        dedup[i].rank_value == keep[i].rank_value,
                    "dedup_first and keep_all differ on duplicate-free input");
    }
    ++checked;
  }
  check.note(std::to_string(checked) + " fuzzed lists checked");
  return check;
}

}  // namespace

int main(int argc, char **argv) {
  struct Criterion {
    const char *name;
    double budget_seconds;
    std::function<Check()> run;
  };
  const std::vector<Criterion> criteria = {
      {"eq1_ranking_fixture", 1.0, criterion_eq1},
      {"confidence_fixture", 1.0, criterion_confidence_fixture},
      {"relative_error_reduction", 1.0, criterion_relative_error},
      {"metric_algebra_fuzz", 60.0, criterion_metric_algebra},
      {"canonicalization_invariance", 30.0, criterion_canonical_invariance},
      {"table_s2_protocol_fixtures", 60.0, criterion_table_s2_protocols},
      {"transformer_numerics", 300.0, criterion_transformer_numerics},
      {"memorization_property", 600.0, criterion_memorization},
      {"augmentation_benefit", 3600.0, criterion_augmentation_benefit},
      {"confidence_correlation", 60.0, criterion_confidence_correlation},
  };

  std::vector<std::string> filters(argv + 1, argv + argc);
  bool all_ok = true;
  for (const Criterion &criterion : criteria) {
    if (!filters.empty()) {
      bool matched = false;
      for (const std::string &filter : filters) {
        matched = matched ||
                  std::string(criterion.name).find(filter) != std::string::npos;
      }
      if (!matched) {
        continue;
      }
    }
    const auto started = Clock::now();
    Check check;
    try {
      check = criterion.run();
    } catch (const std::exception &e) {
      check.ok = false;
      check.detail = std::string("exception: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(Clock::now() - started).count();
    if (elapsed > criterion.budget_seconds && check.ok) {
      check.ok = false;
      check.detail = "exceeded runtime budget of " +
                     std::to_string(criterion.budget_seconds) + "s";
    }
    std::printf("[%s] %-28s (%7.2fs)  %s\n", check.ok ? "PASS" : "FAIL",
                criterion.name, elapsed, check.detail.c_str());
    std::fflush(stdout);
    all_ok = all_ok && check.ok;
  }
  std::printf("%s\n", all_ok ? "ACCEPTANCE: all criteria passed"
                             : "ACCEPTANCE: FAILURES PRESENT");
  return all_ok ? 0 : 1;
}

//
// Project RxnAug - Copyright 2026 RxnAug Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#include "rxnaug/model/decode.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "rxnaug/util/io.hpp"

namespace rxnaug::model {

namespace {

constexpr double kLayerNormEps = 1e-5;
constexpr double kMaskedScore = -1e30;

using RowVec = Eigen::RowVectorXd;

RowVec linear_row(const LinearP &p, const RowVec &x) {
  return x * p.w + p.b.row(0);
}

RowVec layernorm_row(const LayerNormP &p, const RowVec &x) {
  const double mean = x.mean();
  const double var = (x.array() - mean).square().mean();
  const double inv = 1.0 / std::sqrt(var + kLayerNormEps);
  return (((x.array() - mean) * inv) * p.gamma.row(0).array()).matrix() +
         p.beta.row(0);
}

RowVec positional_row(int position, int width) {
  RowVec row(width);
  for (int k = 0; k < width; ++k) {
    const double exponent = 2.0 * (k / 2) / static_cast<double>(width);
    const double angle = position / std::pow(10000.0, exponent);
    row(k) = (k % 2 == 0) ? std::sin(angle) : std::cos(angle);
  }
  return row;
}

Eigen::VectorXd log_softmax_vec(Eigen::VectorXd logits) {
  const double max = logits.maxCoeff();
  const double lse = std::log((logits.array() - max).exp().sum()) + max;
  logits.array() -= lse;
  return logits;
}

}  // namespace

// ---- generic search ----

namespace {

int pick_argmax(const Eigen::VectorXd &logprobs, const std::set<int> &forbidden) {
  int best = -1;
  for (int t = 0; t < logprobs.size(); ++t) {
    if (forbidden.count(t) > 0) {
      continue;
    }
    if (best < 0 || logprobs(t) > logprobs(best)) {
      best = t;
    }
  }
  return best;
}

}  // namespace

DecodedSequence greedy_decode(BeamScorer &scorer, const DecodeConfig &config) {
  DecodeConfig greedy = config;
  greedy.beam = 1;
  greedy.validate(scorer.vocab_size());
  const std::set<int> forbidden = [&] {
    const auto list = scorer.forbidden_tokens();
    return std::set<int>(list.begin(), list.end());
  }();

  DecodedSequence result;
  auto state = scorer.initial_state();
  for (int step = 0; step < config.max_output_length; ++step) {
    const Eigen::VectorXd logprobs = scorer.next_logprobs(*state);
    const int token = pick_argmax(logprobs, forbidden);
    result.score += logprobs(token);
    if (token == scorer.end_token()) {
      break;
    }
    result.tokens.push_back(token);
    if (step + 1 < config.max_output_length) {
      scorer.advance(*state, token);
    }
  }
  return result;
}

std::vector<DecodedSequence> beam_decode(BeamScorer &scorer,
                                         const DecodeConfig &config) {
  config.validate(scorer.vocab_size());
  const std::set<int> forbidden = [&] {
    const auto list = scorer.forbidden_tokens();
    return std::set<int>(list.begin(), list.end());
  }();

  struct Hypothesis {
    std::unique_ptr<BeamScorer::State> state;
    std::vector<int> tokens;
    double score = 0.0;
    bool finished = false;
  };
  std::vector<Hypothesis> beam;
  beam.push_back({scorer.initial_state(), {}, 0.0, false});

  for (int step = 0; step < config.max_output_length; ++step) {
    bool any_open = false;
    for (const Hypothesis &hyp : beam) {
      any_open = any_open || !hyp.finished;
    }
    if (!any_open) {
      break;
    }

    struct Candidate {
      std::size_t parent;
      int token;  // -1 carries a finished hypothesis forward
      double score;
    };
    std::vector<Candidate> candidates;
    for (std::size_t h = 0; h < beam.size(); ++h) {
      Hypothesis &hyp = beam[h];
      if (hyp.finished) {
        candidates.push_back({h, -1, hyp.score});
        continue;
      }
      const Eigen::VectorXd logprobs = scorer.next_logprobs(*hyp.state);
      for (int t = 0; t < logprobs.size(); ++t) {
        if (forbidden.count(t) > 0) {
          continue;
        }
        candidates.push_back({h, t, hyp.score + logprobs(t)});
      }
    }
    const std::size_t keep =
        std::min<std::size_t>(config.beam, candidates.size());
    std::partial_sort(candidates.begin(), candidates.begin() + keep,
                      candidates.end(),
                      [](const Candidate &x, const Candidate &y) {
                        if (x.score != y.score) {
                          return x.score > y.score;
                        }
                        if (x.parent != y.parent) {
                          return x.parent < y.parent;
                        }
                        return x.token < y.token;
                      });
    candidates.resize(keep);

    std::vector<Hypothesis> next;
    next.reserve(keep);
    for (const Candidate &candidate : candidates) {
      Hypothesis &parent = beam[candidate.parent];
      if (candidate.token < 0) {
        next.push_back({nullptr, parent.tokens, parent.score, true});
        continue;
      }
      Hypothesis child;
      child.score = candidate.score;
      child.tokens = parent.tokens;
      if (candidate.token == scorer.end_token()) {
        child.finished = true;
      } else {
        child.tokens.push_back(candidate.token);
        child.state = parent.state->clone();
        scorer.advance(*child.state, candidate.token);
      }
      next.push_back(std::move(child));
    }
    beam = std::move(next);
  }

  std::stable_sort(beam.begin(), beam.end(),
                   [](const Hypothesis &x, const Hypothesis &y) {
                     return x.score > y.score;
                   });
  std::vector<DecodedSequence> results;
  std::set<std::vector<int>> seen;
  for (Hypothesis &hyp : beam) {
    if (!seen.insert(hyp.tokens).second) {
      continue;
    }
    results.push_back({std::move(hyp.tokens), hyp.score});
    if (results.size() == static_cast<std::size_t>(config.beam)) {
      break;
    }
  }
  return results;
}

// ---- transformer scorer ----

struct TransformerScorer::Impl {
  const TransformerParams &params;
  ModelConfig config;
  double temperature;
  Mat memory;
  std::vector<bool> attend;
  // Cross-attention projections per decoder layer, fixed per source.
  std::vector<Mat> cross_k;
  std::vector<Mat> cross_v;

  struct TfState : State {
    // Cached self-attention keys/values per layer, one row per position.
    std::vector<Mat> self_k;
    std::vector<Mat> self_v;
    int length = 0;
    Eigen::VectorXd logprobs;

    std::unique_ptr<State> clone() const override {
      return std::make_unique<TfState>(*this);
    }
  };

  // Feeds one decoder token and refreshes state.logprobs.
  void step(TfState &state, int token) {
    const int width = config.model_width;
    const int heads = config.heads;
    const int head_dim = width / heads;
    const double scale = 1.0 / std::sqrt(static_cast<double>(head_dim));
    if (token < 0 || token >= params.vocab_size()) {
      throw DataError("decode token out of range");
    }
    if (state.length + 1 >= config.max_seq_len) {
      throw DataError("decode exceeded max_seq_len");
    }

    RowVec y = params.embedding.row(token) *
                   std::sqrt(static_cast<double>(width)) +
               positional_row(state.length, width);
    for (std::size_t l = 0; l < params.decoder.size(); ++l) {
      const DecoderLayerP &layer = params.decoder[l];
      // Self-attention over the cached prefix plus this position.
      RowVec normed = layernorm_row(layer.ln1, y);
      RowVec q = linear_row(layer.self.q, normed);
      RowVec k = linear_row(layer.self.k, normed);
      RowVec v = linear_row(layer.self.v, normed);
      Mat &cache_k = state.self_k[l];
      Mat &cache_v = state.self_v[l];
      cache_k.conservativeResize(state.length + 1, width);
      cache_v.conservativeResize(state.length + 1, width);
      cache_k.row(state.length) = k;
      cache_v.row(state.length) = v;

      RowVec ctx(width);
      for (int h = 0; h < heads; ++h) {
        Eigen::VectorXd scores =
            cache_k.middleCols(h * head_dim, head_dim) *
            q.segment(h * head_dim, head_dim).transpose() * scale;
        const double max = scores.maxCoeff();
        Eigen::VectorXd probs = (scores.array() - max).exp();
        probs /= probs.sum();
        ctx.segment(h * head_dim, head_dim) =
            probs.transpose() * cache_v.middleCols(h * head_dim, head_dim);
      }
      y += linear_row(layer.self.o, ctx);

      // Cross-attention over the precomputed encoder projections.
      RowVec normed2 = layernorm_row(layer.ln2, y);
      RowVec q2 = linear_row(layer.cross.q, normed2);
      RowVec ctx2(width);
      for (int h = 0; h < heads; ++h) {
        Eigen::VectorXd scores =
            cross_k[l].middleCols(h * head_dim, head_dim) *
            q2.segment(h * head_dim, head_dim).transpose() * scale;
        for (int j = 0; j < scores.size(); ++j) {
          if (!attend[static_cast<std::size_t>(j)]) {
            scores(j) = kMaskedScore;
          }
        }
        const double max = scores.maxCoeff();
        Eigen::VectorXd probs = (scores.array() - max).exp();
        probs /= probs.sum();
        ctx2.segment(h * head_dim, head_dim) =
            probs.transpose() * cross_v[l].middleCols(h * head_dim, head_dim);
      }
      y += linear_row(layer.cross.o, ctx2);

      RowVec normed3 = layernorm_row(layer.ln3, y);
      RowVec hidden = linear_row(layer.ff1, normed3).cwiseMax(0.0);
      y += linear_row(layer.ff2, hidden);
    }
    RowVec final = layernorm_row(params.decoder_norm, y);
    Eigen::VectorXd logits = (final * params.output.w).transpose();
    logits += params.output.b.row(0).transpose();
    state.logprobs = log_softmax_vec(logits / temperature);
    state.length += 1;
  }
};

TransformerScorer::TransformerScorer(const TransformerParams &params,
                                     const ModelConfig &config,
                                     const Vocabulary &vocab,
                                     std::span<const int> source,
                                     double temperature)
    : impl_(std::make_unique<Impl>(Impl{params, config, temperature, {}, {},
                                        {}, {}})) {
  config.validate();
  if (params.vocab_size() != vocab.size()) {
    throw DataError("vocabulary does not match the model embedding");
  }
  if (temperature <= 0.0) {
    throw DataError("temperature must be positive");
  }
  // Full-sequence forward over an empty prefix encodes the source; the
  // per-layer cross projections are then fixed for the whole search.
  impl_->attend.assign(source.size(), true);
  for (std::size_t i = 0; i < source.size(); ++i) {
    impl_->attend[i] = source[i] != Vocabulary::kPad;
  }
  impl_->memory = encode_source(params, config, source, &impl_->attend);
  impl_->cross_k.reserve(params.decoder.size());
  impl_->cross_v.reserve(params.decoder.size());
  for (const DecoderLayerP &layer : params.decoder) {
    Mat k = impl_->memory * layer.cross.k.w;
    k.rowwise() += layer.cross.k.b.row(0);
    Mat v = impl_->memory * layer.cross.v.w;
    v.rowwise() += layer.cross.v.b.row(0);
    impl_->cross_k.push_back(std::move(k));
    impl_->cross_v.push_back(std::move(v));
  }
}

TransformerScorer::~TransformerScorer() = default;

int TransformerScorer::vocab_size() const { return impl_->params.vocab_size(); }

std::unique_ptr<BeamScorer::State> TransformerScorer::initial_state() {
  auto state = std::make_unique<Impl::TfState>();
  state->self_k.assign(impl_->params.decoder.size(), Mat());
  state->self_v.assign(impl_->params.decoder.size(), Mat());
  impl_->step(*state, Vocabulary::kBegin);
  return state;
}

Eigen::VectorXd TransformerScorer::next_logprobs(State &state) {
  return static_cast<Impl::TfState &>(state).logprobs;
}

void TransformerScorer::advance(State &state, int token) {
  impl_->step(static_cast<Impl::TfState &>(state), token);
}

}  // namespace rxnaug::model

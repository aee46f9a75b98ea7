//
// Project RxnAug - Copyright 2026 RxnAug Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#include "rxnaug/model/transformer.hpp"

#include <cmath>

#include "rxnaug/model/vocab.hpp"

namespace rxnaug::model {

namespace {

constexpr double kLayerNormEps = 1e-5;
constexpr double kMaskedScore = -1e30;

Mat pos_encoding(int length, int width) {
  Mat table(length, width);
  for (int i = 0; i < length; ++i) {
    for (int k = 0; k < width; ++k) {
      const double exponent = 2.0 * (k / 2) / static_cast<double>(width);
      const double angle = i / std::pow(10000.0, exponent);
      table(i, k) = (k % 2 == 0) ? std::sin(angle) : std::cos(angle);
    }
  }
  return table;
}

// ---- leaf ops ----

struct LinearCache {
  Mat in;
};

Mat linear_fwd(const LinearP &p, const Mat &x, LinearCache *cache) {
  if (cache != nullptr) {
    cache->in = x;
  }
  Mat y = x * p.w;
  y.rowwise() += p.b.row(0);
  return y;
}

void linear_bwd(const LinearP &p, LinearP &g, const LinearCache &cache,
                const Mat &dy, Mat *dx_accum) {
  g.w.noalias() += cache.in.transpose() * dy;
  g.b.row(0) += dy.colwise().sum();
  if (dx_accum != nullptr) {
    dx_accum->noalias() += dy * p.w.transpose();
  }
}

struct LNCache {
  Mat xhat;
  Eigen::VectorXd inv_std;
};

Mat layernorm_fwd(const LayerNormP &p, const Mat &x, LNCache *cache) {
  const int rows = static_cast<int>(x.rows());
  const int cols = static_cast<int>(x.cols());
  Mat xhat(rows, cols);
  Eigen::VectorXd inv_std(rows);
  for (int r = 0; r < rows; ++r) {
    const double mean = x.row(r).mean();
    const double var = (x.row(r).array() - mean).square().mean();
    const double inv = 1.0 / std::sqrt(var + kLayerNormEps);
    xhat.row(r) = (x.row(r).array() - mean) * inv;
    inv_std(r) = inv;
  }
  Mat y = xhat.array().rowwise() * p.gamma.row(0).array();
  y.rowwise() += p.beta.row(0);
  if (cache != nullptr) {
    cache->xhat = std::move(xhat);
    cache->inv_std = std::move(inv_std);
  }
  return y;
}

void layernorm_bwd(const LayerNormP &p, LayerNormP &g, const LNCache &cache,
                   const Mat &dy, Mat &dx_accum) {
  const int rows = static_cast<int>(dy.rows());
  const int cols = static_cast<int>(dy.cols());
  g.gamma.row(0) += (dy.array() * cache.xhat.array()).colwise().sum().matrix();
  g.beta.row(0) += dy.colwise().sum();
  for (int r = 0; r < rows; ++r) {
    const auto dxhat = (dy.row(r).array() * p.gamma.row(0).array()).eval();
    const double mean_dxhat = dxhat.mean();
    const double mean_dxhat_xhat = (dxhat * cache.xhat.row(r).array()).mean();
    dx_accum.row(r).array() +=
        cache.inv_std(r) *
        (dxhat - mean_dxhat - cache.xhat.row(r).array() * mean_dxhat_xhat);
  }
  (void)cols;
  (void)rows;
}

struct AttnCache {
  LinearCache q_in, k_in, v_in, o_in;
  Mat q, k, v;
  std::vector<Mat> probs;  // per head, rows sum to 1
};

Mat attention_fwd(const AttentionP &p, int heads, const Mat &q_source,
                  const Mat &kv_source, const std::vector<bool> *key_attend,
                  bool causal, AttnCache *cache, AttentionProbe *probe) {
  const int width = static_cast<int>(p.q.w.cols());
  const int head_dim = width / heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(head_dim));

  Mat q = linear_fwd(p.q, q_source, cache ? &cache->q_in : nullptr);
  Mat k = linear_fwd(p.k, kv_source, cache ? &cache->k_in : nullptr);
  Mat v = linear_fwd(p.v, kv_source, cache ? &cache->v_in : nullptr);

  const int tq = static_cast<int>(q.rows());
  const int tk = static_cast<int>(k.rows());
  Mat ctx(tq, width);
  if (cache != nullptr) {
    cache->probs.clear();
  }
  for (int h = 0; h < heads; ++h) {
    Mat scores = q.middleCols(h * head_dim, head_dim) *
                 k.middleCols(h * head_dim, head_dim).transpose() * scale;
    if (key_attend != nullptr) {
      for (int j = 0; j < tk; ++j) {
        if (!(*key_attend)[static_cast<std::size_t>(j)]) {
          scores.col(j).setConstant(kMaskedScore);
        }
      }
    }
    if (causal) {
      for (int i = 0; i < tq; ++i) {
        for (int j = i + 1; j < tk; ++j) {
          scores(i, j) = kMaskedScore;
        }
      }
    }
    // Row softmax, max-shifted.
    for (int i = 0; i < tq; ++i) {
      const double row_max = scores.row(i).maxCoeff();
      scores.row(i) = (scores.row(i).array() - row_max).exp();
      scores.row(i) /= scores.row(i).sum();
    }
    ctx.middleCols(h * head_dim, head_dim).noalias() =
        scores * v.middleCols(h * head_dim, head_dim);
    if (probe != nullptr) {
      probe->weights.push_back(scores);
    }
    if (cache != nullptr) {
      cache->probs.push_back(std::move(scores));
    }
  }
  Mat out = linear_fwd(p.o, ctx, cache ? &cache->o_in : nullptr);
  if (cache != nullptr) {
    cache->q = std::move(q);
    cache->k = std::move(k);
    cache->v = std::move(v);
  }
  return out;
}

void attention_bwd(const AttentionP &p, AttentionP &g, int heads,
                   const AttnCache &cache, const Mat &dout, Mat &dq_source,
                   Mat &dkv_source) {
  const int width = static_cast<int>(p.q.w.cols());
  const int head_dim = width / heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(head_dim));

  Mat dctx = Mat::Zero(cache.q.rows(), width);
  linear_bwd(p.o, g.o, cache.o_in, dout, &dctx);

  Mat dq = Mat::Zero(cache.q.rows(), width);
  Mat dk = Mat::Zero(cache.k.rows(), width);
  Mat dv = Mat::Zero(cache.v.rows(), width);
  for (int h = 0; h < heads; ++h) {
    const Mat &probs = cache.probs[static_cast<std::size_t>(h)];
    const auto dctx_h = dctx.middleCols(h * head_dim, head_dim);
    Mat dprobs = dctx_h * cache.v.middleCols(h * head_dim, head_dim).transpose();
    dv.middleCols(h * head_dim, head_dim).noalias() =
        probs.transpose() * dctx_h;
    // Softmax backward, rowwise.
    Mat dscores(probs.rows(), probs.cols());
    for (int i = 0; i < probs.rows(); ++i) {
      const double dot = (dprobs.row(i).array() * probs.row(i).array()).sum();
      dscores.row(i) =
          (probs.row(i).array() * (dprobs.row(i).array() - dot)).matrix();
    }
    dscores *= scale;
    dq.middleCols(h * head_dim, head_dim).noalias() =
        dscores * cache.k.middleCols(h * head_dim, head_dim);
    dk.middleCols(h * head_dim, head_dim).noalias() =
        dscores.transpose() * cache.q.middleCols(h * head_dim, head_dim);
  }
  linear_bwd(p.q, g.q, cache.q_in, dq, &dq_source);
  linear_bwd(p.k, g.k, cache.k_in, dk, &dkv_source);
  linear_bwd(p.v, g.v, cache.v_in, dv, &dkv_source);
}

struct FFCache {
  LinearCache in1;
  Mat pre;  // pre-activation
  LinearCache in2;
};

Mat ff_fwd(const LinearP &ff1, const LinearP &ff2, const Mat &x, FFCache *cache) {
  Mat pre = linear_fwd(ff1, x, cache ? &cache->in1 : nullptr);
  Mat act = pre.cwiseMax(0.0);
  if (cache != nullptr) {
    cache->pre = std::move(pre);
  }
  return linear_fwd(ff2, act, cache ? &cache->in2 : nullptr);
}

void ff_bwd(const LinearP &ff1, const LinearP &ff2, LinearP &g1, LinearP &g2,
            const FFCache &cache, const Mat &dy, Mat &dx_accum) {
  Mat dact = Mat::Zero(cache.pre.rows(), cache.pre.cols());
  linear_bwd(ff2, g2, cache.in2, dy, &dact);
  const Mat dpre =
      (cache.pre.array() > 0.0).cast<double>().matrix().cwiseProduct(dact);
  linear_bwd(ff1, g1, cache.in1, dpre, &dx_accum);
}

// Inverted dropout mask; empty when disabled.
Mat dropout_mask(int rows, int cols, double rate, Rng *rng) {
  if (rng == nullptr || rate <= 0.0) {
    return Mat();
  }
  Mat mask(rows, cols);
  const double keep_scale = 1.0 / (1.0 - rate);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      mask(r, c) = uniform_real(*rng) < rate ? 0.0 : keep_scale;
    }
  }
  return mask;
}

void apply_mask(Mat &x, const Mat &mask) {
  if (mask.size() != 0) {
    x = x.cwiseProduct(mask);
  }
}

// ---- sequence plumbing ----

void validate_tokens(std::span<const int> tokens, int vocab, int max_len,
                     const char *what) {
  if (static_cast<int>(tokens.size()) > max_len) {
    throw DataError(std::string(what) + " sequence exceeds max_seq_len");
  }
  for (int token : tokens) {
    if (token < 0 || token >= vocab) {
      throw DataError(std::string(what) + " token index " +
                      std::to_string(token) + " out of range");
    }
  }
}

Mat embed(const Mat &table, std::span<const int> tokens, int offset_rows) {
  const int width = static_cast<int>(table.cols());
  const double scale = std::sqrt(static_cast<double>(width));
  Mat x(tokens.size(), width);
  const Mat pos = pos_encoding(static_cast<int>(tokens.size()) + offset_rows, width);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    x.row(static_cast<int>(i)) =
        table.row(tokens[i]) * scale +
        pos.row(static_cast<int>(i) + offset_rows);
  }
  return x;
}

void embed_bwd(Mat &dtable, std::span<const int> tokens, const Mat &dx) {
  const double scale = std::sqrt(static_cast<double>(dtable.cols()));
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    dtable.row(tokens[i]) += dx.row(static_cast<int>(i)) * scale;
  }
}

struct EncLayerCache {
  LNCache ln1;
  AttnCache attn;
  Mat drop_attn;
  LNCache ln2;
  FFCache ff;
  Mat drop_ff;
};

struct DecLayerCache {
  LNCache ln1;
  AttnCache self;
  Mat drop_self;
  LNCache ln2;
  AttnCache cross;
  Mat drop_cross;
  LNCache ln3;
  FFCache ff;
  Mat drop_ff;
};

struct EncodeCache {
  Mat x0;  // post-dropout embedding input
  Mat drop_embed;
  std::vector<EncLayerCache> layers;
  LNCache final_ln;
};

Mat encode_pass(const TransformerParams &params, const ModelConfig &config,
                std::span<const int> source, const std::vector<bool> *attend,
                EncodeCache *cache, Rng *rng, AttentionProbe *probe) {
  Mat x = embed(params.embedding, source, 0);
  Mat drop = dropout_mask(static_cast<int>(x.rows()), static_cast<int>(x.cols()),
                          config.dropout, rng);
  apply_mask(x, drop);
  if (cache != nullptr) {
    cache->drop_embed = std::move(drop);
    cache->layers.resize(params.encoder.size());
  }
  for (std::size_t l = 0; l < params.encoder.size(); ++l) {
    const EncoderLayerP &layer = params.encoder[l];
    EncLayerCache *lc = cache ? &cache->layers[l] : nullptr;
    Mat normed = layernorm_fwd(layer.ln1, x, lc ? &lc->ln1 : nullptr);
    Mat attn = attention_fwd(layer.attn, config.heads, normed, normed, attend,
                             /*causal=*/false, lc ? &lc->attn : nullptr, probe);
    Mat drop_attn = dropout_mask(static_cast<int>(attn.rows()),
                                 static_cast<int>(attn.cols()), config.dropout,
                                 rng);
    apply_mask(attn, drop_attn);
    x += attn;

    Mat normed2 = layernorm_fwd(layer.ln2, x, lc ? &lc->ln2 : nullptr);
    Mat ff = ff_fwd(layer.ff1, layer.ff2, normed2, lc ? &lc->ff : nullptr);
    Mat drop_ff = dropout_mask(static_cast<int>(ff.rows()),
                               static_cast<int>(ff.cols()), config.dropout, rng);
    apply_mask(ff, drop_ff);
    x += ff;
    if (lc != nullptr) {
      lc->drop_attn = std::move(drop_attn);
      lc->drop_ff = std::move(drop_ff);
    }
  }
  return layernorm_fwd(params.encoder_norm, x,
                       cache ? &cache->final_ln : nullptr);
}

struct DecodeCache {
  Mat drop_embed;
  std::vector<DecLayerCache> layers;
  LNCache final_ln;
  LinearCache out_in;
};

Mat decode_pass(const TransformerParams &params, const ModelConfig &config,
                const Mat &memory, const std::vector<bool> *memory_attend,
                std::span<const int> target_in, DecodeCache *cache, Rng *rng,
                AttentionProbe *probe) {
  Mat y = embed(params.embedding, target_in, 0);
  Mat drop = dropout_mask(static_cast<int>(y.rows()), static_cast<int>(y.cols()),
                          config.dropout, rng);
  apply_mask(y, drop);
  if (cache != nullptr) {
    cache->drop_embed = std::move(drop);
    cache->layers.resize(params.decoder.size());
  }
  for (std::size_t l = 0; l < params.decoder.size(); ++l) {
    const DecoderLayerP &layer = params.decoder[l];
    DecLayerCache *lc = cache ? &cache->layers[l] : nullptr;
    Mat normed = layernorm_fwd(layer.ln1, y, lc ? &lc->ln1 : nullptr);
    Mat self = attention_fwd(layer.self, config.heads, normed, normed, nullptr,
                             /*causal=*/true, lc ? &lc->self : nullptr, probe);
    Mat drop_self = dropout_mask(static_cast<int>(self.rows()),
                                 static_cast<int>(self.cols()), config.dropout,
                                 rng);
    apply_mask(self, drop_self);
    y += self;

    Mat normed2 = layernorm_fwd(layer.ln2, y, lc ? &lc->ln2 : nullptr);
    Mat cross = attention_fwd(layer.cross, config.heads, normed2, memory,
                              memory_attend, /*causal=*/false,
                              lc ? &lc->cross : nullptr, probe);
    Mat drop_cross = dropout_mask(static_cast<int>(cross.rows()),
                                  static_cast<int>(cross.cols()),
                                  config.dropout, rng);
    apply_mask(cross, drop_cross);
    y += cross;

    Mat normed3 = layernorm_fwd(layer.ln3, y, lc ? &lc->ln3 : nullptr);
    Mat ff = ff_fwd(layer.ff1, layer.ff2, normed3, lc ? &lc->ff : nullptr);
    Mat drop_ff = dropout_mask(static_cast<int>(ff.rows()),
                               static_cast<int>(ff.cols()), config.dropout, rng);
    apply_mask(ff, drop_ff);
    y += ff;
    if (lc != nullptr) {
      lc->drop_self = std::move(drop_self);
      lc->drop_cross = std::move(drop_cross);
      lc->drop_ff = std::move(drop_ff);
    }
  }
  Mat final = layernorm_fwd(params.decoder_norm, y,
                            cache ? &cache->final_ln : nullptr);
  return linear_fwd(params.output, final, cache ? &cache->out_in : nullptr);
}

Mat log_softmax_rows(Mat logits) {
  for (int r = 0; r < logits.rows(); ++r) {
    const double row_max = logits.row(r).maxCoeff();
    const double lse =
        std::log((logits.row(r).array() - row_max).exp().sum()) + row_max;
    logits.row(r).array() -= lse;
  }
  return logits;
}

std::vector<bool> default_attend(std::span<const int> tokens) {
  std::vector<bool> attend(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    attend[i] = tokens[i] != Vocabulary::kPad;
  }
  return attend;
}

}  // namespace

// ---- parameter construction ----

namespace {

void shape_linear(LinearP &p, int in, int out) {
  p.w = Mat::Zero(in, out);
  p.b = Mat::Zero(1, out);
}

void shape_layernorm(LayerNormP &p, int d) {
  p.gamma = Mat::Zero(1, d);
  p.beta = Mat::Zero(1, d);
}

void shape_attention(AttentionP &p, int d) {
  shape_linear(p.q, d, d);
  shape_linear(p.k, d, d);
  shape_linear(p.v, d, d);
  shape_linear(p.o, d, d);
}

}  // namespace

TransformerParams TransformerParams::zeros_like(const ModelConfig &config,
                                                int vocab) {
  config.validate();
  TransformerParams params;
  params.embedding = Mat::Zero(vocab, config.model_width);
  params.encoder.resize(config.layers);
  params.decoder.resize(config.layers);
  for (EncoderLayerP &layer : params.encoder) {
    shape_layernorm(layer.ln1, config.model_width);
    shape_attention(layer.attn, config.model_width);
    shape_layernorm(layer.ln2, config.model_width);
    shape_linear(layer.ff1, config.model_width, config.ffn_width);
    shape_linear(layer.ff2, config.ffn_width, config.model_width);
  }
  for (DecoderLayerP &layer : params.decoder) {
    shape_layernorm(layer.ln1, config.model_width);
    shape_attention(layer.self, config.model_width);
    shape_layernorm(layer.ln2, config.model_width);
    shape_attention(layer.cross, config.model_width);
    shape_layernorm(layer.ln3, config.model_width);
    shape_linear(layer.ff1, config.model_width, config.ffn_width);
    shape_linear(layer.ff2, config.ffn_width, config.model_width);
  }
  shape_layernorm(params.encoder_norm, config.model_width);
  shape_layernorm(params.decoder_norm, config.model_width);
  shape_linear(params.output, config.model_width, vocab);
  return params;
}

TransformerParams TransformerParams::init(const ModelConfig &config, int vocab,
                                          Rng &rng) {
  TransformerParams params = zeros_like(config, vocab);
  visit_tensors(params, [&](const std::string &name, Mat &tensor) {
    if (name.ends_with(".gamma")) {
      tensor.setOnes();
      return;
    }
    if (name.ends_with(".beta") || name.ends_with(".b")) {
      tensor.setZero();
      return;
    }
    const double stddev =
        name == "embedding"
            ? 1.0 / std::sqrt(static_cast<double>(tensor.cols()))
            : std::sqrt(2.0 / static_cast<double>(tensor.rows() + tensor.cols()));
    for (int r = 0; r < tensor.rows(); ++r) {
      for (int c = 0; c < tensor.cols(); ++c) {
        tensor(r, c) = normal(rng) * stddev;
      }
    }
  });
  return params;
}

namespace {

template <typename Params, typename Fn>
void visit_impl(Params &params, const Fn &fn) {
  auto linear = [&](const std::string &name, auto &p) {
    fn(name + ".w", p.w);
    fn(name + ".b", p.b);
  };
  auto layernorm = [&](const std::string &name, auto &p) {
    fn(name + ".gamma", p.gamma);
    fn(name + ".beta", p.beta);
  };
  auto attention = [&](const std::string &name, auto &p) {
    linear(name + ".q", p.q);
    linear(name + ".k", p.k);
    linear(name + ".v", p.v);
    linear(name + ".o", p.o);
  };
  fn("embedding", params.embedding);
  for (std::size_t l = 0; l < params.encoder.size(); ++l) {
    const std::string base = "enc" + std::to_string(l);
    auto &layer = params.encoder[l];
    layernorm(base + ".ln1", layer.ln1);
    attention(base + ".attn", layer.attn);
    layernorm(base + ".ln2", layer.ln2);
    linear(base + ".ff1", layer.ff1);
    linear(base + ".ff2", layer.ff2);
  }
  for (std::size_t l = 0; l < params.decoder.size(); ++l) {
    const std::string base = "dec" + std::to_string(l);
    auto &layer = params.decoder[l];
    layernorm(base + ".ln1", layer.ln1);
    attention(base + ".self", layer.self);
    layernorm(base + ".ln2", layer.ln2);
    attention(base + ".cross", layer.cross);
    layernorm(base + ".ln3", layer.ln3);
    linear(base + ".ff1", layer.ff1);
    linear(base + ".ff2", layer.ff2);
  }
  layernorm("enc_norm", params.encoder_norm);
  layernorm("dec_norm", params.decoder_norm);
  linear("output", params.output);
}

}  // namespace

void visit_tensors(TransformerParams &params,
                   const std::function<void(const std::string &, Mat &)> &fn) {
  visit_impl(params, fn);
}

void visit_tensors(
    const TransformerParams &params,
    const std::function<void(const std::string &, const Mat &)> &fn) {
  visit_impl(params, fn);
}

// ---- public passes ----

Mat encode_source(const TransformerParams &params, const ModelConfig &config,
                  std::span<const int> source,
                  const std::vector<bool> *source_attend) {
  config.validate();
  validate_tokens(source, params.vocab_size(), config.max_seq_len, "source");
  std::vector<bool> attend =
      source_attend != nullptr ? *source_attend : default_attend(source);
  if (attend.size() != source.size()) {
    throw DataError("source mask length mismatch");
  }
  return encode_pass(params, config, source, &attend, nullptr, nullptr,
                     nullptr);
}

Mat forward_logprobs(const TransformerParams &params, const ModelConfig &config,
                     std::span<const int> source,
                     std::span<const int> target_prefix,
                     const std::vector<bool> *source_attend,
                     AttentionProbe *probe) {
  config.validate();
  validate_tokens(source, params.vocab_size(), config.max_seq_len, "source");
  validate_tokens(target_prefix, params.vocab_size(), config.max_seq_len - 1,
                  "target");

  std::vector<bool> attend =
      source_attend != nullptr ? *source_attend : default_attend(source);
  if (attend.size() != source.size()) {
    throw DataError("source mask length mismatch");
  }

  const Mat memory = encode_pass(params, config, source, &attend, nullptr,
                                 nullptr, probe);
  std::vector<int> target_in;
  target_in.reserve(target_prefix.size() + 1);
  target_in.push_back(Vocabulary::kBegin);
  target_in.insert(target_in.end(), target_prefix.begin(), target_prefix.end());
  const Mat logits = decode_pass(params, config, memory, &attend, target_in,
                                 nullptr, nullptr, probe);
  return log_softmax_rows(logits);
}

double sequence_loss_grad(const TransformerParams &params,
                          const ModelConfig &config, std::span<const int> source,
                          std::span<const int> target, TransformerParams &grads,
                          double loss_normalizer, Rng *dropout_rng) {
  validate_tokens(source, params.vocab_size(), config.max_seq_len, "source");
  validate_tokens(target, params.vocab_size(), config.max_seq_len - 1, "target");

  const std::vector<bool> attend = default_attend(source);

  EncodeCache enc_cache;
  const Mat memory = encode_pass(params, config, source, &attend, &enc_cache,
                                 dropout_rng, nullptr);

  std::vector<int> target_in;
  target_in.reserve(target.size() + 1);
  target_in.push_back(Vocabulary::kBegin);
  target_in.insert(target_in.end(), target.begin(), target.end());
  std::vector<int> gold(target.begin(), target.end());
  gold.push_back(Vocabulary::kEnd);

  DecodeCache dec_cache;
  const Mat logits = decode_pass(params, config, memory, &attend, target_in,
                                 &dec_cache, dropout_rng, nullptr);
  const Mat logprobs = log_softmax_rows(logits);

  double loss = 0.0;
  Mat dlogits = logprobs.array().exp();
  for (int t = 0; t < static_cast<int>(gold.size()); ++t) {
    loss -= logprobs(t, gold[static_cast<std::size_t>(t)]);
    dlogits(t, gold[static_cast<std::size_t>(t)]) -= 1.0;
  }
  dlogits /= loss_normalizer;

  // ---- backward ----
  const int width = config.model_width;
  Mat dfinal = Mat::Zero(dlogits.rows(), width);
  linear_bwd(params.output, grads.output, dec_cache.out_in, dlogits, &dfinal);

  Mat dy = Mat::Zero(dlogits.rows(), width);
  layernorm_bwd(params.decoder_norm, grads.decoder_norm, dec_cache.final_ln,
                dfinal, dy);

  Mat dmemory = Mat::Zero(memory.rows(), width);
  for (int l = static_cast<int>(params.decoder.size()) - 1; l >= 0; --l) {
    const DecoderLayerP &layer = params.decoder[static_cast<std::size_t>(l)];
    DecoderLayerP &glayer = grads.decoder[static_cast<std::size_t>(l)];
    DecLayerCache &lc = dec_cache.layers[static_cast<std::size_t>(l)];

    Mat dff_out = dy;
    apply_mask(dff_out, lc.drop_ff);
    Mat dnorm3 = Mat::Zero(dy.rows(), width);
    ff_bwd(layer.ff1, layer.ff2, glayer.ff1, glayer.ff2, lc.ff, dff_out, dnorm3);
    layernorm_bwd(layer.ln3, glayer.ln3, lc.ln3, dnorm3, dy);

    Mat dcross_out = dy;
    apply_mask(dcross_out, lc.drop_cross);
    Mat dnorm2 = Mat::Zero(dy.rows(), width);
    attention_bwd(layer.cross, glayer.cross, config.heads, lc.cross, dcross_out,
                  dnorm2, dmemory);
    layernorm_bwd(layer.ln2, glayer.ln2, lc.ln2, dnorm2, dy);

    Mat dself_out = dy;
    apply_mask(dself_out, lc.drop_self);
    Mat dnorm1 = Mat::Zero(dy.rows(), width);
    Mat dnorm1_kv = Mat::Zero(dy.rows(), width);
    attention_bwd(layer.self, glayer.self, config.heads, lc.self, dself_out,
                  dnorm1, dnorm1_kv);
    dnorm1 += dnorm1_kv;
    layernorm_bwd(layer.ln1, glayer.ln1, lc.ln1, dnorm1, dy);
  }
  apply_mask(dy, dec_cache.drop_embed);
  embed_bwd(grads.embedding, target_in, dy);

  Mat dx = Mat::Zero(memory.rows(), width);
  layernorm_bwd(params.encoder_norm, grads.encoder_norm, enc_cache.final_ln,
                dmemory, dx);
  for (int l = static_cast<int>(params.encoder.size()) - 1; l >= 0; --l) {
    const EncoderLayerP &layer = params.encoder[static_cast<std::size_t>(l)];
    EncoderLayerP &glayer = grads.encoder[static_cast<std::size_t>(l)];
    EncLayerCache &lc = enc_cache.layers[static_cast<std::size_t>(l)];

    Mat dff_out = dx;
    apply_mask(dff_out, lc.drop_ff);
    Mat dnorm2 = Mat::Zero(dx.rows(), width);
    ff_bwd(layer.ff1, layer.ff2, glayer.ff1, glayer.ff2, lc.ff, dff_out, dnorm2);
    layernorm_bwd(layer.ln2, glayer.ln2, lc.ln2, dnorm2, dx);

    Mat dattn_out = dx;
    apply_mask(dattn_out, lc.drop_attn);
    Mat dnorm1 = Mat::Zero(dx.rows(), width);
    Mat dnorm1_kv = Mat::Zero(dx.rows(), width);
    attention_bwd(layer.attn, glayer.attn, config.heads, lc.attn, dattn_out,
                  dnorm1, dnorm1_kv);
    dnorm1 += dnorm1_kv;
    layernorm_bwd(layer.ln1, glayer.ln1, lc.ln1, dnorm1, dx);
  }
  apply_mask(dx, enc_cache.drop_embed);
  embed_bwd(grads.embedding, source, dx);

  return loss;
}

}  // namespace rxnaug::model

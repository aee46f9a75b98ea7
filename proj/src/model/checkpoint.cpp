//
// Project RxnAug - Copyright 2026 RxnAug Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#include "rxnaug/model/checkpoint.hpp"

#include <cstring>
#include <fstream>

#include <json.hpp>

#include "rxnaug/util/io.hpp"

namespace rxnaug::model {

namespace {

constexpr char kMagic[4] = {'R', 'X', 'C', 'K'};
constexpr std::uint32_t kFormatVersion = 1;

}  // namespace

Checkpoint Checkpoint::snapshot(const TransformerParams &params,
                                const ModelConfig &config,
                                const Vocabulary &vocab, int epoch,
                                double train_exact_match) {
  Checkpoint ckpt;
  ckpt.epoch = epoch;
  ckpt.train_exact_match = train_exact_match;
  ckpt.config = config;
  ckpt.vocab_chars = vocab.chars();
  visit_tensors(params, [&](const std::string &name, const Mat &tensor) {
    ckpt.tensors.emplace(name, tensor);
  });
  return ckpt;
}

TransformerParams Checkpoint::restore() const {
  TransformerParams params = TransformerParams::zeros_like(
      config, static_cast<int>(vocab_chars.size()) + 3);
  visit_tensors(params, [&](const std::string &name, Mat &tensor) {
    const auto it = tensors.find(name);
    if (it == tensors.end()) {
      throw DataError("checkpoint missing tensor: " + name);
    }
    if (it->second.rows() != tensor.rows() ||
        it->second.cols() != tensor.cols()) {
      throw DataError("checkpoint tensor shape mismatch: " + name);
    }
    tensor = it->second;
  });
  return params;
}

Checkpoint average_checkpoints(const std::vector<Checkpoint> &checkpoints) {
  if (checkpoints.empty()) {
    throw DataError("cannot average zero checkpoints");
  }
  // Incremental mean: exactly idempotent for identical members and exactly
  // zero for cancelling ones.
  Checkpoint mean = checkpoints.front();
  for (std::size_t i = 1; i < checkpoints.size(); ++i) {
    const Checkpoint &other = checkpoints[i];
    if (other.tensors.size() != mean.tensors.size()) {
      throw DataError("checkpoint key sets differ");
    }
    const double step = 1.0 / static_cast<double>(i + 1);
    for (auto &[name, tensor] : mean.tensors) {
      const auto it = other.tensors.find(name);
      if (it == other.tensors.end()) {
        throw DataError("checkpoint key sets differ at: " + name);
      }
      if (it->second.rows() != tensor.rows() ||
          it->second.cols() != tensor.cols()) {
        throw DataError("checkpoint tensor shape mismatch: " + name);
      }
      tensor += (it->second - tensor) * step;
    }
    mean.epoch = std::max(mean.epoch, other.epoch);
  }
  mean.train_exact_match = 0.0;
  return mean;
}

void save_checkpoint(const Checkpoint &checkpoint,
                     const std::filesystem::path &path) {
  nlohmann::json header;
  header["format_version"] = kFormatVersion;
  header["dtype"] = "f64";
  header["epoch"] = checkpoint.epoch;
  header["train_exact_match"] = checkpoint.train_exact_match;
  header["model"] = {{"layers", checkpoint.config.layers},
                     {"heads", checkpoint.config.heads},
                     {"model_width", checkpoint.config.model_width},
                     {"ffn_width", checkpoint.config.ffn_width},
                     {"dropout", checkpoint.config.dropout},
                     {"max_seq_len", checkpoint.config.max_seq_len}};
  header["vocab"] = checkpoint.vocab_chars;

  std::uint64_t offset = 0;
  nlohmann::json tensors = nlohmann::json::array();
  for (const auto &[name, tensor] : checkpoint.tensors) {
    // Row-major element layout: stride (cols, 1) in elements.
    tensors.push_back({{"name", name},
                       {"rows", tensor.rows()},
                       {"cols", tensor.cols()},
                       {"row_stride", tensor.cols()},
                       {"col_stride", 1},
                       {"offset", offset}});
    offset += static_cast<std::uint64_t>(tensor.size()) * sizeof(double);
  }
  header["tensors"] = tensors;

  const std::string header_text = header.dump();
  std::string blob;
  blob.append(kMagic, sizeof(kMagic));
  std::uint32_t version = kFormatVersion;
  blob.append(reinterpret_cast<const char *>(&version), sizeof(version));
  const std::uint64_t header_len = header_text.size();
  blob.append(reinterpret_cast<const char *>(&header_len), sizeof(header_len));
  blob += header_text;
  for (const auto &[name, tensor] : checkpoint.tensors) {
    for (Eigen::Index r = 0; r < tensor.rows(); ++r) {
      for (Eigen::Index c = 0; c < tensor.cols(); ++c) {
        const double value = tensor(r, c);
        blob.append(reinterpret_cast<const char *>(&value), sizeof(value));
      }
    }
  }
  write_file_atomic(path, blob);
}

Checkpoint load_checkpoint(const std::filesystem::path &path) {
  const std::string blob = read_file(path);
  if (blob.size() < sizeof(kMagic) + sizeof(std::uint32_t) + sizeof(std::uint64_t) ||
      std::memcmp(blob.data(), kMagic, sizeof(kMagic)) != 0) {
    throw DataError("not a checkpoint file: " + path.string());
  }
  std::size_t cursor = sizeof(kMagic);
  std::uint32_t version = 0;
  std::memcpy(&version, blob.data() + cursor, sizeof(version));
  cursor += sizeof(version);
  if (version != kFormatVersion) {
    throw DataError("unsupported checkpoint format version " +
                    std::to_string(version));
  }
  std::uint64_t header_len = 0;
  std::memcpy(&header_len, blob.data() + cursor, sizeof(header_len));
  cursor += sizeof(header_len);
  if (cursor + header_len > blob.size()) {
    throw DataError("truncated checkpoint header: " + path.string());
  }
  const nlohmann::json header =
      nlohmann::json::parse(blob.substr(cursor, header_len));
  cursor += header_len;

  Checkpoint ckpt;
  ckpt.epoch = header.at("epoch").get<int>();
  ckpt.train_exact_match = header.at("train_exact_match").get<double>();
  const auto &model = header.at("model");
  ckpt.config.layers = model.at("layers").get<int>();
  ckpt.config.heads = model.at("heads").get<int>();
  ckpt.config.model_width = model.at("model_width").get<int>();
  ckpt.config.ffn_width = model.at("ffn_width").get<int>();
  ckpt.config.dropout = model.at("dropout").get<double>();
  ckpt.config.max_seq_len = model.at("max_seq_len").get<int>();
  ckpt.vocab_chars = header.at("vocab").get<std::string>();

  for (const auto &entry : header.at("tensors")) {
    const std::string name = entry.at("name").get<std::string>();
    const Eigen::Index rows = entry.at("rows").get<Eigen::Index>();
    const Eigen::Index cols = entry.at("cols").get<Eigen::Index>();
    const std::uint64_t offset = entry.at("offset").get<std::uint64_t>();
    const std::size_t base = cursor + offset;
    const std::size_t bytes =
        static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols) *
        sizeof(double);
    if (base + bytes > blob.size()) {
      throw DataError("truncated checkpoint tensor: " + name);
    }
    Mat tensor(rows, cols);
    std::size_t at = base;
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) {
        double value = 0.0;
        std::memcpy(&value, blob.data() + at, sizeof(value));
        tensor(r, c) = value;
        at += sizeof(value);
      }
    }
    ckpt.tensors.emplace(name, std::move(tensor));
  }
  return ckpt;
}

}  // namespace rxnaug::model

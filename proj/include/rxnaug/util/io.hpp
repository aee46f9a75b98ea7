//
// Project RxnAug - Copyright 2026 RxnAug Contributors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RXNAUG_UTIL_IO_HPP_
#define RXNAUG_UTIL_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace rxnaug {

// Data-level failures (malformed files, mismatched ids). The CLI maps these
// to exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numeric failures (non-finite loss and friends). CLI exit code 3.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::filesystem::path &path);

// Splits on '\n'; a trailing newline does not produce an empty last line.
std::vector<std::string> read_lines(const std::filesystem::path &path);

// Writes via a temporary file in the same directory followed by rename, so
// readers never observe a partially written file.
void write_file_atomic(const std::filesystem::path &path, const std::string &content);

std::uint64_t file_digest(const std::filesystem::path &path);

}  // namespace rxnaug

#endif  // RXNAUG_UTIL_IO_HPP_

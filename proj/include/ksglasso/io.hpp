#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "ksglasso/datagen.hpp"
#include "ksglasso/symmat.hpp"

namespace ksglasso {

/// 17 significant digits ("%.17g"): enough to reproduce the exact bits after
/// a text round trip.
std::string format_double(double v);

// Matrix files: line 1 "rows cols", then one line of space-separated values
// per row. UTF-8, Unix newlines. Writers below stage through a temp file in
// the same directory and rename, so a reader never sees a partial file.
void write_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix(const std::filesystem::path& path);

void write_sym(const std::filesystem::path& path, const SymMat& m);
SymMat read_sym(const std::filesystem::path& path);

/// Support masks travel as full symmetric 0/1 matrices with zero diagonal.
void write_support(const std::filesystem::path& path, const SupportMask& mask);
SupportMask read_support(const std::filesystem::path& path);

// Observation files: line 1 "n t s", then n blocks of t rows each, blocks
// separated by a blank line.
void write_observations(const std::filesystem::path& path, const ObservationSet& set);
ObservationSet read_observations(const std::filesystem::path& path);

/// Ordered key=value lines.
using KvRecord = std::vector<std::pair<std::string, std::string>>;
void write_kv(const std::filesystem::path& path, const KvRecord& kv);
KvRecord read_kv(const std::filesystem::path& path);

/// Atomic whole-file text write (used for the JSON records too).
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace ksglasso

// SPDX-License-Identifier: MIT
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "lqo/system.hpp"

namespace lqo {

// Matrix Market dense/coordinate reader and writer.  Values are written with
// 17 significant digits so a save/load cycle reproduces every entry exactly.
void write_matrix_market(const std::filesystem::path& path, const Eigen::MatrixXd& m,
                         bool symmetric = false);
Eigen::MatrixXd read_matrix_market(const std::filesystem::path& path);

// On-disk system layout: a manifest.json binding Matrix Market files to the
// state-space roles, one file per matrix.
struct SystemBundle {
  LqoSystem system;
  nlohmann::json manifest;
};

void save_bundle(const LqoSystem& sys, const std::filesystem::path& dir,
                 const nlohmann::json& metadata = nlohmann::json::object());
SystemBundle load_bundle(const std::filesystem::path& dir);

// Minimal CSV writer: header row, '.' decimal separator, 17 significant
// digits, empty cells for missing values (NaN).
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

std::string format_full_precision(double v);

}  // namespace lqo

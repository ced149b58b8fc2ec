// SPDX-License-Identifier: MIT
#include "lqo/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "lqo/errors.hpp"

namespace lqo {

namespace {

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

[[noreturn]] void bad_format(const std::filesystem::path& path, const std::string& why) {
  throw BundleFormatError(path.string() + ": " + why);
}

}  // namespace

std::string format_full_precision(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

void write_matrix_market(const std::filesystem::path& path, const Eigen::MatrixXd& m,
                         bool symmetric) {
  if (symmetric && m.rows() != m.cols())
    throw std::invalid_argument("write_matrix_market: symmetric storage needs a square matrix");

  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_matrix_market: cannot open " + path.string());

  out << "%%MatrixMarket matrix array real " << (symmetric ? "symmetric" : "general") << "\n";
  out << m.rows() << " " << m.cols() << "\n";
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    const Eigen::Index i0 = symmetric ? j : 0;
    for (Eigen::Index i = i0; i < m.rows(); ++i) out << format_full_precision(m(i, j)) << "\n";
  }
  if (!out) throw std::runtime_error("write_matrix_market: failed writing " + path.string());
}

Eigen::MatrixXd read_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) bad_format(path, "cannot open file");

  std::string banner;
  if (!std::getline(in, banner)) bad_format(path, "empty file");
  std::istringstream head(banner);
  std::string magic, object, format, field, symmetry;
  head >> magic >> object >> format >> field >> symmetry;
  if (magic != "%%MatrixMarket" || lower(object) != "matrix")
    bad_format(path, "not a Matrix Market matrix file");
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (format != "array" && format != "coordinate")
    bad_format(path, "unsupported format '" + format + "'");
  if (field != "real" && field != "integer")
    bad_format(path, "unsupported field '" + field + "'");
  if (symmetry != "general" && symmetry != "symmetric")
    bad_format(path, "unsupported symmetry '" + symmetry + "'");

  std::string line;
  auto next_data_line = [&]() -> bool {
    while (std::getline(in, line)) {
      size_t pos = line.find_first_not_of(" \t\r");
      if (pos == std::string::npos) continue;
      if (line[pos] == '%') continue;
      return true;
    }
    return false;
  };

  if (!next_data_line()) bad_format(path, "missing size line");
  std::istringstream size_line(line);
  long rows = 0, cols = 0, entries = 0;
  if (!(size_line >> rows >> cols)) bad_format(path, "malformed size line");
  if (format == "coordinate" && !(size_line >> entries))
    bad_format(path, "coordinate size line needs an entry count");
  if (rows < 1 || cols < 1) bad_format(path, "non-positive dimensions");
  if (symmetry == "symmetric" && rows != cols) bad_format(path, "symmetric matrix must be square");

  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rows, cols);

  if (format == "array") {
    for (long j = 0; j < cols; ++j) {
      const long i0 = (symmetry == "symmetric") ? j : 0;
      for (long i = i0; i < rows; ++i) {
        if (!next_data_line()) bad_format(path, "array data ended early");
        std::istringstream entry(line);
        double v = 0.0;
        if (!(entry >> v)) bad_format(path, "malformed array entry");
        m(i, j) = v;
        if (symmetry == "symmetric") m(j, i) = v;
      }
    }
  } else {
    for (long e = 0; e < entries; ++e) {
      if (!next_data_line()) bad_format(path, "coordinate data ended early");
      std::istringstream entry(line);
      long i = 0, j = 0;
      double v = 0.0;
      if (!(entry >> i >> j >> v)) bad_format(path, "malformed coordinate entry");
      if (i < 1 || i > rows || j < 1 || j > cols) bad_format(path, "coordinate out of range");
      m(i - 1, j - 1) = v;
      if (symmetry == "symmetric") m(j - 1, i - 1) = v;
    }
  }
  return m;
}

namespace {

constexpr const char* kBundleFormat = "lqo-bundle";

Eigen::MatrixXd load_role(const std::filesystem::path& dir, const nlohmann::json& files,
                          const std::string& role, long rows, long cols) {
  if (!files.contains(role)) throw BundleFormatError(dir.string() + ": manifest misses " + role);
  const Eigen::MatrixXd m = read_matrix_market(dir / files.at(role).get<std::string>());
  if (m.rows() != rows || m.cols() != cols)
    throw BundleFormatError(dir.string() + ": " + role + " dimensions disagree with the manifest");
  return m;
}

}  // namespace

void save_bundle(const LqoSystem& sys, const std::filesystem::path& dir,
                 const nlohmann::json& metadata) {
  std::filesystem::create_directories(dir);

  nlohmann::json manifest;
  manifest["format"] = kBundleFormat;
  manifest["version"] = 1;
  manifest["dims"] = {{"n", sys.n()}, {"m", sys.m()}, {"p", sys.p()}};
  manifest["files"]["a"] = "a.mtx";
  manifest["files"]["b"] = "b.mtx";
  manifest["files"]["c"] = "c.mtx";
  std::vector<std::string> m_files;
  for (Eigen::Index k = 0; k < sys.p(); ++k) m_files.push_back("m" + std::to_string(k) + ".mtx");
  manifest["files"]["m"] = m_files;
  manifest["metadata"] = metadata;

  write_matrix_market(dir / "a.mtx", sys.a());
  write_matrix_market(dir / "b.mtx", sys.b());
  write_matrix_market(dir / "c.mtx", sys.c());
  for (Eigen::Index k = 0; k < sys.p(); ++k)
    write_matrix_market(dir / m_files[static_cast<size_t>(k)], sys.m_quad(k), true);

  std::ofstream out(dir / "manifest.json");
  if (!out) throw std::runtime_error("save_bundle: cannot write manifest in " + dir.string());
  out << manifest.dump(2) << "\n";
}

SystemBundle load_bundle(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw BundleFormatError(dir.string() + ": missing manifest.json");

  nlohmann::json manifest;
  try {
    in >> manifest;
  } catch (const nlohmann::json::exception& e) {
    throw BundleFormatError(dir.string() + ": manifest parse failure: " + e.what());
  }

  if (manifest.value("format", "") != kBundleFormat)
    throw BundleFormatError(dir.string() + ": not an lqo-bundle manifest");
  if (!manifest.contains("dims") || !manifest.contains("files"))
    throw BundleFormatError(dir.string() + ": manifest misses dims or files");

  long n = 0, m = 0, p = 0;
  try {
    n = manifest["dims"].at("n").get<long>();
    m = manifest["dims"].at("m").get<long>();
    p = manifest["dims"].at("p").get<long>();
  } catch (const nlohmann::json::exception& e) {
    throw BundleFormatError(dir.string() + ": malformed dims: " + e.what());
  }
  if (n < 1 || m < 1 || p < 1) throw BundleFormatError(dir.string() + ": non-positive dims");

  const nlohmann::json& files = manifest["files"];
  const Eigen::MatrixXd a = load_role(dir, files, "a", n, n);
  const Eigen::MatrixXd b = load_role(dir, files, "b", n, m);
  const Eigen::MatrixXd c = load_role(dir, files, "c", p, n);

  if (!files.contains("m") || !files["m"].is_array() ||
      files["m"].size() != static_cast<size_t>(p))
    throw BundleFormatError(dir.string() + ": manifest needs one quadratic map per output");

  std::vector<Eigen::MatrixXd> ms;
  ms.reserve(static_cast<size_t>(p));
  for (const auto& name : files["m"]) {
    Eigen::MatrixXd mk = read_matrix_market(dir / name.get<std::string>());
    if (mk.rows() != n || mk.cols() != n)
      throw BundleFormatError(dir.string() + ": quadratic map dimensions disagree with manifest");
    const double asym = (mk - mk.transpose()).norm();
    if (asym > 1e-12 * std::max(1.0, mk.norm()))
      std::cerr << "warning: " << (dir / name.get<std::string>()).string()
                << " is not symmetric (deviation " << asym << "); symmetrizing\n";
    ms.push_back(std::move(mk));
  }

  return SystemBundle{LqoSystem(a, b, c, ms), manifest};
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_csv: cannot open " + path.string());

  for (size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& row : rows) {
    if (row.size() != header.size())
      throw std::invalid_argument("write_csv: row width disagrees with the header");
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out << ",";
      if (!std::isnan(row[i])) out << format_full_precision(row[i]);
    }
    out << "\n";
  }
  if (!out) throw std::runtime_error("write_csv: failed writing " + path.string());
}

}  // namespace lqo

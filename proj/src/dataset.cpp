#include "ugrfs/dataset.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

namespace ugrfs {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

MatrixXd read_csv_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path.string());

  std::vector<double> values;
  Index cols = -1;
  Index rows = 0;
  std::string line;
  Index line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    Index row_cols = 0;
    std::string_view rest = line;
    while (true) {
      const auto comma = rest.find(',');
      const std::string_view cell = trim(rest.substr(0, comma));
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
      if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size())
        throw std::runtime_error(path.string() + ": non-numeric cell '" + std::string(cell) + "' at row " +
                                 std::to_string(rows) + " (line " + std::to_string(line_no) + ")");
      values.push_back(value);
      ++row_cols;
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    if (cols < 0) cols = row_cols;
    if (row_cols != cols)
      throw std::runtime_error(path.string() + ": row " + std::to_string(rows) + " has " + std::to_string(row_cols) +
                               " columns, expected " + std::to_string(cols));
    ++rows;
  }
  if (rows == 0) throw std::runtime_error(path.string() + ": empty matrix");

  MatrixXd out(rows, cols);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) out(r, c) = values[static_cast<std::size_t>(r * cols + c)];
  return out;
}

MultiViewDataset<double> load_dataset(const std::filesystem::path& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw std::runtime_error("cannot open manifest: " + manifest_path.string());
  nlohmann::json manifest;
  try {
    in >> manifest;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(manifest_path.string() + ": invalid JSON: " + e.what());
  }
  if (!manifest.contains("views") || !manifest["views"].is_array() || manifest["views"].empty())
    throw std::runtime_error(manifest_path.string() + ": 'views' must be a non-empty array");
  if (!manifest.contains("labels") || !manifest["labels"].is_string())
    throw std::runtime_error(manifest_path.string() + ": 'labels' must be a path string");

  const auto base = manifest_path.parent_path();
  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base / path;
  };

  MultiViewDataset<double> ds;
  const auto labels_path = resolve(manifest["labels"].get<std::string>());
  ds.labels = read_csv_matrix(labels_path);
  for (Index r = 0; r < ds.labels.rows(); ++r)
    for (Index c = 0; c < ds.labels.cols(); ++c)
      if (ds.labels(r, c) != 0.0 && ds.labels(r, c) != 1.0)
        throw std::runtime_error(labels_path.string() + ": non-binary label at row " + std::to_string(r) +
                                 ", column " + std::to_string(c));

  for (std::size_t i = 0; i < manifest["views"].size(); ++i) {
    const auto& entry = manifest["views"][i];
    if (!entry.is_object() || !entry.contains("path") || !entry["path"].is_string())
      throw std::runtime_error(manifest_path.string() + ": views[" + std::to_string(i) + "].path missing");
    const std::string name = entry.value("name", "view" + std::to_string(i));
    const auto view_path = resolve(entry["path"].get<std::string>());
    MatrixXd view = read_csv_matrix(view_path);
    if (view.rows() != ds.labels.rows())
      throw std::runtime_error(view_path.string() + ": row-count mismatch, view has " + std::to_string(view.rows()) +
                               " rows but labels have " + std::to_string(ds.labels.rows()));
    ds.views.push_back(std::move(view));
    ds.view_names.push_back(name);
  }
  ds.validate();
  return ds;
}

FoldAssignment kfold_split(Index n, int k, std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("fold count must be at least 2");
  if (n < k) throw std::invalid_argument("cannot split " + std::to_string(n) + " samples into " + std::to_string(k) + " folds");
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);

  FoldAssignment out;
  out.k = k;
  out.seed = seed;
  out.fold_of_sample.assign(static_cast<std::size_t>(n), 0);
  for (std::size_t pos = 0; pos < perm.size(); ++pos)
    out.fold_of_sample[static_cast<std::size_t>(perm[pos])] = static_cast<int>(pos % static_cast<std::size_t>(k));
  return out;
}

IndexList FoldAssignment::test_indices(int fold) const {
  IndexList out;
  for (std::size_t i = 0; i < fold_of_sample.size(); ++i)
    if (fold_of_sample[i] == fold) out.push_back(static_cast<Index>(i));
  return out;
}

IndexList FoldAssignment::train_indices(int fold) const {
  IndexList out;
  for (std::size_t i = 0; i < fold_of_sample.size(); ++i)
    if (fold_of_sample[i] != fold) out.push_back(static_cast<Index>(i));
  return out;
}

}  // namespace ugrfs

#include "mlkit/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "mlkit/text.hpp"

namespace mlkit {

namespace {

std::vector<std::string> derive_class_set(const std::vector<Example>& examples) {
  std::vector<std::string> classes;
  for (const auto& ex : examples)
    if (!ex.label.empty()) classes.push_back(ex.label);
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  return classes;
}

double parse_cell(const std::string& tok, CsvMode mode, std::size_t row, const std::string& column) {
  if (mode == CsvMode::binary) {
    if (tok == "Y" || tok == "1") return 1.0;
    if (tok == "N" || tok == "0") return 0.0;
    throw std::runtime_error("row " + std::to_string(row) + ": non-binary value \"" + tok +
                             "\" in column " + column);
  }
  auto v = parse_double(tok);
  if (!v)
    throw std::runtime_error("row " + std::to_string(row) + ": bad numeric value \"" + tok +
                             "\" in column " + column);
  return *v;
}

Dataset load_csv_impl(const std::string& path, const std::string* label_column, CsvMode mode) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty file: " + path);
  std::vector<std::string> header = split(std::string(trim(line)), ',');

  std::size_t label_idx = header.size();
  if (label_column) {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == *label_column) label_idx = i;
    if (label_idx == header.size())
      throw std::runtime_error("label column not found: " + *label_column);
  }

  Dataset ds;
  ds.label_name = label_column ? *label_column : "label";
  for (std::size_t i = 0; i < header.size(); ++i)
    if (i != label_idx) ds.attribute_names.push_back(header[i]);

  std::size_t row = 0;  // 1-based data rows, header excluded
  while (std::getline(in, line)) {
    auto trimmed = trim(line);
    if (trimmed.empty()) continue;
    ++row;
    std::vector<std::string> cells = split(std::string(trimmed), ',');
    if (cells.size() != header.size())
      throw std::runtime_error("ragged row " + std::to_string(row) + ": expected " +
                               std::to_string(header.size()) + " fields, got " +
                               std::to_string(cells.size()));
    Example ex;
    ex.features.reserve(ds.attribute_names.size());
    std::size_t attr = 0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i == label_idx) {
        ex.label = cells[i];
      } else {
        ex.features.push_back(parse_cell(cells[i], mode, row, header[i]));
        ++attr;
      }
    }
    ds.examples.push_back(std::move(ex));
  }
  ds.class_set = derive_class_set(ds.examples);
  return ds;
}

}  // namespace

bool Dataset::has_class(const std::string& c) const {
  return std::binary_search(class_set.begin(), class_set.end(), c);
}

Dataset make_dataset(std::vector<std::string> attribute_names,
                     std::vector<Example> examples,
                     std::string label_name) {
  for (const auto& ex : examples)
    if (ex.features.size() != attribute_names.size())
      throw std::runtime_error("example dimension " + std::to_string(ex.features.size()) +
                               " does not match attribute count " +
                               std::to_string(attribute_names.size()));
  Dataset ds;
  ds.attribute_names = std::move(attribute_names);
  ds.label_name = std::move(label_name);
  ds.examples = std::move(examples);
  ds.class_set = derive_class_set(ds.examples);
  return ds;
}

Dataset load_csv(const std::string& path, const std::string& label_column, CsvMode mode) {
  return load_csv_impl(path, &label_column, mode);
}

Dataset load_csv_unlabeled(const std::string& path, CsvMode mode) {
  return load_csv_impl(path, nullptr, mode);
}

void write_csv(const Dataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  for (const auto& name : ds.attribute_names) out << name << ',';
  out << ds.label_name << '\n';
  for (const auto& ex : ds.examples) {
    for (double f : ex.features) out << fmt_double(f) << ',';
    out << ex.label << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::pair<Dataset, Dataset> split(const Dataset& ds, double fraction, std::uint64_t seed) {
  if (ds.examples.empty()) throw std::runtime_error("empty dataset");
  if (!(fraction > 0.0 && fraction < 1.0))
    throw std::runtime_error("fraction must be in (0,1)");

  const std::size_t n = ds.examples.size();
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;

  // Hand-rolled Fisher-Yates so the split does not depend on the standard
  // library's shuffle implementation.
  std::mt19937_64 rng(seed);
  for (std::size_t i = n - 1; i > 0; --i) {
    std::size_t j = static_cast<std::size_t>(rng() % (i + 1));
    std::swap(idx[i], idx[j]);
  }

  const std::size_t k = static_cast<std::size_t>(fraction * static_cast<double>(n));
  std::vector<std::size_t> first(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k));
  std::vector<std::size_t> second(idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end());
  std::sort(first.begin(), first.end());
  std::sort(second.begin(), second.end());

  auto take = [&](const std::vector<std::size_t>& which) {
    std::vector<Example> exs;
    exs.reserve(which.size());
    for (std::size_t i : which) exs.push_back(ds.examples[i]);
    return make_dataset(ds.attribute_names, std::move(exs), ds.label_name);
  };
  return {take(first), take(second)};
}

DatasetSummary summarize(const Dataset& ds) {
  DatasetSummary s;
  s.examples = ds.examples.size();
  s.attributes = ds.attribute_names.size();
  for (const auto& ex : ds.examples)
    if (!ex.label.empty()) ++s.per_class[ex.label];
  return s;
}

Dataset relabel_binary(const Dataset& ds, const std::string& positive_class) {
  if (ds.class_set.size() != 2)
    throw std::runtime_error("need exactly two classes to relabel, got " +
                             std::to_string(ds.class_set.size()));
  if (!ds.has_class(positive_class))
    throw std::runtime_error("unknown class: " + positive_class);
  Dataset out = ds;
  for (auto& ex : out.examples) ex.label = (ex.label == positive_class) ? "+1" : "-1";
  out.class_set = derive_class_set(out.examples);
  return out;
}

std::vector<int> signed_labels(const Dataset& ds) {
  std::vector<int> labels;
  labels.reserve(ds.examples.size());
  for (const auto& ex : ds.examples) {
    if (ex.label == "+1" || ex.label == "1")
      labels.push_back(+1);
    else if (ex.label == "-1")
      labels.push_back(-1);
    else
      throw std::runtime_error("labels must be +1 or -1, got \"" + ex.label + "\"");
  }
  return labels;
}

}  // namespace mlkit

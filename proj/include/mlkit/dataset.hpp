#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace mlkit {

// One record: a numeric feature vector plus a class token.
// An empty label marks an unlabeled example (prediction inputs).
struct Example {
  std::vector<double> features;
  std::string label;
};

struct Dataset {
  std::vector<std::string> attribute_names;
  std::string label_name = "label";
  std::vector<std::string> class_set;  // sorted, unique, labels that occur
  std::vector<Example> examples;

  std::size_t size() const { return examples.size(); }
  std::size_t dim() const { return attribute_names.size(); }
  bool has_class(const std::string& c) const;
};

enum class CsvMode { numeric, binary };

// Builds a dataset from parts, deriving class_set and checking dimensions.
Dataset make_dataset(std::vector<std::string> attribute_names,
                     std::vector<Example> examples,
                     std::string label_name = "label");

// CSV: first row is the header, comma-separated, no quoting, no missing
// values. In binary mode attribute cells must be one of Y/N/1/0.
Dataset load_csv(const std::string& path, const std::string& label_column, CsvMode mode);
// Same, but the file has no label column; every example is unlabeled.
Dataset load_csv_unlabeled(const std::string& path, CsvMode mode);
// Header first, attribute columns in order, label column last, "\n" endings.
void write_csv(const Dataset& ds, const std::string& path);

// Deterministic partition; the first part gets floor(fraction * n) examples.
std::pair<Dataset, Dataset> split(const Dataset& ds, double fraction, std::uint64_t seed);

struct DatasetSummary {
  std::size_t examples = 0;
  std::size_t attributes = 0;
  std::map<std::string, std::size_t> per_class;
};

DatasetSummary summarize(const Dataset& ds);

// Maps a two-class dataset onto labels "+1"/"-1", positive_class -> "+1".
Dataset relabel_binary(const Dataset& ds, const std::string& positive_class);
// Parses "+1"/"1"/"-1" labels into signed ints; throws on anything else.
std::vector<int> signed_labels(const Dataset& ds);

}  // namespace mlkit

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "seizureml/matrix.hpp"

namespace seizureml {

/// Feature width of the EEG window layout: 178 samples per one-second window.
inline constexpr std::size_t kFeatureColumns = 178;

/// Binary target. positive = seizure window (source label 1),
/// negative = any non-seizure recording (source labels 2..5).
enum class BinaryLabel : std::uint8_t { negative = 0, positive = 1 };

using BinaryLabels = std::vector<BinaryLabel>;

/// Parsed dataset in file order. The leading id column is kept for provenance
/// only; it never enters any computation.
struct RawDataset {
    std::vector<std::string> row_ids;
    FeatureMatrix features;        // rows x 178
    std::vector<int> labels;       // values in {1,..,5}
};

struct FeatureSummary {
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
    double median = 0.0;
};

/// Exploratory summary: class histogram plus per-feature order statistics.
struct EdaSummary {
    std::map<int, std::size_t> class_counts;
    std::vector<FeatureSummary> per_feature;
    std::size_t total_rows = 0;
};

/// Whether the CSV starts with a header line. `detect` treats the first line
/// as a header unless it already looks like a data row (exactly 180 fields
/// with a numeric second field).
enum class CsvHeader { detect, present, absent };

/// Parses a CSV in the UCI seizure-recognition layout: column 0 is an opaque
/// row id, columns 1..178 are numeric features, the last column is an integer
/// label in {1,..,5}. Raises DataError naming the offending row on any
/// malformed line; raises IoError when the file cannot be opened.
RawDataset load_csv(const std::string& path, CsvHeader header = CsvHeader::detect);

/// Writes a dataset back out in the same layout (with a header). Feature
/// values are printed in shortest round-trip form, so parse(write(d)) == d.
void write_csv(const RawDataset& dataset, const std::string& path);

/// Maps source labels onto the binary target: 1 -> positive, 2..5 -> negative.
BinaryLabels binarize_labels(const std::vector<int>& labels);

/// Counts per source class and per-feature (min, max, mean, median).
EdaSummary summarize(const RawDataset& dataset);

inline std::size_t count_positive(const BinaryLabels& labels) {
    std::size_t n = 0;
    for (BinaryLabel l : labels) n += (l == BinaryLabel::positive) ? 1 : 0;
    return n;
}

}  // namespace seizureml

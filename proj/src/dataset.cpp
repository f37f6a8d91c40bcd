#include "seizureml/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>

#include "seizureml/stats.hpp"

namespace seizureml {

namespace {

void split_fields(const std::string& line, std::vector<std::string_view>& out) {
    out.clear();
    std::string_view rest(line);
    // Trim a trailing carriage return from CRLF files.
    if (!rest.empty() && rest.back() == '\r') rest.remove_suffix(1);
    for (;;) {
        const std::size_t comma = rest.find(',');
        if (comma == std::string_view::npos) {
            out.push_back(rest);
            return;
        }
        out.push_back(rest.substr(0, comma));
        rest.remove_prefix(comma + 1);
    }
}

bool parse_double(std::string_view field, double& out) {
    const char* begin = field.data();
    const char* end = begin + field.size();
    auto [ptr, ec] = std::from_chars(begin, end, out, std::chars_format::general);
    return ec == std::errc{} && ptr == end;
}

bool parse_int(std::string_view field, int& out) {
    const char* begin = field.data();
    const char* end = begin + field.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc{} && ptr == end;
}

std::string row_tag(std::size_t data_row, std::size_t file_line) {
    std::ostringstream os;
    os << "data row " << data_row << " (file line " << file_line << ")";
    return os.str();
}

}  // namespace

RawDataset load_csv(const std::string& path, CsvHeader header) {
    std::ifstream file(path);
    if (!file.is_open()) throw IoError("cannot open dataset file: " + path);

    RawDataset out;
    std::string line;
    std::vector<std::string_view> fields;
    std::vector<double> row(kFeatureColumns);

    const std::size_t expected = kFeatureColumns + 2;  // id + features + label
    std::size_t file_line = 0;
    std::size_t data_row = 0;
    bool at_first_content = true;
    while (std::getline(file, line)) {
        ++file_line;
        if (line.empty()) continue;
        split_fields(line, fields);
        if (at_first_content) {
            at_first_content = false;
            bool skip = header == CsvHeader::present;
            if (header == CsvHeader::detect) {
                // Header text is ignored; columns are positional.
                double probe = 0.0;
                skip = fields.size() != expected || !parse_double(fields[1], probe);
            }
            if (skip) continue;
        }
        if (fields.size() != expected) {
            throw DataError("wrong column count (" + std::to_string(fields.size()) + ", expected " +
                            std::to_string(expected) + ") at " + row_tag(data_row, file_line));
        }
        for (std::size_t j = 0; j < kFeatureColumns; ++j) {
            double v = 0.0;
            if (!parse_double(fields[j + 1], v) || !std::isfinite(v)) {
                throw DataError("non-numeric feature value '" + std::string(fields[j + 1]) +
                                "' in column " + std::to_string(j + 1) + " at " +
                                row_tag(data_row, file_line));
            }
            row[j] = v;
        }
        int label = 0;
        if (!parse_int(fields.back(), label) || label < 1 || label > 5) {
            throw DataError("label '" + std::string(fields.back()) +
                            "' outside {1,..,5} at " + row_tag(data_row, file_line));
        }
        out.row_ids.emplace_back(fields[0]);
        out.features.push_row(row);
        out.labels.push_back(label);
        ++data_row;
    }

    if (out.labels.empty()) throw DataError("dataset file has no data rows: " + path);
    return out;
}

void write_csv(const RawDataset& dataset, const std::string& path) {
    std::ofstream file(path);
    if (!file.is_open()) throw IoError("cannot open file for writing: " + path);

    file << "id";
    for (std::size_t j = 1; j <= kFeatureColumns; ++j) file << ",X" << j;
    file << ",y\n";

    char buf[64];
    for (std::size_t r = 0; r < dataset.features.rows(); ++r) {
        file << dataset.row_ids[r];
        const auto row = dataset.features.row(r);
        for (double v : row) {
            auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
            file << ',';
            file.write(buf, ptr - buf);
        }
        file << ',' << dataset.labels[r] << '\n';
    }
    if (!file.good()) throw IoError("write failed: " + path);
}

BinaryLabels binarize_labels(const std::vector<int>& labels) {
    BinaryLabels out;
    out.reserve(labels.size());
    for (int l : labels) {
        if (l < 1 || l > 5) {
            throw DataError("label " + std::to_string(l) + " outside {1,..,5}");
        }
        out.push_back(l == 1 ? BinaryLabel::positive : BinaryLabel::negative);
    }
    return out;
}

EdaSummary summarize(const RawDataset& dataset) {
    if (dataset.features.empty()) throw DataError("cannot summarize an empty dataset");

    EdaSummary out;
    out.total_rows = dataset.features.rows();
    for (int l : dataset.labels) ++out.class_counts[l];

    const std::size_t cols = dataset.features.cols();
    out.per_feature.resize(cols);
    std::vector<double> column;
    for (std::size_t j = 0; j < cols; ++j) {
        column = dataset.features.column(j);
        FeatureSummary& s = out.per_feature[j];
        s.min = *std::min_element(column.begin(), column.end());
        s.max = *std::max_element(column.begin(), column.end());
        s.mean = mean(column);
        std::sort(column.begin(), column.end());
        s.median = interpolated_quantile(column, 0.5);
    }
    return out;
}

}  // namespace seizureml

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace csgm {

enum class ColumnKind { Numeric, Categorical };

struct ColumnSpec {
    std::string name;
    ColumnKind kind = ColumnKind::Numeric;
};

// Parsed delimiter-separated file. Cells stay as strings until encoding;
// rows containing the missing token are kept (drop_missing removes them).
struct RawTable {
    std::vector<ColumnSpec> columns;
    std::vector<std::vector<std::string>> rows;
    std::string missing_token = "?";
};

// Per-column standardization fitted on train data. Constant columns are
// flagged and left untransformed (mean 0, stddev 1 placeholders).
struct Standardization {
    Eigen::VectorXd mean;
    Eigen::VectorXd stddev;
    std::vector<bool> constant;
};

struct EncodedDataset {
    Eigen::MatrixXd features;                 // N x d
    Eigen::VectorXi labels;                   // entries in {0,1}
    std::vector<std::string> feature_names;   // size d
    std::optional<Standardization> standardization;

    Eigen::Index n() const { return features.rows(); }
    Eigen::Index dim() const { return features.cols(); }
};

struct SplitSpec {
    double train_fraction = 2.0 / 3.0;
    std::uint64_t seed = 0;
};

// delimiter == '\0' means "any run of whitespace".
RawTable load_csv(const std::string& path, std::vector<ColumnSpec> schema,
                  char delimiter, std::string missing_token);

RawTable drop_missing(const RawTable& table);

// Both encoders pull the label column out of the table: cells equal to
// positive_label map to 1, everything else to 0.
EncodedDataset encode_dummy(const RawTable& table, const std::string& label_column,
                            const std::string& positive_label);
EncodedDataset encode_integer(const RawTable& table, const std::string& label_column,
                              const std::string& positive_label);

std::pair<EncodedDataset, EncodedDataset>
standardize_fit_apply(const EncodedDataset& train, const EncodedDataset& test);

std::pair<EncodedDataset, EncodedDataset>
train_test_split(const EncodedDataset& data, const SplitSpec& spec);

// Audit export: header row of feature names plus a trailing "label" column.
void write_encoded_csv(const EncodedDataset& data, const std::string& path);
EncodedDataset read_encoded_csv(const std::string& path);

enum class EncodingMode { Dummy, Integer };

// Declarative per-dataset config (JSON file), naming the label column,
// positive label value, column kinds, delimiter and missing token.
struct DatasetConfig {
    std::string name;
    std::string path;
    char delimiter = ',';            // '\0' for whitespace
    std::string missing_token = "?";
    std::vector<ColumnSpec> columns; // includes the label column
    std::string label_column;
    std::string positive_label;
    EncodingMode encoding = EncodingMode::Dummy;
};

DatasetConfig load_dataset_config(const std::string& path);

// load_csv + drop_missing + encode per the config.
EncodedDataset prepare_encoded(const DatasetConfig& cfg);

}  // namespace csgm

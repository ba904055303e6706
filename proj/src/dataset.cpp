#include "csgm/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace csgm {

namespace {

std::vector<std::string> split_line(const std::string& line, char delimiter) {
    std::vector<std::string> fields;
    if (delimiter == '\0') {
        std::istringstream ss(line);
        std::string tok;
        while (ss >> tok) fields.push_back(tok);
        return fields;
    }
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, delimiter)) fields.push_back(field);
    if (!line.empty() && line.back() == delimiter) fields.push_back("");
    return fields;
}

double parse_numeric(const std::string& cell, const std::string& column,
                     std::size_t row_index) {
    try {
        std::size_t pos = 0;
        double v = std::stod(cell, &pos);
        if (pos != cell.size()) throw std::invalid_argument(cell);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("column '" + column + "' has non-numeric value '" +
                                 cell + "' at row " + std::to_string(row_index));
    }
}

int find_column(const RawTable& table, const std::string& name) {
    for (std::size_t j = 0; j < table.columns.size(); ++j)
        if (table.columns[j].name == name) return static_cast<int>(j);
    throw std::runtime_error("no column named '" + name + "'");
}

Eigen::VectorXi extract_labels(const RawTable& table, int label_col,
                               const std::string& positive_label) {
    Eigen::VectorXi labels(static_cast<Eigen::Index>(table.rows.size()));
    for (std::size_t i = 0; i < table.rows.size(); ++i)
        labels[static_cast<Eigen::Index>(i)] =
            table.rows[i][static_cast<std::size_t>(label_col)] == positive_label ? 1 : 0;
    return labels;
}

void require_no_missing(const RawTable& table) {
    for (std::size_t i = 0; i < table.rows.size(); ++i)
        for (const auto& cell : table.rows[i])
            if (cell == table.missing_token)
                throw std::runtime_error("missing value at row " + std::to_string(i) +
                                         "; call drop_missing first");
}

// Distinct level strings of a categorical column, lexicographically ordered.
std::vector<std::string> column_levels(const RawTable& table, std::size_t col) {
    std::vector<std::string> levels;
    for (const auto& row : table.rows) levels.push_back(row[col]);
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    return levels;
}

}  // namespace

RawTable load_csv(const std::string& path, std::vector<ColumnSpec> schema,
                  char delimiter, std::string missing_token) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");

    RawTable table;
    table.columns = std::move(schema);
    table.missing_token = std::move(missing_token);

    std::string line;
    std::size_t row_index = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_line(line, delimiter);
        if (fields.size() != table.columns.size())
            throw std::runtime_error("row " + std::to_string(row_index) + " has " +
                                     std::to_string(fields.size()) + " fields, expected " +
                                     std::to_string(table.columns.size()));
        for (std::size_t j = 0; j < fields.size(); ++j)
            if (table.columns[j].kind == ColumnKind::Numeric &&
                fields[j] != table.missing_token)
                parse_numeric(fields[j], table.columns[j].name, row_index);
        table.rows.push_back(std::move(fields));
        ++row_index;
    }
    if (table.rows.empty()) throw std::runtime_error("no rows in '" + path + "'");
    return table;
}

RawTable drop_missing(const RawTable& table) {
    RawTable out;
    out.columns = table.columns;
    out.missing_token = table.missing_token;
    for (const auto& row : table.rows) {
        bool missing = std::any_of(row.begin(), row.end(), [&](const std::string& c) {
            return c == table.missing_token;
        });
        if (!missing) out.rows.push_back(row);
    }
    if (out.rows.empty()) throw std::runtime_error("all rows contain missing values");
    return out;
}

EncodedDataset encode_dummy(const RawTable& table, const std::string& label_column,
                            const std::string& positive_label) {
    if (table.rows.empty()) throw std::runtime_error("empty table");
    require_no_missing(table);
    const int label_col = find_column(table, label_column);

    EncodedDataset out;
    out.labels = extract_labels(table, label_col, positive_label);

    // Column-wise plan: numeric columns pass through, categorical columns
    // expand to one indicator per level.
    struct Group {
        std::size_t col;
        bool categorical;
        std::vector<std::string> levels;  // empty for numeric
    };
    std::vector<Group> groups;
    for (std::size_t j = 0; j < table.columns.size(); ++j) {
        if (static_cast<int>(j) == label_col) continue;
        if (table.columns[j].kind == ColumnKind::Categorical)
            groups.push_back({j, true, column_levels(table, j)});
        else
            groups.push_back({j, false, {}});
    }

    std::size_t d = 0;
    for (const auto& g : groups) d += g.categorical ? g.levels.size() : 1;
    const auto n = static_cast<Eigen::Index>(table.rows.size());
    out.features.resize(n, static_cast<Eigen::Index>(d));

    Eigen::Index col = 0;
    for (const auto& g : groups) {
        const auto& name = table.columns[g.col].name;
        if (!g.categorical) {
            out.feature_names.push_back(name);
            for (Eigen::Index i = 0; i < n; ++i)
                out.features(i, col) =
                    parse_numeric(table.rows[static_cast<std::size_t>(i)][g.col], name,
                                  static_cast<std::size_t>(i));
            ++col;
            continue;
        }
        for (const auto& level : g.levels) out.feature_names.push_back(name + "=" + level);
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto& cell = table.rows[static_cast<std::size_t>(i)][g.col];
            for (std::size_t l = 0; l < g.levels.size(); ++l)
                out.features(i, col + static_cast<Eigen::Index>(l)) =
                    cell == g.levels[l] ? 1.0 : 0.0;
        }
        col += static_cast<Eigen::Index>(g.levels.size());
    }
    return out;
}

EncodedDataset encode_integer(const RawTable& table, const std::string& label_column,
                              const std::string& positive_label) {
    if (table.rows.empty()) throw std::runtime_error("empty table");
    require_no_missing(table);
    const int label_col = find_column(table, label_column);

    EncodedDataset out;
    out.labels = extract_labels(table, label_col, positive_label);

    const auto n = static_cast<Eigen::Index>(table.rows.size());
    out.features.resize(n, static_cast<Eigen::Index>(table.columns.size()) - 1);

    Eigen::Index col = 0;
    for (std::size_t j = 0; j < table.columns.size(); ++j) {
        if (static_cast<int>(j) == label_col) continue;
        const auto& name = table.columns[j].name;
        out.feature_names.push_back(name);
        if (table.columns[j].kind == ColumnKind::Categorical) {
            auto levels = column_levels(table, j);
            std::map<std::string, double> code;
            for (std::size_t l = 0; l < levels.size(); ++l)
                code[levels[l]] = static_cast<double>(l);
            for (Eigen::Index i = 0; i < n; ++i)
                out.features(i, col) = code.at(table.rows[static_cast<std::size_t>(i)][j]);
        } else {
            for (Eigen::Index i = 0; i < n; ++i)
                out.features(i, col) =
                    parse_numeric(table.rows[static_cast<std::size_t>(i)][j], name,
                                  static_cast<std::size_t>(i));
        }
        ++col;
    }
    return out;
}

std::pair<EncodedDataset, EncodedDataset>
standardize_fit_apply(const EncodedDataset& train, const EncodedDataset& test) {
    if (train.dim() != test.dim() || train.feature_names != test.feature_names)
        throw std::runtime_error("train/test feature mismatch");

    const auto d = train.dim();
    const auto n = train.n();
    Standardization std_params;
    std_params.mean.resize(d);
    std_params.stddev.resize(d);
    std_params.constant.assign(static_cast<std::size_t>(d), false);

    for (Eigen::Index j = 0; j < d; ++j) {
        const double mean = train.features.col(j).mean();
        // population stddev (divide by N), matching the covariance convention
        const double var =
            (train.features.col(j).array() - mean).square().sum() / static_cast<double>(n);
        const double sd = std::sqrt(var);
        if (sd == 0.0) {
            std_params.mean[j] = 0.0;
            std_params.stddev[j] = 1.0;
            std_params.constant[static_cast<std::size_t>(j)] = true;
        } else {
            std_params.mean[j] = mean;
            std_params.stddev[j] = sd;
        }
    }

    auto apply = [&](const EncodedDataset& in) {
        EncodedDataset out = in;
        for (Eigen::Index j = 0; j < d; ++j)
            out.features.col(j) =
                (in.features.col(j).array() - std_params.mean[j]) / std_params.stddev[j];
        out.standardization = std_params;
        return out;
    };
    return {apply(train), apply(test)};
}

std::pair<EncodedDataset, EncodedDataset>
train_test_split(const EncodedDataset& data, const SplitSpec& spec) {
    const auto n = data.n();
    if (n < 3) throw std::runtime_error("need at least 3 rows to split");
    const auto n_train =
        static_cast<Eigen::Index>(std::floor(spec.train_fraction * static_cast<double>(n)));
    if (n_train < 1 || n_train >= n)
        throw std::runtime_error("train fraction leaves an empty partition");

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::mt19937_64 rng(spec.seed);
    std::shuffle(order.begin(), order.end(), rng);

    auto take = [&](Eigen::Index begin, Eigen::Index count) {
        EncodedDataset out;
        out.feature_names = data.feature_names;
        out.standardization = data.standardization;
        out.features.resize(count, data.dim());
        out.labels.resize(count);
        for (Eigen::Index i = 0; i < count; ++i) {
            out.features.row(i) = data.features.row(order[static_cast<std::size_t>(begin + i)]);
            out.labels[i] = data.labels[order[static_cast<std::size_t>(begin + i)]];
        }
        return out;
    };
    return {take(0, n_train), take(n_train, n - n_train)};
}

void write_encoded_csv(const EncodedDataset& data, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    for (const auto& name : data.feature_names) out << name << ',';
    out << "label\n";
    out.precision(17);
    for (Eigen::Index i = 0; i < data.n(); ++i) {
        for (Eigen::Index j = 0; j < data.dim(); ++j) out << data.features(i, j) << ',';
        out << data.labels[i] << '\n';
    }
}

EncodedDataset read_encoded_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("no header in '" + path + "'");
    auto header = split_line(line, ',');
    if (header.empty() || header.back() != "label")
        throw std::runtime_error("expected trailing 'label' column in '" + path + "'");

    EncodedDataset out;
    out.feature_names.assign(header.begin(), header.end() - 1);
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    std::size_t row_index = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto fields = split_line(line, ',');
        if (fields.size() != header.size())
            throw std::runtime_error("row " + std::to_string(row_index) +
                                     " field count mismatch in '" + path + "'");
        std::vector<double> row;
        for (std::size_t j = 0; j + 1 < fields.size(); ++j)
            row.push_back(parse_numeric(fields[j], header[j], row_index));
        rows.push_back(std::move(row));
        labels.push_back(static_cast<int>(parse_numeric(fields.back(), "label", row_index)));
        ++row_index;
    }
    if (rows.empty()) throw std::runtime_error("no data rows in '" + path + "'");
    out.features.resize(static_cast<Eigen::Index>(rows.size()),
                        static_cast<Eigen::Index>(out.feature_names.size()));
    out.labels.resize(static_cast<Eigen::Index>(labels.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            out.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                rows[i][j];
        out.labels[static_cast<Eigen::Index>(i)] = labels[i];
    }
    return out;
}

DatasetConfig load_dataset_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config '" + path + "'");
    nlohmann::json j;
    in >> j;

    DatasetConfig cfg;
    cfg.name = j.at("name").get<std::string>();
    cfg.path = j.at("path").get<std::string>();
    const auto delim = j.value("delimiter", std::string{","});
    cfg.delimiter = delim == "whitespace" ? '\0' : delim.at(0);
    cfg.missing_token = j.value("missing_token", std::string{"?"});
    cfg.label_column = j.at("label_column").get<std::string>();
    cfg.positive_label = j.at("positive_label").get<std::string>();
    const auto enc = j.value("encoding", std::string{"dummy"});
    if (enc == "dummy")
        cfg.encoding = EncodingMode::Dummy;
    else if (enc == "integer")
        cfg.encoding = EncodingMode::Integer;
    else
        throw std::runtime_error("unknown encoding '" + enc + "'");
    for (const auto& col : j.at("columns")) {
        ColumnSpec spec;
        spec.name = col.at("name").get<std::string>();
        const auto kind = col.at("kind").get<std::string>();
        if (kind == "numeric")
            spec.kind = ColumnKind::Numeric;
        else if (kind == "categorical")
            spec.kind = ColumnKind::Categorical;
        else
            throw std::runtime_error("unknown column kind '" + kind + "'");
        cfg.columns.push_back(std::move(spec));
    }
    return cfg;
}

EncodedDataset prepare_encoded(const DatasetConfig& cfg) {
    auto table = load_csv(cfg.path, cfg.columns, cfg.delimiter, cfg.missing_token);
    table = drop_missing(table);
    return cfg.encoding == EncodingMode::Dummy
               ? encode_dummy(table, cfg.label_column, cfg.positive_label)
               : encode_integer(table, cfg.label_column, cfg.positive_label);
}

}  // namespace csgm

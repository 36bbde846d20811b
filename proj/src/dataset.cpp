#include "heartml/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>

#include "heartml/error.hpp"
#include "heartml/rng.hpp"

namespace heartml {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        cells.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
        cells.emplace_back();
    }
    return cells;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void data_error(const std::string& msg) {
    throw Error(Stage::Data, ErrorKind::Validation, msg);
}

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

}  // namespace

std::size_t Dataset::missing_count() const {
    std::size_t count = 0;
    for (double v : features.values) {
        if (std::isnan(v)) ++count;
    }
    return count;
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
    Dataset out;
    out.schema = schema;
    out.features = Matrix(rows.size(), features.cols);
    out.target.reserve(rows.size());
    out.row_ids.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::size_t r = rows[i];
        std::copy_n(features.row(r).data(), features.cols, out.features.row(i).data());
        out.target.push_back(target[r]);
        out.row_ids.push_back(row_ids[r]);
    }
    return out;
}

std::pair<std::size_t, std::size_t> class_counts(const Dataset& ds) {
    std::size_t n0 = 0, n1 = 0;
    for (int t : ds.target) {
        (t == 0 ? n0 : n1) += 1;
    }
    return {n0, n1};
}

std::size_t contradictory_duplicate_count(const Dataset& ds) {
    std::map<std::vector<double>, int> seen;
    std::size_t conflicts = 0;
    std::vector<double> key(ds.features.cols);
    for (std::size_t r = 0; r < ds.size(); ++r) {
        auto row = ds.features.row(r);
        key.assign(row.begin(), row.end());
        auto [it, inserted] = seen.emplace(key, ds.target[r]);
        if (!inserted && it->second != ds.target[r]) ++conflicts;
    }
    return conflicts;
}

Dataset load_csv(const std::filesystem::path& path, const FeatureSchema& schema) {
    std::ifstream in(path);
    if (!in) {
        throw Error(Stage::Data, ErrorKind::Io,
                    "cannot open dataset file: " + path.string());
    }

    std::string line;
    if (!std::getline(in, line)) {
        data_error("dataset file is empty: " + path.string());
    }
    const auto header = split_line(line);
    if (header.size() != schema.columns.size()) {
        data_error("header has " + std::to_string(header.size()) + " columns, expected " +
                   std::to_string(schema.columns.size()));
    }
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (trim(header[c]) != schema.columns[c].name) {
            data_error("header mismatch at column " + std::to_string(c + 1) + ": got \"" +
                       trim(header[c]) + "\", expected \"" + schema.columns[c].name + "\"");
        }
    }

    const std::size_t p = schema.predictor_count();
    Dataset ds;
    ds.schema = schema;
    ds.features.cols = p;

    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        ++row;
        const auto cells = split_line(line);
        if (cells.size() != schema.columns.size()) {
            data_error("row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                       " cells, expected " + std::to_string(schema.columns.size()));
        }
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const auto& col = schema.columns[c];
            const std::string cell = trim(cells[c]);
            double value;
            if (cell.empty() || cell == "?") {
                if (c == p) {
                    data_error("row " + std::to_string(row) + ": target value is missing");
                }
                value = std::numeric_limits<double>::quiet_NaN();
            } else {
                auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
                if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
                    data_error("row " + std::to_string(row) + ", column \"" + col.name +
                               "\": cannot parse \"" + cell + "\" as a number");
                }
                if (col.kind == ValueKind::Coded) {
                    if (value != std::floor(value) || value < col.code_min ||
                        value > col.code_max) {
                        data_error("row " + std::to_string(row) + ", column \"" + col.name +
                                   "\": value " + cell + " outside coded range [" +
                                   std::to_string(col.code_min) + ", " +
                                   std::to_string(col.code_max) + "]");
                    }
                }
            }
            if (c < p) {
                ds.features.values.push_back(value);
            } else {
                ds.target.push_back(static_cast<int>(value));
            }
        }
        ds.row_ids.push_back(static_cast<std::int64_t>(row - 1));
    }
    ds.features.rows = row;
    return ds;
}

void save_csv(const Dataset& ds, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw Error(Stage::Io, ErrorKind::Io, "cannot write file: " + path.string());
    }
    for (std::size_t c = 0; c < ds.schema.columns.size(); ++c) {
        if (c > 0) out << ',';
        out << ds.schema.columns[c].name;
    }
    out << '\n';
    for (std::size_t r = 0; r < ds.size(); ++r) {
        for (std::size_t c = 0; c < ds.features.cols; ++c) {
            if (c > 0) out << ',';
            const double v = ds.features.at(r, c);
            out << (std::isnan(v) ? "?" : format_double(v));
        }
        out << ',' << ds.target[r] << '\n';
    }
}

SplitIndices train_test_split(std::size_t n_rows, double test_fraction, std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw Error(Stage::Data, ErrorKind::Config,
                    "test fraction must lie strictly between 0 and 1");
    }
    if (n_rows < 2) {
        throw Error(Stage::Data, ErrorKind::Validation,
                    "need at least 2 rows to split");
    }
    const auto test_size =
        static_cast<std::size_t>(std::ceil(test_fraction * static_cast<double>(n_rows)));
    if (test_size == 0 || test_size >= n_rows) {
        throw Error(Stage::Data, ErrorKind::Config,
                    "degenerate split: test size " + std::to_string(test_size) + " of " +
                        std::to_string(n_rows) + " rows");
    }

    std::vector<std::size_t> order(n_rows);
    for (std::size_t i = 0; i < n_rows; ++i) order[i] = i;
    Rng rng(seed);
    rng.shuffle(order);

    SplitIndices split;
    split.seed = seed;
    split.test_fraction = test_fraction;
    split.train_rows.assign(order.begin(), order.end() - static_cast<std::ptrdiff_t>(test_size));
    split.test_rows.assign(order.end() - static_cast<std::ptrdiff_t>(test_size), order.end());
    return split;
}

SplitIndices train_test_split(const Dataset& ds, double test_fraction, std::uint64_t seed) {
    return train_test_split(ds.size(), test_fraction, seed);
}

std::vector<std::size_t> FoldPlan::fold_rows(std::size_t fold) const {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        if (assignments[i] == fold) rows.push_back(i);
    }
    return rows;
}

std::vector<std::size_t> FoldPlan::complement_rows(std::size_t fold) const {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        if (assignments[i] != fold) rows.push_back(i);
    }
    return rows;
}

FoldPlan stratified_kfold(std::span<const int> target, std::size_t k, std::uint64_t seed) {
    if (k < 2) {
        throw Error(Stage::Data, ErrorKind::Config, "fold count must be at least 2");
    }
    FoldPlan plan;
    plan.k = k;
    plan.seed = seed;
    plan.assignments.assign(target.size(), 0);

    Rng rng(seed);
    std::size_t cursor = 0;
    for (int cls = 0; cls <= 1; ++cls) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < target.size(); ++i) {
            if (target[i] == cls) members.push_back(i);
        }
        if (members.size() < k) {
            throw Error(Stage::Data, ErrorKind::Validation,
                        "class " + std::to_string(cls) + " has " +
                            std::to_string(members.size()) + " rows, fewer than k=" +
                            std::to_string(k));
        }
        rng.shuffle(members);
        for (std::size_t row : members) {
            plan.assignments[row] = cursor % k;
            ++cursor;
        }
    }
    return plan;
}

}  // namespace heartml

#pragma once

#include <Eigen/Dense>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gmcs/errors.hpp"
#include "gmcs/instance.hpp"

namespace gmcs {

inline constexpr int kInstanceSchemaVersion = 1;

struct InstanceFile {
    Instance inst;
    std::optional<Eigen::VectorXd> x0;
    std::optional<std::vector<int>> support0;
    std::optional<double> noise_var;
    nlohmann::json metadata;  // generator name, seed, params
};

inline void save_instance(const InstanceFile& file, const std::string& path) {
    nlohmann::json doc;
    doc["schema_version"] = kInstanceSchemaVersion;
    doc["M"] = file.inst.M();
    doc["N"] = file.inst.N();
    std::vector<double> a;
    a.reserve(static_cast<std::size_t>(file.inst.M()) * file.inst.N());
    for (int i = 0; i < file.inst.M(); ++i)
        for (int j = 0; j < file.inst.N(); ++j) a.push_back(file.inst.A()(i, j));
    doc["A"] = a;  // row-major
    doc["y"] = std::vector<double>(file.inst.y().data(), file.inst.y().data() + file.inst.M());
    if (file.x0)
        doc["x0"] = std::vector<double>(file.x0->data(), file.x0->data() + file.x0->size());
    if (file.support0) doc["support0"] = *file.support0;
    if (file.noise_var) doc["noise_var"] = *file.noise_var;
    if (!file.metadata.is_null()) doc["metadata"] = file.metadata;
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << doc.dump(2) << "\n";
}

inline InstanceFile load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    if (!doc.contains("schema_version") || doc["schema_version"].get<int>() != kInstanceSchemaVersion)
        throw SchemaVersionMismatch(path + ": unsupported schema version");
    const int m = doc.at("M").get<int>();
    const int n = doc.at("N").get<int>();
    const auto a = doc.at("A").get<std::vector<double>>();
    const auto yv = doc.at("y").get<std::vector<double>>();
    if (static_cast<long>(a.size()) != static_cast<long>(m) * n)
        throw ShapeMismatch(path + ": A has " + std::to_string(a.size()) + " entries, expected M*N");
    if (static_cast<int>(yv.size()) != m)
        throw ShapeMismatch(path + ": y length != M");
    Eigen::MatrixXd A(m, n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) A(i, j) = a[static_cast<std::size_t>(i) * n + j];
    Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(yv.data(), m);

    InstanceFile file{Instance(std::move(A), std::move(y)), std::nullopt, std::nullopt,
                      std::nullopt, nlohmann::json()};
    if (doc.contains("x0")) {
        const auto xv = doc["x0"].get<std::vector<double>>();
        if (static_cast<int>(xv.size()) != n) throw ShapeMismatch(path + ": x0 length != N");
        file.x0 = Eigen::Map<const Eigen::VectorXd>(xv.data(), n);
    }
    if (doc.contains("support0")) file.support0 = doc["support0"].get<std::vector<int>>();
    if (doc.contains("noise_var")) file.noise_var = doc["noise_var"].get<double>();
    if (doc.contains("metadata")) file.metadata = doc["metadata"];
    return file;
}

namespace detail {

inline std::vector<std::vector<double>> parse_csv(const std::string& path, bool skip_header) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (skip_header && lineno == 1) continue;
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        int col = 0;
        while (std::getline(ss, cell, ',')) {
            ++col;
            try {
                std::size_t used = 0;
                const double v = std::stod(cell, &used);
                while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used])))
                    ++used;
                if (used != cell.size()) throw std::invalid_argument("trailing junk");
                if (!std::isfinite(v)) throw std::invalid_argument("non-finite");
                row.push_back(v);
            } catch (const std::exception&) {
                throw ParseError(path + ": non-numeric cell at row " + std::to_string(lineno) +
                                 ", column " + std::to_string(col) + " ('" + cell + "')");
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace detail

// Predictors and response from separate CSV files (no header by default).
inline Instance load_csv(const std::string& path_A, const std::string& path_y,
                         bool skip_header = false) {
    const auto a_rows = detail::parse_csv(path_A, skip_header);
    const auto y_rows = detail::parse_csv(path_y, skip_header);
    if (a_rows.empty()) throw ShapeMismatch(path_A + ": no data rows");
    if (y_rows.size() != a_rows.size())
        throw ShapeMismatch("row count mismatch: " + path_A + " has " +
                            std::to_string(a_rows.size()) + " rows, " + path_y + " has " +
                            std::to_string(y_rows.size()));
    const std::size_t n = a_rows.front().size();
    Eigen::MatrixXd A(a_rows.size(), n);
    for (std::size_t i = 0; i < a_rows.size(); ++i) {
        if (a_rows[i].size() != n)
            throw ShapeMismatch(path_A + ": row " + std::to_string(i + 1) + " has " +
                                std::to_string(a_rows[i].size()) + " cells, expected " +
                                std::to_string(n));
        for (std::size_t j = 0; j < n; ++j) A(i, j) = a_rows[i][j];
    }
    Eigen::VectorXd y(y_rows.size());
    for (std::size_t i = 0; i < y_rows.size(); ++i) {
        if (y_rows[i].size() != 1)
            throw ShapeMismatch(path_y + ": row " + std::to_string(i + 1) +
                                " must have exactly one cell");
        y(i) = y_rows[i][0];
    }
    return Instance(std::move(A), std::move(y));
}

struct StandardizedData {
    Instance data;                  // centered, unit-norm columns; centered y
    Eigen::VectorXd column_means;
    Eigen::VectorXd column_norms;   // norms of the centered columns
    double y_mean;
};

// Center y and the columns of A, then scale each column to unit Euclidean
// norm. Transformation parameters are kept for back-transforming predictions.
inline StandardizedData standardize(const Instance& inst) {
    const int m = inst.M();
    const int n = inst.N();
    Eigen::MatrixXd A = inst.A();
    Eigen::VectorXd means(n), norms(n);
    for (int j = 0; j < n; ++j) {
        means(j) = A.col(j).mean();
        A.col(j).array() -= means(j);
        norms(j) = A.col(j).norm();
        if (norms(j) <= 1e-14 * std::max(1.0, std::abs(means(j)) * std::sqrt(double(m))))
            throw ZeroVarianceColumn(j);
        A.col(j) /= norms(j);
    }
    const double y_mean = inst.y().mean();
    Eigen::VectorXd y = inst.y().array() - y_mean;
    return StandardizedData{Instance(std::move(A), std::move(y)), std::move(means),
                            std::move(norms), y_mean};
}

}  // namespace gmcs

#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "wassproj/distributions.hpp"

namespace wassproj {

/// Doubles are rendered with 17 significant digits everywhere, enough to
/// reproduce the exact binary value on read-back.
std::string format_double(double value);

struct NamedDistribution {
    std::string id;
    EmpiricalDistribution dist;
};

/// Reads a distributions file in one of the two supported layouts, detected
/// from the header line:
///   samples:    dist_id,value
///   histograms: dist_id,edge_lo,edge_hi,mass
/// Rows are grouped by dist_id; groups are returned in order of first
/// appearance. Histogram rows of one distribution must be listed in edge
/// order and contiguous in the bins they describe. A file with only a
/// header yields an empty list. Malformed input raises CsvParseError with
/// the offending line number.
std::vector<NamedDistribution> read_distributions_csv(const std::string& path);

/// Writes distributions in the layout matching their kind; mixing sample
/// and histogram entries in one file is rejected. An empty list produces a
/// header-only file in the samples layout.
void write_distributions_csv(const std::string& path,
                             const std::vector<NamedDistribution>& dists);

struct CoefficientTable {
    std::vector<std::string> ids;
    Eigen::VectorXd w2_errors;
    Eigen::MatrixXd coeffs;  // one row per distribution
};

/// Coefficient files have the header dist_id,w2_error,a1,...,aJ with the
/// basis size inferred from the column count. A header-only file yields an
/// empty table.
CoefficientTable read_coefficients_csv(const std::string& path);
void write_coefficients_csv(const std::string& path, const CoefficientTable& table);

/// Writes a rectangular table with the given column names. When row_labels
/// is nonempty it becomes a leading label column named label_header.
void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& values,
                      const std::vector<std::string>& column_names,
                      const std::vector<std::string>& row_labels = {},
                      const std::string& label_header = "id");

}  // namespace wassproj

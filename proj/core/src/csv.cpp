#include "wassproj/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "wassproj/errors.hpp"

namespace wassproj {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream stream(line);
    while (std::getline(stream, field, ',')) {
        while (!field.empty() && (field.back() == '\r' || field.back() == ' '))
            field.pop_back();
        std::size_t start = 0;
        while (start < field.size() && field[start] == ' ') ++start;
        fields.push_back(field.substr(start));
    }
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

// std::from_chars instead of stod: stod throws on subnormals, which are
// legitimate values in 17-digit round-trip files.
double parse_double(const std::string& field, int line_no) {
    const char* begin = field.data();
    const char* end = begin + field.size();
    if (begin != end && *begin == '+') ++begin;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end || !std::isfinite(v))
        throw CsvParseError("expected a number, got '" + field + "'", line_no);
    return v;
}

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    return in;
}

}  // namespace

std::string format_double(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::vector<NamedDistribution> read_distributions_csv(const std::string& path) {
    std::ifstream in = open_or_throw(path);
    std::string line;
    int line_no = 0;

    if (!std::getline(in, line)) throw CsvParseError("empty file", 1);
    ++line_no;
    const std::vector<std::string> header = split_line(line);
    bool histogram = false;
    if (header.size() == 2 && header[0] == "dist_id" && header[1] == "value") {
        histogram = false;
    } else if (header.size() == 4 && header[0] == "dist_id" && header[1] == "edge_lo" &&
               header[2] == "edge_hi" && header[3] == "mass") {
        histogram = true;
    } else {
        throw CsvParseError(
            "header must be dist_id,value or dist_id,edge_lo,edge_hi,mass", line_no);
    }

    struct Group {
        std::vector<double> samples;
        std::vector<double> edges;
        std::vector<double> masses;
    };
    std::vector<std::string> order;
    std::map<std::string, Group> groups;

    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const std::vector<std::string> fields = split_line(line);
        if (fields.size() != header.size())
            throw CsvParseError("expected " + std::to_string(header.size()) + " fields", line_no);
        auto it = groups.find(fields[0]);
        if (it == groups.end()) {
            order.push_back(fields[0]);
            it = groups.emplace(fields[0], Group{}).first;
        }
        Group& g = it->second;
        if (!histogram) {
            g.samples.push_back(parse_double(fields[1], line_no));
        } else {
            const double lo = parse_double(fields[1], line_no);
            const double hi = parse_double(fields[2], line_no);
            const double mass = parse_double(fields[3], line_no);
            if (g.edges.empty()) {
                g.edges.push_back(lo);
            } else if (g.edges.back() != lo) {
                throw CsvParseError("histogram bins must be contiguous", line_no);
            }
            g.edges.push_back(hi);
            g.masses.push_back(mass);
        }
    }
    std::vector<NamedDistribution> out;
    out.reserve(order.size());
    for (const std::string& id : order) {
        Group& g = groups[id];
        try {
            out.push_back(
                {id, histogram
                         ? EmpiricalDistribution::from_histogram(std::move(g.edges),
                                                                 std::move(g.masses))
                         : EmpiricalDistribution::from_samples(std::move(g.samples))});
        } catch (const std::exception& e) {
            throw std::runtime_error("distribution '" + id + "': " + e.what());
        }
    }
    return out;
}

CoefficientTable read_coefficients_csv(const std::string& path) {
    std::ifstream in = open_or_throw(path);
    std::string line;
    int line_no = 0;

    if (!std::getline(in, line)) throw CsvParseError("empty file", 1);
    ++line_no;
    const std::vector<std::string> header = split_line(line);
    if (header.size() < 3 || header[0] != "dist_id" || header[1] != "w2_error")
        throw CsvParseError("header must be dist_id,w2_error,a1,...,aJ", line_no);
    const int J = static_cast<int>(header.size()) - 2;
    for (int j = 0; j < J; ++j)
        if (header[static_cast<std::size_t>(j + 2)] != "a" + std::to_string(j + 1))
            throw CsvParseError("coefficient columns must be named a1,...,aJ", line_no);

    CoefficientTable table;
    std::vector<double> errors;
    std::vector<Eigen::VectorXd> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const std::vector<std::string> fields = split_line(line);
        if (static_cast<int>(fields.size()) != J + 2)
            throw CsvParseError("expected " + std::to_string(J + 2) + " fields", line_no);
        table.ids.push_back(fields[0]);
        errors.push_back(parse_double(fields[1], line_no));
        Eigen::VectorXd row(J);
        for (int j = 0; j < J; ++j)
            row(j) = parse_double(fields[static_cast<std::size_t>(j + 2)], line_no);
        rows.push_back(std::move(row));
    }

    table.w2_errors = Eigen::Map<Eigen::VectorXd>(errors.data(),
                                                  static_cast<Eigen::Index>(errors.size()));
    table.coeffs.resize(static_cast<Eigen::Index>(rows.size()), J);
    for (std::size_t i = 0; i < rows.size(); ++i)
        table.coeffs.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
    return table;
}

void write_distributions_csv(const std::string& path,
                             const std::vector<NamedDistribution>& dists) {
    bool histogram = !dists.empty() && dists.front().dist.is_histogram();
    for (const auto& d : dists)
        if (d.dist.is_histogram() != histogram)
            throw std::invalid_argument(
                "write_distributions_csv: cannot mix sample and histogram layouts");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << (histogram ? "dist_id,edge_lo,edge_hi,mass" : "dist_id,value") << "\n";
    for (const auto& d : dists) {
        if (histogram) {
            for (std::size_t b = 0; b < d.dist.masses().size(); ++b)
                out << d.id << ',' << format_double(d.dist.edges()[b]) << ','
                    << format_double(d.dist.edges()[b + 1]) << ','
                    << format_double(d.dist.masses()[b]) << "\n";
        } else {
            for (double v : d.dist.samples()) out << d.id << ',' << format_double(v) << "\n";
        }
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

void write_coefficients_csv(const std::string& path, const CoefficientTable& table) {
    const Eigen::Index n = table.coeffs.rows();
    const Eigen::Index J = table.coeffs.cols();
    if (static_cast<Eigen::Index>(table.ids.size()) != n || table.w2_errors.size() != n)
        throw std::invalid_argument("write_coefficients_csv: inconsistent table");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << "dist_id,w2_error";
    for (Eigen::Index j = 0; j < J; ++j) out << ",a" << (j + 1);
    out << "\n";
    for (Eigen::Index i = 0; i < n; ++i) {
        out << table.ids[static_cast<std::size_t>(i)] << ','
            << format_double(table.w2_errors(i));
        for (Eigen::Index j = 0; j < J; ++j) out << ',' << format_double(table.coeffs(i, j));
        out << "\n";
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& values,
                      const std::vector<std::string>& column_names,
                      const std::vector<std::string>& row_labels,
                      const std::string& label_header) {
    if (static_cast<Eigen::Index>(column_names.size()) != values.cols())
        throw std::invalid_argument("write_matrix_csv: column name count mismatch");
    const bool labeled = !row_labels.empty();
    if (labeled && static_cast<Eigen::Index>(row_labels.size()) != values.rows())
        throw std::invalid_argument("write_matrix_csv: row label count mismatch");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    if (labeled) out << label_header << (values.cols() > 0 ? "," : "");
    for (std::size_t c = 0; c < column_names.size(); ++c)
        out << column_names[c] << (c + 1 < column_names.size() ? "," : "");
    out << "\n";
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
        if (labeled) out << row_labels[static_cast<std::size_t>(i)] << (values.cols() > 0 ? "," : "");
        for (Eigen::Index j = 0; j < values.cols(); ++j)
            out << format_double(values(i, j)) << (j + 1 < values.cols() ? "," : "");
        out << "\n";
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace wassproj

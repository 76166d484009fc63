#include "wassproj/model_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace wassproj {

namespace {

using nlohmann::json;

json vector_to_json(const Eigen::VectorXd& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

Eigen::VectorXd vector_from_json(const json& arr) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(arr.size()));
    Eigen::Index i = 0;
    for (const auto& x : arr) v(i++) = x.get<double>();
    return v;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const json& rows, const char* what) {
    const auto r = static_cast<Eigen::Index>(rows.size());
    Eigen::Index c = -1;
    Eigen::MatrixXd m;
    for (Eigen::Index i = 0; i < r; ++i) {
        const json& row = rows[static_cast<std::size_t>(i)];
        if (c < 0) {
            c = static_cast<Eigen::Index>(row.size());
            m.resize(r, c);
        }
        if (static_cast<Eigen::Index>(row.size()) != c)
            throw std::runtime_error(std::string(what) + ": ragged matrix rows");
        for (Eigen::Index j = 0; j < c; ++j)
            m(i, j) = row[static_cast<std::size_t>(j)].get<double>();
    }
    if (r == 0) m.resize(0, 0);
    return m;
}

json parse_or_throw(const std::string& text) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw std::runtime_error("model JSON is malformed");
    return doc;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace

std::string serialize_pca_model(const PcaModel& model) {
    json doc;
    doc["type"] = "pca_model";
    doc["basis_size"] = model.basis.J;
    doc["method"] = model.method;
    doc["center"] = vector_to_json(model.center);
    doc["directions"] = matrix_to_json(model.directions);
    doc["eigenvalues"] = vector_to_json(model.eigenvalues);
    return doc.dump(2);
}

PcaModel deserialize_pca_model(const std::string& text) {
    const json doc = parse_or_throw(text);
    if (doc.value("type", "") != "pca_model")
        throw std::runtime_error("not a pca_model document");
    PcaModel model;
    try {
        model.basis = make_basis(doc.at("basis_size").get<int>());
        model.method = doc.at("method").get<std::string>();
        model.center = vector_from_json(doc.at("center"));
        model.directions = matrix_from_json(doc.at("directions"), "directions");
        model.eigenvalues = vector_from_json(doc.at("eigenvalues"));
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("pca_model: ") + e.what());
    }
    const int J = model.basis.J;
    if (model.center.size() != J || model.directions.rows() != J)
        throw std::runtime_error("pca_model: shape mismatch with basis size");
    GramPair gram = gram_matrices(model.basis);
    model.E = std::move(gram.E);
    model.G = difference_matrix(J);
    return model;
}

void save_pca_model(const std::string& path, const PcaModel& model) {
    write_file(path, serialize_pca_model(model) + "\n");
}

PcaModel load_pca_model(const std::string& path) {
    return deserialize_pca_model(read_file(path));
}

std::string serialize_regression_model(const RegressionModel& model) {
    json doc;
    doc["type"] = "regression_model";
    doc["basis_size"] = model.basis.J;
    doc["rho"] = model.rho;
    doc["intercept"] = model.intercept;
    doc["theta_alpha"] = vector_to_json(model.theta_alpha);
    json thetas = json::array();
    for (const auto& t : model.thetas) thetas.push_back(matrix_to_json(t));
    doc["thetas"] = std::move(thetas);
    json means = json::array();
    for (const auto& m : model.z_means) means.push_back(vector_to_json(m));
    doc["z_means"] = std::move(means);
    doc["y_mean"] = vector_to_json(model.y_mean);
    return doc.dump(2);
}

RegressionModel deserialize_regression_model(const std::string& text) {
    const json doc = parse_or_throw(text);
    if (doc.value("type", "") != "regression_model")
        throw std::runtime_error("not a regression_model document");
    RegressionModel model;
    try {
        model.basis = make_basis(doc.at("basis_size").get<int>());
        model.rho = doc.at("rho").get<double>();
        model.intercept = doc.at("intercept").get<bool>();
        model.theta_alpha = vector_from_json(doc.at("theta_alpha"));
        for (const auto& t : doc.at("thetas"))
            model.thetas.push_back(matrix_from_json(t, "thetas"));
        for (const auto& m : doc.at("z_means"))
            model.z_means.push_back(vector_from_json(m));
        model.y_mean = vector_from_json(doc.at("y_mean"));
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("regression_model: ") + e.what());
    }
    const int J = model.basis.J;
    if (model.theta_alpha.size() != J)
        throw std::runtime_error("regression_model: shape mismatch with basis size");
    for (const auto& t : model.thetas)
        if (t.rows() != J || t.cols() != J)
            throw std::runtime_error("regression_model: kernel shape mismatch");
    GramPair gram = gram_matrices(model.basis);
    model.E = std::move(gram.E);
    model.G = difference_matrix(J);
    return model;
}

void save_regression_model(const std::string& path, const RegressionModel& model) {
    write_file(path, serialize_regression_model(model) + "\n");
}

RegressionModel load_regression_model(const std::string& path) {
    return deserialize_regression_model(read_file(path));
}

}  // namespace wassproj

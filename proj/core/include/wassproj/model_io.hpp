#pragma once

#include <string>

#include "wassproj/projected_pca.hpp"
#include "wassproj/projected_regression.hpp"

namespace wassproj {

/// JSON (de)serialization of fitted models. Doubles survive a round trip
/// bit for bit. Gram and difference matrices are not stored; they are
/// rebuilt from the basis size on load. Loading validates the document
/// type tag and shape consistency and throws std::runtime_error on
/// mismatch.

std::string serialize_pca_model(const PcaModel& model);
PcaModel deserialize_pca_model(const std::string& text);
void save_pca_model(const std::string& path, const PcaModel& model);
PcaModel load_pca_model(const std::string& path);

std::string serialize_regression_model(const RegressionModel& model);
RegressionModel deserialize_regression_model(const std::string& text);
void save_regression_model(const std::string& path, const RegressionModel& model);
RegressionModel load_regression_model(const std::string& path);

}  // namespace wassproj

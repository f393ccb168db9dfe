#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

namespace phl {

// Full-precision scientific notation ("%.17e"); round-trips every double.
std::string format_double(double value);

// Row-major CSV with LF line endings. Write failures throw IoError.
void write_csv(const std::filesystem::path& path, const Eigen::MatrixXd& values);
void write_table(const std::filesystem::path& path, const std::vector<std::string>& header,
                 const std::vector<std::vector<double>>& rows);
// Numeric CSV without a header. Throws IoError if unreadable, ConfigError on ragged or
// non-numeric content.
Eigen::MatrixXd read_csv(const std::filesystem::path& path);

void write_json(const std::filesystem::path& path, const nlohmann::json& doc);
nlohmann::json read_json(const std::filesystem::path& path);

// Creates the directory (and parents) if needed; throws IoError on failure.
void ensure_directory(const std::filesystem::path& dir);

}  // namespace phl

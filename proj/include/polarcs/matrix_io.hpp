#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "polarcs/sensing_matrix.hpp"
#include "polarcs/types.hpp"

namespace polarcs {

/// Matrix files are JSON objects {"rows": R, "cols": C, "data": [...]}
/// with row-major data, reals printed with 17 significant digits.
/// Readers throw InvalidParameter on malformed input.

std::string format_real(double v);  // %.17g; throws on non-finite values
std::string matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const std::string& text);

/// {"M", "N", "good", "bad", "H", "A", "A_b", "F"} in one document,
/// indices 0-based.
std::string system_to_json(const SensingSystem& s);

/// Measurement-side data read back from a matrix or system file. Only F is
/// mandatory; A, A_b, good and bad are present when the file came from
/// system_to_json.
struct LoadedSystem {
  Matrix F;
  bool has_coding = false;
  SensingSystem system;
};
LoadedSystem system_from_json(const std::string& text);

void write_vector_csv(std::ostream& out, const Vector& v);
/// One value per line or comma separated; blank lines are ignored.
Vector vector_from_csv(const std::string& text);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);

/// .json files hold a single-row or single-column matrix, anything else is CSV.
Vector load_vector(const std::filesystem::path& path);

}  // namespace polarcs

#include "polarcs/matrix_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "polarcs/errors.hpp"

namespace polarcs {

using nlohmann::json;

std::string format_real(double v) {
  if (!std::isfinite(v)) throw InvalidParameter("cannot serialize a non-finite value");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string matrix_to_json(const Matrix& m) {
  std::string out = "{\"rows\": " + std::to_string(m.rows()) +
                    ", \"cols\": " + std::to_string(m.cols()) + ", \"data\": [";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (i + j > 0) out += ", ";
      out += format_real(m(i, j));
    }
  }
  out += "]}";
  return out;
}

namespace {

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidParameter(std::string("malformed JSON: ") + e.what());
  }
}

Matrix matrix_from(const json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data")) {
    throw InvalidParameter("matrix object needs rows, cols and data");
  }
  const json& rows = j.at("rows");
  const json& cols = j.at("cols");
  const json& data = j.at("data");
  if (!rows.is_number_unsigned() || !cols.is_number_unsigned() || !data.is_array()) {
    throw InvalidParameter("matrix rows/cols must be non-negative integers and data an array");
  }
  const auto r = rows.get<std::size_t>();
  const auto c = cols.get<std::size_t>();
  if (data.size() != r * c) throw InvalidParameter("matrix data length does not match rows * cols");
  Matrix m(r, c);
  for (std::size_t k = 0; k < data.size(); ++k) {
    if (!data[k].is_number()) throw InvalidParameter("matrix data must be numeric");
    m(k / c, k % c) = data[k].get<double>();
  }
  return m;
}

IndexSet indices_from(const json& j) {
  if (!j.is_array()) throw InvalidParameter("index list must be an array");
  IndexSet out;
  for (const json& v : j) {
    if (!v.is_number_unsigned()) throw InvalidParameter("indices must be non-negative integers");
    out.push_back(v.get<std::size_t>());
  }
  return out;
}

std::string indices_to_json(const IndexSet& s) {
  std::string out = "[";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(s[i]);
  }
  return out + "]";
}

}  // namespace

Matrix matrix_from_json(const std::string& text) { return matrix_from(parse(text)); }

std::string system_to_json(const SensingSystem& s) {
  std::string out = "{\n";
  out += "  \"M\": " + std::to_string(s.M) + ",\n";
  out += "  \"N\": " + std::to_string(s.N) + ",\n";
  out += "  \"good\": " + indices_to_json(s.good) + ",\n";
  out += "  \"bad\": " + indices_to_json(s.bad) + ",\n";
  out += "  \"H\": " + matrix_to_json(s.H) + ",\n";
  out += "  \"A\": " + matrix_to_json(s.A) + ",\n";
  out += "  \"A_b\": " + matrix_to_json(s.A_b) + ",\n";
  out += "  \"F\": " + matrix_to_json(s.F) + "\n}\n";
  return out;
}

LoadedSystem system_from_json(const std::string& text) {
  const json j = parse(text);
  LoadedSystem out;
  if (!j.is_object() || !j.contains("F")) {
    out.F = matrix_from(j);
    return out;
  }
  out.F = matrix_from(j.at("F"));
  if (j.contains("A") && j.contains("A_b") && j.contains("good") && j.contains("bad")) {
    SensingSystem& s = out.system;
    s.A = matrix_from(j.at("A"));
    s.A_b = matrix_from(j.at("A_b"));
    s.good = indices_from(j.at("good"));
    s.bad = indices_from(j.at("bad"));
    if (j.contains("H")) s.H = matrix_from(j.at("H"));
    s.F = out.F;
    s.M = static_cast<std::size_t>(s.A.rows());
    s.N = static_cast<std::size_t>(s.A.cols());
    if (s.A_b.rows() != s.A.rows() || s.F.cols() != s.A.rows() ||
        s.F.rows() != s.A_b.cols() || s.good.size() != s.N || s.bad.size() != s.M - s.N) {
      throw InvalidParameter("inconsistent system dimensions");
    }
    out.has_coding = true;
  }
  return out;
}

void write_vector_csv(std::ostream& out, const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) out << format_real(v[i]) << '\n';
}

Vector vector_from_csv(const std::string& text) {
  std::vector<double> values;
  std::string token;
  auto flush = [&] {
    const auto first = token.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
      token.clear();
      return;
    }
    const auto last = token.find_last_not_of(" \t\r");
    const std::string t = token.substr(first, last - first + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != t.size()) throw InvalidParameter("not a number: '" + t + "'");
    values.push_back(v);
    token.clear();
  };
  for (char ch : text) {
    if (ch == ',' || ch == '\n') {
      flush();
    } else {
      token += ch;
    }
  }
  flush();
  return Eigen::Map<Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidParameter("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidParameter("cannot write " + path.string());
  out << contents;
  if (!out) throw InvalidParameter("write failed: " + path.string());
}

Vector load_vector(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  if (path.extension() == ".json") {
    const Matrix m = matrix_from_json(text);
    if (m.rows() != 1 && m.cols() != 1) throw InvalidParameter("expected a single row or column");
    return Eigen::Map<const Vector>(m.data(), m.size());
  }
  return vector_from_csv(text);
}

}  // namespace polarcs

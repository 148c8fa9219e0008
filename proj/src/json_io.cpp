#include "sknet/json_io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "sknet/errors.hpp"

namespace sknet {

std::string format_f17(double v) {
  if (v == 0.0) v = 0.0;  // canonicalize -0 so serializations are byte-stable
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string matrix_to_json(const UMatrix& m) {
  std::ostringstream out;
  out << "{\"dim\": " << m.dim() << ", \"entries\": [";
  bool first = true;
  for (int i = 0; i < m.dim(); ++i) {
    for (int j = 0; j < m.dim(); ++j) {
      if (!first) out << ", ";
      first = false;
      const Complex z = m(i, j);
      out << "[" << format_f17(z.real()) << ", " << format_f17(z.imag()) << "]";
    }
  }
  out << "]}";
  return out.str();
}

UMatrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("entries"))
    throw ValidationError("matrix JSON: expected {dim, entries}");
  const int d = j.at("dim").get<int>();
  if (d < 1 || d > 64) throw ValidationError("matrix JSON: dim out of range");
  const auto& entries = j.at("entries");
  if (!entries.is_array() || static_cast<int>(entries.size()) != d * d)
    throw ValidationError("matrix JSON: entries must hold dim*dim [re, im] pairs");
  UMatrix m(d);
  for (int k = 0; k < d * d; ++k) {
    const auto& pair = entries.at(k);
    if (!pair.is_array() || pair.size() != 2)
      throw ValidationError("matrix JSON: each entry must be [re, im]");
    m(k / d, k % d) = Complex(pair.at(0).get<double>(), pair.at(1).get<double>());
  }
  if (!m.all_finite()) throw ValidationError("matrix JSON: non-finite entries");
  return m;
}

UMatrix matrix_from_json_text(const std::string& text) {
  return matrix_from_json(nlohmann::json::parse(text));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write file: " + path);
  out << data;
}

std::string content_hash(const std::string& canonical) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace sknet

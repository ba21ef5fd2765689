#pragma once
// Serialization helpers.  All floating-point output goes through
// format_double (shortest round-trip form via std::to_chars) so that files
// written on different runs or machines compare byte for byte.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fvlab/mac.hpp"
#include "fvlab/mesh.hpp"
#include "fvlab/transport.hpp"

namespace fvlab {

inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// 64-bit FNV-1a; used to fingerprint configurations in reports.
inline std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[v & 0xF];
    v >>= 4;
  }
  return out;
}

inline nlohmann::json mesh_to_json(const Mesh1D& mesh) {
  return nlohmann::json{{"faces", mesh.faces}, {"points", mesh.points}};
}

inline Mesh1D mesh_from_json(const nlohmann::json& j) {
  Mesh1D mesh;
  mesh.faces = j.at("faces").get<std::vector<double>>();
  mesh.points = j.at("points").get<std::vector<double>>();
  mesh.validate();
  return mesh;
}

// One row per (time level, cell): n,i,x_i,value.
inline std::string scheme_run_to_csv(const SchemeRun& run) {
  std::ostringstream out;
  out << "n,i,x_i,value\n";
  for (std::size_t n = 0; n < run.history.size(); ++n) {
    const CellField& field = run.history[n];
    for (std::size_t i = 0; i < field.values.size(); ++i)
      out << n << ',' << i << ',' << format_double(run.mesh->points[i]) << ','
          << format_double(field.values[i]) << '\n';
  }
  return out.str();
}

inline nlohmann::json mac_grid_to_json(const MacGrid& grid) {
  return nlohmann::json{{"x_faces", grid.x_faces}, {"y_faces", grid.y_faces}};
}

inline MacGrid mac_grid_from_json(const nlohmann::json& j) {
  return MacGrid::build(j.at("x_faces").get<std::vector<double>>(),
                        j.at("y_faces").get<std::vector<double>>());
}

inline nlohmann::json mac_state_to_json(const MacState& state) {
  return nlohmann::json{
      {"time", state.time}, {"rho", state.rho}, {"u", state.u}, {"v", state.v}};
}

inline MacState mac_state_from_json(const nlohmann::json& j) {
  MacState s;
  s.time = j.at("time").get<double>();
  s.rho = j.at("rho").get<std::vector<double>>();
  s.u = j.at("u").get<std::vector<double>>();
  s.v = j.at("v").get<std::vector<double>>();
  return s;
}

inline void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_text_file: cannot open " + path);
  out << contents;
  if (!out) throw std::runtime_error("write_text_file: write failed for " + path);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_text_file: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace fvlab

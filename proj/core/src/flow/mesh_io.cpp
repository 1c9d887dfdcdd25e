#include "symflow/flow/mesh_io.hpp"

#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace symflow::flow {

namespace {

void expect_header(std::istream& is, const std::string& word, std::size_t& count) {
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string w;
    if (!(ls >> w >> count) || w != word) throw std::runtime_error("read_snapshot: expected '" + word + " <count>'");
    return;
  }
  throw std::runtime_error("read_snapshot: missing '" + word + "' section");
}

}  // namespace

void write_snapshot(std::ostream& os, const SurfaceMesh& mesh, const std::vector<std::string>& comments) {
  os << "# symflow mesh snapshot\n";
  for (const auto& c : comments) os << "# " << c << '\n';
  os << "vertices " << mesh.vertices.size() << '\n' << std::setprecision(17);
  for (const auto& p : mesh.vertices) {
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) os << p(r, c).real() << ' ' << p(r, c).imag() << (r == 2 && c == 2 ? '\n' : ' ');
  }
  os << "triangles " << mesh.triangles.size() << '\n';
  for (const auto& t : mesh.triangles) os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

SurfaceMesh read_snapshot(std::istream& is) {
  SurfaceMesh mesh;
  std::size_t n = 0;
  expect_header(is, "vertices", n);
  mesh.vertices.resize(n);
  for (auto& p : mesh.vertices)
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) {
        double re = 0.0, im = 0.0;
        if (!(is >> re >> im)) throw std::runtime_error("read_snapshot: truncated vertex data");
        p(r, c) = {re, im};
      }
  std::size_t m = 0;
  expect_header(is, "triangles", m);
  mesh.triangles.resize(m);
  for (auto& t : mesh.triangles) {
    if (!(is >> t[0] >> t[1] >> t[2])) throw std::runtime_error("read_snapshot: truncated triangle data");
    for (int v : t)
      if (v < 0 || static_cast<std::size_t>(v) >= n) throw std::runtime_error("read_snapshot: vertex index out of range");
  }
  return mesh;
}

const std::vector<std::string>& diagnostics_columns() {
  static const std::vector<std::string> cols = {"step",    "t",        "dt",          "min_cos",
                                                "max_cos", "int_sin2_over_cos", "int_cos", "area",
                                                "max_Hsq", "max_Q",    "residual",    "density_sample"};
  return cols;
}

void write_diagnostics_csv(std::ostream& os, const std::vector<FlowRecord>& records) {
  const auto& cols = diagnostics_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) os << cols[i] << (i + 1 < cols.size() ? ',' : '\n');
  os << std::setprecision(12);
  for (const auto& r : records) {
    os << r.step << ',' << r.t << ',' << r.dt << ',' << r.min_cos << ',' << r.max_cos << ',' << r.int_sin2_over_cos
       << ',' << r.int_cos << ',' << r.area << ',' << r.max_hsq << ',' << r.max_q << ',' << r.residual << ','
       << r.density_sample << '\n';
  }
}

}  // namespace symflow::flow

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "symflow/flow/flow.hpp"

namespace symflow::flow {

/// Plain-text snapshot:
///
///   # symflow mesh snapshot            (any number of '#' comment lines)
///   vertices N
///   18 numbers per vertex: re, im of P00 P01 P02 P10 ... P22 (row-major)
///   triangles M
///   3 zero-based vertex indices per triangle
void write_snapshot(std::ostream& os, const SurfaceMesh& mesh, const std::vector<std::string>& comments = {});
/// Throws std::runtime_error on malformed input.
SurfaceMesh read_snapshot(std::istream& is);

/// Column order of the diagnostics CSV.
const std::vector<std::string>& diagnostics_columns();
void write_diagnostics_csv(std::ostream& os, const std::vector<FlowRecord>& records);

}  // namespace symflow::flow

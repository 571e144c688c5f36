#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "qfield/field_state.hpp"

namespace qfield::io {

/// "t,M0,P0,M1,P1,...,M<nmax>,P<nmax>,X,H,boundary_max"
std::string diagnostics_header(int nmax);

/// Writes the header and one row per record in round-trip precision.
/// Throws IoError if the sink fails.
void write_diagnostics_csv(const std::vector<DiagnosticsRecord<double>>& records,
                           std::ostream& sink, int nmax);

/// Parses a stream produced by write_diagnostics_csv.
std::vector<DiagnosticsRecord<double>> read_diagnostics_csv(std::istream& source);

}  // namespace qfield::io

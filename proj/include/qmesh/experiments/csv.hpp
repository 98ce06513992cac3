#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "qmesh/experiments/experiments.hpp"

namespace qmesh {

/// 12 significant digits; integral values keep a trailing ".0"; NaN prints as "nan".
std::string format_real(double x);

void write_sweep_csv(std::ostream& out, const std::vector<RowRecord>& rows);
void write_fig2_csv(std::ostream& out, const std::vector<Fig2Row>& rows);
void write_packets_csv(std::ostream& out, const std::vector<PacketRow>& rows);

/// Writes text to path; throws IoError when the file cannot be written.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace qmesh

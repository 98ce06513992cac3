#include "qmesh/experiments/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "qmesh/core/errors.hpp"

namespace qmesh {

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  std::string s(buf);
  if (s == "-0") s = "0";
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

void write_sweep_csv(std::ostream& out, const std::vector<RowRecord>& rows) {
  out << "node_count,R,p,n,runs,route_found_rate,mean_hops,mean_P_suc,stderr,packets_piggyback,packets_separate\n";
  for (const RowRecord& r : rows) {
    out << r.node_count << ',' << format_real(r.range) << ',' << format_real(r.p) << ',' << format_real(r.n) << ','
        << r.runs << ',' << format_real(r.route_found_rate) << ',' << format_real(r.mean_hops) << ','
        << format_real(r.mean_p_suc) << ',' << format_real(r.stderr_p_suc) << ',' << format_real(r.packets_piggyback)
        << ',' << format_real(r.packets_separate) << '\n';
  }
}

void write_fig2_csv(std::ostream& out, const std::vector<Fig2Row>& rows) {
  out << "i,n,P\n";
  for (const Fig2Row& r : rows) out << r.i << ',' << format_real(r.n) << ',' << format_real(r.p) << '\n';
}

void write_packets_csv(std::ostream& out, const std::vector<PacketRow>& rows) {
  out << "hops,piggyback,separate,piggyback_non_qrr,separate_non_qrr\n";
  for (const PacketRow& r : rows) {
    out << r.hops << ',' << r.piggyback << ',' << r.separate << ',' << r.piggyback_non_qrr << ',' << r.separate_non_qrr
        << '\n';
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path + " for writing");
  f << text;
  f.flush();
  if (!f) throw IoError("failed writing " + path);
}

}  // namespace qmesh

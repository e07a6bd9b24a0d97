#include "enaqt/csv.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>

namespace enaqt::csv {

std::string format(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

double parse_double(const std::string& text) {
  std::size_t first = text.find_first_not_of(" \t\r");
  std::size_t last = text.find_last_not_of(" \t\r");
  if (first == std::string::npos) throw InvalidArgument("empty numeric field");
  const char* begin = text.data() + first;
  const char* end = text.data() + last + 1;
  if (*begin == '+') ++begin;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw InvalidArgument("not a number: '" + text + "'");
  }
  return value;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  for (auto& f : fields) {
    const auto a = f.find_first_not_of(" \t\r");
    const auto b = f.find_last_not_of(" \t\r");
    f = a == std::string::npos ? std::string() : f.substr(a, b - a + 1);
  }
  return fields;
}

void write_sweep(std::ostream& out, const SweepTable& table) {
  out << kUnitsComment << '\n' << kSweepHeader << '\n';
  for (const auto& r : table.rows) {
    out << format(r.disorder) << ',' << format(r.dephasing) << ',' << format(r.eta_mean) << ','
        << format(r.eta_stderr) << ',' << r.n << ',' << format(r.eta_loss_mean) << '\n';
  }
}

SweepTable read_sweep(std::istream& in) {
  SweepTable table;
  std::string line;
  bool header_seen = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (split(line) != split(kSweepHeader)) {
        throw InvalidArgument("sweep CSV: unexpected header '" + line + "'");
      }
      header_seen = true;
      continue;
    }
    const auto f = split(line);
    if (f.size() != 6) {
      throw InvalidArgument("sweep CSV line " + std::to_string(line_no) + ": expected 6 fields");
    }
    SweepRow row;
    row.disorder = parse_double(f[0]);
    row.dephasing = parse_double(f[1]);
    row.eta_mean = parse_double(f[2]);
    row.eta_stderr = parse_double(f[3]);
    row.n = static_cast<std::size_t>(parse_double(f[4]));
    row.eta_loss_mean = parse_double(f[5]);
    table.rows.push_back(row);
  }
  if (!header_seen) throw InvalidArgument("sweep CSV: missing header");
  return table;
}

void write_trap_observables(std::ostream& out, const TrapObservables& o) {
  out << kUnitsComment << '\n' << kTrajectoryHeader << '\n';
  for (std::size_t k = 0; k < o.times.size(); ++k) {
    out << format(o.times[k]) << ',' << format(o.rho11[k]) << ',' << format(o.im_rho12[k]) << ','
        << format(o.im_rho13[k]) << ',' << format(o.trace[k]) << '\n';
  }
}

void write_pure_trajectory(std::ostream& out, const PureTrajectory& trajectory,
                           const std::vector<std::size_t>& sites,
                           const std::vector<std::string>& labels) {
  out << kUnitsComment << '\n' << 't';
  for (std::size_t i = 0; i < sites.size(); ++i) {
    const std::string& name = i < labels.size() ? labels[i] : std::to_string(sites[i]);
    out << ",re_psi" << name << ",im_psi" << name;
  }
  out << ",norm2\n";
  for (std::size_t k = 0; k < trajectory.times.size(); ++k) {
    const ComplexVector& psi = trajectory.amplitudes[k];
    out << format(trajectory.times[k]);
    for (auto s : sites) {
      const Complex a = psi(static_cast<Eigen::Index>(s));
      out << ',' << format(a.real()) << ',' << format(a.imag());
    }
    out << ',' << format(psi.squaredNorm()) << '\n';
  }
}

void write_delta_max(std::ostream& out, const std::vector<DeltaMax>& profile) {
  out << kUnitsComment << '\n' << kDeltaMaxHeader << '\n';
  for (const auto& d : profile) {
    out << format(d.dephasing) << ',' << format(d.delta_max) << ',' << format(d.argmax_disorder)
        << ',' << format(d.eta_ordered) << ',' << format(d.eta_best) << ','
        << format(d.stderr_estimate) << '\n';
  }
}

}  // namespace enaqt::csv

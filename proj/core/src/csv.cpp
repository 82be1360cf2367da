#include "dremnet/csv.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace dremnet {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

void channel_header(std::ostream& os, const char* prefix, std::size_t d) {
  for (std::size_t l = 1; l <= d; ++l) os << ',' << prefix << l;
}

}  // namespace

void write_run_csv(std::ostream& os, const RunResult& r) {
  os << "k,i,error_norm";
  channel_header(os, "theta_hat_", r.d);
  os << '\n';
  for (Step k = 0; k <= r.horizon; ++k)
    for (SensorIndex i = 0; i < r.n; ++i) {
      os << k << ',' << i + 1 << ',' << format_number(r.error_norm(k, i));
      for (double v : r.estimate(k, i)) os << ',' << format_number(v);
      os << '\n';
    }
}

void write_aggregate_csv(std::ostream& os, const MonteCarloAggregate& a) {
  os << "k,i,mean_error_norm";
  for (std::size_t l = 1; l <= a.d; ++l) os << ",mean_error_" << l << ",var_error_" << l;
  os << '\n';
  for (Step k = 0; k <= a.horizon; ++k)
    for (SensorIndex i = 0; i < a.n; ++i) {
      os << k << ',' << i + 1 << ',' << format_number(a.error_norm(k, i));
      for (std::size_t l = 0; l < a.d; ++l)
        os << ',' << format_number(a.mean(k, i, l)) << ',' << format_number(a.variance(k, i, l));
      os << '\n';
    }
}

void write_message_csv(std::ostream& os, const std::vector<DremMessage>& messages, std::size_t d) {
  os << "k,i,delta_bar";
  channel_header(os, "ybar_", d);
  os << '\n';
  for (const auto& m : messages) {
    os << m.k << ',' << m.sensor + 1 << ',' << format_number(m.delta_bar);
    for (double v : m.ybar) os << ',' << format_number(v);
    os << '\n';
  }
}

void write_trace_csv(std::ostream& os, const RunResult& r) {
  os << "k,i,counter";
  channel_header(os, "theta_hat_", r.d);
  os << ",effective\n";
  for (Step k = 0; k <= r.horizon; ++k)
    for (SensorIndex i = 0; i < r.n; ++i) {
      os << k << ',' << i + 1 << ',' << r.counter(k, i);
      for (double v : r.estimate(k, i)) os << ',' << format_number(v);
      os << ',' << static_cast<int>(r.effective[static_cast<std::size_t>(k) * r.n + i]) << '\n';
    }
}

void write_oracle_csv(std::ostream& os, const MomentTrajectory& m) {
  os << "k,i,l,mean,cov_exact,cov_bound\n";
  for (Step k = 0; k <= m.horizon; ++k)
    for (SensorIndex i = 0; i < m.n; ++i)
      for (std::size_t l = 0; l < m.d; ++l) {
        const std::size_t c = m.at(k, i, l);
        os << k << ',' << i + 1 << ',' << l + 1 << ',' << format_number(m.mean[c]) << ','
           << format_number(m.cov_exact[c]) << ',' << format_number(m.cov_bound[c]) << '\n';
      }
}

void write_compare_csv(std::ostream& os, const MonteCarloAggregate& a, const MomentTrajectory& m) {
  if (a.n != m.n || a.d != m.d || a.horizon != m.horizon)
    throw std::invalid_argument("write_compare_csv: aggregate and oracle grids differ");
  os << "k,i,l,mc_mean,oracle_mean,mean_z,mc_var,oracle_cov,cov_bound,var_rel_err\n";
  const auto runs = static_cast<double>(a.runs);
  for (Step k = 0; k <= a.horizon; ++k)
    for (SensorIndex i = 0; i < a.n; ++i)
      for (std::size_t l = 0; l < a.d; ++l) {
        const std::size_t c = m.at(k, i, l);
        const double mc_mean = a.mean(k, i, l), mc_var = a.variance(k, i, l);
        const double se = std::sqrt(mc_var / runs);
        const double diff = mc_mean - m.mean[c];
        const double z = se > 0.0 ? diff / se : (diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
        const double rel = m.cov_exact[c] > 0.0 ? (mc_var - m.cov_exact[c]) / m.cov_exact[c] : 0.0;
        os << k << ',' << i + 1 << ',' << l + 1 << ',' << format_number(mc_mean) << ','
           << format_number(m.mean[c]) << ',' << format_number(z) << ',' << format_number(mc_var)
           << ',' << format_number(m.cov_exact[c]) << ',' << format_number(m.cov_bound[c]) << ','
           << format_number(rel) << '\n';
      }
}

void write_pe_csv(std::ostream& os, const ScenarioReport& rep) {
  os << "i,local_window,local_margin,single_window,single_margin,observed_bound,declared_bound\n";
  for (SensorIndex i = 0; i < rep.sensors.size(); ++i) {
    const auto& s = rep.sensors[i];
    os << i + 1 << ',' << (s.local_window ? std::to_string(*s.local_window) : "") << ','
       << format_number(s.local_margin) << ','
       << (s.single_window ? std::to_string(*s.single_window) : "") << ','
       << format_number(s.single_margin) << ',' << format_number(s.observed_bound) << ','
       << format_number(s.declared_bound) << '\n';
  }
}

void export_csv(const RunResult& r, const std::string& path) {
  export_csv(path, [&](std::ostream& os) { write_run_csv(os, r); });
}

void export_csv(const MonteCarloAggregate& a, const std::string& path) {
  export_csv(path, [&](std::ostream& os) { write_aggregate_csv(os, a); });
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t c = 0; c < header.size(); ++c)
    if (header[c] == name) return c;
  throw std::out_of_range("CSV column '" + name + "' not found");
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_cell(const std::string& cell, std::size_t line) {
  if (cell.empty()) return std::numeric_limits<double>::quiet_NaN();
  if (cell == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (cell == "inf") return std::numeric_limits<double>::infinity();
  if (cell == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (res.ec != std::errc() || res.ptr != cell.data() + cell.size())
    throw std::runtime_error("CSV line " + std::to_string(line) + ": bad number '" + cell + "'");
  return v;
}

}  // namespace

CsvTable read_csv(std::istream& is) {
  CsvTable t;
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("CSV: missing header");
  t.header = split(line);
  for (std::size_t n = 2; std::getline(is, line); ++n) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != t.header.size())
      throw std::runtime_error("CSV line " + std::to_string(n) + ": expected " +
                               std::to_string(t.header.size()) + " fields");
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(parse_cell(c, n));
    t.rows.push_back(std::move(row));
  }
  return t;
}

CsvTable read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return read_csv(in);
}

DeltaTrace traces_from_message_csv(const CsvTable& table, std::size_t n) {
  const std::size_t ck = table.column("k"), ci = table.column("i"), cd = table.column("delta_bar");
  Step last = -1;
  for (const auto& row : table.rows) last = std::max(last, static_cast<Step>(row[ck]));
  DeltaTrace out;
  out.per_sensor.assign(n, std::vector<double>(static_cast<std::size_t>(last + 1), 0.0));
  for (const auto& row : table.rows) {
    const auto i = static_cast<std::size_t>(row[ci]);
    if (i < 1 || i > n) throw std::runtime_error("message log: sensor id out of range");
    out.per_sensor[i - 1][static_cast<std::size_t>(row[ck])] = row[cd];
  }
  return out;
}

}  // namespace dremnet

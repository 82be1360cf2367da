#pragma once

// CSV exports. Plain ASCII, '.' decimal separator, shortest round-trip
// number formatting, one '\n'-terminated row per record; sensor ids and
// channels are 1-based.

#include <fstream>
#include <iosfwd>
#include <string>
#include <vector>

#include "dremnet/analysis.hpp"
#include "dremnet/check.hpp"
#include "dremnet/excitation.hpp"
#include "dremnet/simulation.hpp"

namespace dremnet {

std::string format_number(double v);

/// k,i,error_norm,theta_hat_1..theta_hat_d
void write_run_csv(std::ostream& os, const RunResult& r);
/// k,i,mean_error_norm,mean_error_1,var_error_1,...,mean_error_d,var_error_d
void write_aggregate_csv(std::ostream& os, const MonteCarloAggregate& a);
/// k,i,delta_bar,ybar_1..ybar_d
void write_message_csv(std::ostream& os, const std::vector<DremMessage>& messages, std::size_t d);
/// k,i,counter,theta_hat_1..theta_hat_d,effective
void write_trace_csv(std::ostream& os, const RunResult& r);
/// k,i,l,mean,cov_exact,cov_bound
void write_oracle_csv(std::ostream& os, const MomentTrajectory& m);
/// k,i,l,mc_mean,oracle_mean,mean_z,mc_var,oracle_cov,cov_bound,var_rel_err
void write_compare_csv(std::ostream& os, const MonteCarloAggregate& a, const MomentTrajectory& m);
/// i,local_window,local_margin,single_window,single_margin,observed_bound,declared_bound
void write_pe_csv(std::ostream& os, const ScenarioReport& rep);

/// Writes via `writer` to `path`; throws IoError naming the path.
template <typename Writer>
void export_csv(const std::string& path, Writer&& writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  writer(out);
  out.flush();
  if (!out) throw IoError("error writing '" + path + "'");
}

void export_csv(const RunResult& r, const std::string& path);
void export_csv(const MonteCarloAggregate& a, const std::string& path);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;  // empty fields parse as NaN

  std::size_t column(const std::string& name) const;
};

CsvTable read_csv(std::istream& is);
CsvTable read_csv_file(const std::string& path);

/// Rebuilds delta_bar traces from a message log (write_message_csv format).
DeltaTrace traces_from_message_csv(const CsvTable& table, std::size_t n);

}  // namespace dremnet

#include <istream>
#include <ostream>
#include <string>

#include "marswpt/errors.hpp"
#include "marswpt/sweep.hpp"
#include "text.hpp"

namespace marswpt {

void write_sweep_csv_row(std::ostream& out, const SweepRow& row) {
  using text::format_double;
  const auto& st = row.stats;
  out << to_string(row.axis) << ',' << format_double(row.axis_value) << ',';
  if (row.secondary) {
    out << to_string(*row.secondary) << ',' << format_double(row.secondary_value);
  } else {
    out << ',';
  }
  out << ',' << row.area << ',' << row.harvester << ',' << format_double(row.p_tx_w) << ','
      << format_double(row.distance_m) << ',' << st.n_samples << ',' << st.seed << ','
      << format_double(row.p_rx_median_dbm) << ',' << format_double(st.mean_uw) << ','
      << format_double(st.median_uw) << ',' << format_double(st.quantile_uw(0.05)) << ','
      << format_double(st.quantile_uw(0.95)) << ',' << st.clamp_count << ','
      << st.extrapolated_count << '\n';
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kSweepCsvHeader << '\n';
  for (const auto& row : rows) write_sweep_csv_row(out, row);
}

std::vector<SweepRow> read_sweep_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw InputError("empty sweep CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kSweepCsvHeader) throw InputError("unexpected sweep CSV header", line_no);

  std::vector<SweepRow> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = text::split(line, ',');
    if (f.size() != 17) {
      throw InputError("expected 17 columns, found " + std::to_string(f.size()), line_no);
    }
    const auto number = [&](std::size_t i) {
      const auto v = text::parse_double(f[i]);
      if (!v) throw InputError("column " + std::to_string(i + 1) + " is not a number", line_no);
      return *v;
    };
    const auto count = [&](std::size_t i) {
      const auto v = text::parse_uint(f[i]);
      if (!v) throw InputError("column " + std::to_string(i + 1) + " is not a count", line_no);
      return *v;
    };

    SweepRow row;
    const auto axis = parse_sweep_axis(f[0]);
    if (!axis) throw InputError("unknown axis '" + std::string(f[0]) + "'", line_no);
    row.axis = *axis;
    row.axis_value = number(1);
    if (!f[2].empty()) {
      row.secondary = parse_secondary_axis(f[2]);
      if (!row.secondary) throw InputError("unknown secondary '" + std::string(f[2]) + "'", line_no);
      row.secondary_value = number(3);
    }
    row.area = std::string(f[4]);
    row.harvester = std::string(f[5]);
    row.p_tx_w = number(6);
    row.distance_m = number(7);
    row.stats.n_samples = count(8);
    row.stats.seed = count(9);
    row.p_rx_median_dbm = number(10);
    row.stats.mean_uw = number(11);
    row.stats.median_uw = number(12);
    row.stats.quantiles_uw = {{0.05, number(13)}, {0.5, row.stats.median_uw}, {0.95, number(14)}};
    row.stats.clamp_count = count(15);
    row.stats.extrapolated_count = count(16);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace marswpt

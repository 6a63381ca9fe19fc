#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "aging/analysis.hpp"
#include "aging/params.hpp"

namespace aging::io {

/// Parses "start:stop:step" (see make_grid for the endpoint rule) or a
/// single number. Throws InvalidArgument naming `flag`.
std::vector<double> parse_grid(const std::string& text, const std::string& flag);
std::vector<int> parse_int_grid(const std::string& text, const std::string& flag);

/// Twelve significant digits, "nan" and "inf" spelled out.
std::string format_real(double value);

// CSV writers. Headers are fixed; see README for the schemas.
void write_sweep_csv(std::ostream& out, const SweepResult& sweep);
void write_sweep2d_csv(std::ostream& out, const Sweep2DResult& grid);
void write_basin_csv(std::ostream& out, const BasinGrid& basin);
void write_interval_csv(std::ostream& out, const BistableInterval& interval);
void write_compare_csv(std::ostream& out, const std::vector<CompareRow>& rows);

// Readers for the same schemas; throw Io on malformed input.
SweepResult read_sweep_csv(std::istream& in);
Sweep2DResult read_sweep2d_csv(std::istream& in);
BasinGrid read_basin_csv(std::istream& in);
BistableInterval read_interval_csv(std::istream& in);
std::vector<CompareRow> read_compare_csv(std::istream& in);

nlohmann::json to_json(const ModelParams& params);
nlohmann::json to_json(const SweepResult& sweep);
nlohmann::json to_json(const Sweep2DResult& grid);
nlohmann::json to_json(const BasinGrid& basin);
nlohmann::json to_json(const BistableInterval& interval);
nlohmann::json to_json(const std::vector<CompareRow>& rows);

/// Polyline plot of one or more series sharing an x axis.
struct Series {
  std::string name;
  std::vector<double> y;
};
std::string svg_line_plot(const std::vector<double>& x, const std::vector<Series>& series,
                          const std::string& x_label, const std::string& y_label);

/// Heatmap of row-major values over (rows x cols) with a grey colour scale.
std::string svg_heatmap(const std::vector<double>& values, std::size_t rows, std::size_t cols,
                        const std::string& row_label, const std::string& col_label);

}  // namespace aging::io

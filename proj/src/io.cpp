#include "aging/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "aging/errors.hpp"

namespace aging::io {

namespace {

double parse_real(std::string_view text, const std::string& what) {
  std::string s(text);
  if (s == "nan") return std::nan("");
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorKind::InvalidArgument, fmt::format("{}: '{}' is not a number", what, s));
  }
  return value;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

bool parse_flag(const std::string& text) {
  if (text == "1" || text == "true") return true;
  if (text == "0" || text == "false") return false;
  throw Error(ErrorKind::Io, fmt::format("expected 0/1, got '{}'", text));
}

// Reads a header-checked CSV body as rows of fields.
std::vector<std::vector<std::string>> read_rows(std::istream& in,
                                                const std::vector<std::string>& header,
                                                std::string* first_column = nullptr) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::Io, "empty CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto names = split(line, ',');
  if (first_column != nullptr && !names.empty()) {
    *first_column = names.front();
    names.front() = header.front();
  }
  if (names != header) {
    throw Error(ErrorKind::Io, fmt::format("unexpected CSV header '{}'", line));
  }
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split(line, ',');
    if (fields.size() != header.size()) {
      throw Error(ErrorKind::Io, fmt::format("CSV row '{}' has {} fields, expected {}", line,
                                             fields.size(), header.size()));
    }
    rows.push_back(std::move(fields));
  }
  return rows;
}

double field_real(const std::string& text) {
  try {
    return parse_real(text, "CSV field");
  } catch (const Error& e) {
    throw Error(ErrorKind::Io, e.what());
  }
}

// Distinct values in order of first appearance.
std::vector<double> distinct(const std::vector<double>& values) {
  std::vector<double> out;
  for (double v : values) {
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  }
  return out;
}

nlohmann::json jumps_json(const std::vector<JumpEvent>& jumps) {
  auto arr = nlohmann::json::array();
  for (const auto& j : jumps) arr.push_back({{"location", j.location}, {"drop", j.drop}});
  return arr;
}

}  // namespace

std::vector<double> parse_grid(const std::string& text, const std::string& flag) {
  const auto parts = split(text, ':');
  try {
    if (parts.size() == 1) return {parse_real(parts[0], flag)};
    if (parts.size() != 3) {
      throw Error(ErrorKind::InvalidArgument,
                  fmt::format("{}: expected start:stop:step, got '{}'", flag, text));
    }
    return make_grid(parse_real(parts[0], flag), parse_real(parts[1], flag),
                     parse_real(parts[2], flag));
  } catch (const Error& e) {
    if (std::string(e.what()).starts_with(flag)) throw;
    throw Error(ErrorKind::InvalidArgument, fmt::format("{}: {}", flag, e.what()));
  }
}

std::vector<int> parse_int_grid(const std::string& text, const std::string& flag) {
  std::vector<int> out;
  for (double v : parse_grid(text, flag)) {
    const double r = std::round(v);
    if (std::abs(v - r) > 1e-9) {
      throw Error(ErrorKind::InvalidArgument,
                  fmt::format("{}: grid value {} is not an integer", flag, v));
    }
    out.push_back(static_cast<int>(r));
  }
  return out;
}

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return fmt::format("{:.12g}", value);
}

void write_sweep_csv(std::ostream& out, const SweepResult& sweep) {
  out << sweep.axis_name << ",nbar,converged\n";
  for (std::size_t i = 0; i < sweep.axis.size(); ++i) {
    out << format_real(sweep.axis[i]) << ',' << format_real(sweep.nbar[i]) << ','
        << (sweep.converged[i] ? 1 : 0) << '\n';
  }
}

void write_sweep2d_csv(std::ostream& out, const Sweep2DResult& grid) {
  out << "x,p,nbar\n";
  for (std::size_t i = 0; i < grid.x.size(); ++i) {
    for (std::size_t j = 0; j < grid.p.size(); ++j) {
      out << format_real(grid.x[i]) << ',' << format_real(grid.p[j]) << ','
          << format_real(grid.at(i, j)) << '\n';
    }
  }
}

void write_basin_csv(std::ostream& out, const BasinGrid& basin) {
  out << "q0,a0,label\n";
  for (std::size_t i = 0; i < basin.q0_axis.size(); ++i) {
    for (std::size_t j = 0; j < basin.a0_axis.size(); ++j) {
      out << format_real(basin.q0_axis[i]) << ',' << format_real(basin.a0_axis[j]) << ','
          << to_string(basin.at(i, j)) << '\n';
    }
  }
}

void write_interval_csv(std::ostream& out, const BistableInterval& interval) {
  out << "p_cmin,p_cmax,clamped_upper\n"
      << format_real(interval.p_cmin) << ',' << format_real(interval.p_cmax) << ','
      << (interval.clamped_upper ? 1 : 0) << '\n';
}

void write_compare_csv(std::ostream& out, const std::vector<CompareRow>& rows) {
  out << "p,nbar_collective,nbar_meanfield,nbar_exact\n";
  for (const auto& r : rows) {
    out << format_real(r.p) << ',' << format_real(r.collective) << ','
        << format_real(r.meanfield) << ',' << format_real(r.exact.value_or(std::nan(""))) << '\n';
  }
}

SweepResult read_sweep_csv(std::istream& in) {
  SweepResult out;
  const auto rows = read_rows(in, {"p", "nbar", "converged"}, &out.axis_name);
  if (out.axis_name != "p" && out.axis_name != "N") {
    throw Error(ErrorKind::Io, fmt::format("unknown sweep axis '{}'", out.axis_name));
  }
  for (const auto& r : rows) {
    out.axis.push_back(field_real(r[0]));
    out.nbar.push_back(field_real(r[1]));
    out.converged.push_back(parse_flag(r[2]));
  }
  out.jumps = detect_jumps(out.axis, out.nbar, kDefaultJumpThreshold);
  return out;
}

Sweep2DResult read_sweep2d_csv(std::istream& in) {
  const auto rows = read_rows(in, {"x", "p", "nbar"});
  std::vector<double> xs, ps;
  Sweep2DResult out;
  for (const auto& r : rows) {
    xs.push_back(field_real(r[0]));
    ps.push_back(field_real(r[1]));
    out.nbar.push_back(field_real(r[2]));
  }
  out.x = distinct(xs);
  out.p = distinct(ps);
  if (out.x.size() * out.p.size() != out.nbar.size()) {
    throw Error(ErrorKind::Io, "sweep2d CSV is not a full product grid");
  }
  out.converged.assign(out.nbar.size(), true);
  return out;
}

BasinGrid read_basin_csv(std::istream& in) {
  const auto rows = read_rows(in, {"q0", "a0", "label"});
  std::vector<double> qs, as;
  BasinGrid out;
  for (const auto& r : rows) {
    qs.push_back(field_real(r[0]));
    as.push_back(field_real(r[1]));
    try {
      out.labels.push_back(parse_basin_label(r[2]));
    } catch (const Error& e) {
      throw Error(ErrorKind::Io, e.what());
    }
  }
  out.q0_axis = distinct(qs);
  out.a0_axis = distinct(as);
  if (out.q0_axis.size() * out.a0_axis.size() != out.labels.size()) {
    throw Error(ErrorKind::Io, "basin CSV is not a full product grid");
  }
  return out;
}

BistableInterval read_interval_csv(std::istream& in) {
  const auto rows = read_rows(in, {"p_cmin", "p_cmax", "clamped_upper"});
  if (rows.size() != 1) throw Error(ErrorKind::Io, "interval CSV must have one data row");
  BistableInterval out;
  out.p_cmin = field_real(rows[0][0]);
  out.p_cmax = field_real(rows[0][1]);
  out.clamped_upper = parse_flag(rows[0][2]);
  return out;
}

std::vector<CompareRow> read_compare_csv(std::istream& in) {
  const auto rows = read_rows(in, {"p", "nbar_collective", "nbar_meanfield", "nbar_exact"});
  std::vector<CompareRow> out;
  for (const auto& r : rows) {
    CompareRow row;
    row.p = field_real(r[0]);
    row.collective = field_real(r[1]);
    row.meanfield = field_real(r[2]);
    const double exact = field_real(r[3]);
    if (!std::isnan(exact)) row.exact = exact;
    out.push_back(row);
  }
  return out;
}

nlohmann::json to_json(const ModelParams& params) {
  return {{"n", params.n_qubits},           {"delta", params.detuning},
          {"omega", params.drive},          {"g", params.coherent_coupling},
          {"v", params.dissipative_coupling}, {"kappa", params.kappa},
          {"p", params.inactive_ratio}};
}

nlohmann::json to_json(const SweepResult& sweep) {
  auto rows = nlohmann::json::array();
  for (std::size_t i = 0; i < sweep.axis.size(); ++i) {
    rows.push_back({{sweep.axis_name, sweep.axis[i]},
                    {"nbar", sweep.nbar[i]},
                    {"converged", static_cast<bool>(sweep.converged[i])}});
  }
  return {{"method", to_string(sweep.method)}, {"rows", rows}, {"jumps", jumps_json(sweep.jumps)}};
}

nlohmann::json to_json(const Sweep2DResult& grid) {
  auto rows = nlohmann::json::array();
  for (std::size_t i = 0; i < grid.x.size(); ++i) {
    for (std::size_t j = 0; j < grid.p.size(); ++j) {
      rows.push_back({{"x", grid.x[i]}, {"p", grid.p[j]}, {"nbar", grid.at(i, j)}});
    }
  }
  return {{"x_axis", to_string(grid.axis)}, {"rows", rows}};
}

nlohmann::json to_json(const BasinGrid& basin) {
  auto rows = nlohmann::json::array();
  for (std::size_t i = 0; i < basin.q0_axis.size(); ++i) {
    for (std::size_t j = 0; j < basin.a0_axis.size(); ++j) {
      rows.push_back(
          {{"q0", basin.q0_axis[i]}, {"a0", basin.a0_axis[j]}, {"label", to_string(basin.at(i, j))}});
    }
  }
  return {{"rows", rows},
          {"counts",
           {{"toN1", basin.count(BasinLabel::ToN1)},
            {"toN2", basin.count(BasinLabel::ToN2)},
            {"undetermined", basin.count(BasinLabel::Undetermined)}}}};
}

nlohmann::json to_json(const BistableInterval& interval) {
  nlohmann::json out = {{"p_cmin", interval.p_cmin},
                        {"p_cmax", interval.p_cmax},
                        {"clamped_upper", interval.clamped_upper},
                        {"clamped_lower", interval.clamped_lower},
                        {"lower_branch_stable", interval.lower_branch_stable}};
  if (interval.stability_window) {
    out["stability_window"] = {interval.stability_window->first, interval.stability_window->second};
  } else {
    out["stability_window"] = nullptr;
  }
  return out;
}

nlohmann::json to_json(const std::vector<CompareRow>& rows) {
  auto arr = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json row = {
        {"p", r.p}, {"nbar_collective", r.collective}, {"nbar_meanfield", r.meanfield}};
    row["nbar_exact"] = r.exact ? nlohmann::json(*r.exact) : nlohmann::json(nullptr);
    arr.push_back(row);
  }
  return {{"rows", arr}};
}

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kMargin = 56.0;

std::string svg_open() {
  return fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\" font-size=\"12\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
      kWidth, kHeight);
}

std::string svg_axes(double x0, double x1, double y0, double y1, const std::string& x_label,
                     const std::string& y_label) {
  const double right = kWidth - kMargin;
  const double bottom = kHeight - kMargin;
  std::string s = fmt::format(
      "<rect x=\"{0}\" y=\"{0}\" width=\"{1}\" height=\"{2}\" fill=\"none\" stroke=\"black\"/>\n",
      kMargin, right - kMargin, bottom - kMargin);
  s += fmt::format("<text x=\"{}\" y=\"{}\">{}</text>\n", kMargin, bottom + 16, format_real(x0));
  s += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n", right, bottom + 16,
                   format_real(x1));
  s += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n", kMargin - 4, bottom,
                   format_real(y0));
  s += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n", kMargin - 4,
                   kMargin + 10, format_real(y1));
  s += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", kWidth / 2,
                   kHeight - 12, x_label);
  s += fmt::format(
      "<text x=\"16\" y=\"{0}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {0})\">{1}</text>\n",
      kHeight / 2, y_label);
  return s;
}

}  // namespace

std::string svg_line_plot(const std::vector<double>& x, const std::vector<Series>& series,
                          const std::string& x_label, const std::string& y_label) {
  static const char* colours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (double v : x) x0 = std::min(x0, v), x1 = std::max(x1, v);
  for (const auto& s : series) {
    for (double v : s.y) {
      if (std::isfinite(v)) y0 = std::min(y0, v), y1 = std::max(y1, v);
    }
  }
  if (!(x1 > x0)) x1 = x0 + 1.0;
  if (!(y1 > y0)) y0 = std::isfinite(y0) ? y0 - 0.5 : 0.0, y1 = y0 + 1.0;

  const double w = kWidth - 2 * kMargin;
  const double h = kHeight - 2 * kMargin;
  std::string out = svg_open() + svg_axes(x0, x1, y0, y1, x_label, y_label);
  for (std::size_t k = 0; k < series.size(); ++k) {
    std::string points;
    for (std::size_t i = 0; i < x.size() && i < series[k].y.size(); ++i) {
      if (!std::isfinite(series[k].y[i])) continue;
      points += fmt::format("{:.2f},{:.2f} ", kMargin + w * (x[i] - x0) / (x1 - x0),
                            kMargin + h * (1.0 - (series[k].y[i] - y0) / (y1 - y0)));
    }
    const char* colour = colours[k % std::size(colours)];
    out += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
                       colour, points);
    out += fmt::format("<text x=\"{}\" y=\"{}\" fill=\"{}\">{}</text>\n", kWidth - kMargin - 120,
                       kMargin + 16 + 14 * k, colour, series[k].name);
  }
  return out + "</svg>\n";
}

std::string svg_heatmap(const std::vector<double>& values, std::size_t rows, std::size_t cols,
                        const std::string& row_label, const std::string& col_label) {
  if (values.size() != rows * cols) {
    throw Error(ErrorKind::DimensionMismatch, "heatmap values do not match rows x cols");
  }
  double lo = INFINITY, hi = -INFINITY;
  for (double v : values) {
    if (std::isfinite(v)) lo = std::min(lo, v), hi = std::max(hi, v);
  }
  if (!(hi > lo)) hi = lo + 1.0;

  const double w = (kWidth - 2 * kMargin) / static_cast<double>(std::max<std::size_t>(cols, 1));
  const double h = (kHeight - 2 * kMargin) / static_cast<double>(std::max<std::size_t>(rows, 1));
  std::string out = svg_open();
  // Row 0 at the bottom so the row axis increases upwards.
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double v = values[i * cols + j];
      const int shade = std::isfinite(v) ? static_cast<int>(std::lround(255 * (v - lo) / (hi - lo))) : 0;
      out += fmt::format(
          "<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"rgb({},{},{})\"/>\n",
          kMargin + w * j, kHeight - kMargin - h * (i + 1), w + 0.05, h + 0.05, shade, shade, shade);
    }
  }
  out += svg_axes(0, static_cast<double>(cols), 0, static_cast<double>(rows), col_label, row_label);
  return out + "</svg>\n";
}

}  // namespace aging::io

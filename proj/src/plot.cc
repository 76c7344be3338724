#include "fcopt/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fcopt/experiments.hpp"

namespace fcopt {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 150.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

double parse_field(const std::string& s, std::size_t line) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error("trace csv line " + std::to_string(line) + ": bad number '" + s + "'");
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::vector<TraceRecord> parse_trace_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader)
    throw Error("trace csv: header must be '" + std::string(kCsvHeader) + "'");
  std::vector<TraceRecord> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != 7)
      throw Error("trace csv line " + std::to_string(lineno) + ": expected 7 fields");
    TraceRecord r;
    r.iter = static_cast<int>(parse_field(cells[0], lineno));
    r.objective = parse_field(cells[1], lineno);
    r.delta = parse_field(cells[2], lineno);
    r.fo_calls = static_cast<std::int64_t>(parse_field(cells[3], lineno));
    r.oracle_calls = static_cast<std::int64_t>(parse_field(cells[4], lineno));
    r.lmo_calls = static_cast<std::int64_t>(parse_field(cells[5], lineno));
    r.elapsed_ms = parse_field(cells[6], lineno);
    rows.push_back(r);
  }
  return rows;
}

std::vector<TraceRecord> read_trace_csv(const std::filesystem::path& path) {
  try {
    return parse_trace_csv(read_file(path));
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

std::string convergence_svg(const std::map<std::string, std::vector<TraceRecord>>& traces,
                            double reference, PlotAxis axis) {
  const std::string xlabel = axis == PlotAxis::FoCalls ? "FO calls" : "subproblem oracle calls";
  auto xval = [&](const TraceRecord& r) {
    return static_cast<double>(axis == PlotAxis::FoCalls ? r.fo_calls : r.oracle_calls);
  };

  double xmax = 1.0;
  double rmin = INFINITY;
  double rmax = -INFINITY;
  for (const auto& [name, rows] : traces)
    for (const auto& r : rows) {
      xmax = std::max(xmax, xval(r));
      const double res = r.objective - reference;
      if (std::isfinite(res) && res > 0.0) {
        rmin = std::min(rmin, res);
        rmax = std::max(rmax, res);
      }
    }
  if (!std::isfinite(rmin)) {
    rmin = 1e-16;
    rmax = 1.0;
  }
  double lo = std::floor(std::log10(rmin));
  double hi = std::ceil(std::log10(rmax));
  if (hi <= lo) hi = lo + 1.0;

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + pw * x / xmax; };
  auto py = [&](double res) {
    const double l = res > 0.0 ? std::clamp(std::log10(res), lo, hi) : lo;
    return kTop + ph * (hi - l) / (hi - lo);
  };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
    << "objective residual vs " << xlabel << "</text>\n";

  s << "<g stroke=\"#dddddd\">\n";
  for (double e = lo; e <= hi; e += 1.0)
    s << "<line x1=\"" << num(kLeft) << "\" x2=\"" << num(kLeft + pw) << "\" y1=\"" << num(py(std::pow(10.0, e)))
      << "\" y2=\"" << num(py(std::pow(10.0, e))) << "\"/>\n";
  s << "</g>\n";
  for (double e = lo; e <= hi; e += 1.0)
    s << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(py(std::pow(10.0, e)) + 4)
      << "\" text-anchor=\"end\">1e" << static_cast<int>(e) << "</text>\n";
  const double raw = xmax / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double step = raw <= mag ? mag : raw <= 2 * mag ? 2 * mag : raw <= 5 * mag ? 5 * mag : 10 * mag;
  for (double x = 0.0; x <= xmax * (1.0 + 1e-12); x += step) {
    s << "<text x=\"" << num(px(x)) << "\" y=\"" << num(kTop + ph + 18) << "\" text-anchor=\"middle\">"
      << static_cast<long long>(std::llround(x)) << "</text>\n";
  }
  s << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(pw) << "\" height=\""
    << num(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";
  s << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(kHeight - 16) << "\" text-anchor=\"middle\">"
    << xlabel << "</text>\n";
  s << "<text transform=\"translate(20," << num(kTop + ph / 2)
    << ") rotate(-90)\" text-anchor=\"middle\">objective - reference</text>\n";

  std::size_t color = 0;
  for (const auto& [name, rows] : traces) {
    const char* stroke = kPalette[color % std::size(kPalette)];
    if (!rows.empty()) {
      s << "<path class=\"series\" data-method=\"" << name << "\" fill=\"none\" stroke=\"" << stroke
        << "\" stroke-width=\"1.5\" d=\"";
      bool first = true;
      for (const auto& r : rows) {
        if (!std::isfinite(r.objective)) continue;
        s << (first ? "M" : " L") << num(px(xval(r))) << ',' << num(py(r.objective - reference));
        first = false;
      }
      s << "\"/>\n";
    }
    const double ly = kTop + 16.0 + 18.0 * static_cast<double>(color);
    s << "<line x1=\"" << num(kLeft + pw + 12) << "\" x2=\"" << num(kLeft + pw + 32) << "\" y1=\"" << num(ly)
      << "\" y2=\"" << num(ly) << "\" stroke=\"" << stroke << "\" stroke-width=\"2\"/>\n";
    s << "<text x=\"" << num(kLeft + pw + 38) << "\" y=\"" << num(ly + 4) << "\">" << name << "</text>\n";
    ++color;
  }
  s << "</svg>\n";
  return s.str();
}

std::vector<std::filesystem::path> plot_run_directory(const std::filesystem::path& run_dir,
                                                      const std::filesystem::path& svg_dir) {
  const nlohmann::json summary = [&] {
    try {
      return nlohmann::json::parse(read_file(run_dir / "summary.json"));
    } catch (const nlohmann::json::exception& e) {
      throw Error((run_dir / "summary.json").string() + ": " + e.what());
    }
  }();
  const auto& ref = summary["reference_optimum"]["value"];
  if (!ref.is_number()) throw Error("summary.json has no finite reference optimum");

  std::map<std::string, std::vector<TraceRecord>> traces;
  for (const auto& entry : std::filesystem::directory_iterator(run_dir))
    if (entry.path().extension() == ".csv")
      traces[entry.path().stem().string()] = read_trace_csv(entry.path());
  if (traces.empty()) throw Error("no trace csv files in " + run_dir.string());

  std::error_code ec;
  std::filesystem::create_directories(svg_dir, ec);
  if (ec) throw Error("cannot create " + svg_dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  for (const auto& [axis, file] : {std::pair{PlotAxis::FoCalls, "residual_vs_fo_calls.svg"},
                                   std::pair{PlotAxis::OracleCalls, "residual_vs_oracle_calls.svg"}}) {
    const std::filesystem::path path = svg_dir / file;
    std::ofstream out(path, std::ios::binary);
    out << convergence_svg(traces, ref.get<double>(), axis);
    if (!out) throw Error("failed writing " + path.string());
    written.push_back(path);
  }
  return written;
}

}  // namespace fcopt

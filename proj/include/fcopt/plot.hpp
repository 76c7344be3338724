#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "fcopt/algorithms.hpp"

namespace fcopt {

/// Parses a trace written by write_trace_csv. Throws Error on a header mismatch or a
/// malformed row.
std::vector<TraceRecord> parse_trace_csv(const std::string& text);
std::vector<TraceRecord> read_trace_csv(const std::filesystem::path& path);

enum class PlotAxis { FoCalls, OracleCalls };

/// Log-linear chart of objective - reference against the chosen counter, one polyline per
/// method. Residuals at or below zero are drawn on the bottom edge.
std::string convergence_svg(const std::map<std::string, std::vector<TraceRecord>>& traces,
                            double reference, PlotAxis axis);

/// Reads every <method>.csv plus summary.json in `run_dir` and writes
/// residual_vs_fo_calls.svg and residual_vs_oracle_calls.svg into `svg_dir`.
std::vector<std::filesystem::path> plot_run_directory(const std::filesystem::path& run_dir,
                                                      const std::filesystem::path& svg_dir);

}  // namespace fcopt

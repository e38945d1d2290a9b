#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "wnoise/experiments.hpp"

namespace wnoise {

enum class PlotKind { overlap, variance, collapse };

/// Throws ConfigError for anything other than overlap, variance or collapse.
PlotKind parse_plot_kind(std::string_view tag);

/// Self-contained SVG 1.1 document.
///   overlap:  mean `overlap` rows against k on a log axis, one series per N.
///   variance: `lambda_var` rows on log-log axes with a slope -1/3 guide line.
///   collapse: `overlap` rows against k / N^{5/3} on a log axis, one series per N.
/// Points that cannot be placed on a log axis (k = 0, full resample) are dropped.
std::string render_plot(const std::vector<ResultRow>& rows, PlotKind kind);

void emit_plot(const std::vector<ResultRow>& rows, PlotKind kind, const std::filesystem::path& out_path);

}  // namespace wnoise

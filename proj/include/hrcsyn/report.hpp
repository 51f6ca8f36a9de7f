#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "hrcsyn/model.hpp"

namespace hrcsyn {

/// Report files as text. CSV is canonical; the SVG heatmaps are rendered
/// from the same matrix and carry no extra data.
struct ReportBundle {
  std::string durations_csv;                 // task_id,agent,mean,std,count
  std::string coefficients_csv;              // one line per synergy cell
  std::array<std::string, 2> heatmap_csv;    // indexed by own agent
  std::array<std::string, 2> heatmap_svg;
};

ReportBundle build_report(const DurationTable& durations, const SynergyMatrix& synergy);

/// Writes durations.csv, coefficients.csv, synergy_{human,robot}.csv and
/// synergy_{human,robot}.svg into `out_dir`. Returns the paths written.
std::vector<std::filesystem::path> write_report(const ReportBundle& bundle, const std::filesystem::path& out_dir);

inline constexpr std::string_view kNeutralColor = "#f7f7f7";

/// Diverging scale on log2(coefficient): neutral at 1.0, saturated blue at
/// 0.5 and below, saturated red at 2.0 and above.
std::string heatmap_color(double coefficient);

}  // namespace hrcsyn

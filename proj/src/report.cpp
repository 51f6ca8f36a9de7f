#include "hrcsyn/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "hrcsyn/error.hpp"

namespace hrcsyn {

namespace {

struct Rgb {
  double r, g, b;
};

constexpr Rgb kNeutral{247, 247, 247};
constexpr Rgb kPenalty{178, 24, 43};
constexpr Rgb kAdvantage{33, 102, 172};

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string xml_escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string heatmap_csv(const SynergyMatrix& m, Agent own) {
  std::string out = fmt::format("{}\\{}", to_string(own), to_string(counterpart(own)));
  for (const auto& c : m.cols(own)) out += "," + csv_field(c);
  out += '\n';
  for (const auto& r : m.rows(own)) {
    out += csv_field(r);
    for (const auto& c : m.cols(own)) out += fmt::format(",{:.6f}", m.coefficient(own, r, c));
    out += '\n';
  }
  return out;
}

std::string heatmap_svg(const SynergyMatrix& m, Agent own) {
  constexpr int kCell = 90;
  constexpr int kLeft = 140;
  constexpr int kTop = 110;
  const auto& rows = m.rows(own);
  const auto& cols = m.cols(own);
  const int width = kLeft + kCell * static_cast<int>(cols.size()) + 40;
  const int height = kTop + kCell * static_cast<int>(rows.size()) + 90;

  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\" "
      "font-family=\"sans-serif\" font-size=\"12\">\n",
      width, height);
  out += fmt::format("<rect width=\"{}\" height=\"{}\" fill=\"#ffffff\"/>\n", width, height);
  out += fmt::format("<text x=\"{}\" y=\"24\" font-size=\"15\" text-anchor=\"middle\">{} task synergy (rows: {}, columns: {})</text>\n",
                     width / 2, own == Agent::Robot ? "Robot" : "Human", to_string(own), to_string(counterpart(own)));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    const int x = kLeft + kCell * static_cast<int>(j) + kCell / 2;
    out += fmt::format("<text x=\"{0}\" y=\"{1}\" text-anchor=\"start\" transform=\"rotate(-35 {0} {1})\">{2}</text>\n",
                       x, kTop - 8, xml_escape(cols[j]));
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const int y = kTop + kCell * static_cast<int>(i);
    out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n", kLeft - 8, y + kCell / 2 + 4,
                       xml_escape(rows[i]));
    for (std::size_t j = 0; j < cols.size(); ++j) {
      const int x = kLeft + kCell * static_cast<int>(j);
      const auto entry = m.get(own, rows[i], cols[j]);
      out += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\" stroke=\"#ffffff\"/>\n", x, y,
                         kCell, kCell, heatmap_color(entry.coefficient));
      out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{:.2f}</text>\n", x + kCell / 2,
                         y + kCell / 2, entry.coefficient);
      out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"10\" fill=\"#555555\">n={}</text>\n",
                         x + kCell / 2, y + kCell / 2 + 16, entry.sample_count);
    }
  }
  // Legend: 0.5 .. 1.0 .. 2.0 on a log scale.
  const int ly = kTop + kCell * static_cast<int>(rows.size()) + 30;
  constexpr int kSteps = 20;
  const int lw = std::max(kCell * static_cast<int>(cols.size()), 200);
  for (int k = 0; k < kSteps; ++k) {
    const double s = std::exp2(-1.0 + 2.0 * (k + 0.5) / kSteps);
    out += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"14\" fill=\"{}\"/>\n", kLeft + lw * k / kSteps, ly,
                       lw / kSteps + 1, heatmap_color(s));
  }
  out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"start\">0.5</text>\n", kLeft, ly + 30);
  out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">1.0</text>\n", kLeft + lw / 2, ly + 30);
  out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">2.0</text>\n", kLeft + lw, ly + 30);
  out += "</svg>\n";
  return out;
}

}  // namespace

std::string heatmap_color(double coefficient) {
  const double t = std::clamp(std::log2(std::max(coefficient, 1e-12)), -1.0, 1.0);
  const Rgb& end = t >= 0.0 ? kPenalty : kAdvantage;
  const double w = std::abs(t);
  const auto mix = [w](double a, double b) { return static_cast<int>(std::lround(a + (b - a) * w)); };
  return fmt::format("#{:02x}{:02x}{:02x}", mix(kNeutral.r, end.r), mix(kNeutral.g, end.g), mix(kNeutral.b, end.b));
}

ReportBundle build_report(const DurationTable& durations, const SynergyMatrix& synergy) {
  ReportBundle bundle;
  bundle.durations_csv = "task_id,agent,mean,std,count\n";
  for (const auto& [id, s] : durations) {
    bundle.durations_csv += fmt::format("{},{},{:.6f},{:.6f},{}\n", csv_field(id), to_string(s.agent), s.mean, s.std, s.count);
  }
  bundle.coefficients_csv =
      "agent,own_task,other_task,coefficient,std_error,sample_count,low_confidence,ridge,clamped,diagnostic\n";
  for (Agent a : kAgents) {
    for (const auto& r : synergy.rows(a)) {
      for (const auto& c : synergy.cols(a)) {
        const auto e = synergy.get(a, r, c);
        bundle.coefficients_csv += fmt::format("{},{},{},{:.6f},{:.6f},{},{},{},{},{}\n", to_string(a), csv_field(r),
                                               csv_field(c), e.coefficient, e.std_error, e.sample_count,
                                               e.low_confidence ? 1 : 0, e.ridge ? 1 : 0, e.clamped ? 1 : 0,
                                               csv_field(e.diagnostic));
      }
    }
    bundle.heatmap_csv[static_cast<std::size_t>(a)] = heatmap_csv(synergy, a);
    bundle.heatmap_svg[static_cast<std::size_t>(a)] = heatmap_svg(synergy, a);
  }
  return bundle;
}

std::vector<std::filesystem::path> write_report(const ReportBundle& bundle, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoFailure("cannot create '" + out_dir.string() + "': " + ec.message());
  std::vector<std::pair<std::string, const std::string*>> files{{"durations.csv", &bundle.durations_csv},
                                                                {"coefficients.csv", &bundle.coefficients_csv}};
  for (Agent a : kAgents) {
    const auto i = static_cast<std::size_t>(a);
    files.emplace_back(fmt::format("synergy_{}.csv", to_string(a)), &bundle.heatmap_csv[i]);
    files.emplace_back(fmt::format("synergy_{}.svg", to_string(a)), &bundle.heatmap_svg[i]);
  }
  std::vector<std::filesystem::path> written;
  for (const auto& [name, text] : files) {
    const auto path = out_dir / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << *text;
    if (!out) throw IoFailure("cannot write '" + path.string() + "'");
    written.push_back(path);
  }
  return written;
}

}  // namespace hrcsyn

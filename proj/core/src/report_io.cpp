#include "trunkload/report_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "json_reader.hpp"

namespace trunkload {

using detail::json;

namespace {

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

std::string full(double v) { return fmt("%.17g", v); }

std::string percent(double v) {
    if (std::isnan(v)) return "-";
    return fmt("%.0f%%", 100.0 * v + 0.0);
}

std::string side_label(Side s) { return std::string(to_string(s)); }

std::string pad(std::string s, std::size_t width, bool right_align = false) {
    if (s.size() >= width) return s;
    const std::string fill(width - s.size(), ' ');
    return right_align ? fill + s : s + fill;
}

json activation_json(const GroupActivation& g) {
    return {{"level", g.level}, {"peak", g.peak}, {"elements", g.elements}};
}

json report_object(const SymmetryReport& r) {
    json groups = json::array();
    for (const auto& g : r.groups) {
        groups.push_back({{"group", g.group},
                          {"anatomical", std::string(to_string(g.anatomical))},
                          {"left", activation_json(g.left)},
                          {"right", activation_json(g.right)},
                          {"ai", g.ai}});
    }
    json flags = json::array();
    for (const auto& f : r.flags) {
        flags.push_back({{"group", f.group}, {"severity", std::string(to_string(f.severity))}, {"ai", f.ai}});
    }
    json activations = json::array();
    for (const auto& a : r.activations) {
        activations.push_back({{"group", a.group},
                               {"anatomical", std::string(to_string(a.anatomical))},
                               {"side", side_label(a.side)},
                               {"level", a.level},
                               {"peak", a.peak}});
    }
    json supports = json::array();
    for (const auto& s : r.supports) {
        supports.push_back({{"contact", std::string(to_string(s.contact))}, {"vertical_force", s.force.y()}});
    }
    json reserves = json::array();
    for (const auto& [name, value] : r.reserves) reserves.push_back({{"coordinate", name}, {"reserve", value}});
    const auto& a = r.assumptions;
    return {
        {"case", std::string(to_string(r.walking_case))},
        {"phase", std::string(to_string(r.phase))},
        {"groups", groups},
        {"trunk_mean", r.trunk_mean},
        {"flags", flags},
        {"assumptions",
         {{"injured_side", side_label(a.injured_side)},
          {"injured_foot_fraction", a.injured_foot_fraction},
          {"crutch_share", a.crutch_share},
          {"body_weight", a.body_weight},
          {"posture_hash", a.posture_hash},
          {"exponent", a.exponent},
          {"reserve_weight", a.reserve_weight},
          {"reserves_enabled", a.reserves_enabled}}},
        {"activations", activations},
        {"supports", supports},
        {"reserves", reserves},
        {"solver", {{"status", std::string(to_string(r.status))}, {"objective", r.objective}, {"degenerate", r.degenerate}}},
    };
}

}  // namespace

std::string report_json(const SymmetryReport& report) { return report_object(report).dump(2) + "\n"; }

std::string reports_csv(std::span<const SymmetryReport> reports) {
    std::ostringstream out;
    out << kCsvHeader << "\n";
    for (const auto& r : reports) {
        for (const auto& a : r.activations) {
            out << to_string(a.anatomical) << "," << a.group << "," << to_string(a.side) << ","
                << to_string(r.walking_case) << "," << to_string(r.phase) << "," << full(a.level) << ","
                << full(a.peak) << "\n";
        }
    }
    return out.str();
}

std::string report_text(const SymmetryReport& r) {
    const auto& a = r.assumptions;
    std::ostringstream out;
    out << "case " << to_string(r.walking_case) << ", phase " << to_string(r.phase) << "\n";
    out << "injured " << to_string(a.injured_side) << " | f = " << fmt("%.2f", a.injured_foot_fraction)
        << " | kappa = " << fmt("%.2f", a.crutch_share) << " | W = " << fmt("%.1f", a.body_weight)
        << " N | p = " << a.exponent << " | posture " << a.posture_hash << "\n\n";
    out << pad("group", 22) << pad("left", 7, true) << pad("right", 7, true) << pad("AI", 8, true) << "  flag\n";
    for (const auto& g : r.groups) {
        std::string flag;
        for (const auto& f : r.flags) {
            if (f.group == g.group) flag = std::string(to_string(f.severity));
        }
        out << pad(std::string(to_string(g.anatomical)), 22) << pad(percent(g.left.level), 7, true)
            << pad(percent(g.right.level), 7, true) << pad(fmt("%+.2f", g.ai), 8, true) << "  " << flag << "\n";
    }
    out << pad("trunk mean", 22) << pad(percent(r.trunk_mean), 7, true) << "\n";
    if (r.status != SolveStatus::optimal) out << "solver status: " << to_string(r.status) << "\n";
    return out.str();
}

std::string comparison_text(const ComparisonTable& t) {
    std::size_t width = 16;
    for (const auto& c : t.columns) width = std::max(width, c.size() + 2);
    std::ostringstream out;
    out << pad("group", 22) << pad("side", 7);
    for (const auto& c : t.columns) out << pad(c, width, true);
    out << "\n";
    for (const auto& row : t.rows) {
        out << pad(std::string(to_string(row.anatomical)), 22) << pad(side_label(row.side), 7);
        for (const double v : row.values) out << pad(percent(v), width, true);
        out << "\n";
    }
    out << pad("trunk mean", 29);
    for (const double v : t.trunk_mean) out << pad(percent(v), width, true);
    out << "\n";
    return out.str();
}

std::string comparison_json(const ComparisonTable& t, std::span<const SymmetryReport> reports) {
    json rows = json::array();
    for (const auto& row : t.rows) {
        rows.push_back({{"group", row.group},
                        {"anatomical", std::string(to_string(row.anatomical))},
                        {"side", side_label(row.side)},
                        {"values", row.values}});
    }
    json reps = json::array();
    for (const auto& r : reports) reps.push_back(report_object(r));
    return json{{"columns", t.columns}, {"rows", rows}, {"trunk_mean", t.trunk_mean}, {"reports", reps}}.dump(2) +
           "\n";
}

std::string comparison_svg(const ComparisonTable& t, std::string_view title) {
    static constexpr const char* palette[] = {"#4c72b0", "#dd8452", "#55a868", "#c44e52", "#8172b3", "#937860"};
    const std::size_t ncol = t.columns.size();
    const std::size_t nrow = t.rows.size() + 1;  // + trunk mean
    const double bar = 10.0;
    const double gap = 14.0;
    const double slot = static_cast<double>(ncol) * bar + gap;
    const double left = 50.0;
    const double top = 40.0;
    const double plot_h = 240.0;
    const double width = left + slot * static_cast<double>(nrow) + 20.0;
    const double legend_h = 18.0 * static_cast<double>(ncol);
    const double height = top + plot_h + 130.0 + legend_h;

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt("%.0f", width) << "\" height=\""
        << fmt("%.0f", height) << "\" font-family=\"sans-serif\" font-size=\"10\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << fmt("%.1f", left) << "\" y=\"20\" font-size=\"13\">" << title << "</text>\n";
    for (int tick = 0; tick <= 100; tick += 20) {
        const double y = top + plot_h * (1.0 - tick / 100.0);
        out << "<line x1=\"" << fmt("%.1f", left) << "\" y1=\"" << fmt("%.1f", y) << "\" x2=\""
            << fmt("%.1f", width - 20.0) << "\" y2=\"" << fmt("%.1f", y) << "\" stroke=\"#dddddd\"/>\n";
        out << "<text x=\"" << fmt("%.1f", left - 6.0) << "\" y=\"" << fmt("%.1f", y + 3.0)
            << "\" text-anchor=\"end\">" << tick << "%</text>\n";
    }
    auto draw_slot = [&](std::size_t k, const std::string& label, const std::vector<double>& values) {
        const double x0 = left + slot * static_cast<double>(k) + gap / 2.0;
        for (std::size_t c = 0; c < values.size(); ++c) {
            const double v = std::isnan(values[c]) ? 0.0 : std::clamp(values[c], 0.0, 1.0);
            const double h = plot_h * v;
            out << "<rect x=\"" << fmt("%.1f", x0 + bar * static_cast<double>(c)) << "\" y=\""
                << fmt("%.2f", top + plot_h - h) << "\" width=\"" << fmt("%.1f", bar) << "\" height=\""
                << fmt("%.2f", h) << "\" fill=\"" << palette[c % std::size(palette)] << "\"/>\n";
        }
        const double cx = x0 + bar * static_cast<double>(values.size()) / 2.0;
        const double ly = top + plot_h + 8.0;
        out << "<text x=\"" << fmt("%.1f", cx) << "\" y=\"" << fmt("%.1f", ly) << "\" transform=\"rotate(60 "
            << fmt("%.1f", cx) << " " << fmt("%.1f", ly) << ")\">" << label << "</text>\n";
    };
    for (std::size_t k = 0; k < t.rows.size(); ++k) {
        const auto& row = t.rows[k];
        draw_slot(k, std::string(to_string(row.anatomical)) + (row.side == Side::left ? " L" : " R"), row.values);
    }
    draw_slot(t.rows.size(), "trunk mean", t.trunk_mean);
    for (std::size_t c = 0; c < ncol; ++c) {
        const double y = top + plot_h + 120.0 + 18.0 * static_cast<double>(c);
        out << "<rect x=\"" << fmt("%.1f", left) << "\" y=\"" << fmt("%.1f", y - 9.0)
            << "\" width=\"10\" height=\"10\" fill=\"" << palette[c % std::size(palette)] << "\"/>\n";
        out << "<text x=\"" << fmt("%.1f", left + 16.0) << "\" y=\"" << fmt("%.1f", y) << "\">" << t.columns[c]
            << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string comparison_columns(const ComparisonTable& t) {
    std::ostringstream out;
    out << "# group side";
    for (const auto& c : t.columns) out << " " << c;
    out << "\n";
    for (const auto& row : t.rows) {
        out << row.group << " " << to_string(row.side);
        for (const double v : row.values) out << " " << (std::isnan(v) ? std::string("nan") : full(v));
        out << "\n";
    }
    out << "trunk_mean -";
    for (const double v : t.trunk_mean) out << " " << full(v);
    out << "\n";
    return out.str();
}

}  // namespace trunkload

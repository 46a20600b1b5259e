#include <algorithm>
#include <ostream>
#include <string>

#include "occu/experiment.hpp"
#include "occu/text_format.hpp"

namespace occu::experiment {

namespace {

std::string quoted(const std::string& s) {
    if (s.find_first_of(",\"") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

const char* kModelColors[] = {"#b0413e", "#4c72b0", "#55a868"};

struct Bar {
    std::string label;
    double value;
    const char* color;
};

struct Group {
    std::string title;
    std::vector<Bar> bars;
};

// One panel of grouped vertical bars, drawn at (x0, y0) with the given size.
void draw_panel(std::ostream& out, const std::string& title, const std::string& y_label,
                const std::vector<Group>& groups, double x0, double y0, double width, double height) {
    double top = 0.0;
    for (const auto& g : groups)
        for (const auto& b : g.bars) top = std::max(top, b.value);
    if (top <= 0.0) top = 1.0;
    top *= 1.1;
    const double left = x0 + 60, bottom = y0 + height - 40, plot_h = height - 80, plot_w = width - 80;

    out << "<text x=\"" << x0 + width / 2 << "\" y=\"" << y0 + 20
        << "\" text-anchor=\"middle\" font-size=\"14\" font-weight=\"bold\">" << title << "</text>\n";
    out << "<text x=\"" << x0 + 14 << "\" y=\"" << y0 + height / 2 << "\" font-size=\"11\" transform=\"rotate(-90 "
        << x0 + 14 << ' ' << y0 + height / 2 << ")\" text-anchor=\"middle\">" << y_label << "</text>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << left + plot_w << "\" y2=\"" << bottom
        << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << left << "\" y2=\"" << bottom - plot_h
        << "\" stroke=\"black\"/>\n";
    for (int tick = 0; tick <= 4; ++tick) {
        const double v = top * tick / 4.0, y = bottom - plot_h * tick / 4.0;
        out << "<text x=\"" << left - 4 << "\" y=\"" << y + 4 << "\" font-size=\"9\" text-anchor=\"end\">"
            << text::format_fixed(v, 2) << "</text>\n";
    }
    const double group_w = plot_w / static_cast<double>(std::max<std::size_t>(1, groups.size()));
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        const auto& g = groups[gi];
        const double gx = left + group_w * static_cast<double>(gi);
        const double bar_w = group_w * 0.8 / static_cast<double>(std::max<std::size_t>(1, g.bars.size()));
        for (std::size_t bi = 0; bi < g.bars.size(); ++bi) {
            const auto& b = g.bars[bi];
            const double h = plot_h * b.value / top;
            const double bx = gx + group_w * 0.1 + bar_w * static_cast<double>(bi);
            out << "<rect x=\"" << bx << "\" y=\"" << bottom - h << "\" width=\"" << bar_w * 0.9 << "\" height=\"" << h
                << "\" fill=\"" << b.color << "\"><title>" << b.label << ": " << text::format_fixed(b.value, 3)
                << "</title></rect>\n";
        }
        out << "<text x=\"" << gx + group_w / 2 << "\" y=\"" << bottom + 16
            << "\" font-size=\"10\" text-anchor=\"middle\">" << g.title << "</text>\n";
    }
}

void draw_legend(std::ostream& out, const std::vector<std::pair<std::string, const char*>>& items, double x, double y) {
    for (std::size_t i = 0; i < items.size(); ++i) {
        const double ix = x + 150.0 * static_cast<double>(i);
        out << "<rect x=\"" << ix << "\" y=\"" << y - 10 << "\" width=\"12\" height=\"12\" fill=\"" << items[i].second
            << "\"/>\n<text x=\"" << ix + 16 << "\" y=\"" << y << "\" font-size=\"11\">" << items[i].first
            << "</text>\n";
    }
}

std::vector<Group> cost_groups(const LevelCost& cost) {
    std::vector<Group> groups;
    for (const auto& [title, r] : {std::pair<std::string, const CostReport*>{"Building", &cost.building},
                                   {"AP", &cost.access_point}}) {
        groups.push_back({title + " (-" + text::format_fixed(r->reduction_percent, 2) + "%)",
                          {{"separate total", static_cast<double>(r->separate_total), kModelColors[1]},
                           {"combined", static_cast<double>(r->combined), kModelColors[2]}}});
    }
    return groups;
}

}  // namespace

void write_results_table(std::ostream& out, const EvalReport& report) {
    out << "level,scope,scale_minutes,model,rmse,test_points,config,neurons\n";
    auto row = [&](const Cell& c) {
        out << c.level << ',' << quoted(c.scope) << ',' << c.scale_minutes << ',' << to_string(c.model) << ','
            << text::format_fixed(c.rmse, 6) << ',' << c.test_points << ',' << quoted(c.config) << ',' << c.neurons
            << '\n';
    };
    for (const auto& c : report.summary) row(c);
    for (const auto& c : report.per_scope) {
        if (c.level == "ap") row(c);
    }
}

void write_reductions(std::ostream& out, const EvalReport& report) {
    out << "level,scale_minutes,candidate,baseline,rmse_reduction_percent\n";
    for (const auto& r : report.reductions) {
        out << r.level << ',' << r.scale_minutes << ',' << to_string(r.candidate) << ',' << to_string(r.baseline)
            << ',' << text::format_fixed(r.percent, 2) << '\n';
    }
}

void write_cost_report(std::ostream& out, const LevelCost& cost) {
    out << "level,separate_models,separate_total,combined,reduction_percent\n";
    for (const auto& [level, r] : {std::pair<std::string, const CostReport*>{"building", &cost.building},
                                   {"ap", &cost.access_point}}) {
        std::string parts;
        for (int v : r->separate) parts += (parts.empty() ? "" : "+") + std::to_string(v);
        out << level << ',' << parts << ',' << r->separate_total << ',' << r->combined << ','
            << text::format_fixed(r->reduction_percent, 2) << '\n';
    }
}

void write_svg_chart(std::ostream& out, const EvalReport& report) {
    const double width = 900, height = 720;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    std::vector<Group> rmse_groups;
    const ModelKind kinds[] = {ModelKind::Arima, ModelKind::LstmSeparate, ModelKind::LstmCombined};
    for (const auto& level : {std::string("building"), std::string("ap")}) {
        for (int scale : kScales) {
            Group g{std::to_string(scale) + (level == "building" ? "Bld" : "AP"), {}};
            for (int k = 0; k < 3; ++k) {
                g.bars.push_back({to_string(kinds[k]), report.find(level, scale, kinds[k]).rmse, kModelColors[k]});
            }
            rmse_groups.push_back(std::move(g));
        }
    }
    draw_panel(out, "Test RMSE by level and time scale", "RMSE (occupants)", rmse_groups, 0, 0, width, 400);
    draw_legend(out, {{"ARIMA", kModelColors[0]}, {"LSTM separate", kModelColors[1]}, {"LSTM combined", kModelColors[2]}},
                80, 415);
    draw_panel(out, "Neurons: separate vs combined", "neurons", cost_groups(report.cost), 0, 430, width, 290);
    out << "</svg>\n";
}

void write_cost_svg(std::ostream& out, const LevelCost& cost) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"600\" height=\"320\" font-family=\"sans-serif\">\n"
           "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    draw_panel(out, "Neurons: separate vs combined", "neurons", cost_groups(cost), 0, 0, 600, 300);
    draw_legend(out, {{"separate total", kModelColors[1]}, {"combined", kModelColors[2]}}, 80, 312);
    out << "</svg>\n";
}

}  // namespace occu::experiment

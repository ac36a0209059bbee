#include "qsc/svg.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "qsc/csv.hpp"

namespace qsc {

namespace {

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      out.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  out.push_back(field);
  return out;
}

long parse_long(const std::string& s) {
  long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw PlotError("not an integer: \"" + s + "\"");
  return v;
}

double parse_double(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw PlotError("not a number: \"" + s + "\"");
    return v;
  } catch (const PlotError&) {
    throw;
  } catch (const std::exception&) {
    throw PlotError("not a number: \"" + s + "\"");
  }
}

std::string oracle_color(const std::string& oracle) {
  if (oracle == "teacher") return "#1f77b4";
  if (oracle == "expert") return "#d62728";
  return "#7f7f7f";
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '&')
      out += "&amp;";
    else if (c == '<')
      out += "&lt;";
    else if (c == '>')
      out += "&gt;";
    else
      out += c;
  }
  return out;
}

// chart geometry shared by both kinds
constexpr double width = 860.0;
constexpr double height = 480.0;
constexpr double margin_left = 64.0;
constexpr double margin_right = 220.0;  // legend lives here
constexpr double margin_top = 32.0;
constexpr double margin_bottom = 48.0;
constexpr double plot_w = width - margin_left - margin_right;
constexpr double plot_h = height - margin_top - margin_bottom;

void open_svg(std::ostream& out) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' '
      << height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

void axes(std::ostream& out) {
  out << "<line x1=\"" << margin_left << "\" y1=\"" << margin_top + plot_h
      << "\" x2=\"" << margin_left + plot_w << "\" y2=\"" << margin_top + plot_h
      << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << margin_left << "\" y1=\"" << margin_top << "\" x2=\""
      << margin_left << "\" y2=\"" << margin_top + plot_h
      << "\" stroke=\"black\"/>\n";
}

void text_at(std::ostream& out, double x, double y, const std::string& s,
             const char* anchor = "middle", const char* extra = "") {
  out << "<text x=\"" << x << "\" y=\"" << y << "\" font-family=\"sans-serif\""
      << " font-size=\"12\" text-anchor=\"" << anchor << "\"" << extra << ">"
      << xml_escape(s) << "</text>\n";
}

std::string num_label(double v) {
  if (v == std::floor(v) && std::abs(v) < 1e9)
    return std::to_string(static_cast<long long>(v));
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

void y_ticks(std::ostream& out, double lo, double hi,
             double (*to_y)(double, double, double)) {
  const int n = 5;
  for (int i = 0; i <= n; ++i) {
    const double v = lo + (hi - lo) * i / n;
    const double y = to_y(v, lo, hi);
    out << "<line x1=\"" << margin_left - 4 << "\" y1=\"" << y << "\" x2=\""
        << margin_left << "\" y2=\"" << y << "\" stroke=\"black\"/>\n";
    text_at(out, margin_left - 8, y + 4, num_label(v), "end");
  }
}

double map_y(double v, double lo, double hi) {
  const double t = hi > lo ? (v - lo) / (hi - lo) : 0.0;
  return margin_top + plot_h * (1.0 - t);
}

}  // namespace

std::vector<QuerySeries> parse_queries_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw PlotError("empty input");
  const auto header = split_row(line);
  const std::vector<std::string> want = {"case",  "oracle", "policy",
                                         "seed",  "epoch",  "queries"};
  if (header != want)
    throw PlotError("expected a queries CSV header (case,oracle,policy,seed,epoch,queries)");

  std::vector<QuerySeries> series;
  std::string current_key;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto row = split_row(line);
    if (row.size() != want.size())
      throw PlotError("row has " + std::to_string(row.size()) +
                      " fields, expected " + std::to_string(want.size()));
    const std::string key = row[0] + '/' + row[1] + '/' + row[2] + "/seed" + row[3];
    if (series.empty() || key != current_key) {
      series.push_back({key, oracle_color(row[1]), {}});
      current_key = key;
    }
    series.back().points.emplace_back(static_cast<int>(parse_long(row[4])),
                                      static_cast<int>(parse_long(row[5])));
  }
  if (series.empty()) throw PlotError("no data rows");
  return series;
}

std::vector<FailureBar> parse_failure_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw PlotError("empty input");
  const auto header = split_row(line);
  if (header.size() < 5 || header[0] != "case" || header[1] != "oracle" ||
      header[2] != "policy" || header[3] != "seed" || header[4] != "failure_pct")
    throw PlotError(
        "expected a results CSV header (case,oracle,policy,seed,failure_pct,...)");

  struct Acc {
    std::string label, color;
    double sum = 0.0;
    int n = 0;
  };
  std::vector<Acc> accs;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto row = split_row(line);
    if (row.size() != header.size())
      throw PlotError("row has " + std::to_string(row.size()) +
                      " fields, expected " + std::to_string(header.size()));
    const std::string label = row[0] + '/' + row[1] + '/' + row[2];
    const double v = parse_double(row[4]);
    auto it = std::find_if(accs.begin(), accs.end(),
                           [&](const Acc& a) { return a.label == label; });
    if (it == accs.end()) {
      accs.push_back({label, oracle_color(row[1]), 0.0, 0});
      it = std::prev(accs.end());
    }
    it->sum += v;
    it->n += 1;
  }
  if (accs.empty()) throw PlotError("no data rows");

  std::vector<FailureBar> bars;
  for (const auto& a : accs) bars.push_back({a.label, a.color, a.sum / a.n});
  return bars;
}

void render_queries_svg(std::ostream& out, const std::vector<QuerySeries>& series) {
  if (series.empty()) throw PlotError("nothing to plot");
  int x_lo = series[0].points.empty() ? 1 : series[0].points[0].first;
  int x_hi = x_lo;
  int y_hi = 1;
  for (const auto& s : series)
    for (const auto& [e, q] : s.points) {
      x_lo = std::min(x_lo, e);
      x_hi = std::max(x_hi, e);
      y_hi = std::max(y_hi, q);
    }
  if (x_hi == x_lo) x_hi = x_lo + 1;

  auto map_x = [&](double e) {
    return margin_left + plot_w * (e - x_lo) / (x_hi - x_lo);
  };

  open_svg(out);
  axes(out);
  y_ticks(out, 0.0, y_hi, map_y);
  const int n_x = std::min(8, x_hi - x_lo);
  for (int i = 0; i <= n_x; ++i) {
    const double e = x_lo + static_cast<double>(x_hi - x_lo) * i / n_x;
    out << "<line x1=\"" << map_x(e) << "\" y1=\"" << margin_top + plot_h
        << "\" x2=\"" << map_x(e) << "\" y2=\"" << margin_top + plot_h + 4
        << "\" stroke=\"black\"/>\n";
    text_at(out, map_x(e), margin_top + plot_h + 18, num_label(std::round(e)));
  }
  text_at(out, margin_left + plot_w / 2, height - 10, "training epoch");
  text_at(out, 16, margin_top + plot_h / 2, "oracle queries", "middle",
          " transform=\"rotate(-90 16 216)\"");

  for (const auto& s : series) {
    out << "<polyline fill=\"none\" stroke=\"" << s.color
        << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& [e, q] : s.points)
      out << map_x(e) << ',' << map_y(q, 0.0, y_hi) << ' ';
    out << "\"/>\n";
  }

  const std::size_t legend_cap = 18;
  double ly = margin_top + 8;
  for (std::size_t i = 0; i < series.size() && i < legend_cap; ++i) {
    const double lx = margin_left + plot_w + 14;
    out << "<line x1=\"" << lx << "\" y1=\"" << ly - 4 << "\" x2=\"" << lx + 18
        << "\" y2=\"" << ly - 4 << "\" stroke=\"" << series[i].color
        << "\" stroke-width=\"2\"/>\n";
    text_at(out, lx + 24, ly, series[i].label, "start");
    ly += 18;
  }
  if (series.size() > legend_cap)
    text_at(out, margin_left + plot_w + 14, ly,
            "+" + std::to_string(series.size() - legend_cap) + " more", "start");
  out << "</svg>\n";
}

void render_failure_svg(std::ostream& out, const std::vector<FailureBar>& bars) {
  if (bars.empty()) throw PlotError("nothing to plot");
  double y_hi = 1.0;
  for (const auto& b : bars) y_hi = std::max(y_hi, b.value);

  open_svg(out);
  axes(out);
  y_ticks(out, 0.0, y_hi, map_y);
  text_at(out, 16, margin_top + plot_h / 2, "failure %", "middle",
          " transform=\"rotate(-90 16 216)\"");

  const double slot = plot_w / static_cast<double>(bars.size());
  const double bar_w = slot * 0.7;
  for (std::size_t i = 0; i < bars.size(); ++i) {
    const double x = margin_left + slot * i + (slot - bar_w) / 2;
    const double y = map_y(bars[i].value, 0.0, y_hi);
    out << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << bar_w
        << "\" height=\"" << margin_top + plot_h - y << "\" fill=\""
        << bars[i].color << "\"/>\n";
    text_at(out, x + bar_w / 2, y - 4, csv_num(bars[i].value));
    // slanted labels so long policy names stay readable
    const double tx = x + bar_w / 2;
    const double ty = margin_top + plot_h + 14;
    std::ostringstream tf;
    tf << " transform=\"rotate(30 " << tx << ' ' << ty << ")\"";
    text_at(out, tx, ty, bars[i].label, "start", tf.str().c_str());
  }
  out << "</svg>\n";
}

}  // namespace qsc

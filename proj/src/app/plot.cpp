#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fkdet/app.hpp"
#include "fkdet/errors.hpp"
#include "report.hpp"

namespace fkdet::app {

namespace {

std::string fixed(double v) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << v;
  return os.str();
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '&':
        out += "&amp;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const std::vector<int>& n, const std::vector<double>& v, const std::vector<double>& running_inf,
                       const std::string& title) {
  if (n.empty()) throw InvalidArgument("cannot plot an empty trace");
  constexpr double W = 640, H = 400, L = 70, R = 20, T = 40, B = 50;
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (std::isfinite(v[i]) && std::isfinite(running_inf[i])) idx.push_back(i);
  }
  double xmin = std::log2(static_cast<double>(n.front()));
  double xmax = std::log2(static_cast<double>(n.back()));
  if (xmax <= xmin) {
    xmin -= 1;
    xmax += 1;
  }
  double ymin = 0, ymax = 0;
  bool first = true;
  for (std::size_t i : idx) {
    for (double y : {v[i], running_inf[i]}) {
      ymin = first ? y : std::min(ymin, y);
      ymax = first ? y : std::max(ymax, y);
      first = false;
    }
  }
  const double pad = std::max(1e-3, 0.1 * (ymax - ymin));
  ymin -= pad;
  ymax += pad;
  auto X = [&](int k) { return L + (std::log2(static_cast<double>(k)) - xmin) / (xmax - xmin) * (W - L - R); };
  auto Y = [&](double y) { return T + (ymax - y) / (ymax - ymin) * (H - T - B); };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
    << " " << H << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
    << escape(title) << "</text>\n";
  s << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
    << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  for (int k : n) {
    s << "<text x=\"" << fixed(X(k)) << "\" y=\"" << H - B + 18
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << k << "</text>\n";
  }
  for (int t = 0; t <= 4; ++t) {
    const double y = ymin + (ymax - ymin) * t / 4;
    s << "<text x=\"" << L - 6 << "\" y=\"" << fixed(Y(y) + 4)
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << format_double(std::round(y * 1e4) / 1e4)
      << "</text>\n";
  }
  s << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">n</text>\n";
  if (idx.size() >= 2) {
    // band between v_n and the running infimum
    s << "<polygon fill=\"#f4a261\" fill-opacity=\"0.3\" stroke=\"none\" points=\"";
    for (std::size_t i : idx) s << fixed(X(n[i])) << "," << fixed(Y(v[i])) << " ";
    for (auto it = idx.rbegin(); it != idx.rend(); ++it) s << fixed(X(n[*it])) << "," << fixed(Y(running_inf[*it])) << " ";
    s << "\"/>\n";
    s << "<polyline fill=\"none\" stroke=\"#e76f51\" stroke-width=\"1.5\" stroke-dasharray=\"4 3\" points=\"";
    for (std::size_t i : idx) s << fixed(X(n[i])) << "," << fixed(Y(running_inf[i])) << " ";
    s << "\"/>\n";
    s << "<polyline fill=\"none\" stroke=\"#264653\" stroke-width=\"2\" points=\"";
    for (std::size_t i : idx) s << fixed(X(n[i])) << "," << fixed(Y(v[i])) << " ";
    s << "\"/>\n";
  }
  for (std::size_t i : idx) {
    s << "<circle cx=\"" << fixed(X(n[i])) << "\" cy=\"" << fixed(Y(v[i])) << "\" r=\"3\" fill=\"#264653\"/>\n";
  }
  s << "</svg>\n";
  return s.str();
}

std::string svg_from_report(const std::string& report_json) {
  const Json r = Json::parse(report_json);
  if (!r.contains("trace")) return {};
  std::vector<int> n;
  std::vector<double> v, inf;
  for (const Json& p : r["trace"]["points"]) {
    n.push_back(p["n"].get<int>());
    v.push_back(json_to_double(p["logdet_per_site"]));
    inf.push_back(json_to_double(p["running_inf"]));
  }
  if (n.empty()) return {};
  return render_svg(n, v, inf, "log det per site, " + r["config"]["group"].get<std::string>());
}

void emit_plot(const std::string& report_json, const std::filesystem::path& path) {
  const std::string csv = trace_csv_from_report(report_json);
  if (csv.empty()) throw InvalidArgument("report has no trace to plot");
  std::filesystem::path csv_path = path;
  csv_path.replace_extension(".csv");
  write_atomic(csv_path, csv);
  if (path.extension() == ".svg") write_atomic(path, svg_from_report(report_json));
}

}  // namespace fkdet::app

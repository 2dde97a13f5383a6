#include "report.hpp"

#include <cmath>
#include <sstream>

#include "fkdet/app.hpp"

namespace fkdet::app {

Json json_number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

double json_to_double(const Json& j) {
  if (j.is_number()) return j.get<double>();
  const std::string s = j.get<std::string>();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  return std::numeric_limits<double>::quiet_NaN();
}

Json trace_json(const ApproximationTrace& t, std::vector<double>* wall_ms) {
  Json j;
  j["verdict"] = to_string(t.verdict);
  j["value"] = json_number(t.value);
  j["running_inf"] = json_number(t.running_inf);
  j["est_error"] = json_number(t.est_error);
  j["blocks"] = t.blocks;
  j["exact"] = t.exact;
  j["slow_convergence"] = t.slow_convergence;
  Json pts = Json::array();
  for (const TracePoint& p : t.points) {
    Json q;
    q["n"] = p.n;
    q["folner_size"] = p.folner_size;
    q["size"] = p.size;
    q["logdet_per_site"] = json_number(p.value);
    q["running_inf"] = json_number(p.running_inf);
    q["kernel_dim"] = p.kernel_dim;
    q["lambda_min"] = json_number(p.lambda_min);
    pts.push_back(q);
    if (wall_ms) wall_ms->push_back(p.wall_ms);
  }
  j["points"] = pts;
  j["warnings"] = t.warnings;
  if (!t.eps_sweep.empty()) {
    Json sweep = Json::array();
    for (const auto& [e, v] : t.eps_sweep) sweep.push_back({{"eps", e}, {"value", json_number(v)}});
    j["eps_sweep"] = sweep;
  }
  return j;
}

std::string aligned(const std::vector<std::pair<std::string, std::string>>& rows) {
  std::size_t w = 0;
  for (const auto& [k, v] : rows) w = std::max(w, k.size());
  std::string out;
  for (const auto& [k, v] : rows) out += k + std::string(w - k.size() + 2, ' ') + v + "\n";
  return out;
}

std::string trace_csv_from_report(const std::string& report_json) {
  const Json r = Json::parse(report_json);
  if (r.contains("spectrum")) {
    std::string out = "lambda\n";
    for (const Json& v : r["spectrum"]) out += format_double(json_to_double(v)) + "\n";
    return out;
  }
  if (!r.contains("trace")) return {};
  std::vector<double> wall;
  if (r.contains("timing") && r["timing"].contains("point_wall_ms")) {
    for (const Json& v : r["timing"]["point_wall_ms"]) wall.push_back(v.get<double>());
  }
  std::string out = "n,size,logdet_per_site,running_inf,wall_ms\n";
  std::size_t i = 0;
  for (const Json& p : r["trace"]["points"]) {
    out += std::to_string(p["n"].get<int>()) + "," + std::to_string(p["size"].get<std::size_t>()) + "," +
           format_double(json_to_double(p["logdet_per_site"])) + "," +
           format_double(json_to_double(p["running_inf"])) + "," +
           (i < wall.size() ? format_double(wall[i]) : std::string("0")) + "\n";
    ++i;
  }
  return out;
}

}  // namespace fkdet::app

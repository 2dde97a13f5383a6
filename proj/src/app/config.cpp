#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "fkdet/app.hpp"
#include "fkdet/errors.hpp"
#include "fkdet/parse.hpp"

namespace fkdet::app {

Operation parse_operation(std::string_view s) {
  if (s == "fkdet") return Operation::FkDet;
  if (s == "mahler") return Operation::Mahler;
  if (s == "entropy") return Operation::Entropy;
  if (s == "torsion") return Operation::Torsion;
  if (s == "spectrum") return Operation::Spectrum;
  if (s == "selftest") return Operation::Selftest;
  throw InvalidArgument("unknown operation '" + std::string(s) +
                        "' (fkdet, mahler, entropy, torsion, spectrum, selftest)");
}

const char* to_string(Operation op) {
  switch (op) {
    case Operation::FkDet:
      return "fkdet";
    case Operation::Mahler:
      return "mahler";
    case Operation::Entropy:
      return "entropy";
    case Operation::Torsion:
      return "torsion";
    case Operation::Spectrum:
      return "spectrum";
    case Operation::Selftest:
      return "selftest";
  }
  return "?";
}

void JobConfig::validate() const {
  if (cap < 1) throw InvalidArgument("cap must be >= 1");
  if (!(tol > 0.0)) throw InvalidArgument("tol must be positive");
  if (format != "json" && format != "csv" && format != "svg") {
    throw InvalidArgument("format must be json, csv or svg");
  }
  if (max_rows == 0 || probe_rows == 0) throw InvalidArgument("max_rows and probe_rows must be positive");
  for (std::size_t i = 0; i < eps_sweep.size(); ++i) {
    if (!(eps_sweep[i] > 0.0)) throw InvalidArgument("eps-sweep values must be positive");
    if (i > 0 && !(eps_sweep[i] < eps_sweep[i - 1])) {
      throw InvalidArgument("eps-sweep values must be strictly decreasing");
    }
  }
  auto method_in = [&](std::initializer_list<const char*> allowed) {
    if (method.empty()) return;
    for (const char* a : allowed) {
      if (method == a) return;
    }
    throw InvalidArgument("method '" + method + "' is not valid for " + to_string(operation));
  };
  switch (operation) {
    case Operation::FkDet:
      method_in({"general", "positive"});
      break;
    case Operation::Mahler:
      method_in({"auto", "jensen", "quadrature"});
      break;
    case Operation::Torsion:
      method_in({"pseudo", "laplacian", "both"});
      break;
    case Operation::Entropy:
    case Operation::Spectrum:
    case Operation::Selftest:
      method_in({});
      break;
  }
  if (operation == Operation::Selftest) return;
  if (operation == Operation::Torsion) {
    if (expr.empty() == complex_file.empty()) {
      throw InvalidArgument("torsion needs exactly one of --expr or --complex-file");
    }
  } else if (expr.empty()) {
    throw InvalidArgument(std::string(to_string(operation)) + " needs --expr");
  }
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view v) {
  T out{};
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw InvalidArgument("invalid value '" + std::string(v) + "' for " + std::string(key));
  }
  return out;
}

std::vector<double> parse_list(std::string_view key, std::string_view v) {
  std::vector<double> out;
  while (!v.empty()) {
    const auto c = v.find(',');
    const std::string_view item = trim(v.substr(0, c));
    if (!item.empty()) out.push_back(parse_number<double>(key, item));
    if (c == std::string_view::npos) break;
    v = v.substr(c + 1);
  }
  return out;
}

}  // namespace

void set_config_value(JobConfig& cfg, std::string_view key_in, std::string_view value_in) {
  std::string key(trim(key_in));
  std::replace(key.begin(), key.end(), '-', '_');
  const std::string_view value = trim(value_in);
  if (key == "operation") {
    cfg.operation = parse_operation(value);
  } else if (key == "group") {
    cfg.group = std::string(value);
  } else if (key == "theta") {
    cfg.theta = parse_number<double>(key, value);
  } else if (key == "expr") {
    cfg.expr = std::string(value);
  } else if (key == "complex_file") {
    cfg.complex_file = std::string(value);
  } else if (key == "cap") {
    cfg.cap = parse_number<int>(key, value);
  } else if (key == "tol") {
    cfg.tol = parse_number<double>(key, value);
  } else if (key == "method") {
    cfg.method = std::string(value);
  } else if (key == "eps_sweep") {
    cfg.eps_sweep = parse_list(key, value);
  } else if (key == "seed") {
    cfg.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "max_rows") {
    cfg.max_rows = parse_number<std::size_t>(key, value);
  } else if (key == "probe_rows") {
    cfg.probe_rows = parse_number<std::size_t>(key, value);
  } else if (key == "out") {
    cfg.out = std::string(value);
  } else if (key == "cache_dir") {
    cfg.cache_dir = std::string(value);
  } else if (key == "format") {
    cfg.format = std::string(value);
  } else {
    throw InvalidArgument("unknown config key '" + key + "'");
  }
}

JobConfig parse_config(std::string_view text, JobConfig base) {
  std::size_t line_no = 0;
  std::size_t offset = 0;
  while (offset < text.size()) {
    const std::size_t nl = text.find('\n', offset);
    std::string_view line = text.substr(offset, nl == std::string_view::npos ? std::string_view::npos : nl - offset);
    const std::size_t start = offset;
    offset = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (const auto h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("config line " + std::to_string(line_no) + ": expected key = value", start);
    }
    try {
      set_config_value(base, line.substr(0, eq), line.substr(eq + 1));
    } catch (const InvalidArgument& e) {
      throw ParseError("config line " + std::to_string(line_no) + ": " + e.what(), start);
    }
  }
  return base;
}

JobConfig read_config_file(const std::filesystem::path& path, JobConfig base) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

namespace {

std::string group_text(const JobConfig& cfg) {
  std::string g = cfg.group;
  if (cfg.theta) g += " theta=" + format_double(*cfg.theta);
  return g;
}

}  // namespace

std::string canonical_config(const JobConfig& cfg) {
  std::map<std::string, std::string> kv;
  kv["operation"] = to_string(cfg.operation);
  std::optional<GroupDescriptor> group;
  try {
    group = parse_group(group_text(cfg));
    kv["group"] = group->to_string();
  } catch (const std::exception&) {
    kv["group"] = group_text(cfg);
  }
  if (!cfg.expr.empty()) {
    kv["expr"] = cfg.expr;
    if (group) {
      try {
        kv["expr"] = to_string(parse_ring_matrix(cfg.expr, *group));
      } catch (const std::exception&) {
      }
    }
  }
  if (!cfg.complex_file.empty()) {
    std::ifstream in(cfg.complex_file, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    kv["complex_sha256"] = in ? sha256_hex(ss.str()) : "missing:" + cfg.complex_file;
  }
  kv["cap"] = std::to_string(cfg.cap);
  kv["tol"] = format_double(cfg.tol);
  kv["method"] = cfg.method;
  std::string eps;
  for (double e : cfg.eps_sweep) eps += (eps.empty() ? "" : ",") + format_double(e);
  kv["eps_sweep"] = eps;
  kv["seed"] = std::to_string(cfg.seed);
  kv["max_rows"] = std::to_string(cfg.max_rows);
  kv["probe_rows"] = std::to_string(cfg.probe_rows);
  kv["version"] = kToolVersion;
  std::string out;
  for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
  return out;
}

std::string job_hash(const JobConfig& cfg) { return sha256_hex(canonical_config(cfg)); }

}  // namespace fkdet::app

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <functional>

#include "fkdet/app.hpp"
#include "fkdet/entropy.hpp"
#include "fkdet/errors.hpp"
#include "fkdet/mahler.hpp"
#include "fkdet/parse.hpp"
#include "fkdet/torsion.hpp"
#include "report.hpp"

namespace fkdet::app {

namespace {

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

GroupDescriptor resolve_group(const JobConfig& cfg) {
  std::string g = cfg.group;
  if (cfg.theta) g += " theta=" + format_double(*cfg.theta);
  return parse_group(g);
}

FkOptions fk_options(const JobConfig& cfg) {
  FkOptions o;
  o.tol = cfg.tol;
  o.max_rows = cfg.max_rows;
  o.probe_rows = cfg.probe_rows;
  o.eps_fallback = cfg.eps_sweep;
  return o;
}

std::vector<int> schedule_for(const JobConfig& cfg) { return doubling_schedule(cfg.cap, std::min(4, cfg.cap)); }

Json config_json(const JobConfig& cfg) {
  Json c;
  c["operation"] = to_string(cfg.operation);
  try {
    c["group"] = resolve_group(cfg).to_string();
  } catch (const std::exception&) {
    c["group"] = cfg.group;
  }
  const std::string canon = canonical_config(cfg);
  auto field = [&](const std::string& key) {
    const auto p = canon.find("\n" + key + "=");
    const std::size_t start = canon.starts_with(key + "=") ? key.size() + 1
                              : p == std::string::npos      ? std::string::npos
                                                            : p + key.size() + 2;
    if (start == std::string::npos) return std::string();
    return canon.substr(start, canon.find('\n', start) - start);
  };
  if (!cfg.expr.empty()) c["expr"] = field("expr");
  if (!cfg.complex_file.empty()) c["complex_sha256"] = field("complex_sha256");
  c["cap"] = cfg.cap;
  c["schedule"] = schedule_for(cfg);
  c["tol"] = cfg.tol;
  c["method"] = cfg.method;
  c["eps_sweep"] = cfg.eps_sweep;
  c["seed"] = cfg.seed;
  c["max_rows"] = cfg.max_rows;
  c["probe_rows"] = cfg.probe_rows;
  return c;
}

struct Computed {
  Json result = Json::object();
  std::string verdict;
  double value = 0.0;
  double error = 0.0;
  std::optional<Json> trace;
  std::optional<Json> spectrum;
  std::vector<std::string> warnings;
  std::vector<double> wall_ms;
  ExitCode exit = ExitCode::Ok;
};

void attach_trace(Computed& c, const ApproximationTrace& t) {
  c.trace = trace_json(t, &c.wall_ms);
  for (const std::string& w : t.warnings) c.warnings.push_back(w);
}

Computed run_fkdet(const JobConfig& cfg) {
  const GroupDescriptor g = resolve_group(cfg);
  const RingMatrix f = parse_ring_matrix(cfg.expr, g);
  const FkOptions opts = fk_options(cfg);
  const auto sched = schedule_for(cfg);
  const bool positive = cfg.method == "positive";
  ApproximationTrace t = positive ? fk_det_positive(f, sched, opts) : fk_det_general(f, sched, opts);
  if (!cfg.eps_sweep.empty() && t.eps_sweep.empty() && t.verdict != Verdict::KernelDetected) {
    FkOptions inner = opts;
    inner.eps_fallback.clear();
    if (positive) {
      t.eps_sweep = epsilon_sweep(f, cfg.eps_sweep, sched, inner);
    } else {
      t.eps_sweep = epsilon_sweep(mat_mul(star(f), f), cfg.eps_sweep, sched, inner);
      for (auto& [e, v] : t.eps_sweep) v /= 2;
    }
  }
  Computed c;
  c.verdict = to_string(t.verdict);
  c.value = t.value;
  c.error = t.est_error;
  const TracePoint& last = t.points.back();
  c.result["route"] = positive ? "positive" : "f*f";
  c.result["log_det"] = json_number(t.value);
  c.result["det"] = json_number(std::exp(t.value));
  c.result["est_error"] = json_number(t.est_error);
  c.result["kernel_fraction"] = static_cast<double>(last.kernel_dim) / static_cast<double>(last.size);
  c.result["upper_bound_certificate"] = json_number(t.running_inf);
  attach_trace(c, t);
  if (t.verdict == Verdict::UpperBoundOnly) c.exit = ExitCode::NonConvergence;
  return c;
}

Computed run_mahler(const JobConfig& cfg) {
  const GroupDescriptor g = resolve_group(cfg);
  const RingElement e = parse_ring_element(cfg.expr, g);
  const std::string method = cfg.method.empty() ? "auto" : cfg.method;
  const bool jensen_ok = g.kind() == GroupKind::IntegerLattice && g.arity() == 1 && e.domain() != Domain::Complex;
  if (method == "jensen" && !jensen_ok) throw InvalidArgument("Jensen route needs exact coefficients over Z");
  Computed c;
  QuadratureOptions q;
  q.seed = cfg.seed;
  q.target = cfg.tol * 1e-3;
  const QuadratureResult qr = mahler_quadrature(e, q);
  Json qj;
  qj["value"] = json_number(qr.value);
  qj["error"] = json_number(qr.error);
  qj["levels"] = qr.levels;
  qj["points_per_axis"] = qr.points_per_axis;
  qj["samples"] = qr.samples;
  qj["converged"] = qr.converged;
  c.result["quadrature"] = qj;
  if (jensen_ok && method != "quadrature") {
    const double j = mahler_jensen(e);
    c.result["jensen"] = json_number(j);
    c.result["route"] = "jensen";
    c.value = j;
    c.verdict = "exact_oracle";
    c.error = 0.0;
  } else {
    c.result["route"] = "quadrature";
    c.value = qr.value;
    c.error = qr.error;
    c.verdict = qr.converged ? "converged" : "not_converged";
    if (!qr.converged) {
      c.warnings.push_back("quadrature did not reach the target " + format_double(q.target));
      c.exit = ExitCode::NonConvergence;
    }
  }
  c.result["log_mahler"] = json_number(c.value);
  c.result["mahler_measure"] = json_number(std::exp(c.value));
  return c;
}

Computed run_entropy(const JobConfig& cfg) {
  const GroupDescriptor g = resolve_group(cfg);
  const RingMatrix f = parse_ring_matrix(cfg.expr, g);
  const EntropyResult r = entropy_principal(f, schedule_for(cfg), fk_options(cfg));
  Computed c;
  c.verdict = to_string(r.kind);
  c.value = r.value;
  c.error = r.error;
  c.result["kind"] = to_string(r.kind);
  c.result["entropy"] = json_number(r.value);
  c.result["method"] = r.method;
  c.result["kernel_fraction"] = r.kernel_fraction;
  if (g.is_finite() && f.is_square()) {
    const CokernelEntropy ex = entropy_finite_group_oracle(f);
    Json o;
    o["abs_det"] = ex.abs_det.str();
    o["group_order"] = ex.group_order;
    o["exact"] = ex.singular ? std::string("inf") : "(1/" + std::to_string(ex.group_order) + ") log " + ex.abs_det.str();
    o["value"] = json_number(ex.value);
    if (r.trace) o["folner_cross_check"] = json_number(r.trace->value);
    c.result["cokernel"] = o;
  }
  if (r.trace) {
    attach_trace(c, *r.trace);
    if (r.kind != EntropyKind::Infinite && !r.trace->exact && r.trace->verdict != Verdict::Converged) {
      c.exit = ExitCode::NonConvergence;
    }
  }
  return c;
}

Json level_json(const LevelDeterminant& lv) {
  Json j;
  j["level"] = lv.level;
  j["log_det"] = json_number(lv.log_det);
  j["error"] = json_number(lv.error);
  j["method"] = lv.method;
  j["kernel_fraction"] = lv.kernel_fraction;
  j["converged"] = lv.converged;
  return j;
}

Computed run_torsion(const JobConfig& cfg) {
  ChainComplex C;
  if (!cfg.complex_file.empty()) {
    C = read_complex_file(cfg.complex_file);
  } else {
    C.group = resolve_group(cfg);
    C.boundaries.push_back(parse_ring_matrix(cfg.expr, C.group));
  }
  const ComplexCheck chk = validate_complex(C);
  Computed c;
  c.result["euler"] = chk.euler;
  c.result["chain_ok"] = chk.chain_ok;
  c.result["ranks"] = C.ranks();
  const TorsionMethod m = parse_torsion_method(cfg.method.empty() ? "both" : cfg.method);
  TorsionReport rep;
  try {
    rep = l2_torsion(C, schedule_for(cfg), fk_options(cfg), m);
  } catch (const NumericalError& e) {
    c.verdict = "not_weakly_acyclic";
    c.value = std::numeric_limits<double>::quiet_NaN();
    c.warnings.push_back(e.what());
    c.exit = ExitCode::NonConvergence;
    return c;
  }
  c.value = rep.rho;
  c.error = rep.rho_error;
  c.result["method"] = to_string(m);
  c.result["rho"] = json_number(rep.rho);
  c.result["rho_error"] = json_number(rep.rho_error);
  c.result["interval"] = {json_number(rep.rho - rep.rho_error), json_number(rep.rho + rep.rho_error)};
  Json pl = Json::array();
  for (const auto& lv : rep.per_level) pl.push_back(level_json(lv));
  c.result["per_level"] = pl;
  Json lap;
  lap["rho"] = json_number(*rep.laplacian_rho);
  lap["error"] = json_number(rep.laplacian_error);
  Json ll = Json::array();
  for (const auto& lv : rep.laplacian_levels) ll.push_back(level_json(lv));
  lap["levels"] = ll;
  c.result["laplacian"] = lap;
  if (rep.discrepancy) c.result["discrepancy"] = json_number(*rep.discrepancy);
  c.result["kernel_cut_used"] = rep.kernel_cut_used;
  c.warnings = rep.flags;
  bool converged = true;
  for (const std::string& f : rep.flags) converged = converged && f.find("not converged") == std::string::npos;
  c.verdict = converged ? "converged" : "interval";
  if (!converged) c.exit = ExitCode::NonConvergence;
  return c;
}

Computed run_spectrum(const JobConfig& cfg) {
  const GroupDescriptor g = resolve_group(cfg);
  RingMatrix f = parse_ring_matrix(cfg.expr, g);
  const bool symmetric = f.is_square() && f.is_star_symmetric();
  const RingMatrix h = symmetric ? f : mat_mul(star(f), f);
  const FolnerSet F = folner_box(g, g.is_finite() ? 1 : cfg.cap);
  if (F.size() * h.rows() > cfg.max_rows) throw InvalidArgument("section order exceeds max_rows");
  const SpectralSummary s = eigs_sym(assemble(h, F));
  Computed c;
  c.verdict = "computed";
  c.value = s.logdet / static_cast<double>(F.size());
  c.result["operator"] = symmetric ? "f" : "f*f";
  c.result["n"] = cfg.cap;
  c.result["size"] = s.size;
  c.result["folner_size"] = F.size();
  c.result["kernel_dim"] = s.kernel_dim;
  c.result["keps"] = s.keps;
  c.result["logdet_per_site"] = json_number(c.value);
  Json mom = Json::array();
  for (double m : empirical_moments(s, 4)) mom.push_back(m);
  c.result["moments"] = mom;
  Json sp = Json::array();
  for (double t : s.eigenvalues) sp.push_back(t);
  c.spectrum = sp;
  return c;
}

using Check = std::pair<std::string, std::function<bool()>>;

std::vector<Check> selftest_cases() {
  const double ln2 = std::log(2.0);
  auto near = [](double a, double b, double tol) { return std::abs(a - b) <= tol; };
  const GroupDescriptor Z = GroupDescriptor::lattice(1);
  const GroupDescriptor Z2 = GroupDescriptor::lattice(2);
  return {
      {"Z^2 multiplication", [=] { return Z2.mul({1, 2}, {3, 4}) == GroupElement{4, 6}; }},
      {"Z/4 multiplication", [] { const auto g = GroupDescriptor::finite({4}); return g.mul({3}, {2}) == GroupElement{1}; }},
      {"Z^2 inverse", [=] { return Z2.inv({1, -3}) == GroupElement{-1, 3}; }},
      {"cocycle at theta 0", [] { return Cocycle{0.0}({1, 2}, {3, -1}) == std::complex<double>(1.0, 0.0); }},
      {"Folner box Z n=3", [=] { return folner_box(Z, 3).size() == 3; }},
      {"identity invariance", [=] { return invariance_ratio(Z2, folner_box(Z2, 3), FolnerSet({Z2.identity()})) == 1.0; }},
      {"polynomial square", [=] {
         const RingElement a = parse_ring_element("x-2", Z);
         return a * a == parse_ring_element("x^2 - 4*x + 4", Z);
       }},
      {"star", [=] { return star(parse_ring_element("x-2", Z)) == parse_ring_element("x^-1 - 2", Z); }},
      {"trace of identity", [=] { return trace(RingMatrix::identity(Z, 3)).exact() == 3; }},
      {"trace of x", [=] { return trace(parse_ring_element("x", Z)).exact() == 0; }},
      {"l1 norm", [=] { return l1_norm(parse_ring_element("x-2", Z)) == 3.0; }},
      {"poly_apply constant", [=] {
         const RingMatrix f = parse_ring_matrix("5-2*x-2/x", Z);
         return poly_apply({BigInt(1)}, f) == RingMatrix::identity(Z, 1);
       }},
      {"section of identity", [=] {
         const auto H = assemble(RingMatrix::identity(Z, 1), folner_box(Z, 4));
         return std::get<Eigen::MatrixXd>(H.matrix()) == Eigen::MatrixXd::Identity(4, 4);
       }},
      {"logdet identity", [] { return logdet_cholesky(DenseMatrix(Eigen::MatrixXd(Eigen::MatrixXd::Identity(5, 5)))) == 0.0; }},
      {"logdet diag(2,3)", [=] {
         Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2, 2);
         m(0, 0) = 2;
         m(1, 1) = 3;
         return near(logdet_cholesky(DenseMatrix(m)), std::log(6.0), 1e-14);
       }},
      {"eigs identity", [] { return eigs_sym(DenseMatrix(Eigen::MatrixXd(Eigen::MatrixXd::Identity(3, 3)))).kernel_dim == 0; }},
      {"smith identity", [] {
         IntMatrix m(3, 3);
         for (int i = 0; i < 3; ++i) m(i, i) = 1;
         return smith_abs_det(m) == 1;
       }},
      {"smith diag(2,3)", [] {
         IntMatrix m(2, 2);
         m(0, 0) = 2;
         m(1, 1) = 3;
         return smith_abs_det(m) == 6;
       }},
      {"fk identity", [=] {
         const auto t = fk_det_positive(RingMatrix::identity(Z, 1), {4, 8, 16});
         return t.verdict == Verdict::Converged && t.value == 0.0;
       }},
      {"fk scalar 2", [=] { return near(fk_det_general(parse_ring_matrix("2", Z), {4, 8}).value, ln2, 1e-14); }},
      {"kernel of zero", [=] { return vn_kernel_dim(RingMatrix(Z, 1, 1), {4, 8}).limit_est == 1.0; }},
      {"eps sweep identity", [=] {
         const auto s = epsilon_sweep(RingMatrix::identity(Z, 1), {0.5}, {4, 8});
         return near(s[0].second, std::log(1.5), 1e-14);
       }},
      {"entropy of 3 over Z/2", [=] {
         const auto g = GroupDescriptor::finite({2});
         return near(entropy_finite_group_oracle(parse_ring_matrix("3", g)).value, 0.5 * std::log(9.0), 1e-14);
       }},
      {"Mahler of a constant", [=] { return near(mahler_jensen(parse_ring_element("2", Z)), ln2, 1e-14); }},
      {"Mahler of x-1", [=] { return near(mahler_jensen(parse_ring_element("x-1", Z)), 0.0, 1e-12); }},
      {"Euler characteristic", [=] {
         ChainComplex C;
         C.group = Z;
         C.boundaries.push_back(parse_ring_matrix("x-2", Z));
         const auto chk = validate_complex(C);
         return chk.euler == 0 && chk.chain_ok;
       }},
  };
}

Computed run_selftest() {
  Computed c;
  std::size_t passed = 0;
  Json cases = Json::array();
  for (const auto& [name, fn] : selftest_cases()) {
    bool ok = false;
    std::string err;
    try {
      ok = fn();
    } catch (const std::exception& e) {
      err = e.what();
    }
    Json j;
    j["name"] = name;
    j["pass"] = ok;
    if (!err.empty()) j["error"] = err;
    cases.push_back(j);
    if (ok) {
      ++passed;
    } else {
      c.warnings.push_back("selftest failed: " + name);
    }
  }
  c.result["cases"] = cases;
  c.result["passed"] = passed;
  c.result["total"] = cases.size();
  c.value = static_cast<double>(passed);
  c.verdict = passed == cases.size() ? "pass" : "fail";
  if (passed != cases.size()) c.exit = ExitCode::NonConvergence;
  return c;
}

Json compute(const JobConfig& cfg, const std::string& hash) {
  const std::string started = utc_now();
  const auto t0 = std::chrono::steady_clock::now();
  Computed c;
  switch (cfg.operation) {
    case Operation::FkDet:
      c = run_fkdet(cfg);
      break;
    case Operation::Mahler:
      c = run_mahler(cfg);
      break;
    case Operation::Entropy:
      c = run_entropy(cfg);
      break;
    case Operation::Torsion:
      c = run_torsion(cfg);
      break;
    case Operation::Spectrum:
      c = run_spectrum(cfg);
      break;
    case Operation::Selftest:
      c = run_selftest();
      break;
  }
  Json r;
  r["tool"] = "fkdet";
  r["version"] = kToolVersion;
  r["job_hash"] = hash;
  r["config"] = config_json(cfg);
  r["verdict"] = c.verdict;
  r["value"] = json_number(c.value);
  r["error"] = json_number(c.error);
  r["exit_code"] = static_cast<int>(c.exit);
  r["result"] = c.result;
  if (c.trace) r["trace"] = *c.trace;
  if (c.spectrum) r["spectrum"] = *c.spectrum;
  r["warnings"] = c.warnings;
  Json timing;
  timing["started"] = started;
  timing["finished"] = utc_now();
  timing["total_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  timing["point_wall_ms"] = c.wall_ms;
  r["timing"] = timing;
  return r;
}

std::string summary_from_report(const Json& r) {
  std::vector<std::pair<std::string, std::string>> rows;
  rows.emplace_back("operation", r["config"]["operation"].get<std::string>());
  rows.emplace_back("group", r["config"]["group"].get<std::string>());
  if (r["config"].contains("expr")) rows.emplace_back("expr", r["config"]["expr"].get<std::string>());
  rows.emplace_back("verdict", r["verdict"].get<std::string>());
  rows.emplace_back("value", format_double(json_to_double(r["value"])));
  rows.emplace_back("error", format_double(json_to_double(r["error"])));
  if (r.contains("trace")) {
    for (const Json& p : r["trace"]["points"]) {
      rows.emplace_back("  n=" + std::to_string(p["n"].get<int>()),
                        format_double(json_to_double(p["logdet_per_site"])) + "  (inf " +
                            format_double(json_to_double(p["running_inf"])) + ")");
    }
  }
  for (const Json& w : r["warnings"]) rows.emplace_back("warning", w.get<std::string>());
  rows.emplace_back("job", r["job_hash"].get<std::string>().substr(0, 16));
  return aligned(rows);
}

}  // namespace

RunOutcome run(const JobConfig& cfg) {
  cfg.validate();
  RunOutcome out;
  const std::string hash = job_hash(cfg);
  std::optional<Cache> cache;
  if (!cfg.cache_dir.empty()) cache.emplace(cfg.cache_dir);
  if (cache) {
    std::string warning;
    if (auto hit = cache->lookup(hash, &warning)) {
      out.report_json = std::move(*hit);
      out.cache_hit = true;
    }
    if (!warning.empty()) out.messages.push_back(warning);
  }
  if (!out.cache_hit) {
    out.report_json = compute(cfg, hash).dump(2) + "\n";
    if (cache) cache->store(hash, out.report_json);
  }
  const Json r = Json::parse(out.report_json);
  out.exit_code = static_cast<ExitCode>(r["exit_code"].get<int>());
  out.trace_csv = trace_csv_from_report(out.report_json);
  if (cfg.format == "svg") out.svg = svg_from_report(out.report_json);
  out.summary = summary_from_report(r);
  if (!cfg.out.empty()) {
    const std::filesystem::path base(cfg.out);
    auto with_ext = [&](const char* ext) {
      std::filesystem::path p = base;
      p.replace_extension(ext);
      return p;
    };
    write_atomic(with_ext(".json"), out.report_json);
    if (!out.trace_csv.empty()) write_atomic(with_ext(".csv"), out.trace_csv);
    if (!out.svg.empty()) write_atomic(with_ext(".svg"), out.svg);
  }
  return out;
}

}  // namespace fkdet::app

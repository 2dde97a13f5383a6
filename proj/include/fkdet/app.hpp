#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fkdet::app {

inline constexpr const char* kToolVersion = "0.1.0";

enum class Operation { FkDet, Mahler, Entropy, Torsion, Spectrum, Selftest };
Operation parse_operation(std::string_view s);
const char* to_string(Operation op);

enum class ExitCode : int { Ok = 0, Usage = 1, Parse = 2, NonConvergence = 3 };

struct JobConfig {
  Operation operation = Operation::FkDet;
  std::string group = "Z";
  std::optional<double> theta;
  std::string expr;
  std::string complex_file;
  int cap = 64;
  double tol = 5e-3;
  std::string method;  // fkdet: general|positive; mahler: auto|jensen|quadrature; torsion: pseudo|laplacian|both
  std::vector<double> eps_sweep;
  std::uint64_t seed = 0;
  std::size_t max_rows = 8192;
  std::size_t probe_rows = 1024;
  // not part of the job identity
  std::string out;
  std::string cache_dir;
  std::string format = "json";  // json|csv|svg

  /// Throws fkdet::InvalidArgument on inconsistent settings.
  void validate() const;
};

/// key = value lines, '#' comments; keys mirror the long CLI flags with '_'
/// or '-' accepted (eps_sweep takes a comma list).
JobConfig parse_config(std::string_view text, JobConfig base = {});
JobConfig read_config_file(const std::filesystem::path& path, JobConfig base = {});
/// Applies one key/value pair; throws InvalidArgument on unknown keys.
void set_config_value(JobConfig& cfg, std::string_view key, std::string_view value);

/// Canonical text of the fields that identify a job (output path, cache
/// directory and format excluded; a complex file enters through its contents).
std::string canonical_config(const JobConfig& cfg);
std::string job_hash(const JobConfig& cfg);
std::string sha256_hex(std::string_view data);

/// Shortest round-trip decimal; "inf", "-inf", "nan" for non-finite values.
std::string format_double(double v);

struct RunOutcome {
  std::string report_json;  // exact bytes written/replayed
  std::string trace_csv;    // empty when the operation has no trace
  std::string svg;          // empty unless requested
  std::string summary;      // aligned human-readable text
  ExitCode exit_code = ExitCode::Ok;
  bool cache_hit = false;
  std::vector<std::string> messages;  // cache warnings
};

/// Dispatches the job. Parse errors propagate as fkdet::ParseError; numerical
/// verdicts are encoded in the report.
RunOutcome run(const JobConfig& cfg);

/// Trace CSV (n,size,logdet_per_site,running_inf,wall_ms) rebuilt from a report.
std::string trace_csv_from_report(const std::string& report_json);
/// Standalone SVG line chart of v_n against n with the running-infimum band.
std::string svg_from_report(const std::string& report_json);
/// Variant on explicit series; n, v_n and running infima in schedule order.
std::string render_svg(const std::vector<int>& n, const std::vector<double>& v, const std::vector<double>& running_inf,
                       const std::string& title);
void emit_plot(const std::string& report_json, const std::filesystem::path& path);

/// Content-addressed report cache.
class Cache {
 public:
  explicit Cache(std::filesystem::path dir);
  /// Stored report bytes, or nullopt on a miss. A corrupted entry counts as a
  /// miss and leaves a message in `warning`.
  std::optional<std::string> lookup(const std::string& hash, std::string* warning = nullptr) const;
  /// Atomic store: write to a temporary file, then rename.
  void store(const std::string& hash, const std::string& report_json) const;
  std::filesystem::path entry_path(const std::string& hash) const;

 private:
  std::filesystem::path dir_;
};

/// Writes `data` to `path` through a temporary file and rename.
void write_atomic(const std::filesystem::path& path, std::string_view data);

}  // namespace fkdet::app

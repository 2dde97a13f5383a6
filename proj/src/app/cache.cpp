#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "fkdet/app.hpp"

namespace fkdet::app {

void write_atomic(const std::filesystem::path& path, std::string_view data) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::random_device rd;
  const std::filesystem::path tmp = path.string() + ".tmp" + std::to_string(rd());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

Cache::Cache(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::filesystem::path Cache::entry_path(const std::string& hash) const { return dir_ / (hash + ".json"); }

std::optional<std::string> Cache::lookup(const std::string& hash, std::string* warning) const {
  const std::filesystem::path p = entry_path(hash);
  std::ifstream in(p, std::ios::binary);
  if (!in) return std::nullopt;
  std::stringstream ss;
  ss << in.rdbuf();
  std::string data = ss.str();
  try {
    const auto j = nlohmann::json::parse(data);
    if (j.value("job_hash", std::string()) != hash) throw std::runtime_error("hash mismatch");
  } catch (const std::exception& e) {
    if (warning) *warning = "corrupted cache entry " + p.string() + " ignored (" + e.what() + ")";
    return std::nullopt;
  }
  return data;
}

void Cache::store(const std::string& hash, const std::string& report_json) const {
  write_atomic(entry_path(hash), report_json);
}

}  // namespace fkdet::app

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "fkdet/errors.hpp"
#include "fkdet/parse.hpp"
#include "fkdet/torsion.hpp"

namespace fkdet {

ChainComplex parse_complex(std::string_view text) {
  std::optional<GroupDescriptor> group;
  std::map<std::size_t, std::pair<std::string, std::size_t>> blocks;  // j -> (matrix text, offset)
  std::optional<std::size_t> open_level;
  int depth = 0;
  std::size_t offset = 0;
  auto trim = [](std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return std::string_view{};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  auto track = [&](std::string_view s) {
    for (char c : s) {
      if (c == '[') ++depth;
      if (c == ']') --depth;
    }
  };
  while (offset <= text.size()) {
    const std::size_t nl = text.find('\n', offset);
    const std::size_t end = nl == std::string_view::npos ? text.size() : nl;
    std::string_view line = text.substr(offset, end - offset);
    const std::size_t line_start = offset;
    offset = end + 1;
    if (const auto h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
    line = trim(line);
    if (open_level) {
      if (!line.empty()) {
        blocks[*open_level].first += " ";
        blocks[*open_level].first += line;
        track(line);
      }
      if (depth <= 0) open_level.reset();
      if (nl == std::string_view::npos) break;
      continue;
    }
    if (line.empty()) {
      if (nl == std::string_view::npos) break;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line_start);
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key == "group") {
      if (group) throw ParseError("duplicate group line", line_start);
      group = parse_group(value);
    } else if (key.starts_with("boundary")) {
      const std::string_view num = trim(key.substr(8));
      std::size_t j = 0;
      const auto res = std::from_chars(num.data(), num.data() + num.size(), j);
      if (res.ec != std::errc() || res.ptr != num.data() + num.size() || j == 0) {
        throw ParseError("expected 'boundary <j>' with j >= 1", line_start);
      }
      if (blocks.contains(j)) throw ParseError("duplicate boundary " + std::to_string(j), line_start);
      blocks[j] = {std::string(value), line_start};
      depth = 0;
      track(value);
      if (depth > 0) open_level = j;
    } else {
      throw ParseError("unknown key '" + std::string(key) + "'", line_start);
    }
    if (nl == std::string_view::npos) break;
  }
  if (open_level) throw ParseError("unbalanced brackets in boundary " + std::to_string(*open_level), text.size());
  if (!group) throw ParseError("missing 'group = ...' line", 0);
  if (blocks.empty()) throw ParseError("no boundary maps", text.size());
  ChainComplex C;
  C.group = *group;
  std::size_t expect = 1;
  for (const auto& [j, blk] : blocks) {
    if (j != expect) throw ParseError("boundary " + std::to_string(expect) + " is missing", blk.second);
    try {
      C.boundaries.push_back(parse_ring_matrix(blk.first, *group));
    } catch (const ParseError& e) {
      throw ParseError("boundary " + std::to_string(j) + ": " + e.what(), blk.second + e.position());
    }
    ++expect;
  }
  try {
    validate_complex(C);
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what(), text.size());
  }
  return C;
}

ChainComplex read_complex_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open complex file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_complex(ss.str());
}

}  // namespace fkdet

#include "dfd/text.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "dfd/error.hpp"

namespace dfd::text {

std::string trim(std::string_view s) {
  auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(trim(s.substr(start)));
      break;
    }
    out.push_back(trim(s.substr(start, pos - start)));
    start = pos + 1;
  }
  return out;
}

double to_double(std::string_view field, std::string_view what) {
  auto t = trim(field);
  double v = 0.0;
  // from_chars rejects a leading '+', accept it for hand-written files.
  std::string_view sv = t;
  if (!sv.empty() && sv.front() == '+') sv.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), v);
  if (t.empty() || ec != std::errc{} || ptr != sv.data() + sv.size()) {
    throw ParseError("cannot parse '" + t + "' as a number for " + std::string(what));
  }
  return v;
}

long to_long(std::string_view field, std::string_view what) {
  auto t = trim(field);
  long v = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
    throw ParseError("cannot parse '" + t + "' as an integer for " + std::string(what));
  }
  return v;
}

std::optional<double> to_optional_double(std::string_view field, std::string_view what) {
  auto t = lower(trim(field));
  if (t.empty() || t == "n/a" || t == "na") return std::nullopt;
  return to_double(field, what);
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::vector<std::vector<std::string>> parse_csv(std::string_view content) {
  std::vector<std::vector<std::string>> rows;
  std::size_t start = 0;
  while (start <= content.size()) {
    auto end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    auto line = trim(content.substr(start, end - start));
    if (!line.empty() && line.front() != '#') rows.push_back(split(line, ','));
    start = end + 1;
  }
  return rows;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) { return parse_csv(read_file(path)); }

}  // namespace dfd::text

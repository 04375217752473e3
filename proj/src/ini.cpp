#include "dfd/ini.hpp"

#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "dfd/error.hpp"
#include "dfd/text.hpp"

namespace dfd {

std::string IniSection::suffix() const {
  auto pos = name_.find('.');
  return pos == std::string::npos ? std::string{} : name_.substr(pos + 1);
}

bool IniSection::has(const std::string& key) const { return find(key).has_value(); }

std::optional<std::string> IniSection::find(const std::string& key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return v;
  }
  return std::nullopt;
}

std::string IniSection::get(const std::string& key) const {
  auto v = find(key);
  if (!v) throw ParseError("[" + name_ + "] missing required key '" + key + "'");
  return *v;
}

double IniSection::get_double(const std::string& key) const {
  return text::to_double(get(key), "[" + name_ + "] " + key);
}

long IniSection::get_long(const std::string& key) const {
  return text::to_long(get(key), "[" + name_ + "] " + key);
}

double IniSection::get_double_or(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

long IniSection::get_long_or(const std::string& key, long fallback) const {
  return has(key) ? get_long(key) : fallback;
}

std::optional<double> IniSection::find_double(const std::string& key) const {
  auto v = find(key);
  if (!v) return std::nullopt;
  return text::to_optional_double(*v, "[" + name_ + "] " + key);
}

std::vector<double> IniSection::get_doubles(const std::string& key) const {
  std::vector<double> out;
  for (const auto& f : text::split(get(key), ',')) {
    out.push_back(text::to_double(f, "[" + name_ + "] " + key));
  }
  return out;
}

void IniSection::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = value;
      return;
    }
  }
  entries_.emplace_back(key, value);
}

IniDocument IniDocument::parse(const std::string& content) {
  // The property-tree reader only knows ';' comments.
  std::stringstream cleaned;
  std::istringstream in(content);
  for (std::string line; std::getline(in, line);) {
    auto t = text::trim(line);
    if (!t.empty() && t.front() == '#') continue;
    cleaned << line << '\n';
  }

  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(cleaned, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ParseError("scenario line " + std::to_string(e.line()) + ": " + e.message());
  }

  IniDocument doc;
  for (const auto& [name, section] : tree) {
    if (section.empty() && !section.data().empty()) {
      throw ParseError("key '" + name + "' appears outside any [section]");
    }
    std::vector<std::pair<std::string, std::string>> entries;
    for (const auto& [key, value] : section) entries.emplace_back(key, text::trim(value.data()));
    doc.sections_.emplace_back(name, std::move(entries));
  }
  return doc;
}

IniDocument IniDocument::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

const IniSection* IniDocument::find(const std::string& name) const {
  for (const auto& s : sections_) {
    if (s.name() == name) return &s;
  }
  return nullptr;
}

IniSection* IniDocument::find(const std::string& name) {
  for (auto& s : sections_) {
    if (s.name() == name) return &s;
  }
  return nullptr;
}

const IniSection& IniDocument::get(const std::string& name) const {
  const auto* s = find(name);
  if (!s) throw ParseError("scenario is missing section [" + name + "]");
  return *s;
}

std::vector<const IniSection*> IniDocument::with_prefix(const std::string& prefix) const {
  std::vector<const IniSection*> out;
  for (const auto& s : sections_) {
    if (s.name().rfind(prefix + ".", 0) == 0) out.push_back(&s);
  }
  return out;
}

void IniDocument::apply_override(const std::string& assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ParseError("override '" + assignment + "' must be key=value");
  auto path = text::trim(assignment.substr(0, eq));
  auto value = text::trim(assignment.substr(eq + 1));
  // Keys may contain dots themselves (e.g. "thickness.bounds"), so prefer the
  // longest existing section name that prefixes the path.
  std::string section;
  for (const auto& s : sections_) {
    const auto& n = s.name();
    if (path.size() > n.size() + 1 && path.compare(0, n.size(), n) == 0 && path[n.size()] == '.' &&
        n.size() > section.size()) {
      section = n;
    }
  }
  if (section.empty()) {
    auto dot = path.rfind('.');
    if (dot == std::string::npos || dot == 0) {
      throw ParseError("override key '" + path + "' must be section.key");
    }
    section = path.substr(0, dot);
  }
  auto key = path.substr(section.size() + 1);
  if (auto* s = find(section)) {
    s->set(key, value);
  } else {
    sections_.emplace_back(section, std::vector<std::pair<std::string, std::string>>{{key, value}});
  }
}

std::string IniDocument::dump() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < sections_.size(); ++i) {
    if (i) os << '\n';
    os << '[' << sections_[i].name() << "]\n";
    for (const auto& [k, v] : sections_[i].entries()) os << k << " = " << v << '\n';
  }
  return os.str();
}

}  // namespace dfd

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dfd {

/// One `[name]` block of a scenario file, keys in file order.
class IniSection {
public:
  IniSection() = default;
  IniSection(std::string name, std::vector<std::pair<std::string, std::string>> entries)
      : name_(std::move(name)), entries_(std::move(entries)) {}

  const std::string& name() const { return name_; }
  /// Part after the first dot: "component.tank" -> "tank".
  std::string suffix() const;
  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

  bool has(const std::string& key) const;
  std::optional<std::string> find(const std::string& key) const;

  /// Throw ParseError naming "[section] key" when missing or malformed.
  std::string get(const std::string& key) const;
  double get_double(const std::string& key) const;
  long get_long(const std::string& key) const;
  double get_double_or(const std::string& key, double fallback) const;
  long get_long_or(const std::string& key, long fallback) const;
  std::optional<double> find_double(const std::string& key) const;
  std::vector<double> get_doubles(const std::string& key) const;

  void set(const std::string& key, const std::string& value);

private:
  std::string name_;
  std::vector<std::pair<std::string, std::string>> entries_;
};

class IniDocument {
public:
  /// Lines starting with '#' or ';' are comments.
  static IniDocument parse(const std::string& content);
  static IniDocument load(const std::string& path);

  const std::vector<IniSection>& sections() const { return sections_; }
  const IniSection* find(const std::string& name) const;
  IniSection* find(const std::string& name);
  /// Throws ParseError if absent.
  const IniSection& get(const std::string& name) const;
  /// Every section named `prefix.<something>`, in file order.
  std::vector<const IniSection*> with_prefix(const std::string& prefix) const;

  /// Applies a `section.key=value` override (the key is the part after the
  /// last dot); creates the section if needed.
  void apply_override(const std::string& assignment);

  void add(IniSection s) { sections_.push_back(std::move(s)); }
  std::string dump() const;

private:
  std::vector<IniSection> sections_;
};

}  // namespace dfd

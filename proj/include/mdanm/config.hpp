#pragma once

#include "mdanm/matio.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace mdanm {

/// Flat key = value configuration with optional [section] headers; a key
/// inside a section is addressed as "section.key".  '#' starts a comment.
class Config {
public:
  static Config from_file(const std::string& path);
  static Config from_string(const std::string& text,
                            const std::string& origin = "<string>");

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;

  std::string get_str(const std::string& key, const std::string& def) const;
  double get_double(const std::string& key, double def) const;
  int get_int(const std::string& key, int def) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t def) const;
  bool get_bool(const std::string& key, bool def) const;
  std::vector<double> get_doubles(const std::string& key,
                                  const std::vector<double>& def) const;
  std::vector<int> get_ints(const std::string& key,
                            const std::vector<int>& def) const;

private:
  std::map<std::string, std::string> values_;
};

}  // namespace mdanm

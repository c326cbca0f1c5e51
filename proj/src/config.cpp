#include "mdanm/config.hpp"

#include <fstream>
#include <sstream>

namespace mdanm {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

Config Config::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path + ": cannot open");
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_string(buf.str(), path);
}

Config Config::from_string(const std::string& text,
                           const std::string& origin) {
  Config cfg;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(origin + ":" + std::to_string(lineno) +
                          ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) +
                        ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
    if (!section.empty()) key = section + "." + key;
    cfg.values_[key] = value;
  }
  return cfg;
}

void Config::set(const std::string& key, const std::string& value) {
  values_[key] = value;
}

bool Config::has(const std::string& key) const {
  return values_.count(key) != 0;
}

std::string Config::get_str(const std::string& key,
                            const std::string& def) const {
  const auto it = values_.find(key);
  return it == values_.end() ? def : it->second;
}

double Config::get_double(const std::string& key, double def) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return def;
  try {
    size_t pos = 0;
    const double v = std::stod(it->second, &pos);
    if (trim(it->second.substr(pos)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError(key + ": expected a number, got '" + it->second + "'");
}

int Config::get_int(const std::string& key, int def) const {
  const double v = get_double(key, def);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v)
    throw ConfigError(key + ": expected an integer");
  return i;
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t def) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return def;
  try {
    size_t pos = 0;
    const unsigned long long v = std::stoull(it->second, &pos);
    if (trim(it->second.substr(pos)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError(key + ": expected an unsigned integer, got '" +
                    it->second + "'");
}

bool Config::get_bool(const std::string& key, bool def) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return def;
  const std::string& v = it->second;
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(key + ": expected a boolean, got '" + v + "'");
}

std::vector<double> Config::get_doubles(const std::string& key,
                                        const std::vector<double>& def) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return def;
  std::vector<double> out;
  std::istringstream in(it->second);
  std::string tok;
  while (in >> tok) {
    try {
      size_t pos = 0;
      out.push_back(std::stod(tok, &pos));
      if (pos != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ConfigError(key + ": expected numbers, got '" + tok + "'");
    }
  }
  if (out.empty()) throw ConfigError(key + ": empty list");
  return out;
}

std::vector<int> Config::get_ints(const std::string& key,
                                  const std::vector<int>& def) const {
  std::vector<double> dd =
      get_doubles(key, std::vector<double>(def.begin(), def.end()));
  std::vector<int> out;
  out.reserve(dd.size());
  for (double v : dd) {
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v)
      throw ConfigError(key + ": expected integers");
    out.push_back(i);
  }
  return out;
}

}  // namespace mdanm

#include "teletraffic/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace teletraffic {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::string at(const std::string& source, int line) { return source + ":" + std::to_string(line) + ": "; }

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  errno = 0;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && errno != ERANGE && std::isfinite(out);
}

bool valid_key(const std::string& k) {
  if (k.empty()) return false;
  for (char c : k)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
  return true;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, ',')) out.push_back(trim(cur));
  return out;
}

double to_number(const std::string& raw, const std::string& prefix, const std::string& key) {
  double v;
  if (!parse_double(raw, v)) throw ConfigError(prefix + "'" + key + "' expects a number, got '" + raw + "'");
  return v;
}

int to_integer(const std::string& raw, const std::string& prefix, const std::string& key) {
  const double v = to_number(raw, prefix, key);
  if (v != std::floor(v) || std::abs(v) > 2e9) throw ConfigError(prefix + "'" + key + "' expects an integer, got '" + raw + "'");
  return static_cast<int>(v);
}

}  // namespace

double ConfigItem::number(const std::string& key) const {
  auto it = fields.find(key);
  if (it == fields.end()) throw ConfigError(at(source, line) + "missing field '" + key + "'");
  return to_number(it->second, at(source, line), key);
}

double ConfigItem::number_or(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }

int ConfigItem::integer(const std::string& key) const {
  auto it = fields.find(key);
  if (it == fields.end()) throw ConfigError(at(source, line) + "missing field '" + key + "'");
  return to_integer(it->second, at(source, line), key);
}

std::string ConfigItem::text(const std::string& key) const {
  auto it = fields.find(key);
  if (it == fields.end()) throw ConfigError(at(source, line) + "missing field '" + key + "'");
  return it->second;
}

std::vector<double> ConfigItem::numbers(const std::string& key) const {
  std::vector<double> out;
  for (const auto& w : words(key)) out.push_back(to_number(w, at(source, line), key));
  return out;
}

std::vector<std::string> ConfigItem::words(const std::string& key) const { return split_commas(text(key)); }

void ConfigItem::allow_only(const std::set<std::string>& keys) const {
  for (const auto& [k, v] : fields)
    if (!keys.count(k)) throw ConfigError(at(source, line) + "unknown field '" + k + "'");
}

Config Config::parse(const std::string& text, const std::string& source) {
  Config c;
  c.source_ = source;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  std::string section;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(at(source, lineno) + "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!valid_key(section)) throw ConfigError(at(source, lineno) + "bad section name '" + section + "'");
      if (c.lists_.count(section)) throw ConfigError(at(source, lineno) + "duplicate section '" + section + "'");
      c.lists_[section];
      c.list_lines_[section] = lineno;
      continue;
    }
    if (section.empty()) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw ConfigError(at(source, lineno) + "expected 'key = value'");
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (!valid_key(key)) throw ConfigError(at(source, lineno) + "bad key '" + key + "'");
      if (value.empty()) throw ConfigError(at(source, lineno) + "empty value for '" + key + "'");
      if (c.scalars_.count(key)) throw ConfigError(at(source, lineno) + "duplicate key '" + key + "'");
      c.scalars_[key] = {value, lineno};
      continue;
    }
    ConfigItem item;
    item.line = lineno;
    item.source = source;
    std::istringstream tokens(line);
    std::string tok;
    bool bare = false, keyed = false;
    while (tokens >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) {
        double v;
        if (!parse_double(tok, v)) throw ConfigError(at(source, lineno) + "expected 'field=value' or a number, got '" + tok + "'");
        item.values.push_back(v);
        bare = true;
      } else {
        const std::string key = tok.substr(0, eq), value = tok.substr(eq + 1);
        if (!valid_key(key)) throw ConfigError(at(source, lineno) + "bad field name '" + key + "'");
        if (value.empty()) throw ConfigError(at(source, lineno) + "empty value for field '" + key + "'");
        if (item.fields.count(key)) throw ConfigError(at(source, lineno) + "duplicate field '" + key + "'");
        item.fields[key] = value;
        keyed = true;
      }
    }
    if (bare && keyed) throw ConfigError(at(source, lineno) + "cannot mix fields and bare numbers in one item");
    c.lists_[section].push_back(std::move(item));
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

std::string Config::where(const std::string& key) const {
  auto it = scalars_.find(key);
  return it == scalars_.end() ? source_ + ": " : at(source_, it->second.line);
}

std::string Config::text(const std::string& key) const {
  auto it = scalars_.find(key);
  if (it == scalars_.end()) throw ConfigError(source_ + ": missing key '" + key + "'");
  return it->second.value;
}

std::string Config::text_or(const std::string& key, const std::string& fallback) const { return has(key) ? text(key) : fallback; }

double Config::number(const std::string& key) const { return to_number(text(key), where(key), key); }

double Config::number_or(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }

int Config::integer(const std::string& key) const { return to_integer(text(key), where(key), key); }

int Config::integer_or(const std::string& key, int fallback) const { return has(key) ? integer(key) : fallback; }

std::vector<double> Config::numbers(const std::string& key) const {
  std::vector<double> out;
  for (const auto& w : split_commas(text(key))) out.push_back(to_number(w, where(key), key));
  return out;
}

const std::vector<ConfigItem>& Config::list(const std::string& name) const {
  auto it = lists_.find(name);
  if (it == lists_.end()) throw ConfigError(source_ + ": missing section [" + name + "]");
  return it->second;
}

void Config::allow_only(const std::set<std::string>& scalars, const std::set<std::string>& lists) const {
  for (const auto& [k, v] : scalars_)
    if (!scalars.count(k)) throw ConfigError(at(source_, v.line) + "unknown key '" + k + "'");
  for (const auto& [k, v] : lists_)
    if (!lists.count(k)) throw ConfigError(at(source_, list_lines_.at(k)) + "unknown section [" + k + "]");
}

CircuitNetworkSpec circuit_network_from_config(const Config& cfg) {
  CircuitNetworkSpec spec;
  std::map<std::string, std::size_t> index;
  for (const auto& item : cfg.list("links")) {
    item.allow_only({"id", "capacity"});
    const std::string id = item.text("id");
    if (index.count(id)) throw ConfigError(at(item.source, item.line) + "duplicate link id '" + id + "'");
    index[id] = spec.links.size();
    spec.links.push_back({id, item.integer("capacity")});
  }
  for (const auto& item : cfg.list("routes")) {
    item.allow_only({"links", "offered"});
    CircuitRoute r;
    for (const auto& id : item.words("links")) {
      auto it = index.find(id);
      if (it == index.end()) throw ConfigError(at(item.source, item.line) + "route references unknown link '" + id + "'");
      r.links.push_back(it->second);
    }
    r.offered = item.number("offered");
    spec.routes.push_back(r);
  }
  spec.validate();
  return spec;
}

JacksonSpec jackson_from_config(const Config& cfg) {
  JacksonSpec spec;
  for (const auto& item : cfg.list("queues")) {
    item.allow_only({"mu", "external_rate"});
    spec.service_rates.push_back(item.number("mu"));
    spec.external_rates.push_back(item.number_or("external_rate", 0.0));
  }
  const std::size_t n = spec.service_rates.size();
  spec.routing.assign(n, std::vector<double>(n, 0.0));
  if (cfg.has_list("routing")) {
    const auto& rows = cfg.list("routing");
    if (rows.size() != n) throw ConfigError(cfg.source() + ": [routing] needs one row per queue");
    for (std::size_t i = 0; i < n; ++i) {
      if (!rows[i].fields.empty() || rows[i].values.size() != n)
        throw ConfigError(at(rows[i].source, rows[i].line) + "routing row needs " + std::to_string(n) + " numbers");
      spec.routing[i] = rows[i].values;
    }
  }
  spec.validate();
  return spec;
}

std::vector<SourceClass> source_classes_from_config(const Config& cfg) {
  std::vector<SourceClass> out;
  for (const auto& item : cfg.list("classes")) {
    item.allow_only({"count", "peak", "p", "rates", "probs"});
    const int count = item.has("count") ? item.integer("count") : 1;
    if (item.has("rates")) {
      if (item.has("peak") || item.has("p")) throw ConfigError(at(item.source, item.line) + "use either peak/p or rates/probs");
      out.push_back(SourceClass{count, item.numbers("rates"), item.numbers("probs")});
    } else {
      out.push_back(SourceClass::on_off(count, item.number("peak"), item.number("p")));
    }
    out.back().validate();
  }
  return out;
}

CellularSpec cellular_from_config(const Config& cfg) {
  CellularSpec spec;
  spec.channels = cfg.integer("channels");
  spec.mu = cfg.number_or("mu", 1.0);
  for (const auto& item : cfg.list("cells")) {
    item.allow_only({"lambda", "handover"});
    spec.new_call_rate.push_back(item.number("lambda"));
    spec.handover_rate.push_back(item.number_or("handover", 0.0));
  }
  spec.cells = static_cast<int>(spec.new_call_rate.size());
  const auto n = spec.new_call_rate.size();
  spec.routing.assign(n, std::vector<double>(n, 0.0));
  if (cfg.has_list("routing")) {
    const auto& rows = cfg.list("routing");
    if (rows.size() != n) throw ConfigError(cfg.source() + ": [routing] needs one row per cell");
    for (std::size_t i = 0; i < n; ++i) {
      if (!rows[i].fields.empty() || rows[i].values.size() != n)
        throw ConfigError(at(rows[i].source, rows[i].line) + "routing row needs " + std::to_string(n) + " numbers");
      spec.routing[i] = rows[i].values;
    }
  }
  spec.validate();
  return spec;
}

}  // namespace teletraffic

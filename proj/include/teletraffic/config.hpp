#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "teletraffic/dimension.hpp"
#include "teletraffic/errors.hpp"
#include "teletraffic/network.hpp"
#include "teletraffic/sim.hpp"

namespace teletraffic {

// Grammar (one statement per line, '#' starts a comment):
//
//   key = value            top-level scalar
//   [name]                 opens a list section; every following
//                          non-blank line is one item until the next [name]
//   k1=v1 k2=v2 ...        an item made of fields (values may be
//                          comma-separated lists, no spaces)
//   0.5 0 0.5              an item made of bare numbers (matrix rows)
//
// Keys are case-sensitive. Duplicate scalars are an error.
class ConfigError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

struct ConfigItem {
  int line = 0;
  std::map<std::string, std::string> fields;
  std::vector<double> values;
  std::string source;

  bool has(const std::string& key) const { return fields.count(key) > 0; }
  double number(const std::string& key) const;
  double number_or(const std::string& key, double fallback) const;
  int integer(const std::string& key) const;
  std::string text(const std::string& key) const;
  std::vector<double> numbers(const std::string& key) const;
  std::vector<std::string> words(const std::string& key) const;
  void allow_only(const std::set<std::string>& keys) const;
};

class Config {
 public:
  static Config parse(const std::string& text, const std::string& source = "<config>");
  static Config load(const std::string& path);

  bool has(const std::string& key) const { return scalars_.count(key) > 0; }
  bool has_list(const std::string& name) const { return lists_.count(name) > 0; }
  std::string text(const std::string& key) const;
  std::string text_or(const std::string& key, const std::string& fallback) const;
  double number(const std::string& key) const;
  double number_or(const std::string& key, double fallback) const;
  int integer(const std::string& key) const;
  int integer_or(const std::string& key, int fallback) const;
  std::vector<double> numbers(const std::string& key) const;
  const std::vector<ConfigItem>& list(const std::string& name) const;

  // Rejects any scalar or list name outside the given sets.
  void allow_only(const std::set<std::string>& scalars, const std::set<std::string>& lists = {}) const;
  // Error message prefix "source:line: " for a scalar.
  std::string where(const std::string& key) const;
  const std::string& source() const { return source_; }

 private:
  struct Scalar {
    std::string value;
    int line;
  };
  std::map<std::string, Scalar> scalars_;
  std::map<std::string, std::vector<ConfigItem>> lists_;
  std::map<std::string, int> list_lines_;
  std::string source_;
};

// Builders from the config grammar.
//   links:  [links] id=L1 capacity=10
//   routes: [routes] links=L1,L2 offered=8
CircuitNetworkSpec circuit_network_from_config(const Config& cfg);
//   [queues] mu=1 external_rate=0.5   and   [routing] rows of numbers
JacksonSpec jackson_from_config(const Config& cfg);
//   [classes] count=20 peak=10 p=0.1   or   count=3 rates=0,1,5 probs=...
std::vector<SourceClass> source_classes_from_config(const Config& cfg);
//   channels, mu; [cells] lambda=.. handover=..; [routing] rows
CellularSpec cellular_from_config(const Config& cfg);

}  // namespace teletraffic

// SPDX-License-Identifier: Apache-2.0

#include "optsweep/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "optsweep/errors.hpp"

namespace optsweep {

namespace {

bool valid_pass_identifier(const std::string& tok) {
  if (tok.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(tok.front()))) return false;
  return std::all_of(tok.begin(), tok.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '-' || c == '_' || c == '.';
  });
}

std::string strip(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

int PassPipeline::transformation_count() const {
  return static_cast<int>(
      std::count_if(invocations.begin(), invocations.end(), [](const auto& p) {
        return p.kind == PassKind::Transformation;
      }));
}

PassPipeline parse_pipeline(const std::string& raw_text,
                            const std::set<std::string>& whitelist,
                            const std::string& level_label,
                            const std::set<std::string>& known_analyses,
                            ParseDiagnostics* diags) {
  PassPipeline pipe;
  pipe.level_label = level_label;

  std::unordered_map<std::string, int> seen;
  std::set<std::string> warned;
  std::istringstream in(raw_text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    // a line may carry several whitespace-separated identifiers (some
    // compilers dump the whole flag list on one line)
    std::istringstream toks(strip(line));
    std::string tok;
    while (toks >> tok) {
      if (tok.front() == '-') tok.erase(0, 1);  // accept "-sroa" style dumps
      if (!valid_pass_identifier(tok)) throw MalformedLine(lineno, tok);
      PassInvocation inv;
      inv.name = tok;
      inv.position = static_cast<int>(pipe.invocations.size()) + 1;
      inv.occurrence = ++seen[tok];
      if (whitelist.count(tok)) {
        inv.kind = PassKind::Transformation;
      } else {
        inv.kind = PassKind::Analysis;
        if (!known_analyses.empty() && !known_analyses.count(tok) &&
            warned.insert(tok).second && diags) {
          diags->unknown_passes.push_back(tok);
        }
      }
      pipe.invocations.push_back(std::move(inv));
    }
  }
  if (pipe.invocations.empty()) {
    throw EmptyInput("no pass identifiers found in pipeline input");
  }
  return pipe;
}

std::vector<OptConfig> generate_configs(const PassPipeline& pipeline) {
  std::vector<OptConfig> configs;

  OptConfig empty;
  empty.prefix_len = 0;
  empty.id = config_label(empty);
  configs.push_back(std::move(empty));

  std::vector<std::string> flags;
  flags.reserve(pipeline.invocations.size());
  for (const auto& inv : pipeline.invocations) {
    flags.push_back(inv.name);
    if (inv.kind != PassKind::Transformation) continue;
    OptConfig cfg;
    cfg.prefix_len = inv.position;
    cfg.last_transform_name = inv.name;
    cfg.flags = flags;  // copy of the prefix up to and including this pass
    cfg.id = config_label(cfg);
    configs.push_back(std::move(cfg));
  }
  return configs;
}

std::string config_label(const OptConfig& config) {
  if (config.prefix_len == 0) return "-O0-custom";
  return config.last_transform_name + " - " + std::to_string(config.prefix_len);
}

std::set<std::string> load_pass_name_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open pass name list: " + path);
  std::set<std::string> names;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto tok = strip(line);
    if (!tok.empty()) names.insert(tok);
  }
  return names;
}

}  // namespace optsweep

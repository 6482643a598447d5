#pragma once

// Corpus specifications: which groups, truncation radii and parabolic
// subsets the exhaustive checks run over.

#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "coxeter/enumerated.hpp"
#include "coxeter/system.hpp"

namespace coxeter {

enum class JPolicy { AllSubsets, Listed, EmptyOnly };

struct CorpusEntry {
  std::string type;            // preset name, or a label for matrix entries
  nlohmann::json matrix;       // {"cartan": ...} or {"coxeter": ...}; null for presets
  std::optional<int> max_length;
  JPolicy policy = JPolicy::EmptyOnly;
  std::vector<GeneratorSet> listed;

  SystemPtr build() const {
    if (matrix.is_null()) return build_system(type);
    auto doc = matrix;
    doc["name"] = type;
    return build_system_from_json(doc);
  }
};

struct CorpusSpec {
  std::vector<CorpusEntry> entries;
  nlohmann::json source;  // the parsed document, for digests
};

/// {"entries": [{"type": "B4", "J": "all"}, {"type": "C2~", "maxLength": 8, "J": "empty"}]}
/// "J" is "all", "empty", or a list of generator lists. Every entry is built
/// once here so that invalid descriptors fail at load time.
inline CorpusSpec parse_corpus(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("entries") || !doc.at("entries").is_array())
    throw Error(ErrorCode::FormatError, "corpus needs an \"entries\" array");
  CorpusSpec spec;
  spec.source = doc;
  for (const auto& item : doc.at("entries")) {
    CorpusEntry e;
    if (!item.is_object()) throw Error(ErrorCode::FormatError, "corpus entries must be objects");
    if (item.contains("cartan") || item.contains("coxeter")) {
      e.matrix = nlohmann::json::object();
      if (item.contains("cartan")) e.matrix["cartan"] = item.at("cartan");
      if (item.contains("coxeter")) e.matrix["coxeter"] = item.at("coxeter");
      e.type = item.value("type", std::string("matrix"));
    } else if (item.contains("type") && item.at("type").is_string()) {
      e.type = item.at("type").get<std::string>();
    } else {
      throw Error(ErrorCode::FormatError, "corpus entry needs \"type\" or a matrix");
    }
    if (item.contains("maxLength")) {
      if (!item.at("maxLength").is_number_integer() || item.at("maxLength").get<int>() < 0)
        throw Error(ErrorCode::FormatError, "maxLength must be a nonnegative integer");
      e.max_length = item.at("maxLength").get<int>();
    }
    const auto j = item.value("J", nlohmann::json("empty"));
    if (j.is_string() && j.get<std::string>() == "all") {
      e.policy = JPolicy::AllSubsets;
    } else if (j.is_string() && j.get<std::string>() == "empty") {
      e.policy = JPolicy::EmptyOnly;
    } else if (j.is_array()) {
      e.policy = JPolicy::Listed;
      for (const auto& subset : j) e.listed.push_back(GeneratorSet::from_list(subset.get<std::vector<int>>()));
    } else {
      throw Error(ErrorCode::FormatError, "J must be \"all\", \"empty\" or a list of subsets");
    }
    const auto sys = e.build();
    if (!sys->is_finite() && !e.max_length)
      throw Error(ErrorCode::FormatError, "infinite entry " + e.type + " needs maxLength");
    for (const auto& subset : e.listed)
      for (Generator s : subset.to_list())
        if (s > sys->rank()) throw Error(ErrorCode::FormatError, "J lists generator " + std::to_string(s) + " for " + e.type);
    spec.entries.push_back(std::move(e));
  }
  return spec;
}

inline CorpusSpec load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Usage, "cannot open corpus file '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::FormatError, "corpus '" + path + "': " + ex.what());
  }
  return parse_corpus(doc);
}

/// Subsets J to check for an entry, in increasing bitmask order.
inline std::vector<GeneratorSet> parabolic_subsets(const CorpusEntry& entry, int rank) {
  switch (entry.policy) {
    case JPolicy::AllSubsets: {
      std::vector<GeneratorSet> out;
      for (std::uint64_t m = 0; m < (std::uint64_t{1} << rank); ++m) out.emplace_back(m);
      return out;
    }
    case JPolicy::Listed: return entry.listed;
    case JPolicy::EmptyOnly: break;
  }
  return {GeneratorSet{}};
}

/// A corpus entry with its system and enumerated ball.
struct CorpusGroup {
  CorpusEntry entry;
  SystemPtr system;
  std::shared_ptr<const EnumeratedGroup> group;

  const std::string& name() const { return entry.type; }
};

inline std::vector<CorpusGroup> materialize(const CorpusSpec& spec) {
  std::vector<CorpusGroup> out;
  for (const auto& e : spec.entries) {
    auto sys = e.build();
    auto g = std::make_shared<const EnumeratedGroup>(sys, e.max_length.value_or(-1));
    out.push_back({e, std::move(sys), std::move(g)});
  }
  return out;
}

/// The corpus shipped in corpus/default.json.
inline nlohmann::json default_corpus_json() {
  return nlohmann::json::parse(R"({"entries": [
    {"type": "A1", "J": "all"}, {"type": "A2", "J": "all"}, {"type": "A3", "J": "all"},
    {"type": "A4", "J": "all"}, {"type": "B2", "J": "all"}, {"type": "B3", "J": "all"},
    {"type": "B4", "J": "all"}, {"type": "D4", "J": "all"}, {"type": "G2", "J": "all"},
    {"type": "F4", "J": "empty"},
    {"type": "A2~", "maxLength": 10, "J": "all"}, {"type": "C2~", "maxLength": 10, "J": "all"}
  ]})");
}

}  // namespace coxeter

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "praag/gocha.hpp"
#include "praag/graph.hpp"
#include "praag/presentation.hpp"
#include "praag/quadalg.hpp"

namespace praag {

struct AnalyzeOptions {
  std::size_t mildness_depth = 8;
  // The embedded search is kept small; the ggs subcommand runs deeper.
  GgsBounds ggs{.max_weight = 4, .grid = 100};
  CompletionSearch completion;
};

// Everything the analyze pipeline derives from one p-graph. Undecidable
// answers stay visible as unknowns with a note instead of defaulting.
struct AnalysisReport {
  PGraph input;
  std::size_t d = 0, r = 0;
  bool triangle_free = false;
  bool chordal = false; // every component
  bool complete = false;
  PredictedCohomology predicted;
  MildnessReport mildness;
  QuadraticityStatus quadraticity;
  std::optional<bool> cyclotomic; // nullopt: undecidable at this precision
  std::string cyclotomic_note;
  std::optional<Abelianization> abelianization;
  std::string abelianization_note;
  GgsSearchOutcome ggs;
  std::vector<FreeSubgroupVerdict> free_subgroup;
};

AnalysisReport analyze(const PGraph& g, const AnalyzeOptions& opts = {});

// Canonical JSON (schema praag-report/1): sorted keys, exact values only, so
// parse -> re-emit is byte-identical.
std::string report_json(const AnalysisReport& r);
std::string report_text(const AnalysisReport& r);

} // namespace praag

#pragma once

#include <span>
#include <utility>
#include <vector>

#include "stpa/declaration.hpp"
#include "stpa/diagnostic.hpp"
#include "stpa/model.hpp"

namespace stpa {

struct AssemblyResult {
  AnalysisModel model;
  std::vector<Diagnostic> diagnostics;
};

/// Builds a model from declarations in order. Entities whose declaration is
/// malformed (bad id, bad enum token, wrong cardinality) are dropped with a
/// diagnostic; everything else is registered even if its references dangle,
/// so that the model round-trips. Integrity findings come from
/// validate_integrity and are appended after the construction diagnostics.
AssemblyResult assemble_model(std::span<const Declaration> declarations);

/// Re-checks every entity invariant plus orphan warnings. Pure and
/// idempotent; diagnostics are ordered by entity kind, then id.
std::vector<Diagnostic> validate_integrity(const AnalysisModel& model);

}  // namespace stpa

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tbl/digraph.hpp"

namespace tbl {

enum class ClaimStatus { Holds, Violated, NotApplicable };

constexpr std::string_view status_name(ClaimStatus s) {
  switch (s) {
    case ClaimStatus::Holds: return "holds";
    case ClaimStatus::Violated: return "violated";
    case ClaimStatus::NotApplicable: return "not_applicable";
  }
  return "unknown";
}

// What a violated claim points at. `vertices` holds a vertex, a path, an arc
// (tail, head) or a set-pair witness vertex depending on `kind`; `indices`
// holds chain or X-set indices; `value` a distance where relevant.
struct Evidence {
  std::string kind;
  std::vector<Vertex> vertices;
  std::vector<int> indices;
  std::optional<int> value;
  std::vector<std::vector<Vertex>> paths;
};

struct ClaimReport {
  std::string claim;
  ClaimStatus status = ClaimStatus::NotApplicable;
  std::optional<Evidence> evidence;
  std::string note;
  std::vector<ClaimReport> parts;

  bool violated() const { return status == ClaimStatus::Violated; }

  static ClaimReport holds(std::string id) { return {std::move(id), ClaimStatus::Holds, {}, {}, {}}; }
  static ClaimReport not_applicable(std::string id, std::string why) {
    return {std::move(id), ClaimStatus::NotApplicable, {}, std::move(why), {}};
  }
  static ClaimReport violated_by(std::string id, Evidence e) {
    return {std::move(id), ClaimStatus::Violated, std::move(e), {}, {}};
  }
};

/// Violated if any part is violated (carrying that part's evidence), holds if
/// any part holds, otherwise n/a.
inline ClaimReport combine(std::string id, std::vector<ClaimReport> parts) {
  ClaimReport r;
  r.claim = std::move(id);
  r.status = ClaimStatus::NotApplicable;
  for (const auto& p : parts) {
    if (p.status == ClaimStatus::Violated) {
      r.status = ClaimStatus::Violated;
      r.evidence = p.evidence;
      break;
    }
    if (p.status == ClaimStatus::Holds) r.status = ClaimStatus::Holds;
  }
  r.parts = std::move(parts);
  return r;
}

}  // namespace tbl

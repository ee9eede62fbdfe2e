#pragma once

#include "rinf/tree.hpp"

#include <nlohmann/json.hpp>

namespace rinf {

/// {"sig": "...", "depth": d, "labels": [[images], ...]} in breadth-first order.
nlohmann::json portrait_to_json(const Portrait &p);
Portrait portrait_from_json(const nlohmann::json &j);

/// Stabilizer depth, fixed vertices per level 1..d and nontrivial labels per
/// level 0..d-1.
nlohmann::json portrait_stats(const Portrait &p);

} // namespace rinf

#pragma once

#include <string>

#include "entropic/schrodinger.hpp"

namespace entropic {

/// Versioned JSON containers for solver outputs. Potentials may carry -inf
/// sentinels at off-support endpoints; those are encoded as JSON nulls and
/// decoded back to -inf.
std::string serialize_solution(const SchrodingerSolution& solution);
SchrodingerSolution deserialize_solution(const std::string& text);

std::string serialize_path(const InterpolationPath& path);
InterpolationPath deserialize_path(const std::string& text);

}  // namespace entropic

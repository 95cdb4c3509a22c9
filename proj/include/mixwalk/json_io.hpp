#pragma once
#include <string>

#include "mixwalk/degree_model.hpp"

namespace mixwalk {

// {"support":[3,4],"probs":[0.5,0.5]}; strict is derived (min support >= 3).
DegreeDistribution load_degree_law(const std::string& path);
std::string degree_law_json(const DegreeDistribution& dd);
void save_degree_law(const DegreeDistribution& dd, const std::string& path, bool force = false);

// Serialized output always goes through this: refuses to overwrite an
// existing file unless force is set, and writes atomically enough for our
// purposes (single write call).
void write_text_file(const std::string& path, const std::string& contents, bool force);

// Fixed float formatting shared by every CSV writer (shortest round-trip).
std::string fmt_double(double x);

}  // namespace mixwalk

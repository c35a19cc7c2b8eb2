#pragma once

#include <memory>
#include <string>

#include "kenv/bgg.hpp"
#include "kenv/potential.hpp"
#include "kenv/toric.hpp"

namespace kenv {

// JSON file loaders for the structured-text formats. All parse errors throw
// std::invalid_argument with the file path and a description.

// Potential file: { "n": .., "m": .., "W": ["poly", ...],
//                   "grading": { "free_rank": r, "torsion": [d1,..],
//                                "alpha": ["[..]",..], "beta": ["[..]",..] } }
// The grading block is optional; without it A = ZZ and deg x_i = 1.
std::shared_ptr<Potential> load_potential(const std::string& path);

// Fan file: { "rank": n, "rays": [[..],..], "max_cones": [[1-based],..] }
Fan load_fan(const std::string& path);

// Module file: { "generators": [["name", "[deg]", hdeg], ...],
//                "relations":  [["poly", ...], ...] }
ModulePresentation load_module(const std::string& path, const Potential& pot);

// Window file: { "degrees": ["[..]", ...], "h_min": a, "h_max": b }
Window load_window(const std::string& path, const Potential& pot);

Degree degree_from_literal(const std::string& text, const AbelianGroup& group);

}  // namespace kenv

#pragma once

#include "linkspec/hamiltonian.hpp"

#include <string>

namespace linkspec {

// JSON Hamiltonian format, tagged by "kind":
//   {"kind": "z_profile", "expr": "z - 1/2"}
//   {"kind": "radial", "expr": "1 - r^2", "radius": 1}
//   {"kind": "grid", "model": "sphere", "x_lo": 0, "x_hi": 1, "nx": 3, "ntheta": 4, "values": [...]}
//   {"kind": "twist", "f": "r^-4", "radius": 0.38, "level": 50}   (or "index": i, "rule": "radius")
// Composites use "op" instead: add, scale, bar, compose, power, mean_normalize, embed_cap.
//   {"op": "add", "args": [A, B]}   {"op": "scale", "factor": 2, "arg": A}   {"op": "power", "n": 3, "arg": A}
// Any node may carry "support": [lo, hi] and "shift": "expression in t".
Hamiltonian parse_hamiltonian(const std::string& json_text);
Hamiltonian load_hamiltonian(const std::string& path);

}  // namespace linkspec

#pragma once

#include "linkspec/surface_link.hpp"

#include <string>

namespace linkspec {

// JSON link format:
//   {"genus": g, "total_area": "p/q",
//    "circles": [{"id": "c1", "contractible": true, "z": "1/3"}, ...],
//    "regions": [{"id": "B1", "area": "1/3", "boundary": [["c1", 1], ...]}, ...]}
// A circle may carry "z", "r" or "polygon" ([[z, theta], ...]) as realization.
SurfaceLink parse_link(const std::string& json_text);
std::string link_to_json(const SurfaceLink& link, int indent = 2);

SurfaceLink load_link(const std::string& path);
void save_link(const SurfaceLink& link, const std::string& path);

// Whole-file helpers shared by the readers; throw IoError.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace linkspec

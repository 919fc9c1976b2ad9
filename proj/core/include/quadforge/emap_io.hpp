#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "quadforge/embedding.hpp"

namespace quadforge {

// Embedding text format, version 1:
//
//   emap 1
//   V <vertex count>
//   E <edge count>
//   e <edge-id> <u> <v> <+|->        one line per edge
//   r <vertex> : <edge-id ...>       one line per vertex, incident edges in cyclic order
//
// Writers emit edges by canonical id (sorted endpoint pairs) and vertices in
// increasing label order, each rotation starting at its smallest edge id.
// Readers accept any edge ids and renumber them canonically.

/// Throws FormatError carrying the offending line number.
Embedding parse_emap(std::string_view text);
std::string write_emap(const Embedding& emb);

/// Throws FormatError (including I/O failures).
Embedding read_emap_file(const std::filesystem::path& path);
void write_emap_file(const std::filesystem::path& path, const Embedding& emb);

std::string read_text_file(const std::filesystem::path& path);
/// Writes through a temporary file and renames it into place.
void write_text_file_atomic(const std::filesystem::path& path, const std::string& text);

}  // namespace quadforge

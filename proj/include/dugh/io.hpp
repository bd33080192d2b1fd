#ifndef DUGH_IO_HPP
#define DUGH_IO_HPP

#include <map>
#include <string>

#include "dugh/common.hpp"

/// Plain-text persistence for matrices and flat key=value config files.
///
/// Matrix format: a first line "rows cols", then one line per row of
/// whitespace-separated entries written with 17 significant digits so that
/// IEEE doubles round-trip exactly.
namespace dugh::io {

/// Writes a matrix to `path`. Throws Error when the file cannot be opened.
void save_matrix(const std::string& path, const Matrix& a);

/// Reads a matrix written by save_matrix. Throws ParseError (with a line
/// number) on malformed headers, wrong entry counts, or non-numeric tokens.
Matrix load_matrix(const std::string& path);

/// Flat configuration: one `key=value` per line; '#' starts a comment; blank
/// lines are skipped; whitespace around keys and values is trimmed.
/// Duplicate keys keep the last occurrence.
std::map<std::string, std::string> load_config(const std::string& path);

/// Writes keys in lexicographic order, one `key=value` per line.
void save_config(const std::string& path,
                 const std::map<std::string, std::string>& entries);

/// Formats a double with 17 significant digits (round-trip safe).
std::string format_double(double v);

}  // namespace dugh::io

#endif  // DUGH_IO_HPP

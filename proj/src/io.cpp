#include "dugh/io.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace dugh::io {

namespace {

std::string trimmed(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

[[noreturn]] void parse_fail(const std::string& path, long line,
                             const std::string& what) {
  throw ParseError(path + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void save_matrix(const std::string& path, const Matrix& a) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path);
  out << a.rows() << ' ' << a.cols() << '\n';
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      if (j) out << ' ';
      out << format_double(a(i, j));
    }
    out << '\n';
  }
  if (!out) throw Error("write failed: " + path);
}

Matrix load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open for reading: " + path);

  std::string line;
  long line_no = 0;

  if (!std::getline(in, line)) parse_fail(path, 1, "missing header");
  ++line_no;
  long long rows = 0;
  long long cols = 0;
  {
    std::istringstream head(line);
    std::string extra;
    if (!(head >> rows >> cols) || (head >> extra)) {
      parse_fail(path, line_no, "header must be 'rows cols'");
    }
    if (rows < 0 || cols < 0) {
      parse_fail(path, line_no, "negative dimensions in header");
    }
  }

  Matrix a(rows, cols);
  for (long long i = 0; i < rows; ++i) {
    if (!std::getline(in, line)) {
      parse_fail(path, line_no + 1, "unexpected end of file (expected " +
                                        std::to_string(rows) + " rows)");
    }
    ++line_no;
    std::istringstream row(line);
    for (long long j = 0; j < cols; ++j) {
      std::string tok;
      if (!(row >> tok)) {
        parse_fail(path, line_no,
                   "row has fewer than " + std::to_string(cols) + " entries");
      }
      double v = 0.0;
      const char* first = tok.data();
      const char* last = tok.data() + tok.size();
      auto [ptr, ec] = std::from_chars(first, last, v);
      if (ec != std::errc{} || ptr != last) {
        parse_fail(path, line_no, "non-numeric entry '" + tok + "'");
      }
      a(i, j) = v;
    }
    std::string extra;
    if (row >> extra) {
      parse_fail(path, line_no,
                 "row has more than " + std::to_string(cols) + " entries");
    }
  }
  return a;
}

std::map<std::string, std::string> load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open for reading: " + path);

  std::map<std::string, std::string> entries;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string body = trimmed(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      parse_fail(path, line_no, "expected key=value");
    }
    const std::string key = trimmed(body.substr(0, eq));
    const std::string value = trimmed(body.substr(eq + 1));
    if (key.empty()) parse_fail(path, line_no, "empty key");
    entries[key] = value;
  }
  return entries;
}

void save_config(const std::string& path,
                 const std::map<std::string, std::string>& entries) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path);
  for (const auto& [key, value] : entries) {
    out << key << '=' << value << '\n';
  }
  if (!out) throw Error("write failed: " + path);
}

}  // namespace dugh::io

#pragma once

// Text format for tables:
//
//   dfun N=<n> M=<m> [name=<id>]
//   # var3..var<m> = <labels>        (one per block, only when M >= 3;
//                                      "# var3 = <label>" when M = 3)
//   <row-label>: <cell> <cell> ...
//
// Rows run over the first variable, columns over the second, and blocks over
// variables 3..M with the third variable slowest. Everything is listed in
// ascending label order.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dfun/alphabet.hpp"
#include "dfun/error.hpp"
#include "dfun/function.hpp"

namespace dfun {

namespace detail {

inline bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
  });
}

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

inline std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

inline std::optional<std::size_t> parse_count(std::string_view s) {
  std::size_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

/// Labels of block `block` over variables 3..M, third variable slowest.
inline std::vector<Residue> block_coords(const Alphabet& alpha, std::size_t arity, std::size_t block) {
  const std::size_t extra = arity > 2 ? arity - 2 : 0;
  std::vector<Residue> out(extra);
  for (std::size_t k = extra; k-- > 0;) {
    out[k] = alpha.display_order()[block % alpha.size()];
    block /= alpha.size();
  }
  return out;
}

inline std::string block_header(const Alphabet& alpha, std::size_t arity, std::size_t block) {
  std::string out = arity == 3 ? "# var3 =" : "# var3..var" + std::to_string(arity) + " =";
  for (Residue r : block_coords(alpha, arity, block)) {
    out += ' ';
    out += alpha.label(r);
  }
  return out;
}

}  // namespace detail

inline std::string print_table(const DiscreteFunction& f) {
  const auto& alpha = f.alphabet();
  const std::size_t n = alpha.size();
  const std::size_t m = f.arity();
  std::string out = "dfun N=" + std::to_string(n) + " M=" + std::to_string(m);
  if (!f.name().empty()) {
    if (!detail::is_identifier(f.name())) throw usage_error("table name '" + f.name() + "' is not an identifier");
    out += " name=" + f.name();
  }
  out += '\n';
  const std::size_t blocks = m > 2 ? ipow(n, m - 2) : 1;
  std::vector<Residue> coords(m);
  for (std::size_t b = 0; b < blocks; ++b) {
    if (m >= 3) {
      out += detail::block_header(alpha, m, b);
      out += '\n';
      const auto rest = detail::block_coords(alpha, m, b);
      std::copy(rest.begin(), rest.end(), coords.begin() + 2);
    }
    for (Residue row : alpha.display_order()) {
      coords[0] = row;
      out += alpha.label(row);
      out += ':';
      if (m == 1) {
        out += ' ';
        out += format_value(f(coords), alpha);
      } else {
        for (Residue col : alpha.display_order()) {
          coords[1] = col;
          out += ' ';
          out += format_value(f(coords), alpha);
        }
      }
      out += '\n';
    }
  }
  return out;
}

/// Parses the table format. Without `alphabet`, N=3 files may use either the
/// numeric labels or the operator labels (-e, o, e); the first row label decides.
inline DiscreteFunction parse_table(std::string_view text, std::optional<Alphabet> alphabet = std::nullopt) {
  const auto lines = detail::split_lines(text);
  std::size_t li = 0;
  auto skip_blank = [&] {
    while (li < lines.size()) {
      const auto line = lines[li];
      const bool blank = line.find_first_not_of(" \t") == std::string_view::npos;
      const bool comment = !line.empty() && line[0] == '#' && line.rfind("# var", 0) != 0;
      if (!blank && !comment) break;
      ++li;
    }
  };

  skip_blank();
  if (li >= lines.size()) throw parse_error("empty table text", 1, 1);
  const auto header = detail::split_ws(lines[li]);
  const std::size_t header_line = li + 1;
  if (header.empty() || header[0] != "dfun") throw parse_error("expected 'dfun' header", header_line, 1);
  std::optional<std::size_t> n, m;
  std::string name;
  for (std::size_t i = 1; i < header.size(); ++i) {
    const auto tok = header[i];
    if (tok.rfind("N=", 0) == 0 && !n) {
      n = detail::parse_count(tok.substr(2));
    } else if (tok.rfind("M=", 0) == 0 && !m) {
      m = detail::parse_count(tok.substr(2));
    } else if (tok.rfind("name=", 0) == 0 && name.empty() && detail::is_identifier(tok.substr(5))) {
      name = std::string(tok.substr(5));
    } else {
      throw parse_error("unexpected header field '" + std::string(tok) + "'", header_line,
                        static_cast<std::size_t>(tok.data() - lines[li].data()) + 1);
    }
  }
  if (!n || !m) throw parse_error("header needs N=<n> and M=<m>", header_line, 1);
  if (*n < 2 || *n > max_alphabet_size) throw parse_error("unsupported alphabet size", header_line, 1);
  if (*m < 1 || *m > 12) throw parse_error("unsupported arity", header_line, 1);
  ++li;

  Alphabet alpha = alphabet.value_or(Alphabet::standard(*n));
  if (alpha.size() != *n) throw parse_error("header N does not match the requested alphabet", header_line, 1);
  if (!alphabet && *n == 3) {
    // Peek at the first row label to pick between numeric and operator labels.
    std::size_t peek = li;
    while (peek < lines.size()) {
      const auto line = lines[peek];
      if (line.find_first_not_of(" \t") != std::string_view::npos && line[0] != '#') break;
      ++peek;
    }
    if (peek < lines.size()) {
      const auto colon = lines[peek].find(':');
      const auto tokens = detail::split_ws(lines[peek].substr(0, colon));
      if (!tokens.empty() && !alpha.find(tokens[0]) && Alphabet::operators().find(tokens[0])) {
        alpha = Alphabet::operators();
      }
    }
  }

  const std::size_t size = alpha.size();
  const std::size_t arity = *m;
  const std::size_t blocks = arity > 2 ? ipow(size, arity - 2) : 1;
  const std::size_t row_cells = arity == 1 ? 1 : size;
  std::vector<MultiValue> cells(ipow(size, arity));
  std::vector<Residue> coords(arity);

  for (std::size_t b = 0; b < blocks; ++b) {
    if (arity >= 3) {
      skip_blank();
      const std::string expected = detail::block_header(alpha, arity, b);
      if (li >= lines.size()) throw parse_error("missing block '" + expected + "'", li + 1, 1);
      auto got = detail::split_ws(lines[li]);
      if (arity == 3 && got.size() > 1 && got[1] == "var3..var3") got[1] = "var3";  // the long form is fine too
      if (got != detail::split_ws(expected)) {
        throw parse_error("expected block header '" + expected + "'", li + 1, 1);
      }
      ++li;
      const auto rest = detail::block_coords(alpha, arity, b);
      std::copy(rest.begin(), rest.end(), coords.begin() + 2);
    }
    for (Residue row : alpha.display_order()) {
      skip_blank();
      if (li >= lines.size()) throw parse_error("missing row '" + std::string(alpha.label(row)) + "'", li + 1, 1);
      const auto line = lines[li];
      const auto colon = line.find(':');
      if (colon == std::string_view::npos) throw parse_error("expected '<row-label>:'", li + 1, 1);
      const auto label = detail::split_ws(line.substr(0, colon));
      if (label.size() != 1 || label[0] != alpha.label(row)) {
        throw parse_error("expected row label '" + std::string(alpha.label(row)) + "'", li + 1, 1);
      }
      const auto values = detail::split_ws(line.substr(colon + 1));
      if (values.size() != row_cells) {
        throw parse_error("expected " + std::to_string(row_cells) + " cells, found " + std::to_string(values.size()),
                          li + 1, colon + 2);
      }
      coords[0] = row;
      for (std::size_t j = 0; j < row_cells; ++j) {
        const auto v = parse_value(values[j], alpha);
        if (!v) {
          throw parse_error("bad cell '" + std::string(values[j]) + "'", li + 1,
                            static_cast<std::size_t>(values[j].data() - line.data()) + 1);
        }
        if (arity >= 2) coords[1] = alpha.display_order()[j];
        std::size_t flat = 0;
        for (Residue r : coords) flat = flat * size + r;
        cells[flat] = *v;
      }
      ++li;
    }
  }
  skip_blank();
  if (li < lines.size()) throw parse_error("trailing text after table", li + 1, 1);
  return DiscreteFunction(std::move(alpha), arity, std::move(cells), std::move(name));
}

/// Human-oriented layout: blocks side by side, each with a header row over the
/// second variable and row labels over the first.
inline std::string show_table(const DiscreteFunction& f) {
  const auto& alpha = f.alphabet();
  const std::size_t n = alpha.size();
  const std::size_t m = f.arity();
  const std::size_t blocks = m > 2 ? ipow(n, m - 2) : 1;
  const std::size_t cols = m == 1 ? 1 : n;

  // grid[block][row][col], row 0 is the header row, col 0 the row labels.
  std::vector<std::vector<std::vector<std::string>>> grid(blocks);
  std::vector<Residue> coords(m);
  for (std::size_t b = 0; b < blocks; ++b) {
    auto& g = grid[b];
    g.assign(n + 1, std::vector<std::string>(cols + 1));
    if (m >= 3) {
      const auto rest = detail::block_coords(alpha, m, b);
      std::copy(rest.begin(), rest.end(), coords.begin() + 2);
      std::string head = "x3..=";
      for (std::size_t k = 0; k < rest.size(); ++k) {
        if (k > 0) head += ',';
        head += alpha.label(rest[k]);
      }
      g[0][0] = head;
    }
    for (std::size_t j = 0; j < cols; ++j) {
      g[0][j + 1] = m == 1 ? "" : std::string(alpha.label(alpha.display_order()[j]));
    }
    for (std::size_t i = 0; i < n; ++i) {
      coords[0] = alpha.display_order()[i];
      g[i + 1][0] = alpha.label(coords[0]);
      for (std::size_t j = 0; j < cols; ++j) {
        if (m >= 2) coords[1] = alpha.display_order()[j];
        g[i + 1][j + 1] = format_value(f(coords), alpha);
      }
    }
  }
  std::size_t width = 1;
  for (const auto& g : grid)
    for (const auto& row : g)
      for (const auto& c : row) width = std::max(width, c.size());

  std::ostringstream os;
  if (!f.name().empty()) os << f.name() << '\n';
  for (std::size_t r = 0; r <= n; ++r) {
    std::string line;
    for (std::size_t b = 0; b < blocks; ++b) {
      if (b > 0) line += " || ";
      for (std::size_t c = 0; c <= cols; ++c) {
        if (c > 0) line += " |";
        const auto& cell = grid[b][r][c];
        line += ' ';
        line += std::string(width - cell.size(), ' ');
        line += cell;
      }
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    os << line << '\n';
  }
  return os.str();
}

}  // namespace dfun

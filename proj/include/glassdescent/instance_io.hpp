#pragma once

// Text persistence for instances:
//
//   SK <N> <seed>
//   i j J_ij        (one line per pair i < j, 0-based, full precision)

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "glassdescent/error.hpp"
#include "glassdescent/sk_model.hpp"

namespace glassdescent {

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_instance(std::ostream &out, const Instance &instance) {
  const std::size_t n = instance.size();
  out << "SK " << n << ' ' << instance.seed() << '\n';
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      out << i << ' ' << j << ' ' << format_double(instance.coupling(i, j)) << '\n';
}

inline void save_instance(const std::string &path, const Instance &instance) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error("cannot open '" + path + "' for writing");
  write_instance(out, instance);
  out.flush();
  if (!out)
    throw Error("failed writing '" + path + "'");
}

namespace detail {

template <typename T> bool parse_number(const std::string &token, T &value) {
  const char *first = token.data();
  const char *last = first + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  return ec == std::errc() && ptr == last;
}

} // namespace detail

/// Reads an instance; every pair i < j must appear exactly once.
/// Throws ParseError carrying the offending line number.
inline Instance read_instance(std::istream &in) {
  std::string line;
  std::size_t line_no = 0;

  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r')
        line.pop_back();
      if (line.find_first_not_of(" \t") != std::string::npos)
        return true;
    }
    return false;
  };

  if (!next_line())
    throw ParseError("empty instance file", line_no);

  std::size_t n = 0;
  std::uint64_t seed = 0;
  {
    std::istringstream header(line);
    std::string tag, n_tok, seed_tok, extra;
    header >> tag >> n_tok >> seed_tok;
    if (tag != "SK" || !detail::parse_number(n_tok, n) || !detail::parse_number(seed_tok, seed) ||
        (header >> extra))
      throw ParseError("expected header 'SK <N> <seed>'", line_no);
    if (n < 2)
      throw ParseError("instance size must be at least 2", line_no);
  }

  std::vector<double> matrix(n * n, 0.0);
  std::vector<char> seen(n * n, 0);
  std::size_t pairs = 0;
  while (next_line()) {
    std::istringstream fields(line);
    std::string i_tok, j_tok, v_tok, extra;
    fields >> i_tok >> j_tok >> v_tok;
    std::size_t i = 0, j = 0;
    double v = 0.0;
    if (!detail::parse_number(i_tok, i) || !detail::parse_number(j_tok, j) ||
        !detail::parse_number(v_tok, v) || (fields >> extra))
      throw ParseError("expected 'i j J_ij'", line_no);
    if (i >= j || j >= n)
      throw ParseError("pair (" + i_tok + "," + j_tok + ") must satisfy i < j < " +
                           std::to_string(n),
                       line_no);
    if (seen[i * n + j])
      throw ParseError("duplicate pair (" + i_tok + "," + j_tok + ")", line_no);
    seen[i * n + j] = 1;
    matrix[i * n + j] = matrix[j * n + i] = v;
    ++pairs;
  }
  if (pairs != n * (n - 1) / 2)
    throw ParseError("expected " + std::to_string(n * (n - 1) / 2) + " coupling lines, found " +
                         std::to_string(pairs),
                     line_no);
  return Instance::from_matrix(n, std::move(matrix), seed);
}

inline Instance load_instance(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error("cannot open instance file '" + path + "'");
  return read_instance(in);
}

} // namespace glassdescent

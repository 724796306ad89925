#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "translog/core.hpp"
#include "translog/errors.hpp"

namespace translog {

// Model text format, one declaration per line, '#' starts a comment:
//
//   domain N
//   vars x y
//   relation R 2
//   0 1          <- one tuple per line, block ends at a blank line
//
//   function f 1
//   0 -> 1       <- table rows, block ends at a blank line
//   1 -> 0
//
//   constant c 0

namespace detail {

inline std::string strip_line(const std::string& raw) {
  std::string line = raw;
  if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
  auto begin = line.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  auto end = line.find_last_not_of(" \t\r");
  return line.substr(begin, end - begin + 1);
}

inline std::vector<std::string> split_words(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

inline int parse_int(const std::string& w, std::size_t line_no, const std::string& what) {
  try {
    std::size_t used = 0;
    int v = std::stoi(w, &used);
    if (used != w.size()) throw std::invalid_argument(w);
    return v;
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(line_no) + ": expected " + what + ", got '" +
                         w + "'",
                     line_no);
  }
}

}  // namespace detail

inline Model parse_model(const std::string& text) {
  std::vector<std::string> lines;
  {
    std::istringstream in(text);
    std::string raw;
    while (std::getline(in, raw)) lines.push_back(raw);
  }

  Model model;
  bool saw_domain = false, saw_vars = false;
  std::size_t i = 0;

  auto fail = [](std::size_t line_no, const std::string& msg) -> ParseError {
    return ParseError("line " + std::to_string(line_no) + ": " + msg, line_no);
  };

  while (i < lines.size()) {
    std::size_t line_no = i + 1;
    std::string line = detail::strip_line(lines[i]);
    ++i;
    if (line.empty()) continue;
    auto words = detail::split_words(line);
    const std::string& head = words[0];

    if (head == "domain") {
      if (words.size() != 2) throw fail(line_no, "usage: domain N");
      if (saw_domain) throw fail(line_no, "duplicate domain declaration");
      model.domain_size = detail::parse_int(words[1], line_no, "a domain size");
      if (model.domain_size < 1) throw fail(line_no, "empty domains are rejected");
      saw_domain = true;
    } else if (head == "vars") {
      if (words.size() < 2) throw fail(line_no, "usage: vars x y ...");
      if (saw_vars) throw fail(line_no, "duplicate vars declaration");
      model.team_vars.assign(words.begin() + 1, words.end());
      saw_vars = true;
    } else if (head == "relation") {
      if (words.size() != 3) throw fail(line_no, "usage: relation NAME ARITY");
      if (!saw_domain) throw fail(line_no, "domain must be declared first");
      Relation rel;
      rel.arity = detail::parse_int(words[2], line_no, "an arity");
      if (rel.arity < 1) throw fail(line_no, "relation arity must be positive");
      if (model.relations.count(words[1]))
        throw fail(line_no, "duplicate relation '" + words[1] + "'");
      while (i < lines.size()) {
        std::size_t row_no = i + 1;
        std::string row = detail::strip_line(lines[i]);
        if (row.empty()) break;
        ++i;
        auto cells = detail::split_words(row);
        if (static_cast<int>(cells.size()) != rel.arity)
          throw fail(row_no, "relation " + words[1] + ": expected " +
                                 std::to_string(rel.arity) + " elements per tuple");
        std::vector<Element> tuple;
        for (const auto& c : cells) {
          Element m = detail::parse_int(c, row_no, "an element");
          if (m < 0 || m >= model.domain_size) throw fail(row_no, "out-of-range element");
          tuple.push_back(m);
        }
        rel.tuples.insert(std::move(tuple));
      }
      model.relations.emplace(words[1], std::move(rel));
    } else if (head == "function") {
      if (words.size() != 3) throw fail(line_no, "usage: function NAME ARITY");
      if (!saw_domain) throw fail(line_no, "domain must be declared first");
      Function fn;
      fn.arity = detail::parse_int(words[2], line_no, "an arity");
      if (fn.arity < 1)
        throw fail(line_no, "function arity must be positive (use a constant)");
      if (model.functions.count(words[1]))
        throw fail(line_no, "duplicate function '" + words[1] + "'");
      while (i < lines.size()) {
        std::size_t row_no = i + 1;
        std::string row = detail::strip_line(lines[i]);
        if (row.empty()) break;
        ++i;
        auto cells = detail::split_words(row);
        if (static_cast<int>(cells.size()) != fn.arity + 2 || cells[cells.size() - 2] != "->")
          throw fail(row_no, "function " + words[1] + ": expected 'a1 .. a" +
                                 std::to_string(fn.arity) + " -> b'");
        std::vector<Element> args;
        for (int k = 0; k < fn.arity; ++k) {
          Element m = detail::parse_int(cells[static_cast<std::size_t>(k)], row_no, "an element");
          if (m < 0 || m >= model.domain_size) throw fail(row_no, "out-of-range element");
          args.push_back(m);
        }
        Element val = detail::parse_int(cells.back(), row_no, "an element");
        if (val < 0 || val >= model.domain_size) throw fail(row_no, "out-of-range element");
        if (!fn.table.emplace(std::move(args), val).second)
          throw fail(row_no, "function " + words[1] + ": duplicate table row");
      }
      std::size_t expect = 1;
      for (int k = 0; k < fn.arity; ++k) expect *= static_cast<std::size_t>(model.domain_size);
      if (fn.table.size() != expect)
        throw fail(line_no, "function " + words[1] + " not total");
      model.functions.emplace(words[1], std::move(fn));
    } else if (head == "constant") {
      if (words.size() != 3) throw fail(line_no, "usage: constant NAME ELEMENT");
      if (!saw_domain) throw fail(line_no, "domain must be declared first");
      if (model.constants.count(words[1]))
        throw fail(line_no, "duplicate constant '" + words[1] + "'");
      Element m = detail::parse_int(words[2], line_no, "an element");
      if (m < 0 || m >= model.domain_size) throw fail(line_no, "out-of-range element");
      model.constants.emplace(words[1], m);
    } else {
      throw fail(line_no, "unknown declaration '" + head + "'");
    }
  }

  if (!saw_domain) throw ParseError("missing domain declaration", 0);
  if (!saw_vars) throw ParseError("missing vars declaration", 0);
  model.validate();
  return model;
}

inline Model load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open model file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

/// Canonical serialization; equal models serialize identically.
inline std::string serialize_model(const Model& model) {
  std::ostringstream out;
  out << "domain " << model.domain_size << "\n";
  out << "vars";
  for (const auto& v : model.team_vars) out << ' ' << v;
  out << "\n";
  for (const auto& [name, rel] : model.relations) {
    out << "relation " << name << ' ' << rel.arity << "\n";
    for (const auto& t : rel.tuples) {
      for (std::size_t k = 0; k < t.size(); ++k) out << (k ? " " : "") << t[k];
      out << "\n";
    }
    out << "\n";
  }
  for (const auto& [name, fn] : model.functions) {
    out << "function " << name << ' ' << fn.arity << "\n";
    for (const auto& [args, val] : fn.table) {
      for (std::size_t k = 0; k < args.size(); ++k) out << (k ? " " : "") << args[k];
      out << " -> " << val << "\n";
    }
    out << "\n";
  }
  for (const auto& [name, val] : model.constants)
    out << "constant " << name << ' ' << val << "\n";
  return out.str();
}

/// Stable 16-hex-digit digest of the canonical serialization.
inline std::string model_digest(const Model& model) {
  std::uint64_t h = 1469598103934665603ull;
  for (char c : serialize_model(model)) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = hex[h & 0xf];
    h >>= 4;
  }
  return out;
}

}  // namespace translog

#pragma once

#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "tww/sequence.hpp"
#include "tww/trigraph.hpp"

// Text formats. Graphs: `c` comments, header `p tww <n> <m>`, then m lines
// `<u> <v>` with 1-based indices and an optional `r` for red edges.
// Sequences: one `<u> <v>` per line, v is contracted into u and u keeps its
// name. Internally vertex i of the file is label i-1.

namespace tww {

namespace detail {

inline std::vector<std::string> tokens(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

inline bool skippable(const std::vector<std::string>& t) { return t.empty() || t[0] == "c"; }

inline std::size_t number(const std::string& s, std::size_t line) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  bool ok = !s.empty() && s[0] != '-' && s[0] != '+';
  if (ok) {
    try {
      v = std::stoull(s, &pos);
    } catch (const std::exception&) {
      ok = false;
    }
  }
  if (!ok || pos != s.size()) throw Error(Errc::SyntaxError, "line " + std::to_string(line) + ": bad number '" + s + "'", line);
  return std::size_t(v);
}

}  // namespace detail

inline Trigraph parse_graph(std::istream& in) {
  std::size_t line_no = 0, n = 0, m = 0, seen = 0;
  bool header = false;
  std::vector<std::pair<VertexId, VertexId>> black, red;
  auto fail = [&](Errc c, const std::string& what) -> Error {
    return Error(c, "line " + std::to_string(line_no) + ": " + what, line_no);
  };
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    auto t = detail::tokens(line);
    if (detail::skippable(t)) continue;
    if (!header) {
      if (t.size() != 4 || t[0] != "p" || t[1] != "tww") throw fail(Errc::SyntaxError, "expected 'p tww <n> <m>'");
      n = detail::number(t[2], line_no);
      m = detail::number(t[3], line_no);
      header = true;
      continue;
    }
    if (t.size() < 2 || t.size() > 3 || (t.size() == 3 && t[2] != "r")) {
      throw fail(Errc::SyntaxError, "expected '<u> <v> [r]'");
    }
    std::size_t u = detail::number(t[0], line_no), v = detail::number(t[1], line_no);
    if (u < 1 || u > n || v < 1 || v > n) throw fail(Errc::IndexOutOfRange, "vertex index outside [1, n]");
    if (++seen > m) throw fail(Errc::HeaderMismatch, "more edge lines than announced");
    (t.size() == 3 ? red : black).emplace_back(VertexId(u - 1), VertexId(v - 1));
  }
  if (!header) throw Error(Errc::SyntaxError, "missing header", line_no);
  if (seen != m) {
    throw Error(Errc::HeaderMismatch,
                "header announces " + std::to_string(m) + " edges, found " + std::to_string(seen), line_no);
  }
  try {
    return Trigraph::from_edges(n, black, red);
  } catch (const Error& e) {
    throw Error(e.code(), std::string("graph: ") + e.what());
  }
}

inline Trigraph parse_graph(const std::string& text) {
  std::istringstream in(text);
  return parse_graph(in);
}

// Vertices are renumbered 1..n in label order.
inline std::string emit_graph(const Trigraph& g) {
  auto vs = g.vertices();
  std::map<VertexId, std::size_t> idx;
  for (std::size_t i = 0; i < vs.size(); ++i) idx[vs[i]] = i + 1;
  std::ostringstream out;
  out << "p tww " << vs.size() << ' ' << g.edge_count() << '\n';
  for (const Edge& e : g.edges()) {
    out << idx[e.u] << ' ' << idx[e.v];
    if (e.color == EdgeColor::Red) out << " r";
    out << '\n';
  }
  return out.str();
}

// File index of every live vertex, survivor keeps the smaller index.
inline std::string emit_sequence(const Trigraph& g, const ContractionSequence& c) {
  replay(g, c);
  std::map<VertexId, std::size_t> name;
  std::size_t i = 0;
  for (VertexId v : g.vertices()) name[v] = ++i;
  std::ostringstream out;
  for (const auto& s : c.steps()) {
    std::size_t a = name.at(s.a), b = name.at(s.b);
    if (a > b) std::swap(a, b);
    out << a << ' ' << b << '\n';
    name.erase(s.a);
    name.erase(s.b);
    name[s.result] = a;
  }
  return out.str();
}

// Reads a sequence against g. Errors carry the line number; a step on a name
// that is no longer live is DeadVertexAtStep.
inline ContractionSequence parse_sequence(const Trigraph& g, std::istream& in) {
  std::map<std::size_t, VertexId> live;
  std::size_t i = 0;
  for (VertexId v : g.vertices()) live[++i] = v;
  const std::size_t n = i;
  Replay rp(g);
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    auto t = detail::tokens(line);
    if (detail::skippable(t)) continue;
    auto where = "line " + std::to_string(line_no) + ": ";
    if (t.size() != 2) throw Error(Errc::SyntaxError, where + "expected '<u> <v>'", line_no);
    std::size_t u = detail::number(t[0], line_no), v = detail::number(t[1], line_no);
    if (u < 1 || u > n || v < 1 || v > n) throw Error(Errc::IndexOutOfRange, where + "vertex index outside [1, n]", line_no);
    if (u == v) throw Error(Errc::SameVertex, where + "contracting a vertex with itself", line_no);
    auto iu = live.find(u), iv = live.find(v);
    if (iu == live.end() || iv == live.end()) {
      throw Error(Errc::DeadVertexAtStep, where + "vertex " + std::to_string(iu == live.end() ? u : v) + " already merged",
                  line_no);
    }
    VertexId r = rp.contract(iu->second, iv->second);
    live.erase(v);
    live[u] = r;
  }
  return rp.sequence();
}

inline ContractionSequence parse_sequence(const Trigraph& g, const std::string& text) {
  std::istringstream in(text);
  return parse_sequence(g, in);
}

}  // namespace tww

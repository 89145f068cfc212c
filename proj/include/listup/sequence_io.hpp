#pragma once

#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "listup/core.hpp"

namespace listup {

// Sequence text format:
//   items: a b c      optional header, initial list front to back
//   a                 access
//   +f                insert (appended at the end)
//   -b                delete
//   # ...             comment to end of line
// Without a header the initial list is every label that is accessed or
// deleted before being inserted, in order of first appearance.

namespace detail {

inline std::string strip(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline bool valid_label(const std::string& l) {
  if (l.empty() || l[0] == '+' || l[0] == '-' || l[0] == '#') return false;
  return l.find_first_of(" \t:") == std::string::npos;
}

}  // namespace detail

inline RequestSequence parse_sequence(std::istream& in) {
  struct Raw {
    EventKind kind;
    std::string label;
    std::size_t line;
  };
  std::vector<Raw> raw;
  std::vector<std::string> header;
  bool have_header = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::strip(line);
    if (line.empty()) continue;
    if (line.rfind("items:", 0) == 0) {
      if (have_header || !raw.empty()) throw ParseError(lineno, "'items:' must be the first line");
      have_header = true;
      std::istringstream ss(line.substr(6));
      std::string tok;
      while (ss >> tok) {
        if (!detail::valid_label(tok)) throw ParseError(lineno, "invalid label '" + tok + "'");
        header.push_back(tok);
      }
      if (header.empty()) throw ParseError(lineno, "empty 'items:' header");
      continue;
    }
    EventKind kind = EventKind::Access;
    std::string label = line;
    if (line[0] == '+' || line[0] == '-') {
      kind = line[0] == '+' ? EventKind::Insert : EventKind::Delete;
      label = detail::strip(line.substr(1));
    }
    if (!detail::valid_label(label)) throw ParseError(lineno, "malformed event '" + line + "'");
    raw.push_back({kind, label, lineno});
  }

  RequestSequence seq;
  std::vector<ItemId> initial;
  if (have_header) {
    for (auto& l : header) {
      if (seq.universe.contains(l)) throw ParseError(1, "duplicate label '" + l + "' in header");
      initial.push_back(seq.universe.intern(l));
    }
  } else {
    std::vector<std::string> inserted;
    for (auto& r : raw) {
      if (r.kind == EventKind::Insert) inserted.push_back(r.label);
      bool seen_insert = std::find(inserted.begin(), inserted.end(), r.label) != inserted.end();
      if (!seen_insert && !seq.universe.contains(r.label)) initial.push_back(seq.universe.intern(r.label));
    }
  }
  for (auto& r : raw) seq.events.push_back({r.kind, seq.universe.intern(r.label)});
  seq.initial = ListState(std::move(initial));
  try {
    seq.validate();
  } catch (const InvalidSequence& e) {
    // Map the event index back to its source line.
    std::string msg = e.what();
    std::size_t line_of_error = lineno;
    if (auto at = msg.rfind("at event "); at != std::string::npos) {
      std::size_t idx = std::stoul(msg.substr(at + 9));
      if (idx >= 1 && idx <= raw.size()) line_of_error = raw[idx - 1].line;
    }
    throw ParseError(line_of_error, msg);
  }
  return seq;
}

inline RequestSequence parse_sequence(const std::string& text) {
  std::istringstream in(text);
  return parse_sequence(in);
}

/// Canonical text: header line then one event per line.
inline std::string serialize_sequence(const RequestSequence& seq) {
  std::string out = "items:";
  for (ItemId x : seq.initial.order()) out += " " + seq.universe.label(x);
  out += "\n";
  for (const Event& e : seq.events) {
    if (e.kind == EventKind::Insert) out += "+";
    if (e.kind == EventKind::Delete) out += "-";
    out += seq.universe.label(e.item);
    out += "\n";
  }
  return out;
}

inline std::string event_to_string(const Event& e, const Universe& u) {
  std::string prefix = e.kind == EventKind::Insert ? "+" : e.kind == EventKind::Delete ? "-" : "";
  return prefix + u.label(e.item);
}

}  // namespace listup

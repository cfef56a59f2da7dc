#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "nrc/error.hpp"

namespace nrc {

// A label atom is a natural number or a non-empty string. Naturals order
// before strings.
using Atom = std::variant<std::uint64_t, std::string>;

inline Atom nat(std::uint64_t n) { return Atom(std::in_place_index<0>, n); }
inline Atom sym(std::string s) { return Atom(std::in_place_index<1>, std::move(s)); }

inline bool is_natural(const Atom& a) { return a.index() == 0; }

inline bool is_atom_text(std::string_view s) {
  if (s.empty()) return false;
  return std::none_of(s.begin(), s.end(), [](char c) {
    return c == '[' || c == ']' || c == ',' || c == '.' || c == '"' ||
           static_cast<unsigned char>(c) <= ' ';
  });
}

inline bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

// Text form of an atom. All-digit text decodes as a natural.
inline Atom parse_atom(std::string_view s) {
  if (!is_atom_text(s)) throw Error(ErrorCode::FormatError, "bad label atom '" + std::string(s) + "'");
  if (all_digits(s)) {
    if (s.size() > 19) throw Error(ErrorCode::FormatError, "label atom too large: " + std::string(s));
    return nat(std::stoull(std::string(s)));
  }
  return sym(std::string(s));
}

inline std::string to_string(const Atom& a) {
  if (is_natural(a)) return std::to_string(std::get<0>(a));
  return std::get<1>(a);
}

class Label {
 public:
  Label() = default;
  Label(std::initializer_list<Atom> atoms) : atoms_(atoms) {}
  explicit Label(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {}

  static Label epsilon() { return Label(); }
  static Label of(Atom a) { return Label({std::move(a)}); }

  bool empty() const { return atoms_.empty(); }
  std::size_t size() const { return atoms_.size(); }
  const Atom& operator[](std::size_t i) const { return atoms_[i]; }
  const std::vector<Atom>& atoms() const { return atoms_; }

  // Non-strict prefix test.
  bool is_prefix_of(const Label& other) const {
    if (atoms_.size() > other.atoms_.size()) return false;
    return std::equal(atoms_.begin(), atoms_.end(), other.atoms_.begin());
  }

  Label concat(const Label& tail) const {
    std::vector<Atom> out;
    out.reserve(atoms_.size() + tail.atoms_.size());
    out.insert(out.end(), atoms_.begin(), atoms_.end());
    out.insert(out.end(), tail.atoms_.begin(), tail.atoms_.end());
    return Label(std::move(out));
  }

  // The remainder after removing `prefix`, if it is one.
  std::optional<Label> strip_prefix(const Label& prefix) const {
    if (!prefix.is_prefix_of(*this)) return std::nullopt;
    return Label(std::vector<Atom>(atoms_.begin() + static_cast<std::ptrdiff_t>(prefix.size()), atoms_.end()));
  }

  friend Label operator+(const Label& a, const Label& b) { return a.concat(b); }
  friend bool operator==(const Label&, const Label&) = default;
  friend std::strong_ordering operator<=>(const Label& a, const Label& b) {
    return std::lexicographical_compare_three_way(a.atoms_.begin(), a.atoms_.end(), b.atoms_.begin(),
                                                  b.atoms_.end());
  }

 private:
  std::vector<Atom> atoms_;
};

inline std::string to_string(const Label& l) {
  std::string out = "[";
  for (std::size_t i = 0; i < l.size(); ++i) {
    if (i) out += ",";
    out += to_string(l[i]);
  }
  out += "]";
  return out;
}

// Parses "[1,r2]"; "[]" is the empty label.
inline Label parse_label(std::string_view s) {
  if (s.size() < 2 || s.front() != '[' || s.back() != ']')
    throw Error(ErrorCode::FormatError, "bad label '" + std::string(s) + "'");
  std::string_view body = s.substr(1, s.size() - 2);
  std::vector<Atom> atoms;
  if (body.empty()) return Label();
  std::size_t start = 0;
  while (true) {
    std::size_t comma = body.find(',', start);
    std::string_view piece = body.substr(start, comma == std::string_view::npos ? body.npos : comma - start);
    while (!piece.empty() && piece.front() == ' ') piece.remove_prefix(1);
    while (!piece.empty() && piece.back() == ' ') piece.remove_suffix(1);
    atoms.push_back(parse_atom(piece));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return Label(std::move(atoms));
}

// In label order a proper prefix sorts immediately before its extensions, so
// checking neighbours of a sorted sequence is enough.
template <class It, class Key>
bool is_prefix_code_sorted(It first, It last, Key key) {
  if (first == last) return true;
  It prev = first;
  for (It it = std::next(first); it != last; ++it) {
    if (key(*prev).is_prefix_of(key(*it))) return false;
    prev = it;
  }
  return true;
}

inline bool is_prefix_code(std::vector<Label> labels) {
  std::sort(labels.begin(), labels.end());
  return is_prefix_code_sorted(labels.begin(), labels.end(), [](const Label& l) -> const Label& { return l; });
}

// Whether some key of a sorted map is a prefix of `l` or has `l` as prefix.
template <class Map>
bool overlaps_prefix(const Map& sorted, const Label& l) {
  auto it = sorted.lower_bound(l);
  if (it != sorted.end() && l.is_prefix_of(it->first)) return true;
  if (it != sorted.begin() && std::prev(it)->first.is_prefix_of(l)) return true;
  return false;
}

}  // namespace nrc

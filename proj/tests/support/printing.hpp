#pragma once

#include <ostream>

#include "nrc/print.hpp"

// Readable gtest output for the library's handle types.
namespace nrc {

inline void PrintTo(const Pattern& p, std::ostream* os) { *os << render_pattern(p); }
inline void PrintTo(const Value& v, std::ostream* os) { *os << render_value(v); }
inline void PrintTo(const Expr& e, std::ostream* os) { *os << render_expr(e); }
inline void PrintTo(const Trace& t, std::ostream* os) { *os << "\n" << render_trace(t); }
inline void PrintTo(const Type& t, std::ostream* os) { *os << render_type(t); }
inline void PrintTo(const Label& l, std::ostream* os) { *os << to_string(l); }
inline void PrintTo(ErrorCode c, std::ostream* os) { *os << to_string(c); }

}  // namespace nrc

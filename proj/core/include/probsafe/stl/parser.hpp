#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "probsafe/stl/formula.hpp"

namespace probsafe::stl {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& message);

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

/// Parses the concrete STL syntax.
///
///   formula  := disj [ "=>" formula ]
///   disj     := conj { "|" conj }
///   conj     := temporal { "&" temporal }
///   temporal := unary [ "U" window temporal ]
///   unary    := "!" unary | ("F" | "G") [ window ] unary | atom
///   atom     := "true" | "false" | identifier | "(" formula ")"
///   window   := "[" number "," (number | "inf") "]"
///
/// `F`/`G` without a window mean [0, inf]. `U`, `F`, `G`, `inf`, `true`
/// and `false` are reserved words.
Formula parse_formula(std::string_view text);

}  // namespace probsafe::stl

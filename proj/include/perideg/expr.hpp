#pragma once

#include <string>

namespace perideg {

/// Evaluates a scalar arithmetic expression to double.  Accepts numbers,
/// + - * /, parentheses, sqrt(...), cbrt(...) and the constant pi, so matrix
/// entries can be written exactly, e.g. "7/2" or "-1/(2*sqrt(2))".
/// Throws std::invalid_argument on malformed input.
double eval_scalar_expr(const std::string& text);

}  // namespace perideg

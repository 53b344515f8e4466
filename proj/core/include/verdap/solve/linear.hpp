#pragma once

#include <cstddef>

#include "verdap/lang/expr.hpp"

namespace verdap::solve {

/// Result of a sound refutation pass over the rational relaxation of a
/// formula: case split into disjunctive normal form, each disjunct a set
/// of integer-tightened linear inequalities run through Fourier–Motzkin
/// elimination. Nonlinear subterms are treated as free atoms.
struct RelaxationAnalysis {
  /// Every disjunct is infeasible: the formula is unsat over the integers.
  bool refuted = false;
  /// Every feasible disjunct confines each integer variable it depends on
  /// to [-bound, bound], so enumerating that box is a complete search.
  bool bounded = false;
  /// The analysis gave up (DNF or row limits) and proves nothing.
  bool gave_up = false;
};

struct RelaxationLimits {
  std::size_t max_disjuncts = 512;
  std::size_t max_rows = 4000;
};

RelaxationAnalysis analyze_relaxation(const lang::Expr& f, const lang::BigInt& bound,
                                      const RelaxationLimits& limits = {});

} // namespace verdap::solve

#include <vector>

#include "verdap/solve/backends.hpp"

namespace verdap::solve {

namespace {

/// 0, 1, -1, 2, -2, ... so the first witness found is the smallest.
std::vector<lang::BigInt> value_order(int bound) {
  std::vector<lang::BigInt> out{0};
  for (int k = 1; k <= bound; ++k) {
    out.emplace_back(k);
    out.emplace_back(-k);
  }
  return out;
}

} // namespace

BruteForceSolver::BruteForceSolver(int bound, std::size_t max_points)
    : bound_(bound < 1 ? 1 : bound), max_points_(max_points) {}

SatResult BruteForceSolver::decide(const Expr& f) {
  std::vector<lang::LogicVarKey> ints;
  std::vector<lang::LogicVarKey> bools;
  for (const auto& key : lang::free_logic_vars(f)) {
    (key.sort == lang::Sort::Int ? ints : bools).push_back(key);
  }

  RelaxationAnalysis relax;
  if (!ints.empty()) {
    relax = analyze_relaxation(f, lang::BigInt(bound_));
    if (relax.refuted) return SatResult{Verdict::Unsat, std::nullopt, {}};
  }

  const std::vector<lang::BigInt> values = value_order(bound_);
  double points = 1;
  for (std::size_t i = 0; i < ints.size(); ++i) points *= static_cast<double>(values.size());
  for (std::size_t i = 0; i < bools.size(); ++i) points *= 2;
  if (points > static_cast<double>(max_points_)) {
    return SatResult{Verdict::Unknown, std::nullopt, "search space exceeds enumeration limit"};
  }

  // Odometer over all digits: ints first, then bools (0 = false, 1 = true).
  const std::size_t n = ints.size() + bools.size();
  std::vector<std::size_t> digit(n, 0);
  Model model;
  for (;;) {
    for (std::size_t i = 0; i < ints.size(); ++i) model[ints[i]] = values[digit[i]];
    for (std::size_t j = 0; j < bools.size(); ++j) model[bools[j]] = digit[ints.size() + j] == 1;
    if (lang::evaluate_bool(f, model)) return SatResult{Verdict::Sat, model, {}};

    std::size_t pos = 0;
    for (; pos < n; ++pos) {
      std::size_t radix = pos < ints.size() ? values.size() : 2;
      if (++digit[pos] < radix) break;
      digit[pos] = 0;
    }
    if (pos == n) break;
  }

  if (ints.empty() || relax.bounded) return SatResult{Verdict::Unsat, std::nullopt, {}};
  return SatResult{Verdict::Unknown, std::nullopt,
                   "no witness within bound " + std::to_string(bound_)};
}

} // namespace verdap::solve

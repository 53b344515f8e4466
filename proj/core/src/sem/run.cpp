#include "verdap/sem/engine.hpp"

namespace verdap::sem {

const char* stop_reason_name(StopReason r) {
  switch (r) {
  case StopReason::Breakpoint: return "breakpoint";
  case StopReason::Ended: return "ended";
  case StopReason::Split: return "split";
  case StopReason::Obligation: return "obligation";
  case StopReason::FuelExhausted: return "fuelExhausted";
  }
  return "?";
}

std::optional<int> current_line(const Config& c, const Schedule& sigma) {
  const auto* s = resolve(c, sigma).as<Sequential>();
  if (!s) return std::nullopt;
  return s->rest.front().loc().line;
}

std::map<Schedule, Schedule> compose(const std::map<Schedule, Schedule>& first,
                                     const std::map<Schedule, Schedule>& second) {
  std::map<Schedule, Schedule> out;
  for (const auto& [a, b] : first) {
    auto it = second.find(b);
    if (it != second.end()) out.emplace(a, it->second);
  }
  return out;
}

RunResult run_to_break(const Config& c, const Schedule& sigma, const std::set<int>& breakpoints,
                       solve::Solver& solver, StepContext& ctx, std::size_t fuel) {
  if (!resolve(c, sigma).as<Sequential>()) {
    throw NotSteppable("thread " + thread_name(sigma) + " cannot step");
  }
  RunResult out{c, StopReason::FuelExhausted, {sigma}, 0, {}, {}};
  for (const auto& leaf : leaf_schedules(c)) {
    if (leaf != sigma) out.moved.emplace(leaf, leaf);
  }

  Schedule cur = sigma;
  StepContext contract{ctx.unit, ctx.counter, CallMode::Contract};
  while (out.steps < fuel) {
    Config stepped = step(out.config, cur, contract);
    ++out.steps;
    PruneResult pr = prune(stepped, solver);
    out.config = pr.config;
    out.moved = compose(out.moved, pr.moved);

    bool bad_obligation = false;
    for (auto& d : pr.decided) {
      if (d.status != ObligationStatus::Kind::Open) bad_obligation = true;
      out.decided.push_back(std::move(d));
    }

    std::vector<Schedule> steppable;
    for (const auto& [old_leaf, new_leaf] : pr.moved) {
      if (has_prefix(old_leaf, cur) && resolve(out.config, new_leaf).as<Sequential>()) {
        steppable.push_back(new_leaf);
      }
    }
    out.threads = steppable;

    if (bad_obligation) {
      out.reason = StopReason::Obligation;
      return out;
    }
    if (steppable.size() > 1) {
      out.reason = StopReason::Split;
      return out;
    }
    if (steppable.empty()) {
      out.reason = StopReason::Ended;
      return out;
    }
    cur = steppable.front();
    if (auto line = current_line(out.config, cur); line && breakpoints.count(*line)) {
      out.reason = StopReason::Breakpoint;
      return out;
    }
  }
  out.reason = StopReason::FuelExhausted;
  out.threads = {cur};
  return out;
}

} // namespace verdap::sem

#include "verdap/sem/engine.hpp"

namespace verdap::sem {

namespace {

class Pruner {
public:
  Pruner(solve::Solver& solver, PruneResult& out) : solver_(solver), out_(out) {}

  std::optional<Config> visit(const Config& c, bool root) {
    if (const auto* p = c.as<Parallel>()) return parallel(c, *p, root);
    if (const auto* s = c.as<Sequential>()) return sequential(c, *s);
    if (const auto* o = c.as<Obligation>()) return obligation(c, *o);
    out_.removed.push_back(old_);
    return std::nullopt;  // Done
  }

private:
  std::optional<Config> parallel(const Config& c, const Parallel& p, bool root) {
    Parallel kept;
    bool changed = false;
    for (std::size_t i = 0; i < p.children.size(); ++i) {
      old_.push_back(i);
      new_.push_back(kept.children.size());
      std::optional<Config> child = visit(p.children[i], false);
      old_.pop_back();
      new_.pop_back();
      if (!child) {
        changed = true;
        continue;
      }
      changed = changed || child->identity() != p.children[i].identity();
      kept.children.push_back(std::move(*child));
    }
    if (kept.children.empty() && !root) return std::nullopt;
    if (!changed) return c;
    return Config(std::move(kept));
  }

  std::optional<Config> sequential(const Config& c, const Sequential& s) {
    if (s.feasibility != Feasibility::Unchecked) {
      out_.moved[old_] = new_;
      return c;
    }
    solve::SatResult r = solve::check_sat_or_unknown(solver_, s.path.formula());
    if (r.verdict == solve::Verdict::Unsat) {
      out_.removed.push_back(old_);
      return std::nullopt;
    }
    Sequential copy = s;
    copy.feasibility = r.verdict == solve::Verdict::Sat ? Feasibility::Sat : Feasibility::Unknown;
    out_.moved[old_] = new_;
    return Config(std::move(copy));
  }

  std::optional<Config> obligation(const Config& c, const Obligation& o) {
    if (o.status.kind != ObligationStatus::Kind::Open) {
      out_.moved[old_] = new_;
      return c;
    }
    solve::SatResult r =
        solve::check_sat_or_unknown(solver_, o.path.with(o.negated).formula());
    DecidedObligation d{o.kind, o.at, o.procedure, ObligationStatus::Kind::Open, std::nullopt, r.note};
    if (r.verdict == solve::Verdict::Unsat) {
      out_.decided.push_back(std::move(d));
      return std::nullopt;
    }
    Obligation copy = o;
    if (r.verdict == solve::Verdict::Sat) {
      copy.status = ObligationStatus{ObligationStatus::Kind::Failed, r.model, {}};
    } else {
      copy.status = ObligationStatus{ObligationStatus::Kind::Unknown, std::nullopt, r.note};
    }
    d.status = copy.status.kind;
    d.model = copy.status.model;
    out_.decided.push_back(std::move(d));
    out_.moved[old_] = new_;
    return Config(std::move(copy));
  }

  solve::Solver& solver_;
  PruneResult& out_;
  Schedule old_;
  Schedule new_;
};

} // namespace

PruneResult prune(const Config& c, solve::Solver& solver) {
  PruneResult out{c, {}, {}, {}};
  Pruner pruner(solver, out);
  std::optional<Config> kept = pruner.visit(c, true);
  // The root only disappears when it is itself a leaf.
  out.config = kept ? *kept : Config(Parallel{});
  return out;
}

} // namespace verdap::sem

#include "verdap/sem/config.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

#include "verdap/lang/parser.hpp"

namespace verdap::sem {

namespace {

template <class... Ts> struct overloaded : Ts... { using Ts::operator()...; };
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

bool same_frames(const std::vector<FrameInfo>& a, const std::vector<FrameInfo>& b) { return a == b; }

bool equal_nodes(const ConfigNode& a, const ConfigNode& b) {
  if (a.kind.index() != b.kind.index()) return false;
  return std::visit(
      overloaded{
          [&](const Sequential& x) {
            const auto& y = std::get<Sequential>(b.kind);
            return x.store == y.store && x.path == y.path && x.rest == y.rest &&
                   same_frames(x.frames, y.frames);
          },
          [&](const Parallel& x) { return x.children == std::get<Parallel>(b.kind).children; },
          [&](const Obligation& x) {
            const auto& y = std::get<Obligation>(b.kind);
            return x.path == y.path && x.negated == y.negated && x.kind == y.kind && x.at == y.at &&
                   x.status == y.status && x.procedure == y.procedure;
          },
          [&](const Done& x) {
            const auto& y = std::get<Done>(b.kind);
            return x.store == y.store && x.path == y.path && same_frames(x.frames, y.frames);
          },
      },
      a.kind);
}

void collect(const Config& c, Schedule& prefix, std::vector<Schedule>& out,
             const std::function<bool(const Config&)>& want) {
  if (const auto* p = c.as<Parallel>()) {
    for (std::size_t i = 0; i < p->children.size(); ++i) {
      prefix.push_back(i);
      collect(p->children[i], prefix, out, want);
      prefix.pop_back();
    }
    return;
  }
  if (want(c)) out.push_back(prefix);
}

/// Renames logic variables to their order of first appearance.
class Canonicalizer {
public:
  explicit Canonicalizer(bool enabled) : enabled_(enabled) {}

  std::string expr(const Expr& e) { return lang::to_display(enabled_ ? rename(e) : e); }

  std::string model(const lang::Model& m) {
    std::ostringstream os;
    bool first = true;
    for (const auto& [key, value] : m) {
      if (!first) os << ", ";
      first = false;
      os << expr(Expr::logic_var(key.name, key.index, key.sort)) << " = " << lang::to_display(value);
    }
    return os.str();
  }

private:
  Expr rename(const Expr& e) {
    return std::visit(
        overloaded{
            [&](const lang::LogicVar& v) -> Expr {
              auto key = std::make_pair(v.name, v.index);
              auto it = names_.find(key);
              if (it == names_.end()) it = names_.emplace(key, names_.size()).first;
              return Expr::logic_var(v.name, it->second, e.sort());
            },
            [&](const lang::Unary& u) -> Expr { return Expr::unary(u.op, rename(u.arg)); },
            [&](const lang::Binary& b) -> Expr {
              Expr lhs = rename(b.lhs);
              return Expr::binary(b.op, lhs, rename(b.rhs));
            },
            [&](const auto&) -> Expr { return e; },
        },
        e.node().kind);
  }

  bool enabled_;
  std::map<std::pair<std::string, std::uint64_t>, std::uint64_t> names_;
};

std::string indent(int depth) { return std::string(static_cast<std::size_t>(depth) * 2, ' '); }

void dump_store(std::ostream& os, const SymbolicStore& s, Canonicalizer& canon, int depth) {
  for (std::size_t i = 0; i < s.scopes().size(); ++i) {
    os << indent(depth) << "scope " << i << ":";
    for (const auto& b : s.scopes()[i]) os << ' ' << b.name << " = " << canon.expr(b.value) << ';';
    os << '\n';
  }
}

void dump_path(std::ostream& os, const PathCondition& p, Canonicalizer& canon, int depth) {
  os << indent(depth) << "path:";
  if (p.conjuncts.empty()) os << " true";
  for (const auto& c : p.conjuncts) os << " [" << canon.expr(c) << ']';
  os << '\n';
}

void dump_frames(std::ostream& os, const std::vector<FrameInfo>& frames, int depth) {
  os << indent(depth) << "frames:";
  for (const auto& f : frames) {
    os << ' ' << f.proc_name;
    if (f.call_site) os << '@' << f.call_site->line;
  }
  os << '\n';
}

void dump_node(std::ostream& os, const Config& c, Canonicalizer& canon, int depth) {
  std::visit(overloaded{
                 [&](const Sequential& s) {
                   os << indent(depth) << "Sequential\n";
                   dump_store(os, s.store, canon, depth + 1);
                   dump_path(os, s.path, canon, depth + 1);
                   dump_frames(os, s.frames, depth + 1);
                   os << indent(depth + 1) << "rest:\n" << lang::pretty_print(s.rest, depth + 2);
                 },
                 [&](const Parallel& p) {
                   os << indent(depth) << "Parallel (" << p.children.size() << ")\n";
                   for (const auto& child : p.children) dump_node(os, child, canon, depth + 1);
                 },
                 [&](const Obligation& o) {
                   os << indent(depth) << "Obligation " << kind_name(o.kind) << " at line "
                      << o.at.line << " [" << status_name(o.status.kind) << "] in " << o.procedure
                      << '\n';
                   dump_path(os, o.path, canon, depth + 1);
                   os << indent(depth + 1) << "negated: " << canon.expr(o.negated) << '\n';
                   if (o.status.model) {
                     os << indent(depth + 1) << "model: " << canon.model(*o.status.model) << '\n';
                   }
                 },
                 [&](const Done& d) {
                   os << indent(depth) << "Done\n";
                   dump_store(os, d.store, canon, depth + 1);
                   dump_path(os, d.path, canon, depth + 1);
                   dump_frames(os, d.frames, depth + 1);
                 },
             },
             c.node().kind);
}

} // namespace

const char* kind_name(ObligationKind kind) {
  switch (kind) {
  case ObligationKind::AssertFailure: return "assert";
  case ObligationKind::PreconditionFailure: return "requires";
  case ObligationKind::PostconditionFailure: return "ensures";
  case ObligationKind::InvariantInitFailure: return "invariant-init";
  case ObligationKind::InvariantPreserveFailure: return "invariant-preserve";
  case ObligationKind::DivisionByZero: return "division";
  }
  return "?";
}

const char* kind_description(ObligationKind kind) {
  switch (kind) {
  case ObligationKind::AssertFailure: return "assertion might fail";
  case ObligationKind::PreconditionFailure: return "precondition of call might not hold";
  case ObligationKind::PostconditionFailure: return "postcondition might not hold";
  case ObligationKind::InvariantInitFailure: return "invariant might not hold on loop entry";
  case ObligationKind::InvariantPreserveFailure: return "invariant might not be preserved";
  case ObligationKind::DivisionByZero: return "divisor might be zero";
  }
  return "?";
}

const char* status_name(ObligationStatus::Kind kind) {
  switch (kind) {
  case ObligationStatus::Kind::Open: return "open";
  case ObligationStatus::Kind::Failed: return "failed";
  case ObligationStatus::Kind::Unknown: return "unknown";
  }
  return "?";
}

Config::Config(Sequential s) : node_(std::make_shared<const ConfigNode>(ConfigNode{std::move(s)})) {}
Config::Config(Parallel p) : node_(std::make_shared<const ConfigNode>(ConfigNode{std::move(p)})) {}
Config::Config(Obligation o) : node_(std::make_shared<const ConfigNode>(ConfigNode{std::move(o)})) {}
Config::Config(Done d) : node_(std::make_shared<const ConfigNode>(ConfigNode{std::move(d)})) {}

bool operator==(const Config& a, const Config& b) {
  return a.node_ == b.node_ || equal_nodes(*a.node_, *b.node_);
}

Config make_leaf(SymbolicStore store, PathCondition path, StmtList rest,
                 std::vector<FrameInfo> frames, Feasibility feasibility) {
  if (rest.empty()) return Config(Done{std::move(store), std::move(path), std::move(frames)});
  return Config(Sequential{std::move(store), std::move(path), std::move(rest), std::move(frames),
                           feasibility});
}

std::string thread_name(const Schedule& sigma) {
  std::string out;
  for (std::size_t i : sigma) {
    if (i < 10) {
      out += static_cast<char>('0' + i);
    } else {
      out += '[' + std::to_string(i) + ']';
    }
  }
  return out;
}

bool has_prefix(const Schedule& s, const Schedule& prefix) {
  return s.size() >= prefix.size() && std::equal(prefix.begin(), prefix.end(), s.begin());
}

std::vector<Schedule> schedules(const Config& c) {
  std::vector<Schedule> out;
  Schedule prefix;
  collect(c, prefix, out, [](const Config& n) { return n.as<Sequential>() != nullptr; });
  return out;
}

std::vector<Schedule> obligation_schedules(const Config& c, ObligationStatus::Kind status) {
  std::vector<Schedule> out;
  Schedule prefix;
  collect(c, prefix, out, [&](const Config& n) {
    const auto* o = n.as<Obligation>();
    return o && o->status.kind == status;
  });
  return out;
}

std::vector<Schedule> leaf_schedules(const Config& c) {
  std::vector<Schedule> out;
  Schedule prefix;
  collect(c, prefix, out, [](const Config&) { return true; });
  return out;
}

const Config& resolve(const Config& c, const Schedule& sigma) {
  const Config* cur = &c;
  for (std::size_t depth = 0; depth < sigma.size(); ++depth) {
    const auto* p = cur->as<Parallel>();
    if (!p) throw InvalidSchedule("schedule " + thread_name(sigma) + " descends into a leaf");
    if (sigma[depth] >= p->children.size()) {
      throw InvalidSchedule("schedule " + thread_name(sigma) + " is out of range");
    }
    cur = &p->children[sigma[depth]];
  }
  return *cur;
}

namespace {

Config replace_from(const Config& c, const Schedule& sigma, std::size_t depth, Config replacement) {
  if (depth == sigma.size()) return replacement;
  const auto* p = c.as<Parallel>();
  if (!p || sigma[depth] >= p->children.size()) {
    throw InvalidSchedule("schedule " + thread_name(sigma) + " is not valid");
  }
  Parallel copy = *p;
  copy.children[sigma[depth]] =
      replace_from(p->children[sigma[depth]], sigma, depth + 1, std::move(replacement));
  return Config(std::move(copy));
}

} // namespace

Config replace_at(const Config& c, const Schedule& sigma, Config replacement) {
  return replace_from(c, sigma, 0, std::move(replacement));
}

std::string dump(const Config& c, bool canonical) {
  std::ostringstream os;
  Canonicalizer canon(canonical);
  dump_node(os, c, canon, 0);
  return os.str();
}

} // namespace verdap::sem

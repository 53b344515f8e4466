#include "verdap/solve/linear.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace verdap::solve {

namespace {

using lang::BigInt;
using lang::BinaryOp;
using lang::Expr;
using lang::LogicVarKey;

template <class... Ts> struct overloaded : Ts... { using Ts::operator()...; };
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

struct GiveUp {};

/// sum(coeff * atom) + constant
struct Linear {
  std::map<std::string, BigInt> coeffs;
  BigInt constant = 0;

  bool is_constant() const { return coeffs.empty(); }

  Linear& add(const Linear& other, const BigInt& scale) {
    for (const auto& [atom, c] : other.coeffs) {
      BigInt& slot = coeffs[atom];
      slot += c * scale;
      if (slot == 0) coeffs.erase(atom);
    }
    constant += other.constant * scale;
    return *this;
  }

  Linear scaled(const BigInt& k) const {
    Linear out;
    return out.add(*this, k);
  }
};

/// Row `sum(a * x) + c <= 0`.
struct Row {
  std::map<std::string, BigInt> a;
  BigInt c;

  bool operator<(const Row& o) const {
    if (a != o.a) return a < o.a;
    return c < o.c;
  }
};

BigInt floor_div(const BigInt& n, const BigInt& d) {
  BigInt q = n / d;
  if ((n % d != 0) && ((n < 0) != (d < 0))) q -= 1;
  return q;
}

BigInt ceil_div(const BigInt& n, const BigInt& d) { return -floor_div(-n, d); }

BigInt abs_big(const BigInt& x) { return x < 0 ? BigInt(-x) : x; }

BigInt gcd_big(BigInt x, BigInt y) {
  x = abs_big(x);
  y = abs_big(y);
  while (y != 0) {
    BigInt t = x % y;
    x = y;
    y = t;
  }
  return x;
}

enum class RowState { Ok, Trivial, Infeasible };

/// Divides by the coefficient gcd and rounds the constant up, which is
/// sound because every atom ranges over the integers.
RowState normalize(Row& r) {
  for (auto it = r.a.begin(); it != r.a.end();) {
    if (it->second == 0) {
      it = r.a.erase(it);
    } else {
      ++it;
    }
  }
  if (r.a.empty()) return r.c <= 0 ? RowState::Trivial : RowState::Infeasible;
  BigInt g = 0;
  for (const auto& [_, c] : r.a) g = gcd_big(g, c);
  if (g > 1) {
    for (auto& [_, c] : r.a) c /= g;
    r.c = ceil_div(r.c, g);
  }
  return RowState::Ok;
}

struct Conj {
  std::vector<Row> rows;
  std::map<LogicVarKey, bool> bools;
};

using Dnf = std::vector<Conj>;

class Builder {
public:
  explicit Builder(const RelaxationLimits& limits) : limits_(limits) {}

  /// Real logic variables behind each atom; opaque atoms map to every
  /// variable they mention.
  std::map<std::string, std::set<LogicVarKey>> atom_vars;

  Dnf dnf(const Expr& e, bool positive) {
    return std::visit(
        overloaded{
            [&](const lang::BoolLit& b) -> Dnf {
              if (b.value == positive) return Dnf{Conj{}};
              return Dnf{};
            },
            [&](const lang::LogicVar& v) -> Dnf {
              Conj c;
              c.bools[LogicVarKey{v.name, v.index, e.sort()}] = positive;
              return Dnf{c};
            },
            [&](const lang::ProgVar&) -> Dnf { throw GiveUp{}; },
            [&](const lang::IntLit&) -> Dnf { throw GiveUp{}; },
            [&](const lang::Unary& u) -> Dnf { return dnf(u.arg, !positive); },
            [&](const lang::Binary& b) -> Dnf { return binary(b, positive); },
        },
        e.node().kind);
  }

private:
  Dnf binary(const lang::Binary& b, bool positive) {
    switch (b.op) {
    case BinaryOp::And:
      return positive ? product(dnf(b.lhs, true), dnf(b.rhs, true))
                      : sum(dnf(b.lhs, false), dnf(b.rhs, false));
    case BinaryOp::Or:
      return positive ? sum(dnf(b.lhs, true), dnf(b.rhs, true))
                      : product(dnf(b.lhs, false), dnf(b.rhs, false));
    case BinaryOp::Implies:
      return positive ? sum(dnf(b.lhs, false), dnf(b.rhs, true))
                      : product(dnf(b.lhs, true), dnf(b.rhs, false));
    case BinaryOp::Eq:
    case BinaryOp::Ne: {
      bool eq = (b.op == BinaryOp::Eq) == positive;
      if (b.lhs.sort() == lang::Sort::Bool) {
        if (eq) {
          return sum(product(dnf(b.lhs, true), dnf(b.rhs, true)),
                     product(dnf(b.lhs, false), dnf(b.rhs, false)));
        }
        return sum(product(dnf(b.lhs, true), dnf(b.rhs, false)),
                   product(dnf(b.lhs, false), dnf(b.rhs, true)));
      }
      Linear t = diff(b.lhs, b.rhs);
      if (eq) return Dnf{Conj{{le(t, 0), le(t.scaled(-1), 0)}, {}}};
      return Dnf{Conj{{le(t, 1)}, {}}, Conj{{le(t.scaled(-1), 1)}, {}}};
    }
    default:
      break;
    }
    Linear t = diff(b.lhs, b.rhs);
    // t ~ 0 with strict comparisons tightened by one over the integers.
    BinaryOp op = b.op;
    if (!positive) {
      switch (op) {
      case BinaryOp::Lt: op = BinaryOp::Ge; break;
      case BinaryOp::Le: op = BinaryOp::Gt; break;
      case BinaryOp::Gt: op = BinaryOp::Le; break;
      case BinaryOp::Ge: op = BinaryOp::Lt; break;
      default: throw GiveUp{};
      }
    }
    switch (op) {
    case BinaryOp::Lt: return Dnf{Conj{{le(t, 1)}, {}}};
    case BinaryOp::Le: return Dnf{Conj{{le(t, 0)}, {}}};
    case BinaryOp::Gt: return Dnf{Conj{{le(t.scaled(-1), 1)}, {}}};
    case BinaryOp::Ge: return Dnf{Conj{{le(t.scaled(-1), 0)}, {}}};
    default: throw GiveUp{};
    }
  }

  static Row le(const Linear& t, const BigInt& offset) {
    return Row{t.coeffs, t.constant + offset};
  }

  Dnf sum(Dnf a, Dnf b) {
    for (auto& c : b) a.push_back(std::move(c));
    if (a.size() > limits_.max_disjuncts) throw GiveUp{};
    return a;
  }

  Dnf product(const Dnf& a, const Dnf& b) {
    if (a.size() * b.size() > limits_.max_disjuncts) throw GiveUp{};
    Dnf out;
    for (const auto& x : a) {
      for (const auto& y : b) {
        Conj c = x;
        bool clash = false;
        for (const auto& [k, v] : y.bools) {
          auto [it, inserted] = c.bools.emplace(k, v);
          if (!inserted && it->second != v) {
            clash = true;
            break;
          }
        }
        if (clash) continue;
        c.rows.insert(c.rows.end(), y.rows.begin(), y.rows.end());
        out.push_back(std::move(c));
      }
    }
    return out;
  }

  Linear diff(const Expr& l, const Expr& r) {
    Linear out = linear(l);
    out.add(linear(r), -1);
    return out;
  }

  Linear opaque(const Expr& e) {
    std::string key = "?" + lang::to_string(e);
    auto vars = lang::free_logic_vars(e);
    atom_vars[key].insert(vars.begin(), vars.end());
    Linear out;
    out.coeffs[key] = 1;
    return out;
  }

  Linear linear(const Expr& e) {
    return std::visit(
        overloaded{
            [&](const lang::IntLit& l) -> Linear {
              Linear out;
              out.constant = l.value;
              return out;
            },
            [&](const lang::LogicVar& v) -> Linear {
              std::string key = v.name + "#" + std::to_string(v.index);
              atom_vars[key].insert(LogicVarKey{v.name, v.index, e.sort()});
              Linear out;
              out.coeffs[key] = 1;
              return out;
            },
            [&](const lang::Unary& u) -> Linear { return linear(u.arg).scaled(-1); },
            [&](const lang::Binary& b) -> Linear {
              switch (b.op) {
              case BinaryOp::Add: {
                Linear out = linear(b.lhs);
                return out.add(linear(b.rhs), 1);
              }
              case BinaryOp::Sub: return diff(b.lhs, b.rhs);
              case BinaryOp::Mul: {
                Linear l = linear(b.lhs);
                Linear r = linear(b.rhs);
                if (l.is_constant()) return r.scaled(l.constant);
                if (r.is_constant()) return l.scaled(r.constant);
                return opaque(e);
              }
              case BinaryOp::Div:
              case BinaryOp::Mod: {
                Linear l = linear(b.lhs);
                Linear r = linear(b.rhs);
                if (l.is_constant() && r.is_constant() && r.constant != 0) {
                  Linear out;
                  out.constant = b.op == BinaryOp::Div ? lang::euclid_div(l.constant, r.constant)
                                                       : lang::euclid_mod(l.constant, r.constant);
                  return out;
                }
                return opaque(e);
              }
              default:
                throw GiveUp{};
              }
            },
            [&](const auto&) -> Linear { throw GiveUp{}; },
        },
        e.node().kind);
  }

  RelaxationLimits limits_;
};

/// Fourier–Motzkin elimination over a normalized row set.
class Eliminator {
public:
  Eliminator(std::vector<Row> rows, std::size_t max_rows) : max_rows_(max_rows) {
    for (auto& r : rows) {
      if (!push(std::move(r))) {
        infeasible_ = true;
        return;
      }
    }
  }

  bool infeasible() const { return infeasible_; }

  /// Eliminates every atom except `keep`; false once the rows contradict.
  bool eliminate_all_but(const std::string* keep) {
    while (!infeasible_) {
      std::string best;
      std::size_t best_cost = SIZE_MAX;
      std::map<std::string, std::pair<std::size_t, std::size_t>> counts;
      for (const auto& r : rows_) {
        for (const auto& [atom, c] : r.a) {
          auto& slot = counts[atom];
          (c > 0 ? slot.first : slot.second)++;
        }
      }
      for (const auto& [atom, pn] : counts) {
        if (keep && atom == *keep) continue;
        std::size_t cost = pn.first * pn.second;
        if (cost < best_cost) {
          best_cost = cost;
          best = atom;
        }
      }
      if (best.empty()) break;
      eliminate(best);
    }
    return !infeasible_;
  }

  const std::set<Row>& rows() const { return rows_; }

private:
  bool push(Row r) {
    switch (normalize(r)) {
    case RowState::Infeasible: return false;
    case RowState::Trivial: return true;
    case RowState::Ok: break;
    }
    rows_.insert(std::move(r));
    if (rows_.size() > max_rows_) throw GiveUp{};
    return true;
  }

  void eliminate(const std::string& atom) {
    std::vector<Row> pos;
    std::vector<Row> neg;
    std::set<Row> rest;
    for (const auto& r : rows_) {
      auto it = r.a.find(atom);
      if (it == r.a.end()) {
        rest.insert(r);
      } else if (it->second > 0) {
        pos.push_back(r);
      } else {
        neg.push_back(r);
      }
    }
    rows_ = std::move(rest);
    for (const auto& p : pos) {
      const BigInt& pa = p.a.at(atom);
      for (const auto& n : neg) {
        BigInt na = -n.a.at(atom);
        Row combined;
        combined.c = p.c * na + n.c * pa;
        combined.a = p.a;
        for (auto& [k, v] : combined.a) v *= na;
        for (const auto& [k, v] : n.a) combined.a[k] += v * pa;
        combined.a.erase(atom);
        if (!push(std::move(combined))) {
          infeasible_ = true;
          return;
        }
      }
    }
  }

  std::set<Row> rows_;
  std::size_t max_rows_;
  bool infeasible_ = false;
};

} // namespace

RelaxationAnalysis analyze_relaxation(const Expr& f, const BigInt& bound,
                                      const RelaxationLimits& limits) {
  RelaxationAnalysis out;
  try {
    Builder builder(limits);
    Dnf dnf = builder.dnf(lang::fold(f), true);
    bool all_infeasible = true;
    bool all_bounded = true;
    for (const auto& conj : dnf) {
      Eliminator feasibility(conj.rows, limits.max_rows);
      if (feasibility.infeasible() || !feasibility.eliminate_all_but(nullptr)) continue;
      all_infeasible = false;

      std::set<LogicVarKey> depends;
      for (const auto& row : conj.rows) {
        for (const auto& [atom, _] : row.a) {
          const auto& vars = builder.atom_vars[atom];
          for (const auto& v : vars) {
            if (v.sort == lang::Sort::Int) depends.insert(v);
          }
        }
      }
      for (const auto& v : depends) {
        std::string atom = v.name + "#" + std::to_string(v.index);
        Eliminator projection(conj.rows, limits.max_rows);
        if (!projection.eliminate_all_but(&atom)) break;  // cannot happen: feasible above
        std::optional<BigInt> lo;
        std::optional<BigInt> hi;
        for (const auto& row : projection.rows()) {
          auto it = row.a.find(atom);
          if (it == row.a.end() || row.a.size() != 1) continue;
          const BigInt& a = it->second;
          if (a > 0) {
            BigInt h = floor_div(-row.c, a);
            if (!hi || h < *hi) hi = h;
          } else {
            BigInt l = ceil_div(row.c, -a);
            if (!lo || l > *lo) lo = l;
          }
        }
        if (!lo || !hi || *lo < -bound || *hi > bound) {
          all_bounded = false;
          break;
        }
      }
    }
    out.refuted = all_infeasible;
    out.bounded = all_bounded;
  } catch (const GiveUp&) {
    out = RelaxationAnalysis{false, false, true};
  }
  return out;
}

} // namespace verdap::solve

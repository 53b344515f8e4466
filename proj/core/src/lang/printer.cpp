#include <sstream>

#include "verdap/lang/parser.hpp"

namespace verdap::lang {

namespace {

template <class... Ts> struct overloaded : Ts... { using Ts::operator()...; };
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

void print_list(std::ostream& os, const StmtList& body, int indent);

void print_block(std::ostream& os, const StmtList& body, int indent) {
  os << "{\n";
  print_list(os, body, indent + 1);
  os << std::string(indent * 2, ' ') << "}";
}

void print_stmt(std::ostream& os, const Stmt& s, int indent) {
  std::string pad(indent * 2, ' ');
  os << pad;
  std::visit(overloaded{
                 [&](const Assign& a) { os << a.target << " = " << to_string(a.rhs) << ";\n"; },
                 [&](const LocalDecl& d) {
                   os << "var " << d.name << ": " << sort_name(d.sort) << " = " << to_string(d.init)
                      << ";\n";
                 },
                 [&](const Assume& a) { os << "assume " << to_string(a.cond) << ";\n"; },
                 [&](const Assert& a) { os << "assert " << to_string(a.cond) << ";\n"; },
                 [&](const If& i) {
                   os << "if (" << to_string(i.cond) << ") ";
                   print_block(os, i.then_body, indent);
                   if (!i.else_body.empty()) {
                     os << " else ";
                     print_block(os, i.else_body, indent);
                   }
                   os << "\n";
                 },
                 [&](const While& w) {
                   os << "while (" << to_string(w.cond) << ") invariant " << to_string(w.invariant)
                      << "; ";
                   print_block(os, w.body, indent);
                   os << "\n";
                 },
                 [&](const Call& c) {
                   if (c.result) os << *c.result << " = ";
                   os << c.callee << "(";
                   for (std::size_t i = 0; i < c.args.size(); ++i) {
                     if (i) os << ", ";
                     os << to_string(c.args[i]);
                   }
                   os << ");\n";
                 },
                 [&](const ExitFrame& e) {
                   os << "// return";
                   if (e.result) os << " into " << *e.result;
                   os << "\n";
                 },
             },
             s.node().kind);
}

void print_list(std::ostream& os, const StmtList& body, int indent) {
  for (const auto& s : body) print_stmt(os, s, indent);
}

} // namespace

std::string pretty_print(const StmtList& body, int indent) {
  std::ostringstream os;
  print_list(os, body, indent);
  return os.str();
}

std::string pretty_print(const TranslationUnit& unit) {
  std::ostringstream os;
  for (const auto& g : unit.globals) {
    os << "var " << g.name << ": " << sort_name(g.sort) << " = " << to_string(g.init) << ";\n";
  }
  for (const auto& p : unit.procedures) {
    if (os.tellp() > 0) os << "\n";
    os << "proc " << p.name << "(";
    for (std::size_t i = 0; i < p.params.size(); ++i) {
      if (i) os << ", ";
      os << p.params[i].name << ": " << sort_name(p.params[i].sort);
    }
    os << ")";
    if (p.return_sort) os << ": " << sort_name(*p.return_sort);
    os << "\n";
    if (p.has_precondition) os << "  requires " << to_string(p.precondition) << ";\n";
    if (p.has_postcondition) os << "  ensures " << to_string(p.postcondition) << ";\n";
    print_block(os, p.body, 0);
    os << "\n";
  }
  return os.str();
}

} // namespace verdap::lang

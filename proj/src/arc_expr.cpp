#include "npconf/arc_expr.hpp"

#include <algorithm>
#include <cctype>

#include "npconf/errors.hpp"

namespace npconf {

std::set<VariableId> ArcExpr::variables() const {
  std::set<VariableId> out;
  for (const auto& term : terms)
    if (const auto* v = std::get_if<VariableId>(&term)) out.insert(*v);
  return out;
}

bool ArcExpr::has_constants() const {
  return std::any_of(terms.begin(), terms.end(),
                     [](const Atom& a) { return std::holds_alternative<Value>(a); });
}

std::size_t ArcExpr::occurrences(const VariableId& v) const {
  return static_cast<std::size_t>(std::count_if(terms.begin(), terms.end(), [&](const Atom& a) {
    const auto* var = std::get_if<VariableId>(&a);
    return var && *var == v;
  }));
}

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'; }

}  // namespace

ArcExpr parse_arc_expr(std::string_view text, const DomainName& constant_domain) {
  ArcExpr expr;
  std::size_t i = 0;
  auto fail = [&](const std::string& what) -> ParseError { return ParseError(what, 1, i + 1); };
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };

  bool expect_atom = true;
  skip_ws();
  if (i == text.size()) throw fail("empty arc expression");
  while (i < text.size()) {
    if (expect_atom) {
      if (text[i] == '`') {
        const std::size_t close = text.find('`', i + 1);
        if (close == std::string_view::npos) throw fail("unterminated constant literal");
        if (close == i + 1) throw fail("empty constant literal");
        expr.terms.emplace_back(Value{DataValue{constant_domain, std::string(text.substr(i + 1, close - i - 1))}});
        i = close + 1;
      } else if (ident_start(text[i])) {
        const std::size_t start = i;
        while (i < text.size() && ident_char(text[i])) ++i;
        expr.terms.emplace_back(VariableId{std::string(text.substr(start, i - start))});
      } else {
        throw fail(std::string("expected variable or `constant`, found '") + text[i] + "'");
      }
      expect_atom = false;
    } else {
      if (text[i] != '+') throw fail(std::string("expected '+', found '") + text[i] + "'");
      ++i;
      expect_atom = true;
    }
    skip_ws();
  }
  if (expect_atom) throw fail("expression ends with '+'");
  return expr;
}

std::string to_string(const ArcExpr& e) {
  std::string out;
  for (const auto& term : e.terms) {
    if (!out.empty()) out += " + ";
    if (const auto* v = std::get_if<VariableId>(&term)) {
      out += v->str();
    } else {
      const auto& value = std::get<Value>(term);
      out += '`';
      if (const auto* d = std::get_if<DataValue>(&value))
        out += d->name;
      else
        out += std::get<AgentName>(value).str();
      out += '`';
    }
  }
  return out;
}

Multiset<Value> eval_arc_expr(const ArcExpr& e, const Binding& b) {
  Multiset<Value> out;
  for (const auto& term : e.terms) {
    if (const auto* v = std::get_if<VariableId>(&term)) {
      auto it = b.find(*v);
      if (it == b.end()) throw BindingError("variable '" + v->str() + "' is not bound");
      out.add(it->second);
    } else {
      out.add(std::get<Value>(term));
    }
  }
  return out;
}

}  // namespace npconf

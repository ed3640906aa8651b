#include <gtest/gtest.h>

#include "npconf/arc_expr.hpp"
#include "npconf/colored_net.hpp"
#include "npconf/errors.hpp"
#include "oracles.hpp"
#include "random_models.hpp"

using namespace npconf;

namespace {

Value d(const char* name) { return DataValue{"D", name}; }

// src --x--> move --x--> dst, src --x--> stamp --`u`--> dst,
// src --x+y--> pair --x+y--> dst
ColoredNet mover() {
  ColoredNet cn;
  cn.domains["D"] = Domain{"D", {d("u"), d("v")}};
  std::vector<PetriNet::InputArc> in{{"src", "move"}, {"src", "stamp"}, {"src", "pair"}};
  std::vector<PetriNet::OutputArc> out{{"move", "dst"}, {"stamp", "dst"}, {"pair", "dst"}};
  cn.net = PetriNet({"src", "dst"}, {"move", "stamp", "pair"}, in, out);
  cn.place_type = {{"src", "D"}, {"dst", "D"}};
  cn.var_type["move"] = {{"x", "D"}};
  cn.var_type["stamp"] = {{"x", "D"}};
  cn.var_type["pair"] = {{"x", "D"}, {"y", "D"}};
  cn.input_expr[{"src", "move"}] = parse_arc_expr("x", "D");
  cn.output_expr[{"move", "dst"}] = parse_arc_expr("x", "D");
  cn.input_expr[{"src", "stamp"}] = parse_arc_expr("x", "D");
  cn.output_expr[{"stamp", "dst"}] = parse_arc_expr("`u`", "D");
  cn.input_expr[{"src", "pair"}] = parse_arc_expr("x + y", "D");
  cn.output_expr[{"pair", "dst"}] = parse_arc_expr("x + y", "D");
  cn.activity = {{"move", "move"}, {"stamp", "stamp"}, {"pair", "pair"}};
  cn.initial_marking.add("src", d("u"));
  cn.initial_marking.add("src", d("v"));
  ColoredMarking done;
  done.add("dst", d("u"));
  done.add("dst", d("v"));
  cn.final_markings = {done};
  return cn;
}

ColoredEvent ev(const char* activity, std::initializer_list<Value> payload) {
  ColoredEvent e{activity, {}};
  for (const auto& v : payload) e.payload.add(v);
  return e;
}

}  // namespace

TEST(ArcExpr, ParsesVariablesAndConstants) {
  const auto e = parse_arc_expr(" x +y+ `morning` ", "slot");
  ASSERT_EQ(e.terms.size(), 3u);
  EXPECT_EQ(e.variables(), (std::set<VariableId>{"x", "y"}));
  EXPECT_TRUE(e.has_constants());
  EXPECT_EQ(std::get<Value>(e.terms[2]), Value(DataValue{"slot", "morning"}));
  EXPECT_EQ(to_string(e), "x + y + `morning`");
  EXPECT_EQ(parse_arc_expr(to_string(e), "slot"), e);
}

TEST(ArcExpr, RepeatedVariableCountsTwice) {
  const auto e = parse_arc_expr("x + x");
  EXPECT_EQ(e.occurrences("x"), 2u);
  EXPECT_EQ(e.occurrences("y"), 0u);
  EXPECT_EQ(eval_arc_expr(e, {{"x", AgentName{"r1"}}}).count(AgentName{"r1"}), 2u);
}

TEST(ArcExpr, ErrorColumns) {
  auto column = [](std::string_view text) {
    try {
      parse_arc_expr(text);
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line, 1u);
      return e.column;
    }
    ADD_FAILURE() << "no error for '" << text << "'";
    return std::size_t{0};
  };
  EXPECT_EQ(column(""), 1u);
  EXPECT_EQ(column("x y"), 3u);
  EXPECT_EQ(column("x + 3"), 5u);
  EXPECT_EQ(column("`abc"), 1u);
  EXPECT_EQ(column("x + ``"), 5u);
  EXPECT_EQ(column("x +"), 4u);
}

TEST(ArcExpr, EvaluationNeedsEveryVariable) {
  const auto e = parse_arc_expr("x + `c`", "D");
  const auto m = eval_arc_expr(e, {{"x", d("a")}});
  EXPECT_EQ(m, (Multiset<Value>{d("a"), d("c")}));
  EXPECT_THROW(eval_arc_expr(e, {}), BindingError);
}

TEST(ColoredNet, FixtureValidates) {
  EXPECT_TRUE(validate_colored_net(mover()).ok()) << validate_colored_net(mover());
}

TEST(ColoredNet, ValidationCatchesTypingProblems) {
  auto cn = mover();
  cn.output_expr[{"stamp", "dst"}] = parse_arc_expr("`w`", "E");
  cn.var_type["pair"].erase("y");
  cn.input_expr.erase({"src", "move"});
  const auto r = validate_colored_net(cn);
  EXPECT_GE(r.count("type-mismatch"), 1u);
  EXPECT_EQ(r.count("undeclared-variable"), 2u);  // once per arc
  EXPECT_EQ(r.count("missing-expression"), 1u);
}

TEST(ColoredNet, EnabledBindings) {
  const auto cn = mover();
  const std::vector<Binding> expected{{{"x", d("u")}}, {{"x", d("v")}}};
  EXPECT_EQ(enabled_bindings(cn, cn.initial_marking, "move"), expected);
  // x+y needs two tokens; only distinct values are present, so x != y
  const std::vector<Binding> pairs{{{"x", d("u")}, {"y", d("v")}}, {{"x", d("v")}, {"y", d("u")}}};
  EXPECT_EQ(enabled_bindings(cn, cn.initial_marking, "pair"), pairs);
}

TEST(ColoredNet, Firing) {
  const auto cn = mover();
  const auto m = fire_colored(cn, cn.initial_marking, "move", {{"x", d("v")}});
  EXPECT_EQ(m.tokens("src"), Multiset<Value>{d("u")});
  EXPECT_EQ(m.tokens("dst"), Multiset<Value>{d("v")});

  const auto s = fire_colored(cn, cn.initial_marking, "stamp", {{"x", d("v")}});
  EXPECT_EQ(s.tokens("dst"), Multiset<Value>{d("u")});
}

TEST(ColoredNet, FiringErrors) {
  const auto cn = mover();
  EXPECT_THROW(fire_colored(cn, cn.initial_marking, "move", {}), BindingError);
  EXPECT_THROW(fire_colored(cn, cn.initial_marking, "move", {{"x", d("w")}}), BindingError);
  ColoredMarking empty;
  EXPECT_THROW(fire_colored(cn, empty, "move", {{"x", d("u")}}), NotEnabledError);
}

TEST(ColoredNet, PayloadCountsEachVariableOnce) {
  const auto cn = mover();
  EXPECT_EQ(binding_payload(cn, "pair", {{"x", d("u")}, {"y", d("u")}}), (Multiset<Value>{d("u"), d("u")}));
  EXPECT_EQ(binding_payload(cn, "move", {{"x", d("v")}}), Multiset<Value>{d("v")});
}

TEST(IsRunColored, Runs) {
  const auto cn = mover();
  const std::vector<ColoredEvent> both{ev("move", {d("u")}), ev("move", {d("v")})};
  const auto r = is_run_colored(cn, both);
  ASSERT_TRUE(r.fits());
  EXPECT_EQ(r.witness.size(), 2u);
  EXPECT_TRUE(is_run_colored(cn, std::vector<ColoredEvent>{ev("pair", {d("v"), d("u")})}).fits());
}

TEST(IsRunColored, SameValueTwiceFailsAtSecondEvent) {
  const auto cn = mover();
  const std::vector<ColoredEvent> run{ev("move", {d("u")}), ev("move", {d("u")})};
  const auto r = is_run_colored(cn, run);
  EXPECT_EQ(r.verdict, Verdict::does_not_fit);
  EXPECT_EQ(r.longest_prefix, 1u);
}

TEST(IsRunColored, ReplaysFullyButEndsOutsideOmega) {
  const auto cn = mover();
  const std::vector<ColoredEvent> run{ev("stamp", {d("v")}), ev("move", {d("u")})};
  const auto r = is_run_colored(cn, run);
  EXPECT_EQ(r.verdict, Verdict::does_not_fit);
  EXPECT_EQ(r.longest_prefix, 2u);
}

TEST(IsRunColored, PayloadArityMustMatch) {
  const auto cn = mover();
  const std::vector<ColoredEvent> run{ev("move", {d("u"), d("v")})};
  EXPECT_EQ(is_run_colored(cn, run).longest_prefix, 0u);
}

// All words up to length 3 over the events of the enumerated language and
// every single-value event, plus the language itself.
TEST(IsRunColored, AgreesWithEnumerationOnRandomNets) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto cn = test_support::random_colored_net(seed);
    ASSERT_TRUE(validate_colored_net(cn).ok()) << validate_colored_net(cn);
    const auto language = test_support::colored_language(cn, 4);

    std::set<ColoredEvent> alphabet;
    for (const auto& w : language)
      for (const auto& e : w) alphabet.insert(e);
    for (const auto& [t, a] : cn.activity)
      for (const auto& [name, dom] : cn.domains)
        for (const auto& v : dom.values) alphabet.insert(ColoredEvent{a, Multiset<Value>{v}});

    std::vector<std::vector<ColoredEvent>> words{{}};
    for (std::size_t len = 0; len < 3; ++len) {
      std::vector<std::vector<ColoredEvent>> longer;
      for (const auto& u : words)
        if (u.size() == len)
          for (const auto& e : alphabet) {
            auto v = u;
            v.push_back(e);
            longer.push_back(v);
          }
      words.insert(words.end(), longer.begin(), longer.end());
    }
    for (const auto& w : language) words.push_back(w);

    for (const auto& w : words)
      EXPECT_EQ(is_run_colored(cn, w).fits(), language.count(w) == 1) << "seed " << seed;
  }
}

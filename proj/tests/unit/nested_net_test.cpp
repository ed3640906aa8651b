#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "npconf/arc_expr.hpp"
#include "npconf/errors.hpp"
#include "npconf/loggen.hpp"
#include "npconf/nested_net.hpp"
#include "oracles.hpp"
#include "random_models.hpp"

using namespace npconf;
using test_support::assistant_engine;

namespace {

Step elem(const char* agent, const char* t) { return ElementAutonomousStep{agent, t}; }
Step sys(const char* t, const char* agent) { return SystemAutonomousStep{t, {{"x", AgentName{agent}}}}; }
Step sync(const char* t, const char* agent, const char* inner) {
  return SynchronizationStep{t, {{"x", AgentName{agent}}}, {{agent, inner}}};
}

// d, d, e, e, (a with f by r1), (c with g by r2), (b for r1)
std::vector<Step> two_customers_steps() {
  return {elem("r1", "t_d"), elem("r2", "t_d"), elem("r1", "t_e"), elem("r2", "t_e"),
          sync("t_a", "r1", "t_f"), sync("t_c", "r2", "t_g"), sys("t_b", "r1")};
}

void replace_outputs(NestedNet& np, std::vector<PetriNet::OutputArc> out) {
  auto& sn = np.system;
  std::vector<PetriNet::InputArc> in(sn.net.input_arcs().begin(), sn.net.input_arcs().end());
  sn.net = PetriNet(sn.net.places(), sn.net.transitions(), in, out);
}

std::vector<PetriNet::OutputArc> outputs_of(const NestedNet& np) {
  return {np.system.net.output_arcs().begin(), np.system.net.output_arcs().end()};
}

}  // namespace

TEST(NestedNet, FixtureIsValid) {
  const auto np = assistant_engine();
  EXPECT_TRUE(validate_nested_net(np).ok()) << validate_nested_net(np);
  EXPECT_TRUE(check_conservative(np).ok());
  EXPECT_TRUE(check_label_determinism(np).ok());
}

TEST(NestedNet, SharedIdBetweenLevels) {
  auto np = assistant_engine();
  auto& w = np.elements.at("customer");
  w.activity["t_a"] = "zz";
  std::vector<PetriNet::InputArc> in(w.net.input_arcs().begin(), w.net.input_arcs().end());
  std::vector<PetriNet::OutputArc> out(w.net.output_arcs().begin(), w.net.output_arcs().end());
  in.emplace_back("q1", "t_a");
  out.emplace_back("t_a", "q2");
  auto ts = w.net.transitions();
  ts.insert("t_a");
  w.net = PetriNet(w.net.places(), ts, in, out);
  EXPECT_GE(validate_nested_net(np).count("id-overlap"), 1u);
}

TEST(NestedNet, ConstantOnNetArc) {
  auto np = assistant_engine();
  np.system.output_expr[{"t_a", "p_served"}] = parse_arc_expr("x + `k`", "customer");
  EXPECT_GE(validate_nested_net(np).count("constant-on-net-arc"), 1u);
}

TEST(NestedNet, NetTokenNotAtSource) {
  auto np = assistant_engine();
  np.initial_marking.set_inner("r1", Marking{"q1"});
  EXPECT_EQ(validate_nested_net(np).count("bad-initial-inner"), 1u);
}

TEST(NestedNet, AgentMissingFromInitialMarking) {
  auto np = assistant_engine();
  np.agents["r3"] = "customer";
  EXPECT_GE(validate_nested_net(np).count("missing-agent"), 1u);
}

TEST(Conservative, CloningDetected) {
  auto np = assistant_engine();
  auto out = outputs_of(np);
  out.emplace_back("t_a", "p_done");
  replace_outputs(np, out);
  np.system.output_expr[{"t_a", "p_done"}] = parse_arc_expr("x");
  const auto r = check_conservative(np);
  ASSERT_EQ(r.count("cloning"), 1u);
  EXPECT_EQ(r.violations().front().subject, "t_a");
}

TEST(Conservative, DisappearanceDetected) {
  auto np = assistant_engine();
  auto out = outputs_of(np);
  std::erase(out, PetriNet::OutputArc{"t_b", "p_done"});
  replace_outputs(np, out);
  np.system.output_expr.erase({"t_b", "p_done"});
  const auto r = check_conservative(np);
  ASSERT_EQ(r.count("disappearance"), 1u);
  EXPECT_EQ(r.violations().front().subject, "t_b");
}

TEST(LabelDeterminism, SharedActivityWithDifferentLabels) {
  auto np = assistant_engine();
  np.system.activity["t_b"] = "a";  // t_a carries L1, t_b none
  EXPECT_EQ(check_label_determinism(np).count("label-nondeterminism"), 1u);
}

TEST(EnabledSteps, InitialMarkingOffersOnlyD) {
  const auto np = assistant_engine();
  const std::vector<Step> expected{elem("r1", "t_d"), elem("r2", "t_d")};
  EXPECT_EQ(enabled_steps(np, np.initial_marking), expected);
}

TEST(EnabledSteps, EmptyMarking) {
  EXPECT_TRUE(enabled_steps(assistant_engine(), NpMarking{}).empty());
}

TEST(EnabledSteps, SyncNeedsTheSystemSide) {
  const auto np = assistant_engine();
  // r1 is ready for f but sits in p_served, where neither a nor c can take it
  NpMarking m;
  m.put_net_token("p_served", "r1", Marking{"q2"});
  m.put_net_token("p_wait", "r2", Marking{"i"});
  for (const auto& s : enabled_steps(np, m)) {
    const auto* y = std::get_if<SynchronizationStep>(&s);
    EXPECT_TRUE(y == nullptr) << s;
  }
  EXPECT_TRUE(is_step_enabled(np, m, sys("t_b", "r1")));
}

TEST(ApplyStep, ElementStepMovesOnlyTheInnerMarking) {
  const auto np = assistant_engine();
  const auto m = apply_step(np, np.initial_marking, elem("r1", "t_d"));
  EXPECT_EQ(m.inner("r1"), Marking{"q1"});
  EXPECT_EQ(m.inner("r2"), Marking{"i"});
  EXPECT_EQ(m.locate("r1"), PlaceId{"p_wait"});
}

TEST(ApplyStep, SyncFiresInnerThenMovesToken) {
  const auto np = assistant_engine();
  NpMarking m = np.initial_marking;
  for (const auto& s : {elem("r1", "t_d"), elem("r1", "t_h")}) m = apply_step(np, m, s);
  m = apply_step(np, m, sync("t_a", "r1", "t_f"));
  EXPECT_EQ(m.inner("r1"), Marking{"o"});
  EXPECT_EQ(m.locate("r1"), PlaceId{"p_served"});
  EXPECT_EQ(m.locate("r2"), PlaceId{"p_wait"});
}

TEST(ApplyStep, SystemStepKeepsInnerMarking) {
  const auto np = assistant_engine();
  NpMarking m = np.initial_marking;
  for (const auto& s : {elem("r1", "t_d"), elem("r1", "t_h"), sync("t_a", "r1", "t_f")}) m = apply_step(np, m, s);
  const auto next = apply_step(np, m, sys("t_b", "r1"));
  EXPECT_EQ(next.inner("r1"), Marking{"o"});
  EXPECT_EQ(next.locate("r1"), PlaceId{"p_done"});
}

TEST(ApplyStep, DisabledStepThrows) {
  const auto np = assistant_engine();
  EXPECT_THROW(apply_step(np, np.initial_marking, elem("r1", "t_h")), NotEnabledError);
  EXPECT_THROW(apply_step(np, np.initial_marking, sys("t_b", "r1")), NotEnabledError);
  // inner g is not enabled yet
  EXPECT_THROW(apply_step(np, np.initial_marking, sync("t_c", "r1", "t_g")), NotEnabledError);
}

TEST(IsRunNp, TwoCustomerRun) {
  const auto np = assistant_engine();
  const auto steps = two_customers_steps();
  EXPECT_TRUE(is_run_np(np, steps));
}

TEST(IsRunNp, EmptyAndTruncated) {
  const auto np = assistant_engine();
  EXPECT_FALSE(is_run_np(np, {}));
  auto steps = two_customers_steps();
  steps.pop_back();
  EXPECT_FALSE(is_run_np(np, steps));
}

TEST(IsRunNp, BookingRunUsesBothSlots) {
  const auto np = test_support::booking();
  const Value morning = DataValue{"slot", "morning"}, evening = DataValue{"slot", "evening"};
  const std::vector<Step> run{
      elem("p1", "t_request"),
      SystemAutonomousStep{"t_book", {{"x", AgentName{"p1"}}, {"s", morning}}},
      elem("p2", "t_request"),
      SystemAutonomousStep{"t_book", {{"x", AgentName{"p2"}}, {"s", evening}}},
      SynchronizationStep{"t_visit", {{"x", AgentName{"p1"}}}, {{"p1", "t_attend"}}},
      SynchronizationStep{"t_visit", {{"x", AgentName{"p2"}}}, {{"p2", "t_attend"}}},
  };
  EXPECT_TRUE(is_run_np(np, run));
  auto twice = run;
  std::get<SystemAutonomousStep>(twice[3]).binding["s"] = morning;
  EXPECT_FALSE(is_run_np(np, twice));
}

TEST(ValueAdmitted, ClassesAndDomains) {
  const auto np = test_support::booking();
  EXPECT_TRUE(value_admitted(np, NetId{"patient"}, AgentName{"p1"}));
  EXPECT_FALSE(value_admitted(np, NetId{"patient"}, AgentName{"zz"}));
  EXPECT_FALSE(value_admitted(np, NetId{"patient"}, Value{DataValue{"slot", "morning"}}));
  EXPECT_TRUE(value_admitted(np, DomainName{"slot"}, Value{DataValue{"slot", "morning"}}));
  EXPECT_FALSE(value_admitted(np, DomainName{"slot"}, Value{DataValue{"slot", "noon"}}));
}

// Properties over random conservative models, along random walks.

namespace {

template <class Visit>
void random_walks(std::uint64_t seed, int models, std::size_t walk_length, Visit&& visit) {
  test_support::RandomModelConfig cfg;
  cfg.max_agents = 3;
  std::mt19937_64 rng(seed);
  for (int k = 0; k < models; ++k) {
    const auto np = test_support::random_model(rng(), cfg);
    NpMarking m = np.initial_marking;
    for (std::size_t i = 0; i < walk_length; ++i) {
      const auto steps = enabled_steps(np, m);
      if (steps.empty()) break;
      const auto& s = steps[rng() % steps.size()];
      const auto next = apply_step(np, m, s);
      visit(np, m, steps, s, next);
      m = next;
    }
  }
}

}  // namespace

TEST(EnabledSteps, AgreesWithBruteForce) {
  random_walks(1, 60, 12, [](const NestedNet& np, const NpMarking& m, const std::vector<Step>& steps, const Step&,
                             const NpMarking&) {
    const std::set<Step> got(steps.begin(), steps.end());
    EXPECT_EQ(got.size(), steps.size()) << "duplicate steps";
    EXPECT_EQ(got, test_support::brute_force_steps(np, m)) << m;
  });
}

TEST(StepLocality, AutonomousStepsTouchOneLevel) {
  random_walks(2, 60, 20, [](const NestedNet&, const NpMarking& m, const std::vector<Step>&, const Step& s,
                             const NpMarking& next) {
    if (const auto* e = std::get_if<ElementAutonomousStep>(&s)) {
      EXPECT_EQ(next.atom_places(), m.atom_places());
      for (const auto& agent : m.agents()) {
        EXPECT_EQ(next.locate(agent), m.locate(agent));
        if (agent != e->agent) EXPECT_EQ(next.inner(agent), m.inner(agent));
      }
    } else if (std::holds_alternative<SystemAutonomousStep>(s)) {
      for (const auto& agent : m.agents()) EXPECT_EQ(next.inner(agent), m.inner(agent));
    }
  });
}

TEST(Conservation, AgentSetNeverChanges) {
  std::size_t steps_seen = 0;
  random_walks(3, 80, 30, [&](const NestedNet& np, const NpMarking&, const std::vector<Step>&, const Step&,
                              const NpMarking& next) {
    ++steps_seen;
    EXPECT_EQ(next.agents(), np.initial_marking.agents());
  });
  EXPECT_GT(steps_seen, 500u);
}

TEST(IsRunNp, SimulatedRunsAreRuns) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto np = test_support::random_model(seed);
    for (std::uint64_t k = 0; k < 5; ++k) {
      const auto run = simulate_run(np, k, 64);
      if (!run) continue;
      EXPECT_TRUE(is_run_np(np, run->steps)) << "model " << seed << " run " << k;
    }
  }
}

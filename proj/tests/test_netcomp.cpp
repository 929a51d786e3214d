#include <catch2/catch_amalgamated.hpp>

#include "netfic/builtin.hpp"
#include "netfic/netcomp.hpp"

using namespace netfic;

namespace {

bool has_finding(const Findings& f, const std::string& rule) {
  for (const auto& x : f)
    if (x.rule == rule) return true;
  return false;
}

NetInstance fig2() { return std::get<NetInstance>(builtin_example("fig2")); }
NetInstance fig1_scaled() { return std::get<NetInstance>(builtin_example("fig1-scaled")); }

}  // namespace

TEST_CASE("the bundled XOR network validates cleanly") {
  CHECK(validate_problem(fig2().problem).empty());
}

TEST_CASE("cycles are reported as findings") {
  NetProblem p;
  p.field = FieldSpec(2);
  p.sources.push_back({"X1", "a", "X1", 1});
  p.edges.push_back({"e1", "a", "b", 1});
  p.edges.push_back({"e2", "b", "a", 1});
  p.sinks.push_back({"b", {proj("X1")}});
  CHECK(has_finding(validate_problem(p), "CycleDetected"));
  CHECK_THROWS_AS(ancestral_order(p), Error);
}

TEST_CASE("demands naming undeclared blocks are reported") {
  NetProblem p = fig2().problem;
  p.sinks[0].demands = {proj("X9")};
  Findings f = validate_problem(p);
  REQUIRE(has_finding(f, "UnknownBlock"));
}

TEST_CASE("sinks with outgoing edges are reported") {
  NetProblem p = fig2().problem;
  p.edges.push_back({"bad", "t1", "t2", 1});
  CHECK(has_finding(validate_problem(p), "SinkHasOutgoingEdge"));
}

TEST_CASE("ancestral order respects dependencies and declaration ties") {
  auto inst = fig1_scaled();
  auto order = ancestral_order(inst.problem);
  REQUIRE(order.size() == 13);
  auto pos = [&](const std::string& id) {
    return std::find(order.begin(), order.end(), id) - order.begin();
  };
  // feeding edges come before the edges they feed
  for (const char* early : {"e1", "e2", "e3", "e4"})
    for (const char* late : {"e5", "e6", "e7", "e8", "e9"}) CHECK(pos(early) < pos(late));
  CHECK(pos("e5") < pos("e10"));
  CHECK(pos("e6") < pos("e10"));
  CHECK(pos("e10") < pos("e12"));
  CHECK(pos("e11") < pos("e12"));
  CHECK(pos("e8") < pos("e13"));
  CHECK(pos("e9") < pos("e13"));
  // with declaration-order tie-breaks the full order is pinned
  CHECK(order == std::vector<std::string>{"e1", "e2", "e3", "e4", "e5", "e6", "e7", "e8", "e9",
                                          "e10", "e11", "e12", "e13"});
}

TEST_CASE("a single source edge yields a one-edge order") {
  NetProblem p;
  p.field = FieldSpec(2);
  p.sources.push_back({"X1", "s", "X1", 2});
  p.edges.push_back({"e1", "s", "t", 2});
  p.sinks.push_back({"t", {proj("X1")}});
  CHECK(ancestral_order(p) == std::vector<std::string>{"e1"});
}

TEST_CASE("parallel edges keep declaration order") {
  NetProblem p;
  p.field = FieldSpec(2);
  p.sources.push_back({"X1", "s", "X1", 1});
  p.edges.push_back({"e_b", "s", "t", 1});
  p.edges.push_back({"e_a", "s", "t", 1});
  p.sinks.push_back({"t", {proj("X1")}});
  CHECK(ancestral_order(p) == std::vector<std::string>{"e_b", "e_a"});
  CHECK(ancestral_order(p, TieBreak::ByDeclarationReversed) ==
        std::vector<std::string>{"e_a", "e_b"});
}

TEST_CASE("global kernels of the max network match their expected forms") {
  auto inst = fig1_scaled();
  auto globals = derive_global_kernels(inst.problem, *inst.code);
  BlockLayout xl = inst.problem.message_layout();
  FieldSpec f = inst.problem.field;

  auto X = [](int k) { return proj("X" + std::to_string(k)); };
  CHECK(func_equal(globals.at("e1"), X(1), xl, f).equal());
  CHECK(func_equal(globals.at("e5"), max_int(X(1), X(4)), xl, f).equal());
  CHECK(func_equal(globals.at("e10"), max_int({X(1), X(2), X(4), X(5), X(8)}), xl, f).equal());
  CHECK(func_equal(globals.at("e12"),
                   max_int({X(1), X(2), X(4), X(5), X(8), X(9), X(10)}), xl, f).equal());
  CHECK(func_equal(globals.at("e13"), max_int({X(2), X(3), X(6), X(7), X(11)}), xl, f).equal());
}

TEST_CASE("global kernels of the XOR network match their expected forms") {
  auto inst = fig2();
  auto globals = derive_global_kernels(inst.problem, *inst.code);
  BlockLayout xl = inst.problem.message_layout();
  FieldSpec f = inst.problem.field;

  auto X = [](int k) { return proj("X" + std::to_string(k)); };
  CHECK(func_equal(globals.at("e10"), add({X(2), X(3), X(4)}), xl, f).equal());
  CHECK(func_equal(globals.at("e13"), add({X(1), X(2), X(4)}), xl, f).equal());
  CHECK(func_equal(globals.at("e16"), X(3), xl, f).equal());
}

TEST_CASE("an identity relay derives an identity global kernel") {
  NetProblem p;
  p.field = FieldSpec(2);
  p.sources.push_back({"X1", "s", "X1", 3});
  p.edges.push_back({"e1", "s", "t", 3});
  p.sinks.push_back({"t", {proj("X1")}});
  NetCode c;
  c.kernels["e1"] = proj("X1");
  c.decoders["t"] = proj("e1");
  auto globals = derive_global_kernels(p, c);
  CHECK(func_equal(globals.at("e1"), proj("X1"), p.message_layout(), p.field).equal());
  CHECK(verify_net_code(p, c).verdict == Verdict::Pass);
}

TEST_CASE("global kernels are independent of the ancestral tie-break") {
  auto inst = fig2();
  auto a = derive_global_kernels(inst.problem, *inst.code, TieBreak::ByDeclaration);
  auto b = derive_global_kernels(inst.problem, *inst.code, TieBreak::ByDeclarationReversed);
  BlockLayout xl = inst.problem.message_layout();
  for (const auto& e : inst.problem.edges)
    CHECK(func_equal(a.at(e.id), b.at(e.id), xl, inst.problem.field).equal());
}

TEST_CASE("source globals project the matching message block") {
  auto inst = fig2();
  const NetProblem& p = inst.problem;
  BlockLayout xl = p.message_layout();
  for (const auto& s : p.sources) {
    CompiledExpr pr(proj(s.message), xl, p.field);
    DomainStream stream(p.field, xl.total_width(), Exhaustive{});
    std::vector<std::uint8_t> x(xl.total_width());
    while (stream.next(x)) {
      SymbolVec v = pr(SymbolVec(p.field, x));
      const auto& blk = xl.find(s.message);
      for (std::size_t i = 0; i < blk.width; ++i) CHECK(v[i] == x[blk.offset + i]);
    }
  }
}

TEST_CASE("the XOR network verifies exhaustively over all 16 realizations") {
  auto inst = fig2();
  auto r = verify_net_code(inst.problem, *inst.code);
  CHECK(r.verdict == Verdict::Pass);
  CHECK(r.exhaustive);
  CHECK(r.checked == 16);
  CHECK(r.witnesses.empty());

  // pure evaluation: a second run reports identically
  auto r2 = verify_net_code(inst.problem, *inst.code);
  CHECK(r2.verdict == r.verdict);
  CHECK(r2.checked == r.checked);
}

TEST_CASE("a zeroed kernel is caught with the first lexicographic witness") {
  auto inst = fig2();
  NetCode broken = *inst.code;
  broken.kernels["e16"] = constant(SymbolVec(FieldSpec(2), {0}));
  auto r = verify_net_code(inst.problem, broken);
  REQUIRE(r.verdict == Verdict::Fail);
  REQUIRE_FALSE(r.witnesses.empty());
  // only t3's demand X1+X3 depends on e16; it breaks exactly when X3 = 1
  for (const auto& w : r.witnesses) {
    CHECK(w.subject == "t3");
    CHECK(w.input[2] == 1);
  }
  CHECK(r.witnesses.front().input == SymbolVec(FieldSpec(2), {0, 0, 1, 0}));
  CHECK(r.witnesses.front().expected == SymbolVec(FieldSpec(2), {1}));
  CHECK(r.witnesses.front().got == SymbolVec(FieldSpec(2), {0}));
}

TEST_CASE("witnesses are capped per subject") {
  auto inst = fig2();
  NetCode broken = *inst.code;
  broken.kernels["e16"] = constant(SymbolVec(FieldSpec(2), {0}));
  VerifySettings s;
  s.witness_cap = 3;
  auto r = verify_net_code(inst.problem, broken, s);
  CHECK(r.witnesses.size() == 3);  // 8 violating realizations, capped
}

TEST_CASE("missing kernels and decoders are reported") {
  auto inst = fig2();
  NetCode c = *inst.code;
  c.kernels.erase("e7");
  CHECK_THROWS_AS(verify_net_code(inst.problem, c), Error);
  c = *inst.code;
  c.decoders.erase("t1");
  CHECK_THROWS_AS(verify_net_code(inst.problem, c), Error);
}

TEST_CASE("forced exhaustive verification over the cap is refused") {
  auto inst = std::get<NetInstance>(builtin_example("fig1"));
  VerifySettings s;
  s.mode = VerifySettings::Mode::Exhaustive;  // 2^110 realizations
  CHECK_THROWS_AS(verify_net_code(inst.problem, *inst.code, s), Error);
}

TEST_CASE("the scaled max network verifies exhaustively") {
  auto inst = fig1_scaled();
  auto r = verify_net_code(inst.problem, *inst.code);
  CHECK(r.verdict == Verdict::Pass);
  CHECK(r.checked == 2048);
}

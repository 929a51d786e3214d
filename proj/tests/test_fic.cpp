#include <catch2/catch_amalgamated.hpp>

#include "netfic/builtin.hpp"
#include "netfic/fic.hpp"

using namespace netfic;

namespace {

FicInstance table3() { return std::get<FicInstance>(builtin_example("table3")); }

// two parties exchanging the bit the other one holds
FicProblem xor_exchange() {
  FicProblem p;
  p.field = FieldSpec(2);
  p.messages = {{"Z1", 1}, {"Z2", 1}};
  p.clients.push_back({"R1", {"Z1"}, {proj("Z2")}});
  p.clients.push_back({"R2", {"Z2"}, {proj("Z1")}});
  return p;
}

}  // namespace

TEST_CASE("the majority broadcast instance validates and verifies") {
  auto inst = table3();
  CHECK(validate_fic(inst.problem).empty());
  auto r = verify_fic_code(inst.problem, *inst.code);
  CHECK(r.verdict == Verdict::Pass);
  CHECK(r.checked == 64);
}

TEST_CASE("fic validation findings") {
  FicProblem p = table3().problem;
  p.clients[0].has.push_back("X9");
  CHECK_FALSE(validate_fic(p).empty());

  FicProblem q = table3().problem;
  q.clients[1].want.clear();
  bool empty_want = false;
  for (const auto& f : validate_fic(q)) empty_want |= f.rule == "EmptyWant";
  CHECK(empty_want);

  FicProblem r = table3().problem;
  r.messages.emplace_back("C", 1);
  bool reserved = false;
  for (const auto& f : validate_fic(r)) reserved |= f.rule == "ReservedName";
  CHECK(reserved);
}

TEST_CASE("a truncated code fails exactly where the dropped component is needed") {
  auto inst = table3();
  FicProblem p = inst.problem;
  FicCode c;
  c.length = 2;
  c.encoder = concat({add(proj("X1"), proj("X6")), add(proj("X3"), proj("X4"))});
  c.decoders = inst.code->decoders;
  // R3's first want used the dropped third component; pin it to zero
  c.decoders["R3"] = concat({constant(SymbolVec(p.field, {0})),
                             add(proj(kCodewordBlock, 0, 1), proj("X3"))});
  // R1/R2/R4 never referenced the third component, so they still verify
  auto r = verify_fic_code(p, c);
  REQUIRE(r.verdict == Verdict::Fail);
  for (const auto& w : r.witnesses) {
    CHECK(w.subject == "R3");
    CHECK(p.field.add(w.input[1], w.input[4]) == 1);  // fails iff X2+X5 = 1
  }
  CHECK(r.witnesses.front().input == SymbolVec(p.field, {0, 0, 0, 0, 1, 0}));
}

TEST_CASE("the broadcast-everything code always verifies") {
  for (const FicProblem& p : {table3().problem, xor_exchange()}) {
    FicCode c = broadcast_code(p);
    CHECK(c.length == p.message_width());
    CHECK(verify_fic_code(p, c).verdict == Verdict::Pass);
  }
}

TEST_CASE("decoder and want widths must agree") {
  auto inst = table3();
  FicCode c = *inst.code;
  c.decoders["R4"] = concat({proj("X1"), proj("X1")});
  CHECK_THROWS_AS(verify_fic_code(inst.problem, c), Error);
}

TEST_CASE("encoder length must match the declared code length") {
  auto inst = table3();
  FicCode c = *inst.code;
  c.length = 4;
  CHECK_THROWS_AS(verify_fic_code(inst.problem, c), Error);
}

TEST_CASE("the exclusive law holds for the bundled code over all pairs") {
  auto inst = table3();
  auto r = check_exclusive_law(inst.problem, *inst.code);
  CHECK(r.verdict == Verdict::Pass);
  CHECK(r.checked == 64 * 63 / 2);
}

TEST_CASE("an encoder ignoring a wanted message violates the exclusive law") {
  FicProblem p = xor_exchange();
  FicCode c;
  c.length = 1;
  c.encoder = proj("Z1");
  c.decoders["R1"] = proj(kCodewordBlock);  // bogus, never reached by the law check
  c.decoders["R2"] = proj(kCodewordBlock);
  auto r = check_exclusive_law(p, c);
  REQUIRE(r.verdict == Verdict::Fail);
  // (0,0) and (0,1) are confusable for R1 yet share the codeword (0)
  const auto& w = r.witnesses.front();
  CHECK(w.subject == "R1");
  CHECK(w.input == SymbolVec(p.field, {0, 0}));
  CHECK(w.expected == SymbolVec(p.field, {0, 1}));
  CHECK(w.got == SymbolVec(p.field, {0}));
}

TEST_CASE("wants computable from side information need no transmission") {
  FicProblem p;
  p.field = FieldSpec(2);
  p.messages = {{"Z1", 1}, {"Z2", 1}};
  p.clients.push_back({"R1", {"Z1", "Z2"}, {add(proj("Z1"), proj("Z2"))}});
  FicCode c;
  c.length = 0;
  c.encoder = constant(SymbolVec(p.field, {}));
  c.decoders["R1"] = add(proj("Z1"), proj("Z2"));
  CHECK(verify_fic_code(p, c).verdict == Verdict::Pass);
  CHECK(check_exclusive_law(p, c).verdict == Verdict::Pass);  // no confusable pairs
}

TEST_CASE("the exclusive-law check samples pairs above the cap") {
  auto inst = table3();
  VerifySettings s;
  s.cap = 100;  // 2016 pairs exceed this
  s.samples = 500;
  auto r = check_exclusive_law(inst.problem, *inst.code, s);
  CHECK(r.verdict == Verdict::PassSampled);
  CHECK_FALSE(r.exhaustive);

  s.mode = VerifySettings::Mode::Exhaustive;
  CHECK_THROWS_AS(check_exclusive_law(inst.problem, *inst.code, s), Error);
}

TEST_CASE("verification reports are deterministic across runs") {
  auto inst = table3();
  FicCode broken = *inst.code;
  broken.decoders["R4"] = proj(kCodewordBlock, 1, 1);
  auto a = verify_fic_code(inst.problem, broken);
  auto b = verify_fic_code(inst.problem, broken);
  REQUIRE(a.verdict == Verdict::Fail);
  REQUIRE(a.witnesses.size() == b.witnesses.size());
  for (std::size_t i = 0; i < a.witnesses.size(); ++i) {
    CHECK(a.witnesses[i].subject == b.witnesses[i].subject);
    CHECK(a.witnesses[i].input == b.witnesses[i].input);
  }
}

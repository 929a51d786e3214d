#include <catch2/catch_amalgamated.hpp>

#include "netfic/builtin.hpp"
#include "netfic/reduce.hpp"
#include "support/random_instances.hpp"

using namespace netfic;

namespace {

NetInstance fig2() { return std::get<NetInstance>(builtin_example("fig2")); }

NetInstance one_edge_relay() {
  NetInstance inst;
  NetProblem& p = inst.problem;
  p.field = FieldSpec(2);
  p.sources.push_back({"X1", "s", "X1", 1});
  p.edges.push_back({"e1", "s", "t", 1});
  p.sinks.push_back({"t", {proj("X1")}});
  NetCode c;
  c.kernels["e1"] = proj("X1");
  c.decoders["t"] = proj("e1");
  inst.code = c;
  return inst;
}

const FicClient& client(const FicProblem& p, const std::string& id) {
  for (const auto& c : p.clients)
    if (c.id == id) return c;
  throw std::runtime_error("no client " + id);
}

}  // namespace

TEST_CASE("the construction from the scaled max network has the expected shape") {
  auto inst = std::get<NetInstance>(builtin_example("fig1-scaled"));
  auto [fic, map] = nc_to_fic(inst.problem);
  CHECK(fic.messages.size() == 24);  // 11 message blocks + 13 edge blocks
  CHECK(fic.clients.size() == 15);   // 13 edges + 1 sink + 1 knows-all
  const auto& re5 = client(fic, map.client_of_edge.at("e5"));
  CHECK(re5.has == std::vector<std::string>{"X4", "e1"});
  REQUIRE(re5.want.size() == 1);
  CHECK(re5.want[0].node().kind == ExprKind::Proj);
  CHECK(re5.want[0].node().block == "e5");
}

TEST_CASE("the construction from the XOR network matches the expected clients") {
  auto inst = fig2();
  auto [fic, map] = nc_to_fic(inst.problem);
  CHECK(fic.messages.size() == 22);
  CHECK(fic.clients.size() == 25);

  const auto& re1 = client(fic, map.client_of_edge.at("e1"));
  CHECK(re1.has == std::vector<std::string>{"X1", "X2"});  // both messages enter that node

  const auto& rt2 = client(fic, map.client_of_sink.at("t2"));
  CHECK(rt2.has == std::vector<std::string>{"e8", "e13"});
  REQUIRE(rt2.want.size() == 1);
  CHECK(func_equal(rt2.want[0], add(proj("X2"), proj("X4")), fic.layout(), fic.field).equal());

  const auto& rall = client(fic, map.client_all);
  CHECK(rall.has == std::vector<std::string>{"X1", "X2", "X3", "X4"});
  CHECK(rall.want.size() == 18);
}

TEST_CASE("structural counts: |E| + |T| + 1 clients, projection wants outside the sinks") {
  auto inst = one_edge_relay();
  auto [fic, map] = nc_to_fic(inst.problem);
  CHECK(fic.messages.size() == 2);
  CHECK(fic.clients.size() == 3);
  for (const auto& c : fic.clients) {
    bool is_sink_client = false;
    for (const auto& [s, id] : map.client_of_sink) is_sink_client |= id == c.id;
    if (is_sink_client) continue;
    for (const auto& w : c.want) CHECK(w.node().kind == ExprKind::Proj);
  }
}

TEST_CASE("converted codes on the relay have the textbook shape") {
  auto inst = one_edge_relay();
  auto [fic, map] = nc_to_fic(inst.problem);
  auto code = nc_code_to_fic_code(inst.problem, *inst.code, map);
  CHECK(code.length == 1);
  BlockLayout zl = fic.layout();
  CHECK(func_equal(code.encoder, add(proj("e1"), proj("X1")), zl, fic.field).equal());
  // decoder of the edge client: codeword component plus the known message
  BlockLayout dl = decoder_layout(fic, client(fic, map.client_of_edge.at("e1")), 1);
  CHECK(func_equal(code.decoders.at(map.client_of_edge.at("e1")),
                   add(proj(kCodewordBlock), proj("X1")), dl, fic.field)
            .equal());
  CHECK(verify_fic_code(fic, code).verdict == Verdict::Pass);

  // round trip at the all-zero codeword recovers the original kernels (q = 2)
  auto back = fic_code_to_nc_code(inst.problem, code, map);
  BlockLayout in_e1 = inst.problem.in_layout("s");
  CHECK(func_equal(back.kernels.at("e1"), inst.code->kernels.at("e1"), in_e1, fic.field).equal());
  CHECK(verify_net_code(inst.problem, back).verdict == Verdict::Pass);
}

TEST_CASE("the XOR network's converted encoder components match their closed forms") {
  auto inst = fig2();
  auto [fic, map] = nc_to_fic(inst.problem);
  auto code = nc_code_to_fic_code(inst.problem, *inst.code, map);
  REQUIRE(code.length == 18);
  BlockLayout zl = fic.layout();
  EqBudget sampled;
  sampled.cap = 1 << 16;  // 2^22 inputs: sample in the unit suite
  sampled.samples = 20000;

  const ExprNode& enc = code.encoder.node();
  REQUIRE(enc.kind == ExprKind::Concat);
  REQUIRE(enc.args.size() == 18);
  auto component_ok = [&](int idx, Expr expected) {
    auto r = func_equal(enc.args[idx], expected, zl, fic.field, sampled);
    return !r.differ();
  };
  CHECK(component_ok(0, add(proj("e1"), proj("X1"))));
  CHECK(component_ok(2, add(proj("e3"), add(proj("X1"), proj("X2")))));
  CHECK(component_ok(9, add(proj("e10"), add({proj("X2"), proj("X3"), proj("X4")}))));
  CHECK(component_ok(12, add(proj("e13"), add({proj("X1"), proj("X2"), proj("X4")}))));
  CHECK(component_ok(17, add(proj("e18"), proj("X3"))));

  // decoder of the first sink's client: both codeword components plus the
  // matching side-information payloads
  const auto& rt1 = client(fic, map.client_of_sink.at("t1"));
  BlockLayout dl = decoder_layout(fic, rt1, 18);
  Expr expected = add({proj(kCodewordBlock, 6, 1), proj("e7"), proj(kCodewordBlock, 9, 1),
                       proj("e10")});
  CHECK(func_equal(code.decoders.at(rt1.id), expected, dl, fic.field).equal());
}

TEST_CASE("restricting the converted code recovers the original XOR network code") {
  auto inst = fig2();
  const NetProblem& p = inst.problem;
  auto [fic, map] = nc_to_fic(p);
  auto code = nc_code_to_fic_code(p, *inst.code, map);

  auto back = fic_code_to_nc_code(p, code, map);  // m = all-zero
  for (const auto& e : p.edges) {
    BlockLayout in = p.in_layout(e.tail);
    CHECK(func_equal(back.kernels.at(e.id), inst.code->kernels.at(e.id), in, p.field).equal());
  }
  for (const auto& t : p.sinks) {
    BlockLayout in = p.in_layout(t.id);
    CHECK(func_equal(back.decoders.at(t.id), inst.code->decoders.at(t.id), in, p.field).equal());
  }
  CHECK(verify_net_code(p, back).verdict == Verdict::Pass);

  // any other restriction point still yields a working code
  auto ones = fic_code_to_nc_code(p, code, map, SymbolVec::filled(p.field, 18, 1));
  CHECK(verify_net_code(p, ones).verdict == Verdict::Pass);
}

TEST_CASE("codes of the wrong length or with missing decoders are rejected") {
  auto inst = one_edge_relay();
  auto [fic, map] = nc_to_fic(inst.problem);
  auto code = nc_code_to_fic_code(inst.problem, *inst.code, map);
  FicCode wrong = code;
  wrong.length = 2;
  wrong.encoder = concat({code.encoder, proj("X1")});
  CHECK_THROWS_AS(fic_code_to_nc_code(inst.problem, wrong, map), Error);
  FicCode missing = code;
  missing.decoders.erase(map.client_of_edge.at("e1"));
  CHECK_THROWS_AS(fic_code_to_nc_code(inst.problem, missing, map), Error);
}

TEST_CASE("the bottleneck network of the majority instance has the expected families") {
  auto inst = std::get<FicInstance>(builtin_example("table3"));
  auto [net, map] = fic_to_nc(inst.problem, 3);
  CHECK(net.sources.size() == 6);
  CHECK(net.sinks.size() == 4);
  CHECK(map.side_info_edges.size() == 7);  // |H_1|+...+|H_4| = 2+2+2+1
  CHECK(map.feed_edge.size() == 6);
  CHECK(map.bcast_edge.size() == 4);
  CHECK(net.edges.size() == 7 + 6 + 4 + 1);
  CHECK(net.node_ids().size() == 12);  // 6 sources + 4 sinks + the two relays
  CHECK(validate_problem(net).empty());
  for (const auto& e : net.edges)
    if (e.id == map.bottleneck_edge) CHECK(e.cap == 3);
}

TEST_CASE("clients with empty side information only hear the broadcast") {
  FicProblem p;
  p.field = FieldSpec(2);
  p.messages = {{"Z1", 1}};
  p.clients.push_back({"R1", {}, {proj("Z1")}});
  auto [net, map] = fic_to_nc(p, 1);
  auto in = net.in_blocks(map.sink_node.at("R1"));
  REQUIRE(in.size() == 1);
  CHECK(in[0].first == map.bcast_edge.at("R1"));
}

TEST_CASE("a single client knowing the single message yields one side edge") {
  FicProblem p;
  p.field = FieldSpec(2);
  p.messages = {{"Z1", 1}};
  p.clients.push_back({"R1", {"Z1"}, {neg(proj("Z1"))}});
  auto [net, map] = fic_to_nc(p, 1);
  CHECK(map.side_info_edges.size() == 1);
  CHECK(std::get<1>(map.side_info_edges[0]) == "Z1");
}

TEST_CASE("planting the bundled code on the bottleneck network works both ways") {
  auto inst = std::get<FicInstance>(builtin_example("table3"));
  const FicProblem& p = inst.problem;
  auto [net, map] = fic_to_nc(p, 3);

  auto netcode = fic_code_to_nc_code_gadget(p, *inst.code, map);
  auto r = verify_net_code(net, netcode);
  CHECK(r.verdict == Verdict::Pass);
  CHECK(r.checked == 64);

  auto back = nc_code_to_fic_code_gadget(p, net, netcode, map);
  CHECK(back.length == 3);
  CHECK(func_equal(back.encoder, inst.code->encoder, p.layout(), p.field).equal());
  CHECK(func_equal(back.encoder,
                   concat({add(proj("X1"), proj("X6")), add(proj("X3"), proj("X4")),
                           add(proj("X2"), proj("X5"))}),
                   p.layout(), p.field)
            .equal());
  CHECK(verify_fic_code(p, back).verdict == Verdict::Pass);
}

TEST_CASE("the broadcast-everything code plants and returns unchanged") {
  auto inst = std::get<FicInstance>(builtin_example("table3"));
  const FicProblem& p = inst.problem;
  FicCode bc = broadcast_code(p);
  auto [net, map] = fic_to_nc(p, bc.length);
  auto netcode = fic_code_to_nc_code_gadget(p, bc, map);
  CHECK(verify_net_code(net, netcode).verdict == Verdict::Pass);
  auto back = nc_code_to_fic_code_gadget(p, net, netcode, map);
  CHECK(func_equal(back.encoder, bc.encoder, p.layout(), p.field).equal());
  CHECK(verify_fic_code(p, back).verdict == Verdict::Pass);
}

TEST_CASE("gadget conversions check lengths") {
  auto inst = std::get<FicInstance>(builtin_example("table3"));
  auto [net, map] = fic_to_nc(inst.problem, 2);  // bottleneck narrower than the code
  CHECK_THROWS_AS(fic_code_to_nc_code_gadget(inst.problem, *inst.code, map), Error);
  CHECK_THROWS_AS(fic_to_nc(inst.problem, 0), Error);
}

TEST_CASE("property: forward and converse conversions hold on random networks") {
  Rng rng(11);
  VerifySettings exhaustive_small;
  exhaustive_small.cap = 1 << 15;
  int done = 0;
  for (int trial = 0; trial < 30; ++trial) {
    FieldSpec f(trial % 3 == 2 ? 3 : 2);
    auto [p, c] = testsupport::random_net_instance(rng, f);
    REQUIRE(verify_net_code(p, c, exhaustive_small).verdict == Verdict::Pass);

    auto [fic, map] = nc_to_fic(p);
    CHECK(fic.clients.size() == p.edges.size() + p.sinks.size() + 1);
    auto code = nc_code_to_fic_code(p, c, map);
    CHECK(code.length == p.edge_width());
    REQUIRE(verify_fic_code(fic, code, exhaustive_small).verdict == Verdict::Pass);

    if (domain_fits(f, p.edge_width(), 1 << 12))
      CHECK(codeword_bijection_holds(fic, code, map, 1 << 15));

    std::vector<SymbolVec> points = {SymbolVec::zeros(f, code.length),
                                     SymbolVec::filled(f, code.length, 1)};
    std::vector<std::uint8_t> r(code.length);
    rng.fill(f, r);
    points.emplace_back(f, r);
    for (const auto& m : points) {
      auto back = fic_code_to_nc_code(p, code, map, m);
      REQUIRE(verify_net_code(p, back, exhaustive_small).verdict == Verdict::Pass);
    }

    if (domain_fits(f, fic.message_width(), 1 << 10)) {
      VerifySettings pairs;
      pairs.cap = 1 << 20;
      CHECK(check_exclusive_law(fic, code, pairs).verdict == Verdict::Pass);
    }
    ++done;
  }
  CHECK(done == 30);
}

TEST_CASE("property: both gadget directions hold on random broadcast instances") {
  Rng rng(23);
  VerifySettings exhaustive_small;
  exhaustive_small.cap = 1 << 15;
  for (int trial = 0; trial < 25; ++trial) {
    FieldSpec f(2);
    auto [p, code] = testsupport::random_fic_instance(rng, f, 6, 4);
    REQUIRE(verify_fic_code(p, code, exhaustive_small).verdict == Verdict::Pass);
    CHECK(check_exclusive_law(p, code).verdict == Verdict::Pass);  // necessity

    auto [net, map] = fic_to_nc(p, code.length);
    std::size_t e1 = 0;
    for (const auto& c : p.clients) e1 += c.has.size();
    CHECK(net.edges.size() == e1 + p.messages.size() + p.clients.size() + 1);

    auto netcode = fic_code_to_nc_code_gadget(p, code, map);
    REQUIRE(verify_net_code(net, netcode, exhaustive_small).verdict == Verdict::Pass);

    auto back = nc_code_to_fic_code_gadget(p, net, netcode, map);
    CHECK(func_equal(back.encoder, code.encoder, p.layout(), f).equal());
    REQUIRE(verify_fic_code(p, back, exhaustive_small).verdict == Verdict::Pass);
  }
}

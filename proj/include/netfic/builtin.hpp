#pragma once

#include <string>
#include <vector>

#include "netfic/json_io.hpp"

namespace netfic {

// Bundled instances used by the test suites and the `example` subcommand.
//
//   fig1        eleven sensors with 10-bit readings aggregated towards one
//               sink that wants the maximum reading; max-forwarding code.
//   fig1-scaled the same topology with 1-bit blocks (max degenerates to OR),
//               small enough for exhaustive checks on the index-coding side.
//   fig2        two dual-message sources, four binary messages, eighteen
//               unit edges, six sinks demanding XOR combinations; linear
//               code with per-sink decoders.
//   table3      a six-message broadcast instance with four clients (one
//               demanding a majority vote) and an embedded length-3 code.

namespace detail {

inline NetInstance make_max_network(std::size_t width, const std::string& title) {
  NetInstance inst;
  NetProblem& p = inst.problem;
  p.field = FieldSpec(2);
  p.title = title;
  for (int k = 1; k <= 11; ++k) {
    std::string x = "X" + std::to_string(k);
    p.sources.push_back({x, "u" + std::to_string(k), x, width});
  }
  auto E = [&](const char* id, const char* tail, const char* head) {
    p.edges.push_back({id, tail, head, width});
  };
  E("e1", "u1", "u4");
  E("e2", "u2", "u5");
  E("e3", "u2", "u6");
  E("e4", "u3", "u7");
  E("e5", "u4", "u8");
  E("e6", "u5", "u8");
  E("e7", "u5", "u9");
  E("e8", "u6", "u11");
  E("e9", "u7", "u11");
  E("e10", "u8", "u10");
  E("e11", "u9", "u10");
  E("e12", "u10", "t");
  E("e13", "u11", "t");
  {
    std::vector<Expr> all;
    for (int k = 1; k <= 11; ++k) all.push_back(proj("X" + std::to_string(k)));
    p.sinks.push_back({"t", {max_int(all)}});
  }

  NetCode code;
  code.kernels["e1"] = proj("X1");
  code.kernels["e2"] = proj("X2");
  code.kernels["e3"] = proj("X2");
  code.kernels["e4"] = proj("X3");
  code.kernels["e5"] = max_int(proj("e1"), proj("X4"));
  code.kernels["e6"] = max_int(proj("e2"), proj("X5"));
  code.kernels["e7"] = max_int(proj("e2"), proj("X5"));
  code.kernels["e8"] = max_int(proj("e3"), proj("X6"));
  code.kernels["e9"] = max_int(proj("e4"), proj("X7"));
  code.kernels["e10"] = max_int({proj("e5"), proj("e6"), proj("X8")});
  code.kernels["e11"] = max_int(proj("e7"), proj("X9"));
  code.kernels["e12"] = max_int({proj("e10"), proj("e11"), proj("X10")});
  code.kernels["e13"] = max_int({proj("e8"), proj("e9"), proj("X11")});
  code.decoders["t"] = max_int(proj("e12"), proj("e13"));
  inst.code = std::move(code);
  return inst;
}

inline NetInstance make_xor_network() {
  NetInstance inst;
  NetProblem& p = inst.problem;
  p.field = FieldSpec(2);
  p.title = "four binary messages, six sinks demanding XOR combinations";
  p.sources.push_back({"X1", "sA", "X1", 1});
  p.sources.push_back({"X2", "sA", "X2", 1});
  p.sources.push_back({"X3", "sB", "X3", 1});
  p.sources.push_back({"X4", "sB", "X4", 1});
  auto E = [&](const char* id, const char* tail, const char* head) {
    p.edges.push_back({id, tail, head, 1});
  };
  E("e1", "sA", "v1");
  E("e2", "sA", "v2");
  E("e3", "sA", "v3");
  E("e4", "sB", "v2");
  E("e5", "sB", "v3");
  E("e6", "sB", "v4");
  E("e7", "v1", "t1");
  E("e8", "v1", "t2");
  E("e9", "v1", "t3");
  E("e10", "v2", "t1");
  E("e11", "v2", "t4");
  E("e12", "v2", "t5");
  E("e13", "v3", "t2");
  E("e14", "v3", "t4");
  E("e15", "v3", "t6");
  E("e16", "v4", "t3");
  E("e17", "v4", "t5");
  E("e18", "v4", "t6");
  auto sum4 = add({proj("X1"), proj("X2"), proj("X3"), proj("X4")});
  p.sinks.push_back({"t1", {sum4}});
  p.sinks.push_back({"t2", {add(proj("X2"), proj("X4"))}});
  p.sinks.push_back({"t3", {add(proj("X1"), proj("X3"))}});
  p.sinks.push_back({"t4", {add(proj("X1"), proj("X3"))}});
  p.sinks.push_back({"t5", {add(proj("X2"), proj("X4"))}});
  p.sinks.push_back({"t6", {sum4}});

  NetCode code;
  code.kernels["e1"] = proj("X1");
  code.kernels["e2"] = proj("X2");
  code.kernels["e3"] = add(proj("X1"), proj("X2"));
  code.kernels["e4"] = add(proj("X3"), proj("X4"));
  code.kernels["e5"] = proj("X4");
  code.kernels["e6"] = proj("X3");
  for (const char* id : {"e7", "e8", "e9"}) code.kernels[id] = proj("e1");
  for (const char* id : {"e10", "e11", "e12"}) code.kernels[id] = add(proj("e2"), proj("e4"));
  for (const char* id : {"e13", "e14", "e15"}) code.kernels[id] = add(proj("e3"), proj("e5"));
  for (const char* id : {"e16", "e17", "e18"}) code.kernels[id] = proj("e6");
  code.decoders["t1"] = add(proj("e7"), proj("e10"));
  code.decoders["t2"] = add(proj("e8"), proj("e13"));
  code.decoders["t3"] = add(proj("e9"), proj("e16"));
  code.decoders["t4"] = add(proj("e11"), proj("e14"));
  code.decoders["t5"] = add(proj("e12"), proj("e17"));
  code.decoders["t6"] = add(proj("e15"), proj("e18"));
  inst.code = std::move(code);
  return inst;
}

inline FicInstance make_majority_broadcast() {
  FicInstance inst;
  FicProblem& p = inst.problem;
  p.field = FieldSpec(2);
  p.title = "six binary messages, four clients, one majority demand";
  for (int k = 1; k <= 6; ++k) p.messages.emplace_back("X" + std::to_string(k), 1);
  p.clients.push_back(
      {"R1", {"X2", "X3"},
       {majority(add(proj("X1"), proj("X6")), add(proj("X2"), proj("X3")), proj("X4"))}});
  p.clients.push_back(
      {"R2", {"X4", "X5"},
       {add({proj("X1"), proj("X5"), proj("X6")}), proj("X3")}});
  p.clients.push_back(
      {"R3", {"X3", "X6"},
       {add(proj("X2"), proj("X5")), add({proj("X1"), proj("X3"), proj("X6")})}});
  p.clients.push_back({"R4", {"X1"}, {proj("X6")}});

  FicCode code;
  code.length = 3;
  code.encoder = concat({add(proj("X1"), proj("X6")), add(proj("X3"), proj("X4")),
                         add(proj("X2"), proj("X5"))});
  code.decoders["R1"] = majority(proj(kCodewordBlock, 0, 1), add(proj("X2"), proj("X3")),
                                 add(proj(kCodewordBlock, 1, 1), proj("X3")));
  code.decoders["R2"] = concat({add(proj(kCodewordBlock, 0, 1), proj("X5")),
                                add(proj(kCodewordBlock, 1, 1), proj("X4"))});
  code.decoders["R3"] = concat({proj(kCodewordBlock, 2, 1),
                                add(proj(kCodewordBlock, 0, 1), proj("X3"))});
  code.decoders["R4"] = add(proj(kCodewordBlock, 0, 1), proj("X1"));
  inst.code = std::move(code);
  return inst;
}

}  // namespace detail

inline std::vector<std::string> builtin_names() {
  return {"fig1", "fig1-scaled", "fig2", "table3"};
}

inline Instance builtin_example(const std::string& name) {
  if (name == "fig1")
    return detail::make_max_network(10, "eleven 10-bit sensor readings, one sink wanting the max");
  if (name == "fig1-scaled")
    return detail::make_max_network(1, "eleven 1-bit sensor readings, one sink wanting the max");
  if (name == "fig2") return detail::make_xor_network();
  if (name == "table3") return detail::make_majority_broadcast();
  throw Error(Errc::Semantic, "no built-in example named '" + name + "'");
}

inline std::vector<std::pair<std::string, Instance>> builtin_examples() {
  std::vector<std::pair<std::string, Instance>> out;
  for (const auto& n : builtin_names()) out.emplace_back(n, builtin_example(n));
  return out;
}

}  // namespace netfic

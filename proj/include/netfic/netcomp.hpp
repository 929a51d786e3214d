#pragma once

#include <chrono>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "netfic/equal.hpp"
#include "netfic/report.hpp"

namespace netfic {

// A network computation problem: a DAG whose tailless source edges carry
// message blocks and whose sinks demand functions of the messages.
//
// Conventions used throughout:
//   - a source edge's payload block is named by its id (defaulting to the
//     message name), a network edge's payload block by the edge id;
//   - In(v) lists source edges entering v (declaration order) followed by
//     network edges entering v (declaration order); In(e) = In(tail(e));
//   - a kernel for edge e is an Expr over the In(e) payload layout, a sink
//     decoder an Expr over the In(t) payload layout;
//   - demand expressions may have any width; a sink's demanded width n_t is
//     the sum of its demand widths.
struct SourceEdge {
  std::string id;       // payload block name; defaults to the message name
  std::string node;     // head node hosting the message
  std::string message;  // message name X_k
  std::size_t width;    // n_k
};

struct NetEdge {
  std::string id;
  std::string tail;
  std::string head;
  std::size_t cap;  // n_e
};

struct Sink {
  std::string id;                 // node id
  std::vector<Expr> demands;      // over the message layout
};

struct NetProblem {
  FieldSpec field{2};
  std::vector<SourceEdge> sources;
  std::vector<NetEdge> edges;
  std::vector<Sink> sinks;
  std::string title;

  // Layout of all message blocks (source-declaration order). Houses N_K.
  BlockLayout message_layout() const {
    BlockLayout l;
    for (const auto& s : sources) l.append(s.message, s.width);
    return l;
  }

  std::size_t message_width() const {  // N_K
    std::size_t n = 0;
    for (const auto& s : sources) n += s.width;
    return n;
  }

  std::size_t edge_width() const {  // N_E
    std::size_t n = 0;
    for (const auto& e : edges) n += e.cap;
    return n;
  }

  const NetEdge& edge(const std::string& id) const {
    for (const auto& e : edges)
      if (e.id == id) return e;
    throw Error(Errc::Semantic, "no edge '" + id + "'");
  }

  // All edges (source and network) entering a node, declaration order with
  // source edges first. Entries are (payload block name, width).
  std::vector<std::pair<std::string, std::size_t>> in_blocks(const std::string& node) const {
    std::vector<std::pair<std::string, std::size_t>> in;
    for (const auto& s : sources)
      if (s.node == node) in.emplace_back(s.id, s.width);
    for (const auto& e : edges)
      if (e.head == node) in.emplace_back(e.id, e.cap);
    return in;
  }

  BlockLayout in_layout(const std::string& node) const {
    return BlockLayout(in_blocks(node));
  }

  std::set<std::string> node_ids() const {
    std::set<std::string> nodes;
    for (const auto& s : sources) nodes.insert(s.node);
    for (const auto& e : edges) {
      nodes.insert(e.tail);
      nodes.insert(e.head);
    }
    for (const auto& t : sinks) nodes.insert(t.id);
    return nodes;
  }

  std::size_t sink_width(const Sink& t) const {  // n_t
    std::size_t n = 0;
    BlockLayout xl = message_layout();
    for (const auto& d : t.demands) n += expr_width(d, xl, field);
    return n;
  }
};

// Local encoding kernels per edge plus one decoder per sink.
struct NetCode {
  std::map<std::string, Expr> kernels;   // edge id -> Expr over In(e) payload layout
  std::map<std::string, Expr> decoders;  // sink id -> Expr over In(t) payload layout
};

// Structural validation; an empty list means all invariants hold.
inline Findings validate_problem(const NetProblem& p) {
  Findings out;
  std::set<std::string> msg_names, edge_ids;
  for (const auto& s : p.sources) {
    if (!msg_names.insert(s.message).second)
      out.push_back({"DuplicateMessage", s.message});
    if (!edge_ids.insert(s.id).second) out.push_back({"DuplicateEdgeId", s.id});
    if (s.width == 0) out.push_back({"ZeroWidth", s.message});
  }
  for (const auto& e : p.edges) {
    if (!edge_ids.insert(e.id).second) out.push_back({"DuplicateEdgeId", e.id});
    if (e.cap == 0) out.push_back({"ZeroCapacity", e.id});
  }

  // cycle check over network edges (tail -> head)
  {
    std::map<std::string, std::vector<std::string>> succ;
    std::map<std::string, int> indeg;
    for (const auto& e : p.edges) {
      succ[e.tail].push_back(e.head);
      indeg[e.head]++;
      indeg.try_emplace(e.tail, 0);
    }
    std::vector<std::string> ready;
    for (const auto& [v, d] : indeg)
      if (d == 0) ready.push_back(v);
    std::size_t seen = 0;
    std::map<std::string, int> left = indeg;
    while (!ready.empty()) {
      std::string v = ready.back();
      ready.pop_back();
      ++seen;
      for (const auto& w : succ[v])
        if (--left[w] == 0) ready.push_back(w);
    }
    if (seen != indeg.size()) {
      std::string inside;
      for (const auto& [v, d] : left)
        if (d > 0) inside += (inside.empty() ? "" : ",") + v;
      out.push_back({"CycleDetected", inside});
    }
  }

  std::set<std::string> sink_ids;
  BlockLayout xl;
  bool layout_ok = true;
  try {
    xl = p.message_layout();
  } catch (const Error&) {
    layout_ok = false;  // duplicates already reported
  }
  for (const auto& t : p.sinks) {
    if (!sink_ids.insert(t.id).second) out.push_back({"DuplicateSink", t.id});
    for (const auto& e : p.edges)
      if (e.tail == t.id) out.push_back({"SinkHasOutgoingEdge", t.id + " -> " + e.id});
    if (t.demands.empty()) out.push_back({"EmptyDemands", t.id});
    if (layout_ok) {
      for (const auto& d : t.demands) {
        try {
          expr_width(d, xl, p.field);
        } catch (const Error& err) {
          out.push_back({err.code() == Errc::UnknownBlock ? "UnknownBlock" : "BadDemand",
                         t.id + ": " + err.what()});
        }
      }
    }
  }
  return out;
}

enum class TieBreak { ByDeclaration, ByDeclarationReversed };

// Topological order of the network edges: every e' in In(e) precedes e.
// Kahn's method; among simultaneously ready edges the one declared first
// wins (or last, under the reversed tie-break used by order-independence
// tests). Source edges are implicitly before everything and not listed.
inline std::vector<std::string> ancestral_order(const NetProblem& p,
                                                TieBreak tie = TieBreak::ByDeclaration) {
  const std::size_t m = p.edges.size();
  // preds[i] = indices of network edges in In(edges[i])
  std::vector<std::vector<std::size_t>> succ(m);
  std::vector<std::size_t> left(m, 0);
  std::map<std::string, std::vector<std::size_t>> into;  // node -> edge indices entering it
  for (std::size_t i = 0; i < m; ++i) into[p.edges[i].head].push_back(i);
  for (std::size_t i = 0; i < m; ++i) {
    auto it = into.find(p.edges[i].tail);
    if (it == into.end()) continue;
    left[i] = it->second.size();
    for (std::size_t j : it->second) succ[j].push_back(i);
  }
  std::set<std::size_t> ready;
  for (std::size_t i = 0; i < m; ++i)
    if (left[i] == 0) ready.insert(i);
  std::vector<std::string> order;
  order.reserve(m);
  while (!ready.empty()) {
    std::size_t i = tie == TieBreak::ByDeclaration ? *ready.begin() : *ready.rbegin();
    ready.erase(i);
    order.push_back(p.edges[i].id);
    for (std::size_t j : succ[i])
      if (--left[j] == 0) ready.insert(j);
  }
  if (order.size() != m) throw Error(Errc::CycleDetected, "network edges contain a cycle");
  return order;
}

// Global kernels F_e over the message layout, built by substituting each
// in-edge payload for its own global kernel along an ancestral order.
// Source edges get projections of their messages.
inline std::map<std::string, Expr> derive_global_kernels(
    const NetProblem& p, const NetCode& c, TieBreak tie = TieBreak::ByDeclaration) {
  std::map<std::string, Expr> global;  // payload block name -> Expr over X
  for (const auto& s : p.sources) global[s.id] = proj(s.message);
  for (const auto& id : ancestral_order(p, tie)) {
    auto kit = c.kernels.find(id);
    if (kit == c.kernels.end()) throw Error(Errc::MissingKernel, "edge '" + id + "' has no kernel");
    const NetEdge& e = p.edge(id);
    std::vector<std::pair<std::string, Expr>> bindings;
    for (const auto& [blk, w] : p.in_blocks(e.tail)) bindings.emplace_back(blk, global.at(blk));
    global[id] = compose(kit->second, std::move(bindings));
  }
  std::map<std::string, Expr> out;
  for (const auto& e : p.edges) out[e.id] = global.at(e.id);
  return out;
}

// Checks the decoding contract D_t((Y_e')_{e' in In(t)}) = G_t(x) for every
// enumerated realization of the messages, simulating payload propagation
// edge by edge.
inline VerifyReport verify_net_code(const NetProblem& p, const NetCode& c,
                                    const VerifySettings& settings = {}) {
  auto t0 = std::chrono::steady_clock::now();
  const BlockLayout xl = p.message_layout();
  const std::size_t nk = xl.total_width();

  // Combined buffer: [messages | edge payloads]. Source payloads alias the
  // message region directly.
  CompiledExpr::Env env;
  std::size_t at = 0;
  for (const auto& s : p.sources) {
    env[s.id] = {at, s.width};
    at += s.width;
  }
  for (const auto& e : p.edges) {
    env[e.id] = {at, e.cap};
    at += e.cap;
  }
  const std::size_t payload_width = at;

  struct Unit {
    CompiledExpr fn;
    CompiledExpr::Ref dst;
  };
  std::vector<Unit> kernel_units;
  for (const auto& id : ancestral_order(p)) {
    auto kit = c.kernels.find(id);
    if (kit == c.kernels.end()) throw Error(Errc::MissingKernel, "edge '" + id + "' has no kernel");
    const NetEdge& e = p.edge(id);
    CompiledExpr::Env kenv;
    for (const auto& [blk, w] : p.in_blocks(e.tail)) kenv[blk] = env.at(blk);
    CompiledExpr fn(kit->second, kenv, payload_width, p.field);
    if (fn.out_width() != e.cap)
      throw Error(Errc::WidthMismatch, "kernel of '" + id + "' outputs " +
                                           std::to_string(fn.out_width()) + " symbols, capacity is " +
                                           std::to_string(e.cap));
    kernel_units.push_back({std::move(fn), env.at(id)});
  }

  struct SinkUnit {
    std::string id;
    CompiledExpr decoder;
    CompiledExpr demand;
  };
  std::vector<SinkUnit> sink_units;
  for (const auto& t : p.sinks) {
    auto dit = c.decoders.find(t.id);
    if (dit == c.decoders.end())
      throw Error(Errc::MissingDecoder, "sink '" + t.id + "' has no decoder");
    CompiledExpr::Env denv;
    for (const auto& [blk, w] : p.in_blocks(t.id)) denv[blk] = env.at(blk);
    CompiledExpr dec(dit->second, denv, payload_width, p.field);
    std::vector<Expr> ds = t.demands;
    CompiledExpr dem(ds.size() == 1 ? ds[0] : concat(ds), xl, p.field);
    if (dec.out_width() != dem.out_width())
      throw Error(Errc::WidthMismatch, "decoder of '" + t.id + "' outputs " +
                                           std::to_string(dec.out_width()) + " symbols, demands need " +
                                           std::to_string(dem.out_width()));
    sink_units.push_back({t.id, std::move(dec), std::move(dem)});
  }

  VerifyReport report;
  EnumMode mode = settings.resolve(p.field, nk, report.exhaustive);
  if (!report.exhaustive) report.seed = std::get<Sampled>(mode).seed;

  std::size_t buf_need = 0;
  for (const auto& u : kernel_units) buf_need = std::max(buf_need, u.fn.buffer_size());
  for (const auto& u : sink_units)
    buf_need = std::max({buf_need, u.decoder.buffer_size(), u.demand.buffer_size()});

  std::vector<std::uint8_t> payload(payload_width);
  std::vector<std::uint8_t> buf(buf_need);
  std::vector<std::uint8_t> got, want;
  detail::WitnessBag bag(settings.witness_cap);

  DomainStream stream(p.field, nk, mode);
  while (stream.next(std::span(payload).subspan(0, nk))) {
    for (const auto& u : kernel_units)
      u.fn.eval_into(payload, std::span(payload).subspan(u.dst.off, u.dst.width), buf);
    for (const auto& u : sink_units) {
      got.resize(u.decoder.out_width());
      want.resize(u.demand.out_width());
      u.decoder.eval_into(payload, got, buf);
      u.demand.eval_into(std::span(payload).subspan(0, nk), want, buf);
      if (got != want)
        bag.add(u.id, SymbolVec(p.field, {payload.begin(), payload.begin() + nk}),
                SymbolVec(p.field, want), SymbolVec(p.field, got));
    }
  }

  report.checked = stream.yielded();
  report.witnesses = bag.take();
  report.verdict = bag.any() ? Verdict::Fail
                             : (report.exhaustive ? Verdict::Pass : Verdict::PassSampled);
  report.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
  return report;
}

}  // namespace netfic

#pragma once

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "netfic/fic.hpp"
#include "netfic/netcomp.hpp"

namespace netfic {

namespace detail {
inline void require_valid(const Findings& findings, const char* what) {
  if (findings.empty()) return;
  std::string msg = std::string(what) + " does not validate:";
  for (const auto& f : findings) msg += " [" + f.rule + " " + f.detail + "]";
  throw Error(Errc::Semantic, msg);
}
}  // namespace detail

// Record of a network-computation -> index-coding construction. Block and
// client names are kept auditable: x_block/y_block map network names onto
// the produced message layout, codeword_offset locates each edge's
// component inside a length-N_E codeword.
struct NcToFicMap {
  std::vector<std::string> message_order;            // source message names
  std::vector<std::string> edge_order;               // network edge ids
  std::map<std::string, std::string> x_block;        // message -> fic block
  std::map<std::string, std::string> y_block;        // edge id -> fic block
  std::map<std::string, std::string> client_of_edge; // edge id -> client id
  std::map<std::string, std::string> client_of_sink; // sink id -> client id
  std::string client_all;
  std::map<std::string, std::size_t> codeword_offset;
  std::size_t codeword_width = 0;  // N_E
};

// One client per network edge (knows the tail's incoming payloads, wants the
// edge's own payload), one per sink (knows the sink's incoming payloads,
// wants the demanded functions), and one that knows every message and wants
// every edge payload.
inline std::pair<FicProblem, NcToFicMap> nc_to_fic(const NetProblem& p) {
  detail::require_valid(validate_problem(p), "network problem");

  NcToFicMap map;
  FicProblem fic;
  fic.field = p.field;
  fic.title = p.title.empty() ? "" : p.title + " (index-coding form)";

  for (const auto& s : p.sources) {
    fic.messages.emplace_back(s.message, s.width);
    map.message_order.push_back(s.message);
    map.x_block[s.message] = s.message;
  }
  std::size_t off = 0;
  for (const auto& e : p.edges) {
    fic.messages.emplace_back(e.id, e.cap);
    map.edge_order.push_back(e.id);
    map.y_block[e.id] = e.id;
    map.codeword_offset[e.id] = off;
    off += e.cap;
  }
  map.codeword_width = off;
  {  // names must stay distinct across the combined layout
    BlockLayout check(fic.messages);
    (void)check;
  }

  // payload block name on the network side -> block name in the fic layout
  std::map<std::string, std::string> payload_block;
  for (const auto& s : p.sources) payload_block[s.id] = map.x_block.at(s.message);
  for (const auto& e : p.edges) payload_block[e.id] = map.y_block.at(e.id);

  for (const auto& e : p.edges) {
    FicClient c;
    c.id = "Re_" + e.id;
    for (const auto& [blk, w] : p.in_blocks(e.tail)) c.has.push_back(payload_block.at(blk));
    c.want.push_back(proj(map.y_block.at(e.id)));
    map.client_of_edge[e.id] = c.id;
    fic.clients.push_back(std::move(c));
  }
  for (const auto& t : p.sinks) {
    FicClient c;
    c.id = "Rt_" + t.id;
    for (const auto& [blk, w] : p.in_blocks(t.id)) c.has.push_back(payload_block.at(blk));
    c.want = t.demands;  // message names carry over verbatim
    map.client_of_sink[t.id] = c.id;
    fic.clients.push_back(std::move(c));
  }
  {
    FicClient c;
    c.id = "R_all";
    for (const auto& s : p.sources) c.has.push_back(map.x_block.at(s.message));
    for (const auto& e : p.edges) c.want.push_back(proj(map.y_block.at(e.id)));
    map.client_all = c.id;
    fic.clients.push_back(std::move(c));
  }
  detail::require_valid(validate_fic(fic), "constructed index-coding problem");
  return {std::move(fic), std::move(map)};
}

namespace detail {

// What a client can recover for an in-edge e' of the original network:
// its payload's global kernel value. For a source edge that is the message
// itself (in the Has-set); for a network edge it is the codeword component
// minus the known payload message.
inline Expr recovered_input(const NetProblem& p, const NcToFicMap& map,
                            const std::string& payload_blk) {
  for (const auto& s : p.sources)
    if (s.id == payload_blk) return proj(map.x_block.at(s.message));
  const NetEdge& e = p.edge(payload_blk);
  return sub(proj(kCodewordBlock, map.codeword_offset.at(e.id), e.cap),
             proj(map.y_block.at(e.id)));
}

}  // namespace detail

// Converts a network code into a functional index code of length N_E for
// the problem produced by nc_to_fic. Component e of the codeword is the
// edge's payload message plus its global kernel; decoders recover global
// kernel values from codeword components and side information, then apply
// the network code's kernels and decoders. Everything stays symbolic.
inline FicCode nc_code_to_fic_code(const NetProblem& p, const NetCode& c,
                                   const NcToFicMap& map) {
  auto globals = derive_global_kernels(p, c);

  FicCode out;
  out.length = map.codeword_width;
  std::vector<Expr> components;
  for (const auto& id : map.edge_order)
    components.push_back(add(proj(map.y_block.at(id)), globals.at(id)));
  out.encoder = components.size() == 1 ? components[0] : concat(components);

  for (const auto& e : p.edges) {
    std::vector<std::pair<std::string, Expr>> bind;
    for (const auto& [blk, w] : p.in_blocks(e.tail))
      bind.emplace_back(blk, detail::recovered_input(p, map, blk));
    Expr f_of_recovered = compose(c.kernels.at(e.id), std::move(bind));
    out.decoders[map.client_of_edge.at(e.id)] =
        sub(proj(kCodewordBlock, map.codeword_offset.at(e.id), e.cap), f_of_recovered);
  }
  for (const auto& t : p.sinks) {
    std::vector<std::pair<std::string, Expr>> bind;
    for (const auto& [blk, w] : p.in_blocks(t.id))
      bind.emplace_back(blk, detail::recovered_input(p, map, blk));
    out.decoders[map.client_of_sink.at(t.id)] = compose(c.decoders.at(t.id), std::move(bind));
  }
  {
    std::vector<Expr> recovered;
    for (const auto& id : map.edge_order)
      recovered.push_back(sub(proj(kCodewordBlock, map.codeword_offset.at(id), p.edge(id).cap),
                              globals.at(id)));
    out.decoders[map.client_all] =
        recovered.size() == 1 ? recovered[0] : concat(recovered);
  }
  return out;
}

// Converts a functional index code of length N_E (for the nc_to_fic image
// of p) back into a network code by restricting every decoder to a fixed
// codeword m: kernels f_e(y) = decoder_{Re}(m, y), sink decoders
// D_t(y) = decoder_{Rt}(m, y). Any m works when the index code verifies;
// the all-zero word is the default.
inline NetCode fic_code_to_nc_code(const NetProblem& p, const FicCode& c, const NcToFicMap& map,
                                   const SymbolVec& m) {
  if (c.length != map.codeword_width)
    throw Error(Errc::LengthMismatch, "index code has length " + std::to_string(c.length) +
                                          ", construction needs " +
                                          std::to_string(map.codeword_width));
  if (m.width() != map.codeword_width)
    throw Error(Errc::LengthMismatch, "restriction point has width " + std::to_string(m.width()) +
                                          ", codeword width is " +
                                          std::to_string(map.codeword_width));

  // FIC has-block names coincide with the network payload block names under
  // the identity renaming of nc_to_fic, so bindings pair up by name.
  std::map<std::string, std::string> payload_block;
  for (const auto& s : p.sources) payload_block[s.id] = map.x_block.at(s.message);
  for (const auto& e : p.edges) payload_block[e.id] = map.y_block.at(e.id);

  NetCode out;
  for (const auto& e : p.edges) {
    auto dit = c.decoders.find(map.client_of_edge.at(e.id));
    if (dit == c.decoders.end())
      throw Error(Errc::MissingDecoder, "no decoder for client of edge '" + e.id + "'");
    std::vector<std::pair<std::string, Expr>> bind;
    bind.emplace_back(kCodewordBlock, constant(m));
    for (const auto& [blk, w] : p.in_blocks(e.tail))
      bind.emplace_back(payload_block.at(blk), proj(blk));
    out.kernels[e.id] = compose(dit->second, std::move(bind));
  }
  for (const auto& t : p.sinks) {
    auto dit = c.decoders.find(map.client_of_sink.at(t.id));
    if (dit == c.decoders.end())
      throw Error(Errc::MissingDecoder, "no decoder for client of sink '" + t.id + "'");
    std::vector<std::pair<std::string, Expr>> bind;
    bind.emplace_back(kCodewordBlock, constant(m));
    for (const auto& [blk, w] : p.in_blocks(t.id))
      bind.emplace_back(payload_block.at(blk), proj(blk));
    out.decoders[t.id] = compose(dit->second, std::move(bind));
  }
  return out;
}

inline NetCode fic_code_to_nc_code(const NetProblem& p, const FicCode& c,
                                   const NcToFicMap& map) {
  return fic_code_to_nc_code(p, c, map, SymbolVec::zeros(p.field, map.codeword_width));
}

// Record of an index-coding -> network-computation gadget construction.
struct FicToNcMap {
  std::size_t length = 0;  // capacity of the bottleneck and broadcast edges
  std::map<std::string, std::string> source_node;  // message -> source node
  std::map<std::string, std::string> sink_node;    // client -> sink node
  std::string coder_node = "vB";                   // the only coding node
  std::string relay_node = "vBp";
  std::vector<std::tuple<std::string, std::string, std::string>>
      side_info_edges;                          // (client, message, edge id), family E1
  std::map<std::string, std::string> feed_edge;  // message -> edge id, family E2
  std::map<std::string, std::string> bcast_edge; // client -> edge id, family E3
  std::string bottleneck_edge = "eB";
};

// Builds the bottleneck network: every source feeds a coding node vB whose
// single edge to vBp has capacity len; vBp forwards to every sink, and each
// sink additionally receives the messages its client already holds.
inline std::pair<NetProblem, FicToNcMap> fic_to_nc(const FicProblem& p, std::size_t len) {
  detail::require_valid(validate_fic(p), "index-coding problem");
  if (len == 0) throw Error(Errc::Semantic, "bottleneck capacity must be positive");

  FicToNcMap map;
  map.length = len;
  NetProblem net;
  net.field = p.field;
  net.title = p.title.empty() ? "" : p.title + " (bottleneck network form)";

  BlockLayout zl = p.layout();
  for (const auto& [name, width] : p.messages) {
    map.source_node[name] = "s_" + name;
    net.sources.push_back({name, "s_" + name, name, width});
  }
  for (const auto& c : p.clients) map.sink_node[c.id] = "t_" + c.id;

  for (const auto& c : p.clients)
    for (const auto& h : c.has) {
      std::string id = "h_" + c.id + "_" + h;
      map.side_info_edges.emplace_back(c.id, h, id);
      net.edges.push_back({id, map.source_node.at(h), map.sink_node.at(c.id), zl.find(h).width});
    }
  for (const auto& [name, width] : p.messages) {
    std::string id = "u_" + name;
    map.feed_edge[name] = id;
    net.edges.push_back({id, map.source_node.at(name), map.coder_node, width});
  }
  net.edges.push_back({map.bottleneck_edge, map.coder_node, map.relay_node, len});
  for (const auto& c : p.clients) {
    std::string id = "b_" + c.id;
    map.bcast_edge[c.id] = id;
    net.edges.push_back({id, map.relay_node, map.sink_node.at(c.id), len});
  }
  for (const auto& c : p.clients) net.sinks.push_back({map.sink_node.at(c.id), c.want});

  detail::require_valid(validate_problem(net), "constructed bottleneck network");
  return {std::move(net), std::move(map)};
}

// Extracts a functional index code from a network code on the bottleneck
// network: the encoder is the derived global kernel of the bottleneck edge,
// and each client's decoder replays the sink's decoder, feeding it what the
// network would have delivered (side-information edges applied to the has
// blocks, the forwarding edge applied to the codeword).
inline FicCode nc_code_to_fic_code_gadget(const FicProblem& p, const NetProblem& net,
                                          const NetCode& c, const FicToNcMap& map) {
  auto globals = derive_global_kernels(net, c);

  FicCode out;
  out.length = map.length;
  out.encoder = globals.at(map.bottleneck_edge);

  for (const auto& cl : p.clients) {
    auto dit = c.decoders.find(map.sink_node.at(cl.id));
    if (dit == c.decoders.end())
      throw Error(Errc::MissingDecoder, "no decoder for sink of client '" + cl.id + "'");
    std::vector<std::pair<std::string, Expr>> bind;
    for (const auto& h : cl.has) {
      std::string edge_id;
      for (const auto& [ci, mi, ei] : map.side_info_edges)
        if (ci == cl.id && mi == h) edge_id = ei;
      bind.emplace_back(edge_id, compose(c.kernels.at(edge_id), {{h, proj(h)}}));
    }
    const std::string& bc = map.bcast_edge.at(cl.id);
    bind.emplace_back(bc, compose(c.kernels.at(bc),
                                  {{map.bottleneck_edge, proj(kCodewordBlock)}}));
    out.decoders[cl.id] = compose(dit->second, std::move(bind));
  }
  return out;
}

// Plants a functional index code on the bottleneck network: relay edges
// forward verbatim, the bottleneck edge applies the encoder, and each sink
// applies its client's decoder to (broadcast payload, side-information
// payloads).
inline NetCode fic_code_to_nc_code_gadget(const FicProblem& p, const FicCode& c,
                                          const FicToNcMap& map) {
  if (c.length != map.length)
    throw Error(Errc::LengthMismatch, "index code has length " + std::to_string(c.length) +
                                          ", bottleneck capacity is " +
                                          std::to_string(map.length));
  NetCode out;
  for (const auto& [cl, msg, id] : map.side_info_edges) out.kernels[id] = proj(msg);
  {
    std::vector<std::pair<std::string, Expr>> bind;
    for (const auto& [msg, id] : map.feed_edge) {
      out.kernels[id] = proj(msg);
      bind.emplace_back(msg, proj(id));
    }
    out.kernels[map.bottleneck_edge] = compose(c.encoder, std::move(bind));
  }
  for (const auto& cl : p.clients) {
    const std::string& bc = map.bcast_edge.at(cl.id);
    out.kernels[bc] = proj(map.bottleneck_edge);
    auto dit = c.decoders.find(cl.id);
    if (dit == c.decoders.end())
      throw Error(Errc::MissingDecoder, "no decoder for client '" + cl.id + "'");
    std::vector<std::pair<std::string, Expr>> bind;
    bind.emplace_back(kCodewordBlock, proj(bc));
    for (const auto& h : cl.has) {
      std::string edge_id;
      for (const auto& [ci, mi, ei] : map.side_info_edges)
        if (ci == cl.id && mi == h) edge_id = ei;
      bind.emplace_back(h, proj(edge_id));
    }
    out.decoders[map.sink_node.at(cl.id)] = compose(dit->second, std::move(bind));
  }
  return out;
}

// Checks the converse-proof bijection: for every fixed message part x, the
// map from edge-payload parts y to codewords M(x, y) must be injective
// (hence onto F_q^{N_E}). Requires exhaustive enumeration.
inline bool codeword_bijection_holds(const FicProblem& p, const FicCode& c,
                                     const NcToFicMap& map, std::uint64_t cap = kDefaultCap) {
  const BlockLayout zl = p.layout();
  const std::size_t nk = zl.total_width();
  std::size_t x_width = 0;
  for (const auto& m : map.message_order) x_width += zl.find(map.x_block.at(m)).width;
  auto total = domain_size(p.field, nk);
  auto y_count = domain_size(p.field, nk - x_width);
  if (!total || !y_count || *total > cap)
    throw Error(Errc::CapExceeded, "bijection check needs exhaustive enumeration");

  CompiledExpr enc(c.encoder, zl, p.field);
  std::vector<std::uint8_t> z(nk), cw(c.length), buf(enc.buffer_size());
  // x blocks come first in the nc_to_fic layout, so realizations sharing a
  // prefix of width x_width share x; lexicographic enumeration visits each
  // x's y-block contiguously.
  std::set<std::vector<std::uint8_t>> seen;
  std::uint64_t in_group = 0;
  DomainStream stream(p.field, nk, Exhaustive{cap});
  while (stream.next(z)) {
    enc.eval_into(z, cw, buf);
    if (!seen.insert(cw).second) return false;
    if (++in_group == *y_count) {
      seen.clear();
      in_group = 0;
    }
  }
  return true;
}

}  // namespace netfic

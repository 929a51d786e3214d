#pragma once

#include <optional>
#include <string>
#include <variant>

#include <json.hpp>

#include "netfic/coloring.hpp"
#include "netfic/reduce.hpp"

namespace netfic {

using nlohmann::json;  // std::map-backed: object keys serialize sorted

// --- SymbolVec <-> JSON -----------------------------------------------------
// q = 2 uses hexadecimal strings (most significant symbol first, padded to
// whole nibbles), other fields use plain integer arrays. Width always comes
// from context.

inline std::string sv_to_hex(const SymbolVec& v) {
  static const char* digits = "0123456789ABCDEF";
  std::size_t nd = (v.width() + 3) / 4;
  std::vector<unsigned> nibble(nd, 0);
  // bit i from the right is symbol (width-1-i)
  for (std::size_t i = 0; i < v.width(); ++i)
    if (v[v.width() - 1 - i]) nibble[nd - 1 - i / 4] |= 1u << (i % 4);
  std::string out(nd, '0');
  for (std::size_t d = 0; d < nd; ++d) out[d] = digits[nibble[d]];
  return out;
}

inline SymbolVec sv_from_hex(FieldSpec field, const std::string& hex, std::size_t width,
                             const std::string& path) {
  if (hex.size() != (width + 3) / 4)
    throw Error(Errc::Parse, path + ": hex literal '" + hex + "' does not encode width " +
                                 std::to_string(width));
  std::vector<std::uint8_t> syms(width, 0);
  for (std::size_t d = 0; d < hex.size(); ++d) {
    char c = hex[d];
    int val;
    if (c >= '0' && c <= '9') val = c - '0';
    else if (c >= 'a' && c <= 'f') val = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') val = c - 'A' + 10;
    else throw Error(Errc::Parse, path + ": bad hex digit '" + std::string(1, c) + "'");
    for (int b = 0; b < 4; ++b) {
      std::size_t bit = (hex.size() - 1 - d) * 4 + b;  // bit index from the right
      if (!((val >> b) & 1)) continue;
      if (bit >= width)
        throw Error(Errc::Parse, path + ": hex literal '" + hex + "' overflows width " +
                                     std::to_string(width));
      syms[width - 1 - bit] = 1;
    }
  }
  return SymbolVec(field, std::move(syms));
}

inline json sv_to_json(const SymbolVec& v) {
  if (v.field().q() == 2) return sv_to_hex(v);
  json a = json::array();
  for (std::size_t i = 0; i < v.width(); ++i) a.push_back(v[i]);
  return a;
}

inline SymbolVec sv_from_json(FieldSpec field, const json& j, std::size_t width,
                              const std::string& path) {
  if (field.q() == 2) {
    if (!j.is_string()) throw Error(Errc::Parse, path + ": expected hex string");
    return sv_from_hex(field, j.get<std::string>(), width, path);
  }
  if (!j.is_array() || j.size() != width)
    throw Error(Errc::Parse, path + ": expected array of " + std::to_string(width) + " symbols");
  std::vector<std::uint8_t> syms;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number_unsigned() || j[i].get<std::uint64_t>() >= field.q())
      throw Error(Errc::Parse, path + "/" + std::to_string(i) + ": symbol out of range");
    syms.push_back(static_cast<std::uint8_t>(j[i].get<std::uint64_t>()));
  }
  return SymbolVec(field, std::move(syms));
}

// --- Expr <-> JSON ----------------------------------------------------------

inline json expr_to_json(const Expr& e, FieldSpec field);

inline json expr_args_to_json(const std::vector<Expr>& args, FieldSpec field) {
  json a = json::array();
  for (const auto& x : args) a.push_back(expr_to_json(x, field));
  return a;
}

inline json expr_to_json(const Expr& e, FieldSpec field) {
  const ExprNode& n = e.node();
  json j;
  switch (n.kind) {
    case ExprKind::Proj:
      j["op"] = "proj";
      j["block"] = n.block;
      if (n.range_width >= 0) {
        j["off"] = n.range_off;
        j["width"] = n.range_width;
      }
      break;
    case ExprKind::Const:
      j["op"] = "const";
      j["width"] = n.value->width();
      j["value"] = sv_to_json(*n.value);
      break;
    case ExprKind::Add:
      j["op"] = "add";
      j["args"] = expr_args_to_json(n.args, field);
      break;
    case ExprKind::Neg:
      j["op"] = "neg";
      j["arg"] = expr_to_json(n.args[0], field);
      break;
    case ExprKind::MaxInt:
      j["op"] = "max";
      j["args"] = expr_args_to_json(n.args, field);
      break;
    case ExprKind::Majority:
      j["op"] = "maj";
      j["args"] = expr_args_to_json(n.args, field);
      break;
    case ExprKind::Concat:
      j["op"] = "concat";
      j["args"] = expr_args_to_json(n.args, field);
      break;
    case ExprKind::Table: {
      j["op"] = "table";
      json ins = json::array();
      for (const auto& b : n.table_inputs.blocks())
        ins.push_back(json{{"name", b.name}, {"width", b.width}});
      j["inputs"] = ins;
      j["width"] = n.table_out_width;
      json rows = json::array();
      for (const auto& r : n.rows)
        rows.push_back(sv_to_json(SymbolVec(*n.table_field, r)));
      j["rows"] = rows;
      break;
    }
    case ExprKind::Compose: {
      j["op"] = "compose";
      j["outer"] = expr_to_json(n.outer, field);
      json b = json::object();
      for (const auto& [name, value] : n.bindings) b[name] = expr_to_json(value, field);
      j["bind"] = b;
      break;
    }
  }
  return j;
}

inline Expr expr_from_json(const json& j, FieldSpec field, const std::string& path);

inline std::vector<Expr> expr_args_from_json(const json& j, FieldSpec field,
                                             const std::string& path) {
  if (!j.is_array() || j.empty())
    throw Error(Errc::Parse, path + ": expected non-empty argument array");
  std::vector<Expr> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(expr_from_json(j[i], field, path + "/" + std::to_string(i)));
  return out;
}

inline Expr expr_from_json(const json& j, FieldSpec field, const std::string& path) {
  if (!j.is_object() || !j.contains("op") || !j["op"].is_string())
    throw Error(Errc::Parse, path + ": expected expression object with \"op\"");
  const std::string op = j["op"].get<std::string>();
  try {
    if (op == "proj") {
      std::string block = j.at("block").get<std::string>();
      if (j.contains("off") || j.contains("width"))
        return proj(block, j.at("off").get<std::size_t>(), j.at("width").get<std::size_t>());
      return proj(block);
    }
    if (op == "const") {
      std::size_t w = j.at("width").get<std::size_t>();
      return constant(sv_from_json(field, j.at("value"), w, path + "/value"));
    }
    if (op == "add") return add(expr_args_from_json(j.at("args"), field, path + "/args"));
    if (op == "neg") return neg(expr_from_json(j.at("arg"), field, path + "/arg"));
    if (op == "max") return max_int(expr_args_from_json(j.at("args"), field, path + "/args"));
    if (op == "maj") {
      auto args = expr_args_from_json(j.at("args"), field, path + "/args");
      if (args.size() != 3) throw Error(Errc::Parse, path + ": maj takes three arguments");
      return majority(args[0], args[1], args[2]);
    }
    if (op == "concat") return concat(expr_args_from_json(j.at("args"), field, path + "/args"));
    if (op == "table") {
      BlockLayout inputs;
      const json& ins = j.at("inputs");
      for (std::size_t i = 0; i < ins.size(); ++i)
        inputs.append(ins[i].at("name").get<std::string>(), ins[i].at("width").get<std::size_t>());
      std::size_t w = j.at("width").get<std::size_t>();
      std::vector<std::vector<std::uint8_t>> rows;
      const json& rj = j.at("rows");
      for (std::size_t i = 0; i < rj.size(); ++i)
        rows.push_back(
            sv_from_json(field, rj[i], w, path + "/rows/" + std::to_string(i)).symbols());
      return table(field, std::move(inputs), w, std::move(rows));
    }
    if (op == "compose") {
      Expr outer = expr_from_json(j.at("outer"), field, path + "/outer");
      std::vector<std::pair<std::string, Expr>> bind;
      for (const auto& [name, value] : j.at("bind").items())
        bind.emplace_back(name, expr_from_json(value, field, path + "/bind/" + name));
      return compose(std::move(outer), std::move(bind));
    }
  } catch (const json::exception& ex) {
    throw Error(Errc::Parse, path + ": " + ex.what());
  }
  throw Error(Errc::Parse, path + ": unknown op '" + op + "'");
}

// --- instances --------------------------------------------------------------

struct NetInstance {
  NetProblem problem;
  std::optional<NetCode> code;
};

struct FicInstance {
  FicProblem problem;
  std::optional<FicCode> code;
};

using Instance = std::variant<NetInstance, FicInstance>;

inline json instance_to_json(const NetInstance& inst) {
  const NetProblem& p = inst.problem;
  json j;
  j["schema"] = 1;
  j["type"] = "netcomp";
  j["q"] = p.field.q();
  if (!p.title.empty()) j["title"] = p.title;
  json sources = json::array();
  for (const auto& s : p.sources) {
    json e{{"message", s.message}, {"node", s.node}, {"width", s.width}};
    if (s.id != s.message) e["id"] = s.id;
    sources.push_back(e);
  }
  j["sources"] = sources;
  json edges = json::array();
  for (const auto& e : p.edges)
    edges.push_back(json{{"id", e.id}, {"tail", e.tail}, {"head", e.head}, {"cap", e.cap}});
  j["edges"] = edges;
  json sinks = json::array();
  for (const auto& t : p.sinks) {
    json demands = json::array();
    for (const auto& d : t.demands) demands.push_back(expr_to_json(d, p.field));
    sinks.push_back(json{{"id", t.id}, {"demands", demands}});
  }
  j["sinks"] = sinks;
  if (inst.code) {
    json kernels = json::object(), decoders = json::object();
    for (const auto& [id, f] : inst.code->kernels) kernels[id] = expr_to_json(f, p.field);
    for (const auto& [id, f] : inst.code->decoders) decoders[id] = expr_to_json(f, p.field);
    j["code"] = json{{"kernels", kernels}, {"decoders", decoders}};
  }
  return j;
}

inline json instance_to_json(const FicInstance& inst) {
  const FicProblem& p = inst.problem;
  json j;
  j["schema"] = 1;
  j["type"] = "fic";
  j["q"] = p.field.q();
  if (!p.title.empty()) j["title"] = p.title;
  json messages = json::array();
  for (const auto& [name, width] : p.messages)
    messages.push_back(json{{"name", name}, {"width", width}});
  j["messages"] = messages;
  json clients = json::array();
  for (const auto& c : p.clients) {
    json want = json::array();
    for (const auto& w : c.want) want.push_back(expr_to_json(w, p.field));
    clients.push_back(json{{"id", c.id}, {"has", c.has}, {"want", want}});
  }
  j["clients"] = clients;
  if (inst.code) {
    json decoders = json::object();
    for (const auto& [id, f] : inst.code->decoders) decoders[id] = expr_to_json(f, p.field);
    json code{{"len", inst.code->length}, {"decoders", decoders}};
    if (!inst.code->encoder.empty())
      code["encoder"] = expr_to_json(inst.code->encoder, p.field);
    j["code"] = code;
  }
  return j;
}

inline json instance_to_json(const Instance& inst) {
  return std::visit([](const auto& i) { return instance_to_json(i); }, inst);
}

// Canonical text form: sorted keys, two-space indentation, trailing newline.
inline std::string serialize_instance(const Instance& inst) {
  return instance_to_json(inst).dump(2) + "\n";
}

inline FieldSpec field_from_json(const json& j) {
  if (!j.contains("q") || !j["q"].is_number_unsigned())
    throw Error(Errc::Parse, "/q: expected unsigned integer");
  std::uint64_t q = j["q"].get<std::uint64_t>();
  if (q < 2 || q > 251 || !FieldSpec::is_prime(static_cast<unsigned>(q)))
    throw Error(Errc::Semantic, "/q: " + std::to_string(q) + " is not a prime in [2, 251]");
  return FieldSpec(static_cast<unsigned>(q));
}

inline Instance instance_from_json(const json& j) {
  if (!j.is_object()) throw Error(Errc::Parse, "/: expected object");
  if (!j.contains("type") || !j["type"].is_string())
    throw Error(Errc::Parse, "/type: expected string");
  const std::string type = j["type"].get<std::string>();
  FieldSpec field = field_from_json(j);

  try {
    if (type == "netcomp") {
      NetInstance inst;
      NetProblem& p = inst.problem;
      p.field = field;
      if (j.contains("title")) p.title = j["title"].get<std::string>();
      const json& sources = j.at("sources");
      for (std::size_t i = 0; i < sources.size(); ++i) {
        const json& s = sources[i];
        SourceEdge e;
        e.message = s.at("message").get<std::string>();
        e.node = s.at("node").get<std::string>();
        e.width = s.at("width").get<std::size_t>();
        e.id = s.contains("id") ? s["id"].get<std::string>() : e.message;
        p.sources.push_back(std::move(e));
      }
      const json& edges = j.at("edges");
      for (std::size_t i = 0; i < edges.size(); ++i) {
        const json& e = edges[i];
        p.edges.push_back({e.at("id").get<std::string>(), e.at("tail").get<std::string>(),
                           e.at("head").get<std::string>(), e.at("cap").get<std::size_t>()});
      }
      const json& sinks = j.at("sinks");
      for (std::size_t i = 0; i < sinks.size(); ++i) {
        const json& t = sinks[i];
        Sink sink;
        sink.id = t.at("id").get<std::string>();
        const json& demands = t.at("demands");
        for (std::size_t k = 0; k < demands.size(); ++k)
          sink.demands.push_back(expr_from_json(
              demands[k], field, "/sinks/" + std::to_string(i) + "/demands/" + std::to_string(k)));
        p.sinks.push_back(std::move(sink));
      }
      Findings f = validate_problem(p);
      if (!f.empty())
        throw Error(Errc::Semantic, "/: " + f[0].rule + " (" + f[0].detail + ")" +
                                        (f.size() > 1 ? " and " + std::to_string(f.size() - 1) +
                                                            " more finding(s)"
                                                      : ""));
      if (j.contains("code")) {
        NetCode code;
        const json& c = j["code"];
        for (const auto& [id, f2] : c.at("kernels").items())
          code.kernels[id] = expr_from_json(f2, field, "/code/kernels/" + id);
        for (const auto& [id, f2] : c.at("decoders").items())
          code.decoders[id] = expr_from_json(f2, field, "/code/decoders/" + id);
        inst.code = std::move(code);
      }
      return inst;
    }
    if (type == "fic") {
      FicInstance inst;
      FicProblem& p = inst.problem;
      p.field = field;
      if (j.contains("title")) p.title = j["title"].get<std::string>();
      const json& messages = j.at("messages");
      for (std::size_t i = 0; i < messages.size(); ++i)
        p.messages.emplace_back(messages[i].at("name").get<std::string>(),
                                messages[i].at("width").get<std::size_t>());
      const json& clients = j.at("clients");
      for (std::size_t i = 0; i < clients.size(); ++i) {
        const json& c = clients[i];
        FicClient cl;
        cl.id = c.at("id").get<std::string>();
        for (const auto& h : c.at("has")) cl.has.push_back(h.get<std::string>());
        const json& want = c.at("want");
        for (std::size_t k = 0; k < want.size(); ++k)
          cl.want.push_back(expr_from_json(
              want[k], field, "/clients/" + std::to_string(i) + "/want/" + std::to_string(k)));
        p.clients.push_back(std::move(cl));
      }
      Findings f = validate_fic(p);
      if (!f.empty())
        throw Error(Errc::Semantic, "/: " + f[0].rule + " (" + f[0].detail + ")" +
                                        (f.size() > 1 ? " and " + std::to_string(f.size() - 1) +
                                                            " more finding(s)"
                                                      : ""));
      if (j.contains("code")) {
        FicCode code;
        const json& c = j["code"];
        code.length = c.at("len").get<std::size_t>();
        if (c.contains("encoder"))
          code.encoder = expr_from_json(c["encoder"], field, "/code/encoder");
        else if (code.length > 0)
          throw Error(Errc::Parse, "/code: non-empty code needs an encoder");
        else
          code.encoder = constant(SymbolVec(field, {}));
        for (const auto& [id, f2] : c.at("decoders").items())
          code.decoders[id] = expr_from_json(f2, field, "/code/decoders/" + id);
        inst.code = std::move(code);
      }
      return inst;
    }
  } catch (const json::exception& ex) {
    throw Error(Errc::Parse, std::string("/: ") + ex.what());
  }
  throw Error(Errc::Parse, "/type: expected \"netcomp\" or \"fic\", got \"" + type + "\"");
}

inline Instance parse_instance(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& ex) {
    throw Error(Errc::Parse, ex.what());
  }
  return instance_from_json(j);
}

// --- reports & maps ---------------------------------------------------------

// elapsed_ms is pinned to 0 in machine-readable reports so identical runs
// serialize byte-identically; wall time goes to the human-readable text.
inline json report_to_json(const VerifyReport& r, FieldSpec field) {
  json j;
  j["verdict"] = verdict_name(r.verdict);
  j["mode"] = r.exhaustive ? "exhaustive" : "sampled";
  j["seed"] = r.seed ? json(*r.seed) : json(nullptr);
  j["checked"] = r.checked;
  json w = json::array();
  for (const auto& wit : r.witnesses)
    w.push_back(json{{"subject", wit.subject},
                     {"input", sv_to_json(wit.input)},
                     {"expected", sv_to_json(wit.expected)},
                     {"got", sv_to_json(wit.got)}});
  j["witnesses"] = w;
  j["elapsed_ms"] = 0;
  (void)field;
  return j;
}

inline json map_to_json(const NcToFicMap& m) {
  json j;
  j["type"] = "nc2fic";
  j["messages"] = m.message_order;
  j["edges"] = m.edge_order;
  j["x_block"] = m.x_block;
  j["y_block"] = m.y_block;
  j["client_of_edge"] = m.client_of_edge;
  j["client_of_sink"] = m.client_of_sink;
  j["client_all"] = m.client_all;
  j["codeword_offset"] = m.codeword_offset;
  j["codeword_width"] = m.codeword_width;
  return j;
}

inline json map_to_json(const FicToNcMap& m) {
  json j;
  j["type"] = "fic2nc";
  j["len"] = m.length;
  j["source_node"] = m.source_node;
  j["sink_node"] = m.sink_node;
  j["coder_node"] = m.coder_node;
  j["relay_node"] = m.relay_node;
  json e1 = json::array();
  for (const auto& [client, msg, id] : m.side_info_edges)
    e1.push_back(json{{"client", client}, {"message", msg}, {"edge", id}});
  j["side_info_edges"] = e1;
  j["feed_edge"] = m.feed_edge;
  j["bcast_edge"] = m.bcast_edge;
  j["bottleneck_edge"] = m.bottleneck_edge;
  return j;
}

}  // namespace netfic

#pragma once

#include <cstring>
#include <span>
#include <unordered_map>
#include <vector>

#include "netfic/expr.hpp"

namespace netfic {

// Compiles an Expr against a layout into a flat list of steps over one
// scratch buffer, then evaluates it with no allocation per call. Shared
// subtrees (the expression is a DAG of shared_ptr nodes) are evaluated once
// per realization, keyed by (node, compose frame), which keeps converted
// codes with heavily shared kernels linear in the DAG size.
//
// Buffer map: [0, input_width) holds a copy of the input realization,
// everything after is arena space for intermediate results. Projections are
// aliases into the buffer and cost nothing at run time.
class CompiledExpr {
 public:
  struct Ref {
    std::size_t off = 0;
    std::size_t width = 0;
  };
  using Env = std::unordered_map<std::string, Ref>;

  CompiledExpr(Expr e, const BlockLayout& layout, FieldSpec field)
      : CompiledExpr(std::move(e), layout_env(layout), layout.total_width(), field) {}

  CompiledExpr(Expr e, const Env& env, std::size_t input_width, FieldSpec field)
      : root_(std::move(e)), field_(field), input_width_(input_width), top_(input_width) {
    if (root_.empty()) throw Error(Errc::BadExpr, "empty expression");
    envs_.push_back(env);
    result_ = compile(root_.node(), 0);
  }

  std::size_t out_width() const { return result_.width; }
  std::size_t input_width() const { return input_width_; }
  std::size_t buffer_size() const { return top_; }
  const FieldSpec& field() const { return field_; }

  // buffer must have at least buffer_size() symbols; it is caller-owned so
  // the same CompiledExpr can run on many threads with per-thread buffers.
  void eval_into(std::span<const std::uint8_t> input, std::span<std::uint8_t> out,
                 std::span<std::uint8_t> buffer) const {
    if (input_width_) std::memcpy(buffer.data(), input.data(), input_width_);
    for (const auto& pre : preload_)
      std::memcpy(buffer.data() + pre.first, pre.second->data(), pre.second->size());
    run(buffer.data());
    if (result_.width) std::memcpy(out.data(), buffer.data() + result_.off, result_.width);
  }

  // Validating convenience form; allocates. This is the plain `eval`
  // operation, hot paths should keep the CompiledExpr and a buffer around.
  SymbolVec operator()(const SymbolVec& x) const {
    if (x.field() != field_) throw Error(Errc::BadExpr, "input field mismatch");
    if (x.width() != input_width_)
      throw Error(Errc::WidthMismatch, "input has width " + std::to_string(x.width()) +
                                           ", layout expects " + std::to_string(input_width_));
    std::vector<std::uint8_t> buf(buffer_size());
    std::vector<std::uint8_t> out(out_width());
    eval_into(x.span(), out, buf);
    return SymbolVec(field_, std::move(out));
  }

  static Env layout_env(const BlockLayout& layout) {
    Env env;
    for (const auto& b : layout.blocks()) env[b.name] = {b.offset, b.width};
    return env;
  }

 private:
  enum class Op : std::uint8_t { Add, Neg, MaxInt, Majority, Concat, Table };

  struct Step {
    Op op;
    std::size_t dst = 0;
    std::size_t width = 0;
    std::vector<Ref> srcs;
    const std::vector<std::vector<std::uint8_t>>* rows = nullptr;  // Table
  };

  std::size_t alloc(std::size_t w) {
    std::size_t off = top_;
    top_ += w;
    return off;
  }

  Ref compile(const ExprNode& n, std::size_t env_id) {
    auto key = std::make_pair(&n, env_id);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    Ref r = compile_uncached(n, env_id);
    memo_.emplace(key, r);
    return r;
  }

  Ref compile_uncached(const ExprNode& n, std::size_t env_id) {
    switch (n.kind) {
      case ExprKind::Proj: {
        Ref b = lookup(env_id, n.block);
        if (n.range_width < 0) return b;
        std::size_t off = static_cast<std::size_t>(n.range_off);
        std::size_t w = static_cast<std::size_t>(n.range_width);
        if (off + w > b.width)
          throw Error(Errc::WidthMismatch, "projection range [" + std::to_string(off) + "," +
                                               std::to_string(off + w) + ") exceeds block '" +
                                               n.block + "' of width " + std::to_string(b.width));
        return {b.off + off, w};
      }
      case ExprKind::Const: {
        const SymbolVec& v = *n.value;
        if (v.field() != field_) throw Error(Errc::BadExpr, "constant field mismatch");
        Ref r{alloc(v.width()), v.width()};
        if (v.width()) preload_.emplace_back(r.off, &v.symbols());
        return r;
      }
      case ExprKind::Add:
      case ExprKind::MaxInt: {
        std::vector<Ref> srcs = compile_args(n, env_id);
        std::size_t w = srcs[0].width;
        for (const auto& s : srcs)
          if (s.width != w) throw Error(Errc::WidthMismatch, "argument widths disagree");
        Ref r{alloc(w), w};
        steps_.push_back({n.kind == ExprKind::Add ? Op::Add : Op::MaxInt, r.off, w,
                          std::move(srcs), nullptr});
        return r;
      }
      case ExprKind::Neg: {
        Ref s = compile(n.args[0].node(), env_id);
        Ref r{alloc(s.width), s.width};
        steps_.push_back({Op::Neg, r.off, s.width, {s}, nullptr});
        return r;
      }
      case ExprKind::Majority: {
        if (field_.q() != 2) throw Error(Errc::BadExpr, "majority is defined for q = 2 only");
        std::vector<Ref> srcs = compile_args(n, env_id);
        for (const auto& s : srcs)
          if (s.width != 1) throw Error(Errc::WidthMismatch, "majority arguments must have width 1");
        Ref r{alloc(1), 1};
        steps_.push_back({Op::Majority, r.off, 1, std::move(srcs), nullptr});
        return r;
      }
      case ExprKind::Concat: {
        std::vector<Ref> srcs = compile_args(n, env_id);
        std::size_t w = 0;
        for (const auto& s : srcs) w += s.width;
        Ref r{alloc(w), w};
        steps_.push_back({Op::Concat, r.off, w, std::move(srcs), nullptr});
        return r;
      }
      case ExprKind::Table: {
        if (*n.table_field != field_) throw Error(Errc::BadExpr, "table field mismatch");
        std::vector<Ref> gather;
        for (const auto& b : n.table_inputs.blocks()) {
          Ref g = lookup(env_id, b.name);
          if (g.width != b.width)
            throw Error(Errc::WidthMismatch, "table input '" + b.name + "' expects width " +
                                                 std::to_string(b.width) + ", block has " +
                                                 std::to_string(g.width));
          gather.push_back(g);
        }
        Ref r{alloc(n.table_out_width), n.table_out_width};
        steps_.push_back({Op::Table, r.off, n.table_out_width, std::move(gather), &n.rows});
        return r;
      }
      case ExprKind::Compose: {
        Env inner;
        for (const auto& [name, value] : n.bindings)
          inner[name] = compile(value.node(), env_id);
        envs_.push_back(std::move(inner));
        return compile(n.outer.node(), envs_.size() - 1);
      }
    }
    throw Error(Errc::BadExpr, "unknown node kind");
  }

  std::vector<Ref> compile_args(const ExprNode& n, std::size_t env_id) {
    std::vector<Ref> srcs;
    srcs.reserve(n.args.size());
    for (const auto& a : n.args) srcs.push_back(compile(a.node(), env_id));
    return srcs;
  }

  Ref lookup(std::size_t env_id, const std::string& name) const {
    const Env& env = envs_[env_id];
    auto it = env.find(name);
    if (it == env.end()) throw Error(Errc::UnknownBlock, "no block named '" + name + "'");
    return it->second;
  }

  void run(std::uint8_t* buf) const {
    const std::uint16_t q = field_.q();
    for (const Step& st : steps_) {
      std::uint8_t* dst = buf + st.dst;
      switch (st.op) {
        case Op::Add: {
          std::memcpy(dst, buf + st.srcs[0].off, st.width);
          for (std::size_t k = 1; k < st.srcs.size(); ++k) {
            const std::uint8_t* s = buf + st.srcs[k].off;
            for (std::size_t i = 0; i < st.width; ++i) {
              std::uint16_t v = static_cast<std::uint16_t>(dst[i] + s[i]);
              dst[i] = static_cast<std::uint8_t>(v >= q ? v - q : v);
            }
          }
          break;
        }
        case Op::Neg:
          for (std::size_t i = 0; i < st.width; ++i) {
            std::uint8_t v = buf[st.srcs[0].off + i];
            dst[i] = static_cast<std::uint8_t>(v == 0 ? 0 : q - v);
          }
          break;
        case Op::MaxInt: {
          std::memcpy(dst, buf + st.srcs[0].off, st.width);
          for (std::size_t k = 1; k < st.srcs.size(); ++k) {
            const std::uint8_t* s = buf + st.srcs[k].off;
            if (std::lexicographical_compare(dst, dst + st.width, s, s + st.width))
              std::memcpy(dst, s, st.width);
          }
          break;
        }
        case Op::Majority: {
          std::uint8_t a = buf[st.srcs[0].off], b = buf[st.srcs[1].off], c = buf[st.srcs[2].off];
          dst[0] = static_cast<std::uint8_t>((a & b) ^ (b & c) ^ (c & a));
          break;
        }
        case Op::Concat: {
          std::size_t at = 0;
          for (const Ref& s : st.srcs) {
            std::memcpy(dst + at, buf + s.off, s.width);
            at += s.width;
          }
          break;
        }
        case Op::Table: {
          std::size_t idx = 0;
          for (const Ref& g : st.srcs)
            for (std::size_t i = 0; i < g.width; ++i) idx = idx * q + buf[g.off + i];
          const auto& row = (*st.rows)[idx];
          if (st.width) std::memcpy(dst, row.data(), st.width);
          break;
        }
      }
    }
  }

  struct KeyHash {
    std::size_t operator()(const std::pair<const ExprNode*, std::size_t>& k) const {
      return std::hash<const ExprNode*>()(k.first) ^ (k.second * 0x9e3779b97f4a7c15ull);
    }
  };

  Expr root_;  // keeps shared nodes (and table rows) alive
  FieldSpec field_;
  std::size_t input_width_;
  std::size_t top_;
  std::vector<Env> envs_;
  std::vector<Step> steps_;
  std::vector<std::pair<std::size_t, const std::vector<std::uint8_t>*>> preload_;
  std::unordered_map<std::pair<const ExprNode*, std::size_t>, Ref, KeyHash> memo_;
  Ref result_;
};

// Plain one-shot evaluation of f over `layout` at realization x.
inline SymbolVec eval(const Expr& f, const BlockLayout& layout, const SymbolVec& x) {
  return CompiledExpr(f, layout, x.field())(x);
}

inline std::size_t expr_width(const Expr& f, const BlockLayout& layout, FieldSpec field) {
  return CompiledExpr(f, layout, field).out_width();
}

}  // namespace netfic

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "netfic/layout.hpp"

namespace netfic {

// A function expression over the named blocks of some layout. Nodes are
// immutable and shared; an Expr is a cheap handle. Widths and block
// references are resolved against a concrete BlockLayout when the
// expression is compiled (see eval.hpp), so the same tree can be reused
// under different layouts as long as names and widths line up.
class ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

class Expr {
 public:
  Expr() = default;
  explicit Expr(ExprPtr node) : node_(std::move(node)) {}
  const ExprNode& node() const { return *node_; }
  const ExprPtr& ptr() const { return node_; }
  bool empty() const { return node_ == nullptr; }

 private:
  ExprPtr node_;
};

enum class ExprKind { Proj, Const, Add, Neg, MaxInt, Majority, Concat, Table, Compose };

class ExprNode {
 public:
  ExprKind kind;

  // Proj: block plus an optional sub-range (full block when range_width < 0).
  std::string block;
  std::ptrdiff_t range_off = 0;
  std::ptrdiff_t range_width = -1;

  // Const: literal value (may have width 0 for the empty codeword).
  std::optional<SymbolVec> value;

  // Add / MaxInt / Majority / Concat / Neg: children.
  std::vector<Expr> args;

  // Table: own input layout plus one output row per input realization,
  // rows in lexicographic input order.
  BlockLayout table_inputs;
  std::vector<std::vector<std::uint8_t>> rows;
  std::size_t table_out_width = 0;
  std::optional<FieldSpec> table_field;

  // Compose: outer expression evaluated over the bindings' layout only.
  Expr outer;
  std::vector<std::pair<std::string, Expr>> bindings;  // sorted by name
};

namespace detail {
inline Expr make(ExprNode n) { return Expr(std::make_shared<const ExprNode>(std::move(n))); }
}  // namespace detail

inline Expr proj(std::string block) {
  ExprNode n;
  n.kind = ExprKind::Proj;
  n.block = std::move(block);
  return detail::make(std::move(n));
}

// Projection of symbols [off, off + width) of a block.
inline Expr proj(std::string block, std::size_t off, std::size_t width) {
  if (width == 0) throw Error(Errc::BadExpr, "proj range of width 0");
  ExprNode n;
  n.kind = ExprKind::Proj;
  n.block = std::move(block);
  n.range_off = static_cast<std::ptrdiff_t>(off);
  n.range_width = static_cast<std::ptrdiff_t>(width);
  return detail::make(std::move(n));
}

inline Expr constant(SymbolVec v) {
  ExprNode n;
  n.kind = ExprKind::Const;
  n.value = std::move(v);
  return detail::make(std::move(n));
}

inline Expr add(std::vector<Expr> args) {
  if (args.empty()) throw Error(Errc::BadExpr, "add needs at least one argument");
  ExprNode n;
  n.kind = ExprKind::Add;
  n.args = std::move(args);
  return detail::make(std::move(n));
}

inline Expr add(Expr a, Expr b) { return add(std::vector<Expr>{std::move(a), std::move(b)}); }

inline Expr neg(Expr a) {
  ExprNode n;
  n.kind = ExprKind::Neg;
  n.args = {std::move(a)};
  return detail::make(std::move(n));
}

inline Expr sub(Expr a, Expr b) { return add(std::move(a), neg(std::move(b))); }

// Component-wise is wrong here: MaxInt picks the argument whose value is
// largest as a base-q integer, most significant symbol first.
inline Expr max_int(std::vector<Expr> args) {
  if (args.empty()) throw Error(Errc::BadExpr, "max needs at least one argument");
  ExprNode n;
  n.kind = ExprKind::MaxInt;
  n.args = std::move(args);
  return detail::make(std::move(n));
}

inline Expr max_int(Expr a, Expr b) {
  return max_int(std::vector<Expr>{std::move(a), std::move(b)});
}

// Majority of three width-1 arguments, q = 2 only: ab + bc + ca.
inline Expr majority(Expr a, Expr b, Expr c) {
  ExprNode n;
  n.kind = ExprKind::Majority;
  n.args = {std::move(a), std::move(b), std::move(c)};
  return detail::make(std::move(n));
}

inline Expr concat(std::vector<Expr> args) {
  if (args.empty()) throw Error(Errc::BadExpr, "concat needs at least one argument");
  ExprNode n;
  n.kind = ExprKind::Concat;
  n.args = std::move(args);
  return detail::make(std::move(n));
}

// Lookup table over its own input layout; inputs are gathered from blocks of
// the evaluation layout by name. rows[i] is the output for the i-th input
// realization in lexicographic order.
inline Expr table(FieldSpec field, BlockLayout inputs, std::size_t out_width,
                  std::vector<std::vector<std::uint8_t>> rows) {
  std::size_t domain = 1;
  for (const auto& b : inputs.blocks()) {
    for (std::size_t i = 0; i < b.width; ++i) {
      if (domain > (std::size_t{1} << 40) / field.q())
        throw Error(Errc::TableTooLarge, "table domain exceeds representable size");
      domain *= field.q();
    }
  }
  if (rows.size() != domain)
    throw Error(Errc::WidthMismatch, "table has " + std::to_string(rows.size()) +
                                         " rows, domain size is " + std::to_string(domain));
  for (const auto& r : rows) {
    if (r.size() != out_width) throw Error(Errc::WidthMismatch, "table row width mismatch");
    for (std::uint8_t s : r)
      if (s >= field.q()) throw Error(Errc::DomainViolation, "table entry >= q");
  }
  ExprNode n;
  n.kind = ExprKind::Table;
  n.table_inputs = std::move(inputs);
  n.table_out_width = out_width;
  n.table_field = field;
  n.rows = std::move(rows);
  return detail::make(std::move(n));
}

// outer is evaluated against a layout made of the bindings (sorted by name);
// it cannot see blocks of the enclosing layout.
inline Expr compose(Expr outer, std::vector<std::pair<std::string, Expr>> bindings) {
  std::sort(bindings.begin(), bindings.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < bindings.size(); ++i)
    if (bindings[i].first == bindings[i - 1].first)
      throw Error(Errc::BadExpr, "duplicate compose binding '" + bindings[i].first + "'");
  ExprNode n;
  n.kind = ExprKind::Compose;
  n.outer = std::move(outer);
  n.bindings = std::move(bindings);
  return detail::make(std::move(n));
}

}  // namespace netfic

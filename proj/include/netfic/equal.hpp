#pragma once

#include <cstring>
#include <optional>

#include "netfic/enumerate.hpp"
#include "netfic/eval.hpp"

namespace netfic {

struct EqBudget {
  std::uint64_t cap = kDefaultCap;        // exhaustive when q^width fits
  std::uint64_t samples = kDefaultSamples;  // fallback sample count
  std::uint64_t seed = kDefaultSeed;
};

// Semantic (pointwise) function equality. Equal is only ever returned after
// a complete exhaustive sweep; a sampled sweep without a mismatch is
// Inconclusive.
struct EqResult {
  enum class Kind { Equal, Differ, Inconclusive } kind;
  std::optional<SymbolVec> witness;  // input where f and g differ
  std::uint64_t tried = 0;

  bool equal() const { return kind == Kind::Equal; }
  bool differ() const { return kind == Kind::Differ; }
};

inline EqResult func_equal(const Expr& f, const Expr& g, const BlockLayout& layout,
                           FieldSpec field, const EqBudget& budget = {}) {
  CompiledExpr cf(f, layout, field);
  CompiledExpr cg(g, layout, field);
  if (cf.out_width() != cg.out_width())
    throw Error(Errc::WidthMismatch, "comparing expressions of widths " +
                                         std::to_string(cf.out_width()) + " and " +
                                         std::to_string(cg.out_width()));

  bool exhaustive = domain_fits(field, layout.total_width(), budget.cap);
  EnumMode mode = exhaustive ? EnumMode(Exhaustive{budget.cap})
                             : EnumMode(Sampled{budget.samples, budget.seed});
  DomainStream stream(field, layout.total_width(), mode);

  std::vector<std::uint8_t> x(layout.total_width());
  std::vector<std::uint8_t> bf(cf.buffer_size()), bg(cg.buffer_size());
  std::vector<std::uint8_t> of(cf.out_width()), og(cg.out_width());
  while (stream.next(x)) {
    cf.eval_into(x, of, bf);
    cg.eval_into(x, og, bg);
    if (of != og)
      return {EqResult::Kind::Differ, SymbolVec(field, x), stream.yielded()};
  }
  if (exhaustive) return {EqResult::Kind::Equal, std::nullopt, stream.yielded()};
  return {EqResult::Kind::Inconclusive, std::nullopt, stream.yielded()};
}

// Materializes f over a small layout as an explicit lookup table.
inline Expr materialize_table(const Expr& f, const BlockLayout& layout, FieldSpec field,
                              std::uint64_t cap = std::uint64_t{1} << 16) {
  auto total = domain_size(field, layout.total_width());
  if (!total || *total > cap)
    throw Error(Errc::TableTooLarge, "materializing over " + std::to_string(layout.total_width()) +
                                         " symbols exceeds cap " + std::to_string(cap));
  CompiledExpr cf(f, layout, field);
  std::vector<std::vector<std::uint8_t>> rows;
  rows.reserve(*total);
  DomainStream stream(field, layout.total_width(), Exhaustive{cap});
  std::vector<std::uint8_t> x(layout.total_width());
  std::vector<std::uint8_t> buf(cf.buffer_size());
  std::vector<std::uint8_t> out(cf.out_width());
  while (stream.next(x)) {
    cf.eval_into(x, out, buf);
    rows.push_back(out);
  }
  std::vector<std::pair<std::string, std::size_t>> inputs;
  for (const auto& b : layout.blocks()) inputs.emplace_back(b.name, b.width);
  return table(field, BlockLayout(inputs), cf.out_width(), std::move(rows));
}

}  // namespace netfic

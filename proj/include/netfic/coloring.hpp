#pragma once

#include <algorithm>
#include <cstring>
#include <string>
#include <vector>

#include "netfic/fic.hpp"

namespace netfic {

// Graph on all message realizations; (z, z') adjacent iff some client has
// equal Has-value but different Want-value at z and z'. Vertices are indexed
// by lexicographic rank of the realization.
class ConfusionGraph {
 public:
  ConfusionGraph(FieldSpec field, std::size_t width, std::size_t vertices)
      : field_(field), width_(width), n_(vertices), words_((vertices + 63) / 64),
        adj_(vertices * words_, 0) {}

  std::size_t vertex_count() const { return n_; }
  FieldSpec field() const { return field_; }
  std::size_t realization_width() const { return width_; }

  void add_edge(std::size_t u, std::size_t v) {
    if (u == v) return;
    adj_[u * words_ + v / 64] |= std::uint64_t{1} << (v % 64);
    adj_[v * words_ + u / 64] |= std::uint64_t{1} << (u % 64);
  }

  bool adjacent(std::size_t u, std::size_t v) const {
    return (adj_[u * words_ + v / 64] >> (v % 64)) & 1;
  }

  std::size_t degree(std::size_t u) const {
    std::size_t d = 0;
    for (std::size_t w = 0; w < words_; ++w) d += std::popcount(adj_[u * words_ + w]);
    return d;
  }

  std::size_t edge_count() const {
    std::size_t total = 0;
    for (std::size_t u = 0; u < n_; ++u) total += degree(u);
    return total / 2;
  }

  std::vector<std::pair<std::size_t, std::size_t>> edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t u = 0; u < n_; ++u)
      for (std::size_t v = u + 1; v < n_; ++v)
        if (adjacent(u, v)) out.emplace_back(u, v);
    return out;
  }

  // Decodes a vertex index back into its realization (base-q, most
  // significant symbol first, matching lexicographic enumeration order).
  SymbolVec realization(std::size_t v) const {
    std::vector<std::uint8_t> syms(width_, 0);
    for (std::size_t i = width_; i-- > 0;) {
      syms[i] = static_cast<std::uint8_t>(v % field_.q());
      v /= field_.q();
    }
    return SymbolVec(field_, std::move(syms));
  }

  std::span<const std::uint64_t> row(std::size_t u) const {
    return {adj_.data() + u * words_, words_};
  }

 private:
  FieldSpec field_;
  std::size_t width_;
  std::size_t n_;
  std::size_t words_;
  std::vector<std::uint64_t> adj_;
};

// Memory guard: adjacency is V^2 bits.
inline constexpr std::size_t kMaxConfusionVertices = 32768;

inline ConfusionGraph build_confusion_graph(const FicProblem& p,
                                            std::uint64_t cap = kDefaultCap) {
  const BlockLayout zl = p.layout();
  const std::size_t nk = zl.total_width();
  auto vcount = domain_size(p.field, nk);
  if (!vcount || *vcount > cap)
    throw Error(Errc::CapExceeded, "confusion graph needs " + std::to_string(p.field.q()) + "^" +
                                       std::to_string(nk) + " vertices, cap is " +
                                       std::to_string(cap));
  if (*vcount > kMaxConfusionVertices)
    throw Error(Errc::CapExceeded,
                "confusion graph adjacency too large (" + std::to_string(*vcount) + " vertices)");
  const std::size_t v = static_cast<std::size_t>(*vcount);

  struct HwUnit {
    CompiledExpr has;
    CompiledExpr want;
  };
  std::vector<HwUnit> units;
  for (const auto& cl : p.clients) {
    std::vector<Expr> hs;
    for (const auto& h : cl.has) hs.push_back(proj(h));
    std::vector<Expr> ws = cl.want;
    units.push_back({CompiledExpr(hs.empty() ? constant(SymbolVec(p.field, {}))
                                             : concat(hs),
                                  zl, p.field),
                     CompiledExpr(ws.size() == 1 ? ws[0] : concat(ws), zl, p.field)});
  }

  std::size_t profile_width = 0;
  for (const auto& u : units) profile_width += u.has.out_width() + u.want.out_width();
  std::size_t buf_need = 1;
  for (const auto& u : units)
    buf_need = std::max({buf_need, u.has.buffer_size(), u.want.buffer_size()});

  std::vector<std::uint8_t> profiles(v * profile_width);
  std::vector<std::uint8_t> z(nk), buf(buf_need);
  DomainStream stream(p.field, nk, Exhaustive{cap});
  for (std::size_t i = 0; i < v; ++i) {
    stream.next(z);
    std::size_t at = i * profile_width;
    for (const auto& u : units) {
      u.has.eval_into(z, std::span(profiles).subspan(at, u.has.out_width()), buf);
      at += u.has.out_width();
      u.want.eval_into(z, std::span(profiles).subspan(at, u.want.out_width()), buf);
      at += u.want.out_width();
    }
  }

  ConfusionGraph g(p.field, nk, v);
  for (std::size_t i = 0; i < v; ++i) {
    const std::uint8_t* pi = profiles.data() + i * profile_width;
    for (std::size_t j = i + 1; j < v; ++j) {
      const std::uint8_t* pj = profiles.data() + j * profile_width;
      std::size_t at = 0;
      for (const auto& u : units) {
        std::size_t hw = u.has.out_width(), ww = u.want.out_width();
        bool h_eq = hw == 0 || std::memcmp(pi + at, pj + at, hw) == 0;
        bool w_eq = ww == 0 || std::memcmp(pi + at + hw, pj + at + hw, ww) == 0;
        if (h_eq && !w_eq) {
          g.add_edge(i, j);
          break;
        }
        at += hw + ww;
      }
    }
  }
  return g;
}

struct ColoringResult {
  std::size_t colors = 0;            // colors used by `color`
  std::vector<std::uint32_t> color;  // proper coloring, values in [0, colors)
  bool exact = false;                // colors == chromatic number
  std::size_t clique_lb = 0;         // size of a clique found (lower bound)
  std::vector<std::size_t> clique;   // its vertices
};

namespace detail {

// Greedy clique: grow from each seed vertex in degree order, keep the best.
inline void greedy_clique(const ConfusionGraph& g, ColoringResult& r) {
  const std::size_t n = g.vertex_count();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return g.degree(a) > g.degree(b); });
  std::size_t seeds = std::min<std::size_t>(n, 32);
  for (std::size_t s = 0; s < seeds; ++s) {
    std::vector<std::size_t> clique{order[s]};
    for (std::size_t cand : order) {
      bool ok = true;
      for (std::size_t u : clique)
        if (u == cand || !g.adjacent(u, cand)) {
          ok = false;
          break;
        }
      if (ok) clique.push_back(cand);
    }
    if (clique.size() > r.clique_lb) {
      r.clique_lb = clique.size();
      r.clique = clique;
    }
  }
}

// DSATUR greedy; fills r.color / r.colors.
inline void dsatur_greedy(const ConfusionGraph& g, ColoringResult& r) {
  const std::size_t n = g.vertex_count();
  r.color.assign(n, UINT32_MAX);
  std::vector<std::vector<std::uint64_t>> sat_mask(n);
  std::vector<std::size_t> sat(n, 0);
  std::size_t words = (n + 63) / 64;  // colors never exceed n
  for (auto& m : sat_mask) m.assign(words, 0);
  std::size_t used = 0;
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t best = SIZE_MAX;
    for (std::size_t v = 0; v < n; ++v) {
      if (r.color[v] != UINT32_MAX) continue;
      if (best == SIZE_MAX || sat[v] > sat[best] ||
          (sat[v] == sat[best] && g.degree(v) > g.degree(best)))
        best = v;
    }
    std::uint32_t col = 0;
    while ((sat_mask[best][col / 64] >> (col % 64)) & 1) ++col;
    r.color[best] = col;
    used = std::max<std::size_t>(used, col + 1);
    auto row = g.row(best);
    for (std::size_t w = 0; w < row.size(); ++w) {
      std::uint64_t bits = row[w];
      while (bits) {
        std::size_t v = w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
        bits &= bits - 1;
        if (r.color[v] != UINT32_MAX) continue;
        if (!((sat_mask[v][col / 64] >> (col % 64)) & 1)) {
          sat_mask[v][col / 64] |= std::uint64_t{1} << (col % 64);
          ++sat[v];
        }
      }
    }
  }
  r.colors = used;
}

// Branch-and-bound exact coloring with DSATUR vertex selection. Colors are
// canonical (a vertex may open at most one new color), branch order is
// deterministic.
class ExactColorer {
 public:
  explicit ExactColorer(const ConfusionGraph& g) : g_(g), n_(g.vertex_count()) {}

  ColoringResult run() {
    ColoringResult r;
    if (n_ == 0) {
      r.exact = true;
      return r;
    }
    greedy_clique(g_, r);
    dsatur_greedy(g_, r);
    best_ = r.color;
    best_colors_ = r.colors;
    lb_ = std::max<std::size_t>(r.clique_lb, 1);
    if (best_colors_ > lb_) {
      color_.assign(n_, UINT32_MAX);
      // seed the search with the clique: those vertices get distinct colors
      std::uint32_t c = 0;
      for (std::size_t v : r.clique) color_[v] = c++;
      branch(r.clique.size(), static_cast<std::size_t>(c));
    }
    r.color = best_;
    r.colors = best_colors_;
    r.exact = true;
    return r;
  }

 private:
  void branch(std::size_t colored, std::size_t used) {
    if (used >= best_colors_) return;  // cannot improve
    if (colored == n_) {
      best_ = color_;
      best_colors_ = used;
      return;
    }
    // pick uncolored vertex with max saturation, tie: max degree, tie: min id
    std::size_t best_v = SIZE_MAX, best_sat = 0, best_deg = 0;
    std::vector<std::uint64_t> mask((used + 64) / 64, 0);
    for (std::size_t v = 0; v < n_; ++v) {
      if (color_[v] != UINT32_MAX) continue;
      std::size_t s = saturation(v, used);
      std::size_t d = g_.degree(v);
      if (best_v == SIZE_MAX || s > best_sat || (s == best_sat && d > best_deg)) {
        best_v = v;
        best_sat = s;
        best_deg = d;
      }
    }
    neighbor_colors(best_v, used, mask);
    for (std::uint32_t c = 0; c < used; ++c) {
      if ((mask[c / 64] >> (c % 64)) & 1) continue;
      color_[best_v] = c;
      branch(colored + 1, used);
      color_[best_v] = UINT32_MAX;
      if (best_colors_ <= lb_) return;  // proven optimal
    }
    if (used + 1 < best_colors_) {
      color_[best_v] = static_cast<std::uint32_t>(used);
      branch(colored + 1, used + 1);
      color_[best_v] = UINT32_MAX;
    }
  }

  std::size_t saturation(std::size_t v, std::size_t used) {
    std::vector<std::uint64_t> mask((used + 64) / 64, 0);
    neighbor_colors(v, used, mask);
    std::size_t s = 0;
    for (auto w : mask) s += std::popcount(w);
    return s;
  }

  void neighbor_colors(std::size_t v, std::size_t used, std::vector<std::uint64_t>& mask) {
    std::fill(mask.begin(), mask.end(), 0);
    auto row = g_.row(v);
    for (std::size_t w = 0; w < row.size(); ++w) {
      std::uint64_t bits = row[w];
      while (bits) {
        std::size_t u = w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
        bits &= bits - 1;
        std::uint32_t c = color_[u];
        if (c != UINT32_MAX && c < used) mask[c / 64] |= std::uint64_t{1} << (c % 64);
      }
    }
  }

  const ConfusionGraph& g_;
  std::size_t n_;
  std::vector<std::uint32_t> color_, best_;
  std::size_t best_colors_ = 0;
  std::size_t lb_ = 1;
};

}  // namespace detail

inline constexpr std::size_t kExactColoringLimit = 128;

// Exact chromatic number up to kExactColoringLimit vertices, DSATUR greedy
// upper bound plus clique lower bound beyond that (result.exact says which).
inline ColoringResult color_graph(const ConfusionGraph& g) {
  if (g.vertex_count() <= kExactColoringLimit) return detail::ExactColorer(g).run();
  ColoringResult r;
  detail::greedy_clique(g, r);
  detail::dsatur_greedy(g, r);
  r.exact = false;
  return r;
}

struct MinLengthBounds {
  std::size_t lower = 0;       // ceil(log_q chi) (exact) or from the clique bound
  std::size_t upper = 0;       // from the coloring-derived code
  bool exact = false;          // true when the chromatic number is exact
  std::size_t colors = 0;      // colors realized by the witness coloring
  std::size_t clique_lb = 0;
  FicCode witness;             // passes verify_fic_code by construction
};

namespace detail {
inline std::size_t ceil_log_q(FieldSpec field, std::size_t n) {
  std::size_t l = 0;
  std::uint64_t pow = 1;
  while (pow < n) {
    pow *= field.q();
    ++l;
  }
  return l;
}
}  // namespace detail

inline constexpr std::uint64_t kDecoderTableCap = std::uint64_t{1} << 16;

// Length bounds for a functional index coding problem via confusion-graph
// coloring, plus a witness code built from the coloring: each color class
// broadcasts a distinct codeword and every decoder is a lookup table from
// (codeword, has-value) to the want-value.
inline MinLengthBounds min_length_bounds(const FicProblem& p, std::uint64_t cap = kDefaultCap) {
  ConfusionGraph g = build_confusion_graph(p, cap);
  ColoringResult coloring = color_graph(g);
  const BlockLayout zl = p.layout();
  const std::size_t nk = zl.total_width();
  const std::size_t v = g.vertex_count();

  MinLengthBounds out;
  out.exact = coloring.exact;
  out.colors = coloring.colors;
  out.clique_lb = std::max<std::size_t>(coloring.clique_lb, v ? 1 : 0);
  out.lower = detail::ceil_log_q(p.field, coloring.exact ? coloring.colors
                                                         : std::max<std::size_t>(out.clique_lb, 1));
  out.upper = detail::ceil_log_q(p.field, std::max<std::size_t>(coloring.colors, 1));

  // canonical codewords: sort color classes by their lexicographically
  // smallest member (= smallest vertex index), then count upward
  const std::size_t len = out.upper;
  std::vector<std::size_t> first_seen(coloring.colors, SIZE_MAX);
  for (std::size_t i = 0; i < v; ++i)
    if (first_seen[coloring.color[i]] == SIZE_MAX) first_seen[coloring.color[i]] = i;
  std::vector<std::size_t> class_order(coloring.colors);
  for (std::size_t c = 0; c < coloring.colors; ++c) class_order[c] = c;
  std::sort(class_order.begin(), class_order.end(),
            [&](std::size_t a, std::size_t b) { return first_seen[a] < first_seen[b]; });
  std::vector<std::uint32_t> rank(coloring.colors);
  for (std::size_t i = 0; i < class_order.size(); ++i)
    rank[class_order[i]] = static_cast<std::uint32_t>(i);

  auto codeword_of = [&](std::size_t vertex) {
    std::vector<std::uint8_t> cw(len, 0);
    std::size_t r = rank[coloring.color[vertex]];
    for (std::size_t i = len; i-- > 0;) {
      cw[i] = static_cast<std::uint8_t>(r % p.field.q());
      r /= p.field.q();
    }
    return cw;
  };

  // encoder: lookup over the whole message layout
  FicCode code;
  code.length = len;
  {
    std::vector<std::vector<std::uint8_t>> rows(v);
    for (std::size_t i = 0; i < v; ++i) rows[i] = codeword_of(i);
    std::vector<std::pair<std::string, std::size_t>> inputs;
    for (const auto& b : zl.blocks()) inputs.emplace_back(b.name, b.width);
    code.encoder = table(p.field, BlockLayout(inputs), len, std::move(rows));
  }

  // decoders: (codeword, has-value) -> want-value
  for (const auto& cl : p.clients) {
    const std::size_t hw = p.has_width(cl);
    const std::size_t ww = p.want_width(cl);
    auto dom = domain_size(p.field, len + hw);
    if (!dom || *dom > kDecoderTableCap)
      throw Error(Errc::TableTooLarge, "decoder table for '" + cl.id + "' needs " +
                                           std::to_string(p.field.q()) + "^" +
                                           std::to_string(len + hw) + " rows");
    std::vector<std::vector<std::uint8_t>> rows(static_cast<std::size_t>(*dom),
                                                std::vector<std::uint8_t>(ww, 0));

    std::vector<Expr> hs;
    for (const auto& h : cl.has) hs.push_back(proj(h));
    std::vector<Expr> ws = cl.want;
    CompiledExpr has_fn(hs.empty() ? constant(SymbolVec(p.field, {})) : concat(hs), zl, p.field);
    CompiledExpr want_fn(ws.size() == 1 ? ws[0] : concat(ws), zl, p.field);

    std::vector<std::uint8_t> z(nk), hval(hw), wval(ww),
        buf(std::max(has_fn.buffer_size(), want_fn.buffer_size()));
    DomainStream stream(p.field, nk, Exhaustive{cap});
    for (std::size_t i = 0; i < v; ++i) {
      stream.next(z);
      has_fn.eval_into(z, hval, buf);
      want_fn.eval_into(z, wval, buf);
      std::size_t idx = 0;
      for (std::uint8_t s : codeword_of(i)) idx = idx * p.field.q() + s;
      for (std::uint8_t s : hval) idx = idx * p.field.q() + s;
      rows[idx] = wval;
    }

    BlockLayout dl = decoder_layout(p, cl, len);
    std::vector<std::pair<std::string, std::size_t>> inputs;
    for (const auto& b : dl.blocks()) inputs.emplace_back(b.name, b.width);
    code.decoders[cl.id] = table(p.field, BlockLayout(inputs), ww, std::move(rows));
  }

  out.witness = std::move(code);
  return out;
}

}  // namespace netfic

#pragma once

#include <chrono>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "netfic/equal.hpp"
#include "netfic/report.hpp"

namespace netfic {

// A functional index coding problem: a transmitter holding message blocks
// Z_1..Z_K and clients with side information (Has, a subset of the message
// blocks) and demands (Want, functions of the messages).
struct FicClient {
  std::string id;
  std::vector<std::string> has;  // message block names
  std::vector<Expr> want;        // over the Z layout, any widths
};

struct FicProblem {
  FieldSpec field{2};
  std::vector<std::pair<std::string, std::size_t>> messages;  // (name, width)
  std::vector<FicClient> clients;
  std::string title;

  BlockLayout layout() const { return BlockLayout(messages); }

  std::size_t message_width() const {  // N_K
    std::size_t n = 0;
    for (const auto& m : messages) n += m.second;
    return n;
  }

  std::size_t has_width(const FicClient& c) const {
    BlockLayout zl = layout();
    std::size_t n = 0;
    for (const auto& h : c.has) n += zl.find(h).width;
    return n;
  }

  std::size_t want_width(const FicClient& c) const {
    BlockLayout zl = layout();
    std::size_t n = 0;
    for (const auto& w : c.want) n += expr_width(w, zl, field);
    return n;
  }
};

// Name of the codeword block in decoder layouts. Reserved: a message may
// not use it when the problem carries a code.
inline constexpr const char* kCodewordBlock = "C";

// A functional index code: an encoder of length `length` plus one decoder
// per client over the layout (C, has blocks of that client). For a
// zero-length code the C block is omitted.
struct FicCode {
  std::size_t length = 0;
  Expr encoder;  // over the Z layout, output width == length
  std::map<std::string, Expr> decoders;
};

inline BlockLayout decoder_layout(const FicProblem& p, const FicClient& c, std::size_t length) {
  BlockLayout zl = p.layout();
  BlockLayout dl;
  if (length > 0) dl.append(kCodewordBlock, length);
  for (const auto& h : c.has) dl.append(h, zl.find(h).width);
  return dl;
}

inline Findings validate_fic(const FicProblem& p) {
  Findings out;
  std::set<std::string> names;
  for (const auto& [name, width] : p.messages) {
    if (!names.insert(name).second) out.push_back({"DuplicateMessage", name});
    if (width == 0) out.push_back({"ZeroWidth", name});
    if (name == kCodewordBlock)
      out.push_back({"ReservedName", "message may not be named '" + name + "'"});
  }
  BlockLayout zl;
  bool layout_ok = true;
  try {
    zl = p.layout();
  } catch (const Error&) {
    layout_ok = false;
  }
  std::set<std::string> ids;
  for (const auto& c : p.clients) {
    if (!ids.insert(c.id).second) out.push_back({"DuplicateClient", c.id});
    std::set<std::string> seen;
    for (const auto& h : c.has) {
      if (!names.count(h)) out.push_back({"UnknownBlock", c.id + " has '" + h + "'"});
      if (!seen.insert(h).second) out.push_back({"DuplicateHasEntry", c.id + ": " + h});
    }
    if (c.want.empty()) out.push_back({"EmptyWant", c.id});
    if (layout_ok) {
      for (const auto& w : c.want) {
        try {
          expr_width(w, zl, p.field);
        } catch (const Error& err) {
          out.push_back({err.code() == Errc::UnknownBlock ? "UnknownBlock" : "BadWant",
                         c.id + ": " + err.what()});
        }
      }
    }
  }
  return out;
}

// Checks the decoder contract decoder_i(M(z), H_i(z)) = W_i(z) for every
// enumerated realization z.
inline VerifyReport verify_fic_code(const FicProblem& p, const FicCode& c,
                                    const VerifySettings& settings = {}) {
  auto t0 = std::chrono::steady_clock::now();
  const BlockLayout zl = p.layout();
  const std::size_t nk = zl.total_width();

  // Combined buffer: [z | codeword]; has blocks alias the z region.
  CompiledExpr::Env env = CompiledExpr::layout_env(zl);
  env[kCodewordBlock] = {nk, c.length};
  const std::size_t total = nk + c.length;

  CompiledExpr enc(c.length == 0 && c.encoder.empty()
                       ? constant(SymbolVec(p.field, {}))
                       : c.encoder,
                   zl, p.field);
  if (enc.out_width() != c.length)
    throw Error(Errc::LengthMismatch, "encoder outputs " + std::to_string(enc.out_width()) +
                                          " symbols, code length is " + std::to_string(c.length));

  struct ClientUnit {
    std::string id;
    CompiledExpr decoder;
    CompiledExpr want;
  };
  std::vector<ClientUnit> units;
  for (const auto& cl : p.clients) {
    auto dit = c.decoders.find(cl.id);
    if (dit == c.decoders.end())
      throw Error(Errc::MissingDecoder, "client '" + cl.id + "' has no decoder");
    CompiledExpr::Env denv;
    if (c.length > 0) denv[kCodewordBlock] = env.at(kCodewordBlock);
    for (const auto& h : cl.has) denv[h] = env.at(h);
    CompiledExpr dec(dit->second, denv, total, p.field);
    std::vector<Expr> ws = cl.want;
    CompiledExpr want(ws.size() == 1 ? ws[0] : concat(ws), zl, p.field);
    if (dec.out_width() != want.out_width())
      throw Error(Errc::WidthMismatch, "decoder of '" + cl.id + "' outputs " +
                                           std::to_string(dec.out_width()) +
                                           " symbols, wants need " +
                                           std::to_string(want.out_width()));
    units.push_back({cl.id, std::move(dec), std::move(want)});
  }

  VerifyReport report;
  EnumMode mode = settings.resolve(p.field, nk, report.exhaustive);
  if (!report.exhaustive) report.seed = std::get<Sampled>(mode).seed;

  std::size_t buf_need = enc.buffer_size();
  for (const auto& u : units)
    buf_need = std::max({buf_need, u.decoder.buffer_size(), u.want.buffer_size()});

  std::vector<std::uint8_t> zc(total);
  std::vector<std::uint8_t> buf(buf_need);
  std::vector<std::uint8_t> got, want_val;
  detail::WitnessBag bag(settings.witness_cap);

  DomainStream stream(p.field, nk, mode);
  while (stream.next(std::span(zc).subspan(0, nk))) {
    enc.eval_into(std::span(zc).subspan(0, nk), std::span(zc).subspan(nk, c.length), buf);
    for (const auto& u : units) {
      got.resize(u.decoder.out_width());
      want_val.resize(u.want.out_width());
      u.decoder.eval_into(zc, got, buf);
      u.want.eval_into(std::span(zc).subspan(0, nk), want_val, buf);
      if (got != want_val)
        bag.add(u.id, SymbolVec(p.field, {zc.begin(), zc.begin() + nk}),
                SymbolVec(p.field, want_val), SymbolVec(p.field, got));
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

// Necessary condition on the encoder alone: realizations that some client
// confuses (equal Has-value, different Want-value) must get distinct
// codewords. `checked` counts pairs. A witness records the pair as
// (input = z, expected = z', got = the shared codeword).
inline VerifyReport check_exclusive_law(const FicProblem& p, const FicCode& c,
                                        const VerifySettings& settings = {}) {
  auto t0 = std::chrono::steady_clock::now();
  const BlockLayout zl = p.layout();
  const std::size_t nk = zl.total_width();

  CompiledExpr enc(c.length == 0 && c.encoder.empty()
                       ? constant(SymbolVec(p.field, {}))
                       : c.encoder,
                   zl, p.field);

  struct HwUnit {
    std::string id;
    CompiledExpr has;  // concatenated has blocks (empty has -> none)
    CompiledExpr want;
    bool has_empty;
  };
  std::vector<HwUnit> units;
  for (const auto& cl : p.clients) {
    std::vector<Expr> hs;
    for (const auto& h : cl.has) hs.push_back(proj(h));
    std::vector<Expr> ws = cl.want;
    Expr has_expr = hs.empty() ? constant(SymbolVec(p.field, {})) : concat(hs);
    units.push_back({cl.id, CompiledExpr(has_expr, zl, p.field),
                     CompiledExpr(ws.size() == 1 ? ws[0] : concat(ws), zl, p.field),
                     hs.empty()});
  }

  VerifyReport report;
  auto vcount = domain_size(p.field, nk);
  // the pair count V*(V-1)/2 must fit under the cap for an exhaustive sweep
  bool pairs_fit = false;
  std::uint64_t pair_count = 0;
  if (vcount && *vcount <= (std::uint64_t{1} << 31)) {
    pair_count = *vcount * (*vcount - 1) / 2;
    pairs_fit = pair_count <= settings.cap;
  }
  if (settings.mode == VerifySettings::Mode::Exhaustive && !pairs_fit)
    throw Error(Errc::CapExceeded, "exhaustive pair enumeration exceeds cap");
  report.exhaustive =
      settings.mode != VerifySettings::Mode::Sampled && pairs_fit;
  if (!report.exhaustive) report.seed = settings.seed;

  detail::WitnessBag bag(settings.witness_cap);

  // Profile of a realization: [codeword | H_1 | W_1 | H_2 | W_2 | ...]
  std::size_t profile_width = c.length;
  for (const auto& u : units) profile_width += u.has.out_width() + u.want.out_width();
  std::size_t buf_need = enc.buffer_size();
  for (const auto& u : units)
    buf_need = std::max({buf_need, u.has.buffer_size(), u.want.buffer_size()});
  std::vector<std::uint8_t> buf(buf_need);

  auto fill_profile = [&](std::span<const std::uint8_t> z, std::span<std::uint8_t> prof) {
    enc.eval_into(z, prof.subspan(0, c.length), buf);
    std::size_t at = c.length;
    for (const auto& u : units) {
      u.has.eval_into(z, prof.subspan(at, u.has.out_width()), buf);
      at += u.has.out_width();
      u.want.eval_into(z, prof.subspan(at, u.want.out_width()), buf);
      at += u.want.out_width();
    }
  };

  auto confusable_same_code = [&](std::span<const std::uint8_t> pa,
                                  std::span<const std::uint8_t> pb,
                                  std::string& who) {
    if (c.length && std::memcmp(pa.data(), pb.data(), c.length) != 0) return false;
    std::size_t at = c.length;
    for (const auto& u : units) {
      std::size_t hw = u.has.out_width(), ww = u.want.out_width();
      bool h_eq = hw == 0 || std::memcmp(pa.data() + at, pb.data() + at, hw) == 0;
      bool w_eq = ww == 0 || std::memcmp(pa.data() + at + hw, pb.data() + at + hw, ww) == 0;
      if (h_eq && !w_eq) {
        who = u.id;
        return true;
      }
      at += hw + ww;
    }
    return false;
  };

  if (report.exhaustive) {
    const std::uint64_t v = *vcount;
    std::vector<std::uint8_t> profiles(v * profile_width);
    std::vector<std::uint8_t> reals(v * nk);
    DomainStream stream(p.field, nk, Exhaustive{settings.cap});
    for (std::uint64_t i = 0; i < v; ++i) {
      auto z = std::span(reals).subspan(i * nk, nk);
      stream.next(z);
      fill_profile(z, std::span(profiles).subspan(i * profile_width, profile_width));
    }
    for (std::uint64_t i = 0; i < v; ++i) {
      for (std::uint64_t j = i + 1; j < v; ++j) {
        std::string who;
        if (confusable_same_code(std::span(profiles).subspan(i * profile_width, profile_width),
                                 std::span(profiles).subspan(j * profile_width, profile_width),
                                 who)) {
          auto zi = std::span(reals).subspan(i * nk, nk);
          auto zj = std::span(reals).subspan(j * nk, nk);
          bag.add(who, SymbolVec(p.field, {zi.begin(), zi.end()}),
                  SymbolVec(p.field, {zj.begin(), zj.end()}),
                  SymbolVec(p.field,
                            {profiles.begin() + static_cast<std::ptrdiff_t>(i * profile_width),
                             profiles.begin() +
                                 static_cast<std::ptrdiff_t>(i * profile_width + c.length)}));
        }
      }
    }
    report.checked = pair_count;
  } else {
    Rng rng(settings.seed);
    std::vector<std::uint8_t> za(nk), zb(nk), pa(profile_width), pb(profile_width);
    std::uint64_t done = 0;
    for (std::uint64_t s = 0; s < settings.samples; ++s) {
      rng.fill(p.field, za);
      rng.fill(p.field, zb);
      if (za == zb) continue;
      ++done;
      fill_profile(za, pa);
      fill_profile(zb, pb);
      std::string who;
      if (confusable_same_code(pa, pb, who))
        bag.add(who, SymbolVec(p.field, za), SymbolVec(p.field, zb),
                SymbolVec(p.field, {pa.begin(), pa.begin() + static_cast<std::ptrdiff_t>(c.length)}));
    }
    report.checked = done;
  }

  report.witnesses = bag.take();
  report.verdict = bag.any() ? Verdict::Fail
                             : (report.exhaustive ? Verdict::Pass : Verdict::PassSampled);
  report.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
  return report;
}

// Broadcast-everything code: the encoder transmits all of Z and every
// decoder applies its client's wants to the received codeword.
inline FicCode broadcast_code(const FicProblem& p) {
  const BlockLayout zl = p.layout();
  FicCode code;
  code.length = zl.total_width();
  std::vector<Expr> all;
  for (const auto& b : zl.blocks()) all.push_back(proj(b.name));
  code.encoder = all.size() == 1 ? all[0] : concat(all);
  for (const auto& cl : p.clients) {
    std::vector<std::pair<std::string, Expr>> bind;
    for (const auto& b : zl.blocks())
      bind.emplace_back(b.name, proj(kCodewordBlock, b.offset, b.width));
    std::vector<Expr> ws = cl.want;
    code.decoders[cl.id] = compose(ws.size() == 1 ? ws[0] : concat(ws), std::move(bind));
  }
  return code;
}

}  // namespace netfic

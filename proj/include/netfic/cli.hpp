#pragma once

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "netfic/builtin.hpp"

namespace netfic {

// Exit codes: 0 pass, 1 fail (verification or validation findings),
// 2 usage / parse / infeasibility errors.
namespace cli_detail {

inline Instance load_instance(const std::string& ref) {
  if (ref.rfind("example:", 0) == 0) return builtin_example(ref.substr(8));
  std::ifstream in(ref);
  if (!in) throw Error(Errc::Parse, "cannot open '" + ref + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

inline std::uint64_t default_cap() {
  if (const char* env = std::getenv("NETFIC_CAP")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return kDefaultCap;
}

// Restriction point for `convert fic2nc`: "zeros", "ones", a base-q digit
// string of exactly `width` symbols, or (q = 2) a hex string of
// ceil(width/4) digits.
inline SymbolVec parse_restriction(const std::string& s, FieldSpec field, std::size_t width) {
  if (s == "zeros" || s.empty()) return SymbolVec::zeros(field, width);
  if (s == "ones") return SymbolVec::filled(field, width, static_cast<std::uint8_t>(1 % field.q() == 0 ? 0 : 1));
  std::string body = s.rfind("0x", 0) == 0 ? s.substr(2) : s;
  if (body.size() == width) {
    bool digits = true;
    std::vector<std::uint8_t> syms;
    for (char c : body) {
      if (c < '0' || c > '9' || static_cast<unsigned>(c - '0') >= field.q()) {
        digits = false;
        break;
      }
      syms.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    if (digits) return SymbolVec(field, std::move(syms));
  }
  if (field.q() == 2) return sv_from_hex(field, body, width, "--m");
  throw Error(Errc::Parse, "--m: expected 'zeros', 'ones', or " + std::to_string(width) +
                               " base-" + std::to_string(field.q()) + " digits");
}

inline void print_report(const VerifyReport& r, bool as_json, FieldSpec field,
                         std::ostream& out) {
  if (as_json) {
    out << report_to_json(r, field).dump(2) << "\n";
    return;
  }
  out << "verdict: " << verdict_name(r.verdict) << "\n";
  out << "mode: " << (r.exhaustive ? "exhaustive" : "sampled");
  if (r.seed) out << " (seed " << *r.seed << ")";
  out << "\nchecked: " << r.checked << "\n";
  out << "elapsed_ms: " << r.elapsed_ms << "\n";
  for (const auto& w : r.witnesses)
    out << "witness: subject=" << w.subject << " input=" << w.input.to_string()
        << " expected=" << w.expected.to_string() << " got=" << w.got.to_string() << "\n";
}

struct VerifyFlags {
  std::string mode = "auto";
  std::uint64_t cap = 0;
  std::uint64_t samples = kDefaultSamples;
  std::uint64_t seed = kDefaultSeed;

  VerifySettings settings() const {
    VerifySettings s;
    s.mode = mode == "exhaustive" ? VerifySettings::Mode::Exhaustive
             : mode == "sampled" ? VerifySettings::Mode::Sampled
                                 : VerifySettings::Mode::Auto;
    s.cap = cap ? cap : default_cap();
    s.samples = samples;
    s.seed = seed;
    return s;
  }

  void attach(CLI::App* cmd) {
    cmd->add_option("--mode", mode, "enumeration mode")
        ->check(CLI::IsMember({"auto", "exhaustive", "sampled"}));
    cmd->add_option("--cap", cap, "exhaustive enumeration cap");
    cmd->add_option("--samples", samples, "sample count for sampled mode");
    cmd->add_option("--seed", seed, "sampling seed");
  }
};

}  // namespace cli_detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using cli_detail::load_instance;

  CLI::App app{"finite-field workbench for in-network computation and broadcast coding problems"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "machine-readable output");

  std::string inst_ref, code_ref, m_arg;
  std::uint64_t len = 0;
  cli_detail::VerifyFlags vf;

  auto* c_validate = app.add_subcommand("validate", "check structural invariants");
  c_validate->add_option("instance", inst_ref)->required();

  auto* c_derive = app.add_subcommand("derive-global", "derive global kernels of an embedded code");
  c_derive->add_option("instance", inst_ref)->required();

  auto* c_verify = app.add_subcommand("verify", "verify an embedded code");
  c_verify->add_option("instance", inst_ref)->required();
  vf.attach(c_verify);

  auto* c_reduce = app.add_subcommand("reduce", "construct the companion problem");
  c_reduce->require_subcommand(1);
  auto* c_r_nc2fic = c_reduce->add_subcommand("nc2fic", "network problem -> index-coding problem");
  c_r_nc2fic->add_option("instance", inst_ref)->required();
  auto* c_r_fic2nc = c_reduce->add_subcommand("fic2nc", "index-coding problem -> bottleneck network");
  c_r_fic2nc->add_option("instance", inst_ref)->required();
  c_r_fic2nc->add_option("--len", len, "bottleneck capacity")->required();

  auto* c_convert = app.add_subcommand("convert", "convert a code across the construction");
  c_convert->require_subcommand(1);
  auto* c_c_nc2fic = c_convert->add_subcommand("nc2fic", "network code -> index code");
  c_c_nc2fic->add_option("instance", inst_ref)->required();
  auto* c_c_fic2nc = c_convert->add_subcommand("fic2nc", "index code -> network code");
  c_c_fic2nc->add_option("instance", inst_ref, "the original network problem")->required();
  c_c_fic2nc->add_option("--code", code_ref, "index-coding instance carrying the code")->required();
  c_c_fic2nc->add_option("--m", m_arg, "restriction codeword (zeros, ones, digits, or hex)");
  auto* c_c_gnc2fic = c_convert->add_subcommand("gadget-nc2fic", "bottleneck network code -> index code");
  c_c_gnc2fic->add_option("instance", inst_ref, "the original index-coding problem")->required();
  c_c_gnc2fic->add_option("--code", code_ref, "bottleneck-network instance carrying the code")->required();
  c_c_gnc2fic->add_option("--len", len, "bottleneck capacity")->required();
  auto* c_c_gfic2nc = c_convert->add_subcommand("gadget-fic2nc", "index code -> bottleneck network code");
  c_c_gfic2nc->add_option("instance", inst_ref)->required();

  auto* c_bounds = app.add_subcommand("bounds", "codeword-length bounds via confusion-graph coloring");
  c_bounds->add_option("instance", inst_ref)->required();
  std::uint64_t bounds_cap = 0;
  c_bounds->add_option("--cap", bounds_cap, "realization cap for graph construction");

  auto* c_example = app.add_subcommand("example", "emit a bundled instance");
  std::string example_name;
  c_example->add_option("name", example_name)->required()
      ->check(CLI::IsMember(builtin_names()));

  std::vector<const char*> argv;
  argv.push_back("netfic");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*c_example) {
      out << serialize_instance(builtin_example(example_name));
      return 0;
    }

    if (*c_validate) {
      Instance inst = load_instance(inst_ref);
      Findings f = std::holds_alternative<NetInstance>(inst)
                       ? validate_problem(std::get<NetInstance>(inst).problem)
                       : validate_fic(std::get<FicInstance>(inst).problem);
      if (as_json) {
        json arr = json::array();
        for (const auto& x : f) arr.push_back(json{{"rule", x.rule}, {"detail", x.detail}});
        out << json{{"findings", arr}}.dump(2) << "\n";
      } else if (f.empty()) {
        out << "ok\n";
      } else {
        for (const auto& x : f) out << x.rule << ": " << x.detail << "\n";
      }
      return f.empty() ? 0 : 1;
    }

    if (*c_derive) {
      Instance inst = load_instance(inst_ref);
      if (!std::holds_alternative<NetInstance>(inst))
        throw Error(Errc::Semantic, "derive-global needs a network instance");
      const auto& ni = std::get<NetInstance>(inst);
      if (!ni.code) throw Error(Errc::Semantic, "instance has no embedded code");
      auto globals = derive_global_kernels(ni.problem, *ni.code);
      json g = json::object();
      for (const auto& [id, f] : globals) g[id] = expr_to_json(f, ni.problem.field);
      out << json{{"globals", g}}.dump(2) << "\n";
      return 0;
    }

    if (*c_verify) {
      Instance inst = load_instance(inst_ref);
      VerifyReport report;
      FieldSpec field(2);
      if (std::holds_alternative<NetInstance>(inst)) {
        const auto& ni = std::get<NetInstance>(inst);
        if (!ni.code) throw Error(Errc::Semantic, "instance has no embedded code");
        field = ni.problem.field;
        report = verify_net_code(ni.problem, *ni.code, vf.settings());
      } else {
        const auto& fi = std::get<FicInstance>(inst);
        if (!fi.code) throw Error(Errc::Semantic, "instance has no embedded code");
        field = fi.problem.field;
        report = verify_fic_code(fi.problem, *fi.code, vf.settings());
      }
      cli_detail::print_report(report, as_json, field, out);
      return report.passed() ? 0 : 1;
    }

    if (*c_r_nc2fic) {
      Instance inst = load_instance(inst_ref);
      if (!std::holds_alternative<NetInstance>(inst))
        throw Error(Errc::Semantic, "reduce nc2fic needs a network instance");
      auto [fic, map] = nc_to_fic(std::get<NetInstance>(inst).problem);
      out << json{{"instance", instance_to_json(FicInstance{fic, std::nullopt})},
                  {"map", map_to_json(map)}}
                 .dump(2)
          << "\n";
      return 0;
    }

    if (*c_r_fic2nc) {
      Instance inst = load_instance(inst_ref);
      if (!std::holds_alternative<FicInstance>(inst))
        throw Error(Errc::Semantic, "reduce fic2nc needs an index-coding instance");
      auto [net, map] = fic_to_nc(std::get<FicInstance>(inst).problem, len);
      out << json{{"instance", instance_to_json(NetInstance{net, std::nullopt})},
                  {"map", map_to_json(map)}}
                 .dump(2)
          << "\n";
      return 0;
    }

    if (*c_c_nc2fic) {
      Instance inst = load_instance(inst_ref);
      if (!std::holds_alternative<NetInstance>(inst))
        throw Error(Errc::Semantic, "convert nc2fic needs a network instance");
      const auto& ni = std::get<NetInstance>(inst);
      if (!ni.code) throw Error(Errc::Semantic, "instance has no embedded code");
      auto [fic, map] = nc_to_fic(ni.problem);
      FicCode code = nc_code_to_fic_code(ni.problem, *ni.code, map);
      out << json{{"instance", instance_to_json(FicInstance{fic, code})},
                  {"map", map_to_json(map)}}
                 .dump(2)
          << "\n";
      return 0;
    }

    if (*c_c_fic2nc) {
      Instance inst = load_instance(inst_ref);
      if (!std::holds_alternative<NetInstance>(inst))
        throw Error(Errc::Semantic, "convert fic2nc needs the original network instance");
      const auto& ni = std::get<NetInstance>(inst);
      Instance codei = load_instance(code_ref);
      if (!std::holds_alternative<FicInstance>(codei) || !std::get<FicInstance>(codei).code)
        throw Error(Errc::Semantic, "--code must be an index-coding instance with a code");
      auto [fic, map] = nc_to_fic(ni.problem);
      SymbolVec m = cli_detail::parse_restriction(m_arg, ni.problem.field, map.codeword_width);
      NetCode code =
          fic_code_to_nc_code(ni.problem, *std::get<FicInstance>(codei).code, map, m);
      out << json{{"instance", instance_to_json(NetInstance{ni.problem, code})},
                  {"map", map_to_json(map)}}
                 .dump(2)
          << "\n";
      return 0;
    }

    if (*c_c_gnc2fic) {
      Instance inst = load_instance(inst_ref);
      if (!std::holds_alternative<FicInstance>(inst))
        throw Error(Errc::Semantic, "convert gadget-nc2fic needs the original index-coding instance");
      const auto& fi = std::get<FicInstance>(inst);
      Instance codei = load_instance(code_ref);
      if (!std::holds_alternative<NetInstance>(codei) || !std::get<NetInstance>(codei).code)
        throw Error(Errc::Semantic, "--code must be a network instance with a code");
      auto [net, map] = fic_to_nc(fi.problem, len);
      FicCode code = nc_code_to_fic_code_gadget(fi.problem, net,
                                                *std::get<NetInstance>(codei).code, map);
      out << json{{"instance", instance_to_json(FicInstance{fi.problem, code})},
                  {"map", map_to_json(map)}}
                 .dump(2)
          << "\n";
      return 0;
    }

    if (*c_c_gfic2nc) {
      Instance inst = load_instance(inst_ref);
      if (!std::holds_alternative<FicInstance>(inst))
        throw Error(Errc::Semantic, "convert gadget-fic2nc needs an index-coding instance");
      const auto& fi = std::get<FicInstance>(inst);
      if (!fi.code) throw Error(Errc::Semantic, "instance has no embedded code");
      auto [net, map] = fic_to_nc(fi.problem, fi.code->length);
      NetCode code = fic_code_to_nc_code_gadget(fi.problem, *fi.code, map);
      out << json{{"instance", instance_to_json(NetInstance{net, code})},
                  {"map", map_to_json(map)}}
                 .dump(2)
          << "\n";
      return 0;
    }

    if (*c_bounds) {
      Instance inst = load_instance(inst_ref);
      if (!std::holds_alternative<FicInstance>(inst))
        throw Error(Errc::Semantic, "bounds needs an index-coding instance");
      const auto& fi = std::get<FicInstance>(inst);
      std::uint64_t cap = bounds_cap ? bounds_cap : std::min<std::uint64_t>(
                                                        cli_detail::default_cap(), 4096);
      MinLengthBounds b = min_length_bounds(fi.problem, cap);
      if (as_json) {
        out << json{{"lower", b.lower},
                    {"upper", b.upper},
                    {"exact", b.exact},
                    {"colors", b.colors},
                    {"clique", b.clique_lb},
                    {"witness_code",
                     instance_to_json(FicInstance{fi.problem, b.witness})["code"]}}
                   .dump(2)
            << "\n";
      } else {
        out << "lower: " << b.lower << "\nupper: " << b.upper << "\n"
            << (b.exact ? "regime: exact coloring" : "regime: clique/greedy bounds") << " ("
            << b.colors << " colors, clique >= " << b.clique_lb << ")\n";
      }
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  err << "error: no subcommand\n";
  return 2;
}

}  // namespace netfic

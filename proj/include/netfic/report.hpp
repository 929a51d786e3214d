#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "netfic/enumerate.hpp"
#include "netfic/layout.hpp"

namespace netfic {

enum class Verdict { Pass, PassSampled, Fail };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::PassSampled: return "pass_sampled";
    case Verdict::Fail: return "fail";
  }
  return "?";
}

struct Witness {
  std::string subject;  // failing decoder / client / sink id
  SymbolVec input;      // realization that exposes the mismatch
  SymbolVec expected;
  SymbolVec got;
};

struct VerifyReport {
  Verdict verdict = Verdict::Pass;
  bool exhaustive = true;
  std::optional<std::uint64_t> seed;  // set for sampled runs
  std::uint64_t checked = 0;          // realizations (or pairs) enumerated
  std::vector<Witness> witnesses;
  std::int64_t elapsed_ms = 0;

  bool passed() const { return verdict != Verdict::Fail; }
};

// Enumeration policy shared by the verifiers. Auto enumerates exhaustively
// when the domain fits under `cap` and falls back to sampling otherwise
// (verdict then reports PassSampled).
struct VerifySettings {
  enum class Mode { Auto, Exhaustive, Sampled } mode = Mode::Auto;
  std::uint64_t cap = kDefaultCap;
  std::uint64_t samples = kDefaultSamples;
  std::uint64_t seed = kDefaultSeed;
  std::size_t witness_cap = 10;  // stored witnesses per subject

  // Resolves the mode for a domain of q^width realizations.
  // Throws CapExceeded when Exhaustive is requested but does not fit.
  EnumMode resolve(FieldSpec field, std::size_t width, bool& exhaustive) const {
    switch (mode) {
      case Mode::Exhaustive:
        if (!domain_fits(field, width, cap))
          throw Error(Errc::CapExceeded, "exhaustive enumeration of " +
                                             std::to_string(field.q()) + "^" +
                                             std::to_string(width) + " exceeds cap " +
                                             std::to_string(cap));
        exhaustive = true;
        return Exhaustive{cap};
      case Mode::Sampled:
        exhaustive = false;
        return Sampled{samples, seed};
      case Mode::Auto:
      default:
        exhaustive = domain_fits(field, width, cap);
        if (exhaustive) return Exhaustive{cap};
        return Sampled{samples, seed};
    }
  }
};

namespace detail {

// Collects witnesses with a per-subject cap, then emits them sorted by
// realization (then subject) so reports are order-independent.
class WitnessBag {
 public:
  explicit WitnessBag(std::size_t per_subject_cap) : cap_(per_subject_cap) {}

  void add(const std::string& subject, SymbolVec input, SymbolVec expected, SymbolVec got) {
    any_ = true;
    auto& n = per_subject_[subject];
    if (n >= cap_) return;
    ++n;
    items_.push_back({subject, std::move(input), std::move(expected), std::move(got)});
  }

  bool any() const { return any_; }

  std::vector<Witness> take() {
    std::sort(items_.begin(), items_.end(), [](const Witness& a, const Witness& b) {
      if (a.input != b.input) return a.input < b.input;
      return a.subject < b.subject;
    });
    return std::move(items_);
  }

 private:
  std::size_t cap_;
  bool any_ = false;
  std::vector<Witness> items_;
  std::map<std::string, std::size_t> per_subject_;
};

}  // namespace detail
}  // namespace netfic

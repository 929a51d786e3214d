#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "netfic/layout.hpp"

namespace netfic {

inline constexpr std::uint64_t kDefaultCap = std::uint64_t{1} << 24;
inline constexpr std::uint64_t kDefaultSamples = 1'000'000;
inline constexpr std::uint64_t kDefaultSeed = 1;

// q^width, or nullopt once it stops fitting in 63 bits.
inline std::optional<std::uint64_t> domain_size(FieldSpec field, std::size_t width) {
  std::uint64_t n = 1;
  for (std::size_t i = 0; i < width; ++i) {
    if (n > (std::uint64_t{1} << 62) / field.q()) return std::nullopt;
    n *= field.q();
  }
  return n;
}

inline bool domain_fits(FieldSpec field, std::size_t width, std::uint64_t cap) {
  auto n = domain_size(field, width);
  return n.has_value() && *n <= cap;
}

// Deterministic generator (splitmix64); used for all sampling so reports
// reproduce exactly for a given seed regardless of platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t below(std::uint64_t n) {  // uniform in [0, n)
    std::uint64_t t = (0 - n) % n;
    std::uint64_t v;
    do {
      v = next();
    } while (v < t);
    return v % n;
  }

  std::uint8_t symbol(FieldSpec field) {
    const unsigned q = field.q();
    const unsigned lim = 256 - (256 % q);
    for (;;) {
      if (pool_left_ == 0) {
        pool_ = next();
        pool_left_ = 8;
      }
      unsigned b = pool_ & 0xff;
      pool_ >>= 8;
      --pool_left_;
      if (b < lim) return static_cast<std::uint8_t>(b % q);
    }
  }

  void fill(FieldSpec field, std::span<std::uint8_t> out) {
    for (auto& s : out) s = symbol(field);
  }

 private:
  std::uint64_t state_;
  std::uint64_t pool_ = 0;
  unsigned pool_left_ = 0;
};

struct Exhaustive {
  std::uint64_t cap = kDefaultCap;
};
struct Sampled {
  std::uint64_t count = kDefaultSamples;
  std::uint64_t seed = kDefaultSeed;
};
using EnumMode = std::variant<Exhaustive, Sampled>;

// Streams realizations of F_q^width. Exhaustive mode yields each vector
// exactly once in lexicographic order (last symbol fastest); sampled mode
// yields `count` vectors reproducibly from the seed.
class DomainStream {
 public:
  DomainStream(FieldSpec field, std::size_t width, EnumMode mode)
      : field_(field), width_(width), rng_(0) {
    if (std::holds_alternative<Exhaustive>(mode)) {
      auto total = domain_size(field, width);
      std::uint64_t cap = std::get<Exhaustive>(mode).cap;
      if (!total || *total > cap)
        throw Error(Errc::CapExceeded,
                    "exhaustive enumeration of " + std::to_string(field.q()) + "^" +
                        std::to_string(width) + " realizations exceeds cap " + std::to_string(cap));
      exhaustive_ = true;
      remaining_ = *total;
    } else {
      const auto& s = std::get<Sampled>(mode);
      exhaustive_ = false;
      remaining_ = width == 0 ? std::min<std::uint64_t>(s.count, 1) : s.count;
      rng_ = Rng(s.seed);
    }
    current_.assign(width, 0);
    fresh_ = true;
  }

  std::size_t width() const { return width_; }
  std::uint64_t yielded() const { return yielded_; }

  // Fills `out` with the next realization; false when the stream is done.
  bool next(std::span<std::uint8_t> out) {
    if (remaining_ == 0) return false;
    if (exhaustive_) {
      if (!fresh_) {
        // odometer increment, last symbol fastest
        std::size_t i = width_;
        while (i > 0) {
          --i;
          if (++current_[i] < field_.q()) break;
          current_[i] = 0;
        }
      }
      fresh_ = false;
      std::copy(current_.begin(), current_.end(), out.begin());
    } else {
      rng_.fill(field_, out);
    }
    --remaining_;
    ++yielded_;
    return true;
  }

 private:
  FieldSpec field_;
  std::size_t width_;
  bool exhaustive_ = true;
  bool fresh_ = true;
  std::uint64_t remaining_ = 0;
  std::uint64_t yielded_ = 0;
  std::vector<std::uint8_t> current_;
  Rng rng_;
};

inline DomainStream enumerate_domain(const BlockLayout& layout, FieldSpec field, EnumMode mode) {
  return DomainStream(field, layout.total_width(), mode);
}

}  // namespace netfic

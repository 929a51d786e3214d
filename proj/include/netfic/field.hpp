#pragma once

#include <cstdint>
#include <string>

#include "netfic/error.hpp"

namespace netfic {

// Prime field F_q, 2 <= q <= 251. Symbols are stored as uint8_t < q.
class FieldSpec {
 public:
  explicit FieldSpec(unsigned q) : q_(static_cast<std::uint16_t>(q)) {
    if (q < 2 || q > 251 || !is_prime(q))
      throw Error(Errc::NotPrime, "q = " + std::to_string(q) + " is not a prime in [2, 251]");
  }

  std::uint16_t q() const { return q_; }

  std::uint8_t add(std::uint8_t a, std::uint8_t b) const {
    std::uint16_t s = static_cast<std::uint16_t>(a + b);
    return static_cast<std::uint8_t>(s >= q_ ? s - q_ : s);
  }
  std::uint8_t neg(std::uint8_t a) const {
    return static_cast<std::uint8_t>(a == 0 ? 0 : q_ - a);
  }
  std::uint8_t sub(std::uint8_t a, std::uint8_t b) const { return add(a, neg(b)); }
  std::uint8_t mul(std::uint8_t a, std::uint8_t b) const {
    return static_cast<std::uint8_t>((a * b) % q_);
  }

  bool operator==(const FieldSpec& o) const { return q_ == o.q_; }
  bool operator!=(const FieldSpec& o) const { return q_ != o.q_; }

  static bool is_prime(unsigned n) {
    if (n < 2) return false;
    for (unsigned d = 2; d * d <= n; ++d)
      if (n % d == 0) return false;
    return true;
  }

 private:
  std::uint16_t q_;
};

}  // namespace netfic

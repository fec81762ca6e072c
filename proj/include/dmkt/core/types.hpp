#pragma once

#include <cmath>
#include <compare>
#include <initializer_list>
#include <cstdint>
#include <string>
#include <string_view>

namespace dmkt {

// Discrete simulation clock. One tick is read as one day where a calendar
// conversion is needed (license lifespans in pricing).
using Tick = std::int64_t;

using MemberId = std::string;
using ListingId = std::string;
using TxnId = std::string;
using LicenseId = std::string;

enum class Role : unsigned { Seller = 1u, Buyer = 2u };

class RoleSet {
 public:
  constexpr RoleSet() = default;
  constexpr RoleSet(std::initializer_list<Role> roles) {
    for (Role r : roles) bits_ |= static_cast<unsigned>(r);
  }

  constexpr RoleSet with(Role r) const noexcept {
    RoleSet out = *this;
    out.bits_ |= static_cast<unsigned>(r);
    return out;
  }

  constexpr bool has(Role r) const noexcept { return bits_ & static_cast<unsigned>(r); }
  constexpr bool empty() const noexcept { return bits_ == 0; }
  constexpr unsigned bits() const noexcept { return bits_; }

  friend constexpr bool operator==(RoleSet, RoleSet) = default;

 private:
  unsigned bits_ = 0;
};

enum class SubsamplePrivilege { Active, Suspended };

std::string_view to_string(SubsamplePrivilege p) noexcept;

struct Member {
  MemberId member_id;
  RoleSet roles;
  Tick joined_at = 0;
  SubsamplePrivilege subsample_privilege = SubsamplePrivilege::Active;
  bool expelled = false;
};

// Currency in integer micro-units so escrow flows add up exactly.
class Money {
 public:
  constexpr Money() = default;

  static constexpr Money from_micros(std::int64_t micros) { return Money(micros); }
  static Money from_units(double units) { return Money(std::llround(units * 1e6)); }

  constexpr std::int64_t micros() const noexcept { return micros_; }
  constexpr double units() const noexcept { return static_cast<double>(micros_) / 1e6; }

  constexpr Money& operator+=(Money o) noexcept { micros_ += o.micros_; return *this; }
  constexpr Money& operator-=(Money o) noexcept { micros_ -= o.micros_; return *this; }
  friend constexpr Money operator+(Money a, Money b) noexcept { return a += b; }
  friend constexpr Money operator-(Money a, Money b) noexcept { return a -= b; }
  friend constexpr auto operator<=>(Money, Money) = default;

 private:
  constexpr explicit Money(std::int64_t micros) : micros_(micros) {}
  std::int64_t micros_ = 0;
};

}  // namespace dmkt

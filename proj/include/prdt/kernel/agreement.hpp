#pragma once

#include <optional>
#include <ostream>
#include <stdexcept>
#include <string_view>

#include <json.hpp>

namespace prdt {

enum class AgreementKind { undecided, decided, invalid };

constexpr std::string_view to_string(AgreementKind k) {
  switch (k) {
    case AgreementKind::undecided: return "undecided";
    case AgreementKind::decided: return "decided";
    case AgreementKind::invalid: return "invalid";
  }
  return "?";
}

// The agreement lattice: Undecided < Decided(v) < Invalid, with distinct
// decisions pairwise incomparable. Default-constructed value is Undecided.
template <class A>
class Agreement {
 public:
  Agreement() = default;

  static Agreement undecided() { return Agreement{}; }
  static Agreement decided(A value) { return Agreement{AgreementKind::decided, std::move(value)}; }
  static Agreement invalid() { return Agreement{AgreementKind::invalid, std::nullopt}; }

  AgreementKind kind() const { return kind_; }
  bool is_undecided() const { return kind_ == AgreementKind::undecided; }
  bool is_decided() const { return kind_ == AgreementKind::decided; }
  bool is_invalid() const { return kind_ == AgreementKind::invalid; }

  const A& value() const {
    if (!value_) throw std::logic_error("agreement has no decided value");
    return *value_;
  }
  const std::optional<A>& maybe_value() const { return value_; }

  friend bool operator==(const Agreement&, const Agreement&) = default;

  friend Agreement join(const Agreement& x, const Agreement& y) {
    if (x.is_invalid() || y.is_undecided()) return x;
    if (y.is_invalid() || x.is_undecided()) return y;
    return *x.value_ == *y.value_ ? x : invalid();
  }

  // Makes Agreement usable wherever a Semilattice is expected.
  friend Agreement merge(const Agreement& x, const Agreement& y) { return join(x, y); }

  friend bool agreement_leq(const Agreement& x, const Agreement& y) {
    if (x.is_undecided() || y.is_invalid()) return true;
    if (x.is_invalid() || y.is_undecided()) return false;
    return *x.value_ == *y.value_;
  }

  friend std::ostream& operator<<(std::ostream& os, const Agreement& a)
    requires requires(std::ostream& o, const A& v) { o << v; }
  {
    os << to_string(a.kind_);
    if (a.value_) os << '(' << *a.value_ << ')';
    return os;
  }

 private:
  Agreement(AgreementKind kind, std::optional<A> value) : kind_(kind), value_(std::move(value)) {}

  AgreementKind kind_ = AgreementKind::undecided;
  std::optional<A> value_;
};

template <class A>
void to_json(nlohmann::json& j, const Agreement<A>& a) {
  j = nlohmann::json{{"kind", std::string(to_string(a.kind()))}};
  if (a.is_decided()) j["value"] = a.value();
}

template <class A>
void from_json(const nlohmann::json& j, Agreement<A>& a) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "undecided") {
    a = Agreement<A>::undecided();
  } else if (kind == "invalid") {
    a = Agreement<A>::invalid();
  } else if (kind == "decided") {
    a = Agreement<A>::decided(j.at("value").get<A>());
  } else {
    throw std::invalid_argument("unknown agreement kind: " + kind);
  }
}

}  // namespace prdt

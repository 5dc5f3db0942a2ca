#pragma once

#include <cstdint>

#include <json.hpp>

#include "prdt/lattice/lattice.hpp"

namespace prdt {

// Counter-tagged wrapper: the operand with the larger counter wins outright,
// equal counters merge their inner values.
template <Semilattice V>
struct Epoch {
  std::uint64_t counter = 0;
  V value{};

  friend Epoch merge(const Epoch& a, const Epoch& b) {
    if (a.counter > b.counter) return a;
    if (b.counter > a.counter) return b;
    return Epoch{a.counter, merge(a.value, b.value)};
  }

  friend bool operator==(const Epoch&, const Epoch&) = default;
};

template <class V>
void to_json(nlohmann::json& j, const Epoch<V>& e) {
  j = nlohmann::json{{"counter", e.counter}, {"value", e.value}};
}

template <class V>
void from_json(const nlohmann::json& j, Epoch<V>& e) {
  j.at("counter").get_to(e.counter);
  j.at("value").get_to(e.value);
}

}  // namespace prdt

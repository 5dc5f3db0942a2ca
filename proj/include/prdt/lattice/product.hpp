#pragma once

#include <tuple>
#include <utility>

#include <json.hpp>

#include "prdt/lattice/lattice.hpp"

namespace prdt {

// Anonymous product of lattices (a tuple). Named records use merge_fields.
template <Semilattice... Ts>
struct Product {
  std::tuple<Ts...> parts;

  Product() = default;
  explicit Product(Ts... values) : parts(std::move(values)...) {}

  template <std::size_t I>
  const auto& get() const {
    return std::get<I>(parts);
  }

  friend Product merge(const Product& a, const Product& b) {
    return merge_parts(a, b, std::index_sequence_for<Ts...>{});
  }

  friend bool operator==(const Product&, const Product&) = default;

 private:
  template <std::size_t... I>
  static Product merge_parts(const Product& a, const Product& b, std::index_sequence<I...>) {
    Product out;
    out.parts = std::tuple<Ts...>(merge(std::get<I>(a.parts), std::get<I>(b.parts))...);
    return out;
  }
};

template <class... Ts>
void to_json(nlohmann::json& j, const Product<Ts...>& p) {
  j = nlohmann::json::array();
  std::apply([&j](const auto&... part) { (j.push_back(part), ...); }, p.parts);
}

template <class... Ts>
void from_json(const nlohmann::json& j, Product<Ts...>& p) {
  std::size_t i = 0;
  std::apply([&](auto&... part) { ((j.at(i++).get_to(part)), ...); }, p.parts);
}

}  // namespace prdt

#pragma once

#include <compare>
#include <initializer_list>
#include <set>

#include <json.hpp>

#include "prdt/lattice/lattice.hpp"

namespace prdt {

// Grow-only set; merge is union.
template <class E>
struct GrowSet {
  std::set<E> elements;

  GrowSet() = default;
  GrowSet(std::initializer_list<E> init) : elements(init) {}
  explicit GrowSet(std::set<E> init) : elements(std::move(init)) {}

  bool contains(const E& e) const { return elements.contains(e); }
  std::size_t size() const { return elements.size(); }
  bool empty() const { return elements.empty(); }
  auto begin() const { return elements.begin(); }
  auto end() const { return elements.end(); }

  friend GrowSet merge(const GrowSet& a, const GrowSet& b) {
    if (a.elements.size() < b.elements.size()) return merge(b, a);
    GrowSet out = a;
    out.elements.insert(b.elements.begin(), b.elements.end());
    return out;
  }

  friend bool operator==(const GrowSet&, const GrowSet&) = default;
  friend auto operator<=>(const GrowSet&, const GrowSet&) = default;
};

template <class E>
void to_json(nlohmann::json& j, const GrowSet<E>& s) {
  j = nlohmann::json::array();
  for (const auto& e : s.elements) j.push_back(e);
}

template <class E>
void from_json(const nlohmann::json& j, GrowSet<E>& s) {
  s.elements.clear();
  for (const auto& e : j) s.elements.insert(e.template get<E>());
}

}  // namespace prdt

#pragma once

#include <algorithm>
#include <initializer_list>
#include <vector>

#include <json.hpp>

#include "prdt/lattice/lattice.hpp"

namespace prdt {

// Index-wise merge; the longer list's tail is kept.
template <Semilattice V>
struct MergeList {
  std::vector<V> items;

  MergeList() = default;
  MergeList(std::initializer_list<V> init) : items(init) {}
  explicit MergeList(std::vector<V> init) : items(std::move(init)) {}

  std::size_t size() const { return items.size(); }
  bool empty() const { return items.empty(); }
  const V& operator[](std::size_t i) const { return items[i]; }
  auto begin() const { return items.begin(); }
  auto end() const { return items.end(); }

  // A delta touching only index `i`; earlier positions are bottom.
  static MergeList at(std::size_t i, V value) {
    MergeList out;
    out.items.resize(i + 1);
    out.items[i] = std::move(value);
    return out;
  }

  friend MergeList merge(const MergeList& a, const MergeList& b) {
    const auto& longer = a.items.size() >= b.items.size() ? a : b;
    const auto& shorter = a.items.size() >= b.items.size() ? b : a;
    MergeList out = longer;
    for (std::size_t i = 0; i < shorter.items.size(); ++i) {
      out.items[i] = merge(out.items[i], shorter.items[i]);
    }
    return out;
  }

  friend bool operator==(const MergeList&, const MergeList&) = default;
};

template <class V>
void to_json(nlohmann::json& j, const MergeList<V>& l) {
  j = nlohmann::json::array();
  for (const auto& v : l.items) j.push_back(v);
}

template <class V>
void from_json(const nlohmann::json& j, MergeList<V>& l) {
  l.items.clear();
  for (const auto& v : j) l.items.push_back(v.template get<V>());
}

}  // namespace prdt

#pragma once

#include <map>

#include <json.hpp>

#include "prdt/lattice/lattice.hpp"

namespace prdt {

// Map whose values are lattices. Keys present on one side only are kept;
// shared keys merge their values. Bottom-valued entries are never pruned.
template <class K, Semilattice V>
struct MergeMap {
  std::map<K, V> entries;

  const V* find(const K& key) const {
    auto it = entries.find(key);
    return it == entries.end() ? nullptr : &it->second;
  }
  bool contains(const K& key) const { return entries.contains(key); }
  std::size_t size() const { return entries.size(); }
  bool empty() const { return entries.empty(); }
  auto begin() const { return entries.begin(); }
  auto end() const { return entries.end(); }

  static MergeMap singleton(K key, V value) {
    MergeMap m;
    m.entries.emplace(std::move(key), std::move(value));
    return m;
  }

  friend MergeMap merge(const MergeMap& a, const MergeMap& b) {
    if (a.entries.size() < b.entries.size()) return merge(b, a);
    MergeMap out = a;
    for (const auto& [key, value] : b.entries) {
      auto [it, inserted] = out.entries.try_emplace(key, value);
      if (!inserted) it->second = merge(it->second, value);
    }
    return out;
  }

  friend bool operator==(const MergeMap&, const MergeMap&) = default;
};

// Keys are not necessarily strings, so the canonical form is an array of
// [key, value] pairs in key order.
template <class K, class V>
void to_json(nlohmann::json& j, const MergeMap<K, V>& m) {
  j = nlohmann::json::array();
  for (const auto& [key, value] : m.entries) j.push_back(nlohmann::json::array({key, value}));
}

template <class K, class V>
void from_json(const nlohmann::json& j, MergeMap<K, V>& m) {
  m.entries.clear();
  for (const auto& pair : j) {
    if (!pair.is_array() || pair.size() != 2) throw nlohmann::json::type_error::create(302, "map entry must be [key, value]", &pair);
    m.entries.emplace(pair[0].template get<K>(), pair[1].template get<V>());
  }
}

}  // namespace prdt

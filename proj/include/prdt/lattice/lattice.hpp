#pragma once

#include <concepts>
#include <utility>

namespace prdt {

// A join-semilattice value. The default-constructed value is bottom and
// `merge` (found by ADL) is the join. Equality is structural.
template <class T>
concept Semilattice = std::regular<T> && requires(const T& a, const T& b) {
  { merge(a, b) } -> std::same_as<T>;
};

template <Semilattice T>
T bottom() {
  return T{};
}

template <Semilattice T>
bool is_bottom(const T& value) {
  return value == T{};
}

template <Semilattice T>
bool leq(const T& a, const T& b) {
  return merge(a, b) == b;
}

// Component-wise join for record types; a record lists its lattice fields
// once and gets the derived merge:
//
//   friend Round merge(const Round& a, const Round& b) {
//     return merge_fields<&Round::left, &Round::right>(a, b);
//   }
template <auto... Fields, class T>
T merge_fields(const T& a, const T& b) {
  T out;
  ((out.*Fields = merge(a.*Fields, b.*Fields)), ...);
  return out;
}

// The state after merging `delta` in, plus the delta itself so the caller can
// disseminate exactly what was produced.
template <Semilattice S>
struct Applied {
  S delta;
  S state;

  bool changed(const S& before) const { return !(state == before); }
};

template <Semilattice S>
Applied<S> apply_delta(const S& state, S delta) {
  S next = merge(state, delta);
  return Applied<S>{std::move(delta), std::move(next)};
}

}  // namespace prdt

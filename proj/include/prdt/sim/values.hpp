#pragma once

#include <string>
#include <utility>

#include "prdt/kernel/replica.hpp"

namespace prdt::sim {

// Turns a value-pool entry into a protocol value.
template <class A>
struct ValueParser;

template <>
struct ValueParser<std::string> {
  static std::string parse(const std::string& s) { return s; }
};

template <>
struct ValueParser<int> {
  static int parse(const std::string& s) { return std::stoi(s); }
};

template <>
struct ValueParser<ReplicaId> {
  static ReplicaId parse(const std::string& s) { return ReplicaId{s}; }
};

// Both components get the same pool entry.
template <class A, class B>
struct ValueParser<std::pair<A, B>> {
  static std::pair<A, B> parse(const std::string& s) { return {ValueParser<A>::parse(s), ValueParser<B>::parse(s)}; }
};

}  // namespace prdt::sim

// Copyright 2026 The pvm Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <complex>
#include <string_view>

#include "pvm/fock/state.hpp"

namespace pvm {

/// The eleven pointer moments used throughout: <a>, <b>, <a^2>, <b^2>,
/// <a†a>, <b†b>, <a†b>, <ab>, <a†a b†b>, <a†^2 a^2>, <b†^2 b^2>.
struct ExpectationSet {
  cplx a, b, a2, b2, adag_a, bdag_b, adag_b, ab, adaga_bdagb, adag2a2, bdag2b2;

  static constexpr std::size_t size = 11;
  static constexpr std::array<std::string_view, size> names = {
      "a",      "b",      "a2", "b2",          "adag_a",  "bdag_b",
      "adag_b", "ab",     "adaga_bdagb",       "adag2a2", "bdag2b2"};

  std::array<cplx, size> values() const {
    return {a, b, a2, b2, adag_a, bdag_b, adag_b, ab, adaga_bdagb, adag2a2, bdag2b2};
  }

  /// visitor(name, value) for each moment, in the order of `names`.
  template <class F>
  void for_each(F&& visitor) const {
    const auto v = values();
    for (std::size_t i = 0; i < size; ++i) visitor(names[i], v[i]);
  }
};

namespace fock {

/// <s|O|s> for the eleven moments, without dividing by <s|s>.
inline ExpectationSet state_moments(const TwoModeState& s) {
  using L = Ladder;
  auto ev = [&](std::initializer_list<Ladder> ops) { return inner(s, apply_word(s, ops)); };
  ExpectationSet e{};
  e.a = ev({L::a});
  e.b = ev({L::b});
  e.a2 = ev({L::a, L::a});
  e.b2 = ev({L::b, L::b});
  e.adag_a = ev({L::a_dag, L::a});
  e.bdag_b = ev({L::b_dag, L::b});
  e.adag_b = ev({L::a_dag, L::b});
  e.ab = ev({L::a, L::b});
  e.adaga_bdagb = ev({L::a_dag, L::a, L::b_dag, L::b});
  e.adag2a2 = ev({L::a_dag, L::a_dag, L::a, L::a});
  e.bdag2b2 = ev({L::b_dag, L::b_dag, L::b, L::b});
  return e;
}

}  // namespace fock
}  // namespace pvm

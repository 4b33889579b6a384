#pragma once
// Shared helpers for the unit test binaries.

#include <gmpxx.h>

#include <vector>

#include "tmodel/abgroup.hpp"

namespace testutil {

inline tmodel::Vec V(std::initializer_list<long> xs) {
  tmodel::Vec v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

inline tmodel::AbGroup Zmod(long n) {
  tmodel::Ring z;
  return tmodel::AbGroup::from_invariants(z, n == 0 ? tmodel::Vec{} : V({n}), n == 0 ? 1 : 0);
}

}  // namespace testutil

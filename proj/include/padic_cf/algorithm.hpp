#pragma once

#include <string>
#include <string_view>

#include "padic_cf/hensel_dynamics.hpp"

namespace padic_cf {

enum class AlgorithmId { A, B, C, Schneider };

inline const char* to_string(AlgorithmId a) {
  switch (a) {
    case AlgorithmId::A: return "A";
    case AlgorithmId::B: return "B";
    case AlgorithmId::C: return "C";
    case AlgorithmId::Schneider: return "schneider";
  }
  return "?";
}

inline AlgorithmId parse_algorithm(std::string_view text) {
  if (text == "A" || text == "a") return AlgorithmId::A;
  if (text == "B" || text == "b") return AlgorithmId::B;
  if (text == "C" || text == "c") return AlgorithmId::C;
  if (text == "schneider" || text == "Schneider") return AlgorithmId::Schneider;
  throw InvalidAlgorithm("unknown algorithm '" + std::string(text) + "'");
}

/// The map applied by an algorithm to an element whose minimal polynomial has
/// linear coefficient b and constant term c (degree 1 or 2 alike).
///   A: always T2
///   B: T2 if b >= 0, else T1
///   C: T2 if b >= 0 and c > 0, else T1
inline MapChoice choose_map(AlgorithmId algorithm, const Integer& b, const Integer& c) {
  switch (algorithm) {
    case AlgorithmId::A: return MapChoice::T2;
    case AlgorithmId::B: return b >= 0 ? MapChoice::T2 : MapChoice::T1;
    case AlgorithmId::C: return (b >= 0 && c > 0) ? MapChoice::T2 : MapChoice::T1;
    case AlgorithmId::Schneider: break;
  }
  throw InvalidAlgorithm("Schneider's algorithm has no T1/T2 dispatch");
}

}  // namespace padic_cf

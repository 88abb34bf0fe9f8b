#pragma once

// Shared fixture builders for the test binaries.

#include <string>
#include <vector>

#include "sphericity/context.hpp"

namespace sphericity::testsupport {

// Basis of the space of matrices that vanish outside the strictly upper
// block-triangular part for the given composition (the nilradical of P).
inline std::vector<MatQ> nilradical_basis(const Composition& comp) {
  const int n = comp.n();
  std::vector<int> block_of(n);
  int idx = 0;
  for (std::size_t b = 0; b < comp.blocks().size(); ++b)
    for (int k = 0; k < comp.blocks()[b]; ++k) block_of[idx++] = static_cast<int>(b);
  std::vector<MatQ> out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (block_of[i] < block_of[j]) out.push_back(unit_matrix(n, i, j));
  return out;
}

// Full parabolic subalgebra basis (block upper triangular, diagonal included).
inline std::vector<MatQ> parabolic_basis(const Composition& comp) {
  const int n = comp.n();
  std::vector<int> block_of(n);
  int idx = 0;
  for (std::size_t b = 0; b < comp.blocks().size(); ++b)
    for (int k = 0; k < comp.blocks()[b]; ++k) block_of[idx++] = static_cast<int>(b);
  std::vector<MatQ> out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (block_of[i] <= block_of[j]) out.push_back(unit_matrix(n, i, j));
  return out;
}

inline AlgebraContext borel_context(int n, std::string name = "borel") {
  ContextInput in;
  in.n = n;
  in.name = std::move(name);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) in.h_basis.push_back(unit_matrix(n, i, j));
  in.chi.assign(in.h_basis.size(), Rational(0));
  in.parabolic = Composition(std::vector<int>(n, 1));
  return AlgebraContext(std::move(in));
}

inline AlgebraContext torus_context(int n, std::vector<Rational> chi,
                                    std::string name = "torus") {
  ContextInput in;
  in.n = n;
  in.name = std::move(name);
  for (int i = 0; i < n; ++i) in.h_basis.push_back(unit_matrix(n, i, i));
  in.chi = std::move(chi);
  in.parabolic = Composition(std::vector<int>(n, 1));
  return AlgebraContext(std::move(in));
}

// h = p itself with chi = 0: the slice is the nilradical u = p⊥.
inline AlgebraContext parabolic_self_context(const Composition& comp) {
  ContextInput in;
  in.n = comp.n();
  in.name = "p-self " + comp.to_string();
  in.h_basis = parabolic_basis(comp);
  in.chi.assign(in.h_basis.size(), Rational(0));
  in.parabolic = comp;
  return AlgebraContext(std::move(in));
}

}  // namespace sphericity::testsupport

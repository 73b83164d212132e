#pragma once

#include <span>

#include "mixint/integrator.hpp"
#include "mixint/model.hpp"

namespace mixint {

/// Hard limits on the brute-force enumerations. These reference
/// implementations exist to cross-check the fast algorithms at small sizes.
struct OracleBudget {
  long max_sample = 20;                 // N for the {0,1}^N scan
  long max_enumeration = 50'000'000;    // prod (U_v + 1) for the D(U) scan
  long max_box = 1'000'000;             // bounding-box volume for lattice scans
};

/// Marginal likelihood integral by direct expansion: enumerate every
/// x in D(U) = prod [0, U_v], integrate each monomial over the simplices
/// term by term. No coefficient tables, no zonotopes.
Rat brute_force_integral(const ExponentMatrix& A, const DataVector& U,
                         const PriorSpec& prior = {}, const OracleBudget& budget = {});

/// phi_A(b, U) as the count #{z in {0,1}^N : A^U z = b} over the extended
/// matrix with column v repeated U_v times.
Int brute_force_phi(const ExponentMatrix& A, const DataVector& U,
                    std::span<const long> b, const OracleBudget& budget = {});

/// Lattice points of the zonotope Z_A(U): scan the integer bounding box,
/// keep points in the image lattice (Hermite solve) whose fiber
/// {Ax = b, 0 <= x <= U} is feasible over the rationals.
Int brute_force_lattice_points(const ExponentMatrix& A, const DataVector& U,
                               const OracleBudget& budget = {});

}  // namespace mixint

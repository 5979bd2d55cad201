#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ltrace/symbol.hpp"

namespace ltrace {

/// Built-in operators:
///   gradient                 D on scalars, any n
///   higher_gradient          D^k on scalars, any n, k >= 1
///   laplacian                -Delta on scalars, any n (k = 2)
///   wirtinger                d/dz-bar = (d1 + i d2)/2 on R^2 = C, written as a real 2x2 symbol
///   divcurl                  (div u, (d_i u_j - d_j u_i)_{i<j}) on vector fields, n >= 2
///   sym_gradient             (Du + Du^T)/2, symmetric matrices in upper-triangle storage
///   tracefree_sym_gradient   sym_gradient - (div u / n) Id
///   escnotcell               D^{k-1}(d1 u1 + d2 u2, d2 u1 - d1 u2, d_i u_j for (i,j) not both in {1,2})
///
/// Throws DomainError for unknown names or unsupported (name, n, k, N).
HomogeneousSymbol catalog(const std::string& name, int n, std::optional<int> k = std::nullopt,
                          std::optional<int> components = std::nullopt);

const std::vector<std::string>& catalog_names();

}  // namespace ltrace

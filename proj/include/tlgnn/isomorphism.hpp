#pragma once

#include "tlgnn/graph.hpp"

namespace tlgnn {

// Exact feature-respecting isomorphism test by backtracking search.
// Both graphs must have at most 16 nodes; throws BudgetError otherwise.
bool is_isomorphic_small(const Graph& a, const Graph& b);

}  // namespace tlgnn

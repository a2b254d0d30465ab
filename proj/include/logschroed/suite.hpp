#pragma once

#include <memory>
#include <string>
#include <vector>

#include "logschroed/shooting.hpp"
#include "logschroed/variational.hpp"

namespace logschroed {

/// A model with a single decaying solution inside its scan window.
struct SuiteEntry {
    std::string name;
    RadialModel model;
    double beta_lo = 0.5, beta_hi = 50.0;
    int points = 32;
};

/// Gausson N = 3 and N = 4, and V = a log r at N = 3 for a in {-1.5, 1, 3}.
std::vector<SuiteEntry> builtin_suite();

struct SuiteSolution {
    RootInfo root;
    std::shared_ptr<const RadialSolution> solution;
    RadialFunction f;
};

/// Throws SolverError unless the scan finds exactly one decaying solution.
SuiteSolution solve_entry(const SuiteEntry& e, const ShootingOptions& opts);

}  // namespace logschroed

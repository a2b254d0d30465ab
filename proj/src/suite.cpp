#include "logschroed/suite.hpp"

#include <sstream>

#include "logschroed/errors.hpp"

namespace logschroed {

std::vector<SuiteEntry> builtin_suite() {
    std::vector<SuiteEntry> s;
    s.push_back({"gausson-N3", RadialModel::logarithmic(Potential::constant(3, 0.0))});
    s.push_back({"gausson-N4", RadialModel::logarithmic(Potential::constant(4, 0.0))});
    for (double a : {-1.5, 1.0, 3.0}) {
        std::ostringstream name;
        name << "log-r-a" << a;
        s.push_back({name.str(), RadialModel::logarithmic(Potential::log_power(3, a))});
    }
    return s;
}

SuiteSolution solve_entry(const SuiteEntry& e, const ShootingOptions& opts) {
    const auto res = shoot(e.model, e.beta_lo, e.beta_hi, e.points, opts);
    if (res.roots.size() != 1) {
        std::ostringstream os;
        os << e.name << ": expected one decaying solution, found " << res.roots.size();
        throw SolverError(os.str());
    }
    SuiteSolution s;
    s.root = res.roots.front();
    s.solution = std::make_shared<const RadialSolution>(e.model, s.root, opts);
    s.f = RadialFunction::from_solution(*s.solution);
    return s;
}

}  // namespace logschroed

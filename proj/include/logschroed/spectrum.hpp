#pragma once

#include <string>
#include <vector>

#include "logschroed/radial_ivp.hpp"
#include "logschroed/variational.hpp"

namespace logschroed {

/// Dirichlet discretization of -psi'' + q psi on [eps, R] after the Liouville
/// substitution psi = r^((N-1)/2) phi, with
/// q = V - B (log w^2 + 2) + (N-1)(N-3) / (4 r^2).
/// Interior nodes r_i = eps + i h; diagonal 2/h^2 + q_i, off-diagonal -1/h^2.
/// The finite-volume variant fills `coupling` instead (see assemble_fv).
struct LinearizedOperator {
    int dim = 3;
    double eps = 0.0, R = 0.0, h = 0.0;
    std::vector<double> r, q;
    std::vector<double> coupling;  // entry (i, i+1) when not uniform

    double diag(std::size_t i) const { return 2.0 / (h * h) + q[i]; }
    double off(std::size_t i) const { return coupling.empty() ? -1.0 / (h * h) : coupling[i]; }
    std::size_t size() const { return q.size(); }
    /// Same operator with q + s.
    LinearizedOperator shifted(double s) const;
    std::vector<double> apply(const std::vector<double>& psi) const;
    double rayleigh(const std::vector<double>& psi) const;
};

enum class Scheme {
    Auto,          // finite volume for N = 2, Liouville form otherwise
    Liouville,
    FiniteVolume,
};

struct MeshParams {
    double R = 12.0;
    double h = 0.02;     // coarsest level; finer levels halve it
    double eps = 1e-6;   // Liouville form with N = 2: divided by 4 per level
    int levels = 3;
    int threads = 0;
    Scheme scheme = Scheme::Auto;
};

LinearizedOperator assemble(const RadialFunction& w, const RadialModel& model, double R, double h, double eps);

/// Cell-centred finite volumes for -(r^(N-1) phi')' / r^(N-1) on nodes
/// (i - 1/2) h, symmetrized by psi = r^((N-1)/2) phi. The flux vanishes at
/// r = 0, so no inner cutoff and no singular term: q = V - B (log w^2 + 2).
/// Second order for N = 2, where the Liouville form converges only
/// logarithmically because of its -1/(4 r^2) term.
LinearizedOperator assemble_fv(const RadialFunction& w, const RadialModel& model, double R, double h);

/// The k smallest eigenvalues by Sturm-sequence bisection, to `tol` absolute.
std::vector<double> sturm_eigenvalues(const LinearizedOperator& op, int k, double tol = 1e-10);
/// Number of eigenvalues below x.
std::size_t sturm_count(const LinearizedOperator& op, double x);
/// Inverse iteration; unit norm in the sum h psi_i^2, largest entry positive.
std::vector<double> eigenvector(const LinearizedOperator& op, double lambda);

struct SpectrumResult {
    std::vector<double> h;                        // per level
    std::vector<std::vector<double>> by_level;    // k eigenvalues per level
    std::vector<double> extrapolated;             // Richardson limits
    std::vector<double> r_finest;                 // nodes of the finest level
    std::vector<std::vector<double>> vectors;     // eigenvectors on the finest level
    double min_abs = 0.0;                         // min |extrapolated|
    bool converged = true;
    double eps_sensitivity = 0.0;                 // Liouville form, N = 2: change when eps drops 100x
    std::vector<std::string> warnings;
};

SpectrumResult lowest_eigenvalues(const std::vector<LinearizedOperator>& levels, int k, int threads = 0);
SpectrumResult lowest_eigenvalues(const RadialFunction& w, const RadialModel& model, const MeshParams& mesh, int k);

struct NondegeneracyResult {
    bool nondegenerate = false;
    double gap = 0.0;               // min |lambda|
    double lambda = 0.0;            // eigenvalue closest to zero
    std::vector<double> vector;     // its eigenvector on the finest level
    std::string reason;
};

NondegeneracyResult nondegeneracy_check(const SpectrumResult& s, double tol_zero = 1e-2);

struct RayleighReport {
    std::vector<double> by_level;
    double extrapolated = 0.0;
};

/// Rayleigh quotient of r^((N-1)/2) w, which is an exact eigenfunction with
/// eigenvalue -2 of the continuous operator.
RayleighReport ground_state_rayleigh(const RadialFunction& w, const RadialModel& model, const MeshParams& mesh);

}  // namespace logschroed

#include "logschroed/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "logschroed/errors.hpp"
#include "logschroed/parallel.hpp"

namespace logschroed {

namespace {

// Tridiagonal LU with partial pivoting and solve, following LAPACK gttrf/gttrs.
struct TriLU {
    std::vector<double> dl, d, du, du2;
    std::vector<bool> swapped;

    TriLU(const LinearizedOperator& op, double mu) {
        const std::size_t n = op.size();
        dl.resize(n > 0 ? n - 1 : 0);
        for (std::size_t i = 0; i < dl.size(); ++i) dl[i] = op.off(i);
        du = dl;
        du2.assign(n > 1 ? n - 2 : 0, 0.0);
        d.resize(n);
        swapped.assign(n, false);
        for (std::size_t i = 0; i < n; ++i) d[i] = op.diag(i) - mu;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (std::abs(d[i]) >= std::abs(dl[i])) {
                if (d[i] == 0.0) d[i] = 1e-300;
                const double f = dl[i] / d[i];
                dl[i] = f;
                d[i + 1] -= f * du[i];
            } else {
                const double f = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = f;
                const double t = du[i];
                du[i] = d[i + 1];
                d[i + 1] = t - f * d[i + 1];
                if (i + 2 < n) {
                    du2[i] = du[i + 1];
                    du[i + 1] = -f * du[i + 1];
                }
                swapped[i] = true;
            }
        }
        if (n > 0 && d[n - 1] == 0.0) d[n - 1] = 1e-300;
    }

    void solve(std::vector<double>& b) const {
        const std::size_t n = d.size();
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (!swapped[i]) {
                b[i + 1] -= dl[i] * b[i];
            } else {
                const double t = b[i];
                b[i] = b[i + 1];
                b[i + 1] = t - dl[i] * b[i];
            }
        }
        b[n - 1] /= d[n - 1];
        if (n > 1) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
        for (std::size_t i = n - 2; i-- > 0;) b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
    }
};

void normalize(std::vector<double>& v, double h) {
    double s = 0.0;
    std::size_t imax = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        s += h * v[i] * v[i];
        if (std::abs(v[i]) > std::abs(v[imax])) imax = i;
    }
    const double c = (v[imax] < 0 ? -1.0 : 1.0) / std::sqrt(s);
    for (auto& x : v) x *= c;
}

// Two Richardson steps for an error expansion in h^2 and h^4 (halving h).
double richardson(const std::vector<double>& x) {
    if (x.size() == 1) return x[0];
    std::vector<double> a(x);
    double factor = 4.0;
    for (std::size_t lvl = 1; lvl < x.size() && lvl <= 2; ++lvl) {
        std::vector<double> b;
        for (std::size_t i = 0; i + 1 < a.size(); ++i) b.push_back((factor * a[i + 1] - a[i]) / (factor - 1.0));
        a = b;
        factor *= 4.0;
    }
    return a.back();
}

}  // namespace

LinearizedOperator LinearizedOperator::shifted(double s) const {
    LinearizedOperator op = *this;
    for (auto& x : op.q) x += s;
    return op;
}

std::vector<double> LinearizedOperator::apply(const std::vector<double>& psi) const {
    if (psi.size() != size()) throw DomainError("vector size does not match the operator");
    const std::size_t n = size();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = diag(i) * psi[i];
        if (i > 0) s += off(i - 1) * psi[i - 1];
        if (i + 1 < n) s += off(i) * psi[i + 1];
        out[i] = s;
    }
    return out;
}

double LinearizedOperator::rayleigh(const std::vector<double>& psi) const {
    const auto a = apply(psi);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        num += psi[i] * a[i];
        den += psi[i] * psi[i];
    }
    if (!(den > 0.0)) throw DomainError("Rayleigh quotient of the zero vector");
    return num / den;
}

LinearizedOperator assemble(const RadialFunction& w, const RadialModel& model, double R, double h, double eps) {
    if (!model.is_logarithmic()) throw DomainError("the linearized operator is defined for the logarithmic model");
    if (!(eps > 0.0) || !(R > eps) || !(h > 0.0) || h > 0.5 * (R - eps)) throw DomainError("invalid spectrum mesh");
    if (R > w.r_max + 1e-12) throw DomainError("spectrum box exceeds the profile range");
    LinearizedOperator op;
    op.dim = model.dim();
    op.eps = eps;
    op.R = R;
    const auto n = static_cast<std::size_t>(std::llround((R - eps) / h));
    op.h = (R - eps) / static_cast<double>(n);
    const double c = 0.25 * (op.dim - 1) * (op.dim - 3);
    for (std::size_t i = 1; i < n; ++i) {
        const double r = eps + static_cast<double>(i) * op.h;
        const double u = w.u(r);
        if (!(u > 0.0)) {
            std::ostringstream os;
            os << "profile is not positive at r = " << r;
            throw DomainError(os.str());
        }
        op.r.push_back(r);
        op.q.push_back(model.V(r) - model.B(r) * (std::log(u * u) + 2.0) + c / (r * r));
    }
    return op;
}

LinearizedOperator assemble_fv(const RadialFunction& w, const RadialModel& model, double R, double h) {
    if (!model.is_logarithmic()) throw DomainError("the linearized operator is defined for the logarithmic model");
    if (!(R > 0.0) || !(h > 0.0) || h > 0.5 * R) throw DomainError("invalid spectrum mesh");
    if (R > w.r_max + 1e-12) throw DomainError("spectrum box exceeds the profile range");
    LinearizedOperator op;
    op.dim = model.dim();
    op.R = R;
    const auto n = static_cast<std::size_t>(std::llround(R / h));
    op.h = R / static_cast<double>(n);
    const double p = op.dim - 1;
    // Dirichlet on the ghost node beyond R
    for (std::size_t i = 1; i <= n; ++i) {
        const double r = (static_cast<double>(i) - 0.5) * op.h;
        const double u = w.u(r);
        if (!(u > 0.0)) {
            std::ostringstream os;
            os << "profile is not positive at r = " << r;
            throw DomainError(os.str());
        }
        const double face_in = std::pow(r - 0.5 * op.h, p), face_out = std::pow(r + 0.5 * op.h, p);
        const double wr = std::pow(r, p);
        op.r.push_back(r);
        // the diagonal carries (face_in + face_out) / (r^p h^2), stored as 2/h^2 plus a correction
        op.q.push_back(model.V(r) - model.B(r) * (std::log(u * u) + 2.0) +
                       ((face_in + face_out) / wr - 2.0) / (op.h * op.h));
        if (i < n) {
            const double r1 = r + op.h;
            op.coupling.push_back(-face_out / (op.h * op.h * std::pow(r * r1, 0.5 * p)));
        }
    }
    op.eps = 0.0;
    return op;
}

std::size_t sturm_count(const LinearizedOperator& op, double x) {
    std::size_t count = 0;
    double d = 1.0;
    for (std::size_t i = 0; i < op.size(); ++i) {
        const double b = i > 0 ? op.off(i - 1) : 0.0;
        d = op.diag(i) - x - (i > 0 ? b * b / d : 0.0);
        if (d == 0.0) d = -1e-300;
        if (d < 0.0) ++count;
    }
    return count;
}

std::vector<double> sturm_eigenvalues(const LinearizedOperator& op, int k, double tol) {
    if (k < 1 || k > 10) throw DomainError("k must lie in [1, 10]");
    if (op.size() < static_cast<std::size_t>(k)) throw DomainError("operator smaller than k");
    double lo = INFINITY, hi = -INFINITY;
    for (std::size_t i = 0; i < op.size(); ++i) {
        const double b = (i > 0 ? std::abs(op.off(i - 1)) : 0.0) + (i + 1 < op.size() ? std::abs(op.off(i)) : 0.0);
        lo = std::min(lo, op.diag(i) - b);
        hi = std::max(hi, op.diag(i) + b);
    }
    std::vector<double> out;
    for (int j = 0; j < k; ++j) {
        double a = lo, c = hi;
        while (c - a > tol) {
            const double m = 0.5 * (a + c);
            if (m <= a || m >= c) break;
            (sturm_count(op, m) <= static_cast<std::size_t>(j) ? a : c) = m;
        }
        out.push_back(0.5 * (a + c));
        lo = out.back();
    }
    return out;
}

std::vector<double> eigenvector(const LinearizedOperator& op, double lambda) {
    const std::size_t n = op.size();
    const TriLU lu(op, lambda + 1e-9 * (1.0 + std::abs(lambda)));
    std::vector<double> v(n, 1.0);
    for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 0.1 * std::sin(0.37 * static_cast<double>(i));
    for (int it = 0; it < 4; ++it) {
        lu.solve(v);
        normalize(v, op.h);
    }
    return v;
}

SpectrumResult lowest_eigenvalues(const std::vector<LinearizedOperator>& levels, int k, int threads) {
    if (levels.empty()) throw DomainError("no mesh levels");
    SpectrumResult res;
    res.by_level.resize(levels.size());
    parallel_for(levels.size(), threads,
                 [&](std::size_t i) { res.by_level[i] = sturm_eigenvalues(levels[i], k); });
    for (const auto& op : levels) res.h.push_back(op.h);
    res.min_abs = INFINITY;
    for (int j = 0; j < k; ++j) {
        std::vector<double> seq;
        for (const auto& lv : res.by_level) seq.push_back(lv[j]);
        res.extrapolated.push_back(richardson(seq));
        res.min_abs = std::min(res.min_abs, std::abs(res.extrapolated.back()));
        if (seq.size() >= 3) {
            const double d0 = seq[1] - seq[0], d1 = seq[2] - seq[1];
            const bool tiny = std::abs(d0) < 1e-9 && std::abs(d1) < 1e-9;
            const bool monotone = tiny || (d0 > 0) == (d1 > 0);
            const double ratio = d1 != 0.0 ? d0 / d1 : INFINITY;
            if (!tiny && (!monotone || ratio < 2.5 || ratio > 6.5)) {
                res.converged = false;
                std::ostringstream os;
                os << "eigenvalue " << j << " does not converge at second order (difference ratio " << ratio
                   << ")";
                res.warnings.push_back(os.str());
            }
        }
        if (j > 0 && !(res.extrapolated[j] > res.extrapolated[j - 1]))
            res.warnings.push_back("extrapolated eigenvalues are not strictly increasing");
    }
    const auto& fine = levels.back();
    res.r_finest = fine.r;
    for (int j = 0; j < k; ++j) res.vectors.push_back(eigenvector(fine, res.by_level.back()[j]));
    return res;
}

namespace {

bool uses_fv(const RadialModel& model, const MeshParams& m) {
    return m.scheme == Scheme::FiniteVolume || (m.scheme == Scheme::Auto && model.dim() == 2);
}

std::vector<LinearizedOperator> build_levels(const RadialFunction& w, const RadialModel& model, const MeshParams& m) {
    if (m.levels < 1 || m.levels > 6) throw DomainError("levels must lie in [1, 6]");
    std::vector<LinearizedOperator> ops(static_cast<std::size_t>(m.levels));
    parallel_for(ops.size(), m.threads, [&](std::size_t i) {
        const int l = static_cast<int>(i);
        const double h = m.h * std::ldexp(1.0, -l);
        if (uses_fv(model, m)) {
            ops[i] = assemble_fv(w, model, m.R, h);
        } else {
            const double eps = model.dim() == 2 ? m.eps * std::ldexp(1.0, -2 * l) : m.eps;
            ops[i] = assemble(w, model, m.R, h, eps);
        }
    });
    return ops;
}

}  // namespace

SpectrumResult lowest_eigenvalues(const RadialFunction& w, const RadialModel& model, const MeshParams& mesh, int k) {
    const auto ops = build_levels(w, model, mesh);
    auto res = lowest_eigenvalues(ops, k, mesh.threads);
    if (model.dim() == 2 && !uses_fv(model, mesh)) {
        // the attractive -1/(4 r^2) term makes the inner cutoff matter
        const auto& fine = ops.back();
        const auto moved = sturm_eigenvalues(assemble(w, model, fine.R, fine.h, 0.01 * fine.eps), k);
        for (int j = 0; j < k; ++j)
            res.eps_sensitivity = std::max(res.eps_sensitivity, std::abs(moved[j] - res.by_level.back()[j]));
        std::ostringstream os;
        os << "inner cutoff sensitivity " << res.eps_sensitivity;
        res.warnings.push_back(os.str());
    }
    return res;
}

NondegeneracyResult nondegeneracy_check(const SpectrumResult& s, double tol_zero) {
    NondegeneracyResult out;
    if (s.extrapolated.empty()) throw DomainError("empty spectrum");
    std::size_t j = 0;
    for (std::size_t i = 1; i < s.extrapolated.size(); ++i)
        if (std::abs(s.extrapolated[i]) < std::abs(s.extrapolated[j])) j = i;
    out.lambda = s.extrapolated[j];
    out.gap = std::abs(out.lambda);
    out.vector = s.vectors.at(j);
    bool stable = true;
    for (std::size_t i = 0; i < s.extrapolated.size(); ++i)
        for (const auto& lv : s.by_level)
            if ((lv[i] > 0) != (s.extrapolated[i] > 0)) stable = false;
    out.nondegenerate = out.gap > tol_zero && stable;
    if (out.gap <= tol_zero) {
        std::ostringstream os;
        os << "eigenvalue " << out.lambda << " within " << tol_zero << " of zero";
        out.reason = os.str();
    } else if (!stable) {
        out.reason = "eigenvalue signs change under refinement";
    }
    return out;
}

RayleighReport ground_state_rayleigh(const RadialFunction& w, const RadialModel& model, const MeshParams& mesh) {
    const auto ops = build_levels(w, model, mesh);
    RayleighReport rep;
    for (const auto& op : ops) {
        std::vector<double> psi;
        for (double r : op.r) psi.push_back(std::pow(r, 0.5 * (op.dim - 1)) * w.u(r));
        rep.by_level.push_back(op.rayleigh(psi));
    }
    rep.extrapolated = richardson(rep.by_level);
    return rep;
}

}  // namespace logschroed

#include "projected_newton.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Cholesky>

namespace trunkload::detail {

namespace {

double phi(int p, double x) {
    switch (p) {
        case 0: return 0.0;
        case 1: return x;
        case 2: return x * x;
        default: return x * x * x;
    }
}

double dphi(int p, double x) {
    switch (p) {
        case 0: return 0.0;
        case 1: return 1.0;
        case 2: return 2.0 * x;
        default: return 3.0 * x * x;
    }
}

double ddphi(int p, double x) {
    switch (p) {
        case 0:
        case 1: return 0.0;
        case 2: return 2.0;
        default: return 6.0 * x;
    }
}

Eigen::VectorXd clamp01(const Eigen::VectorXd& x) { return x.cwiseMax(0.0).cwiseMin(1.0); }

}  // namespace

double separable_cost(int exponent, const Eigen::VectorXd& x) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) s += phi(exponent, x[i]);
    return s;
}

double box_objective(const BoxProblem& problem, const Eigen::VectorXd& x) {
    const Eigen::VectorXd r = problem.a * x - problem.b;
    double f = separable_cost(problem.exponent, x) + 0.5 * r.dot(problem.weights.cwiseProduct(r));
    if (problem.linear.size() > 0) f += problem.linear.dot(x);
    return f;
}

BoxResult minimize_box(const BoxProblem& problem, Eigen::VectorXd x0, double tolerance, int max_iters) {
    const auto n = x0.size();
    const int p = problem.exponent;
    const Eigen::MatrixXd wa = problem.weights.asDiagonal() * problem.a;
    const Eigen::MatrixXd gram = problem.a.transpose() * wa;
    const Eigen::VectorXd gram_b = wa.transpose() * problem.b;

    BoxResult out;
    out.x = clamp01(x0);
    double f = box_objective(problem, out.x);

    const double ridge = 1e-14 * std::max(1.0, gram.diagonal().cwiseAbs().maxCoeff());
    // Rounding floor of the gradient; below it pg carries no information.
    double gscale = gram.cwiseAbs().rowwise().sum().maxCoeff() + gram_b.cwiseAbs().maxCoeff();
    if (problem.linear.size() > 0) gscale += problem.linear.cwiseAbs().maxCoeff();
    const double stop = std::max(tolerance, 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, gscale));
    const auto gradient = [&](const Eigen::VectorXd& x) {
        Eigen::VectorXd g = gram * x - gram_b;
        if (problem.linear.size() > 0) g += problem.linear;
        for (Eigen::Index i = 0; i < n; ++i) g[i] += dphi(p, x[i]);
        return g;
    };
    const auto projected_norm = [](const Eigen::VectorXd& x, const Eigen::VectorXd& g) {
        return (x - clamp01(x - g)).cwiseAbs().maxCoeff();
    };

    std::vector<Eigen::Index> free_idx;
    free_idx.reserve(static_cast<std::size_t>(n));
    // Per variable: -1 fixed at 0, +1 fixed at 1, 0 free.
    std::vector<int> fixed(static_cast<std::size_t>(n), 0);

    for (int it = 0; it < max_iters; ++it) {
        out.iterations = it + 1;
        const Eigen::VectorXd g = gradient(out.x);
        const double pg_norm = projected_norm(out.x, g);
        if (pg_norm <= stop) {
            out.converged = true;
            break;
        }

        // Near-active bounds whose gradient pushes outward go to the bound.
        const double eps = std::min(1e-3, pg_norm);
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto k = static_cast<std::size_t>(i);
            fixed[k] = 0;
            if (out.x[i] <= eps && g[i] > 0.0) fixed[k] = -1;
            if (out.x[i] >= 1.0 - eps && g[i] < 0.0) fixed[k] = 1;
        }

        // Newton on the free set; variables sitting on a bound that the
        // direction would push through are fixed and the step recomputed.
        Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
        for (Eigen::Index pass = 0; pass <= n; ++pass) {
            free_idx.clear();
            for (Eigen::Index i = 0; i < n; ++i) {
                if (fixed[static_cast<std::size_t>(i)] == 0) free_idx.push_back(i);
            }
            d.setZero();
            const auto nf = static_cast<Eigen::Index>(free_idx.size());
            if (nf == 0) break;
            Eigen::MatrixXd h(nf, nf);
            Eigen::VectorXd rhs(nf);
            for (Eigen::Index r = 0; r < nf; ++r) {
                const auto i = free_idx[static_cast<std::size_t>(r)];
                rhs[r] = -g[i];
                for (Eigen::Index c = 0; c < nf; ++c) h(r, c) = gram(i, free_idx[static_cast<std::size_t>(c)]);
                h(r, r) += ddphi(p, out.x[i]) + ridge;
            }
            Eigen::LDLT<Eigen::MatrixXd> ldlt(h);
            Eigen::VectorXd step = ldlt.solve(rhs);
            if (ldlt.info() != Eigen::Success || !step.allFinite() || step.dot(rhs) <= 0.0) step = rhs;
            bool blocked = false;
            for (Eigen::Index r = 0; r < nf; ++r) {
                const auto i = free_idx[static_cast<std::size_t>(r)];
                d[i] = step[r];
                if (out.x[i] <= 0.0 && d[i] < 0.0) {
                    fixed[static_cast<std::size_t>(i)] = -1;
                    blocked = true;
                } else if (out.x[i] >= 1.0 && d[i] > 0.0) {
                    fixed[static_cast<std::size_t>(i)] = 1;
                    blocked = true;
                }
            }
            if (!blocked) break;
        }

        // Longest step keeping the free variables inside the box.
        double alpha_max = 1.0;
        Eigen::Index blocking = -1;
        for (const auto i : free_idx) {
            double limit = 1.0;
            if (d[i] < 0.0) limit = out.x[i] / -d[i];
            if (d[i] > 0.0) limit = (1.0 - out.x[i]) / d[i];
            if (limit < alpha_max) {
                alpha_max = limit;
                blocking = i;
            }
        }

        const auto point = [&](double alpha) {
            Eigen::VectorXd y = out.x;
            for (Eigen::Index i = 0; i < n; ++i) {
                const int fx = fixed[static_cast<std::size_t>(i)];
                y[i] = fx < 0 ? 0.0 : fx > 0 ? 1.0 : out.x[i] + alpha * d[i];
            }
            y = clamp01(y);
            if (alpha == alpha_max && blocking >= 0) y[blocking] = d[blocking] < 0.0 ? 0.0 : 1.0;
            return y;
        };
        double fixed_gain = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const int fx = fixed[static_cast<std::size_t>(i)];
            if (fx != 0) fixed_gain += g[i] * (out.x[i] - (fx < 0 ? 0.0 : 1.0));
        }
        const double newton_gain = -g.dot(d);

        // Armijo along the segment. A decrease below the rounding level of f
        // cannot be measured; then the step must shrink the projected gradient.
        constexpr double sigma = 1e-4;
        const double noise = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(f));
        double alpha = alpha_max;
        bool accepted = false;
        Eigen::VectorXd trial;
        double f_trial = f;
        for (int ls = 0; ls < 60; ++ls) {
            trial = point(alpha);
            f_trial = box_objective(problem, trial);
            const double predicted = fixed_gain + alpha * newton_gain;
            if (predicted <= noise) {
                accepted = f_trial <= f + noise && projected_norm(trial, gradient(trial)) < pg_norm;
                break;
            } else if (f - f_trial >= sigma * predicted) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted || (trial - out.x).cwiseAbs().maxCoeff() == 0.0) {
            // No representable progress: the iterate is optimal to precision.
            out.converged = pg_norm <= std::max(std::sqrt(tolerance), 1e3 * stop);
            break;
        }
        out.x = trial;
        f = f_trial;
    }
    out.objective = box_objective(problem, out.x);
    return out;
}

}  // namespace trunkload::detail

#include "l1ilc/qp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <vector>

#include <json.hpp>

namespace l1ilc {

namespace {

// Working set bookkeeping for the primal active-set iteration. Maintains
// H^{-1} a_i for every member and the Cholesky factor of the Schur complement
// S = A_w H^{-1} A_w'. Appending a row extends the factor by one triangular
// solve; removals rebuild it, which is cheap at the active-set sizes seen here.
class WorkingSet {
public:
    WorkingSet(const QpProblem& p, const QpFactorization& hfac) : p_(p), hfac_(hfac) {}

    int size() const { return static_cast<int>(rows_.size()); }
    const std::vector<int>& rows() const { return rows_; }
    bool ridge_applied() const { return ridge_applied_; }

    bool contains(int row) const {
        return std::find(rows_.begin(), rows_.end(), row) != rows_.end();
    }

    void add(int row) {
        Eigen::VectorXd hia = hfac_.solve(p_.A.row(row).transpose());
        const int m = size();
        Eigen::VectorXd s(m);
        for (int i = 0; i < m; ++i) {
            s(i) = p_.A.row(rows_[static_cast<size_t>(i)]).dot(hia);
        }
        double diag = p_.A.row(row).dot(hia);
        // Extend the Cholesky factor: L_new = [L 0; w' d] with Lw = s.
        Eigen::VectorXd w = chol_.topLeftCorner(m, m).triangularView<Eigen::Lower>().solve(s);
        double d2 = diag - w.squaredNorm();
        if (d2 <= 0.0) {
            // Dependent constraint row; regularize rather than fail outright.
            d2 = 1e-12 * std::max(1.0, diag);
            ridge_applied_ = true;
        }
        hia_.conservativeResize(p_.H.rows(), m + 1);
        hia_.col(m) = hia;
        Eigen::MatrixXd grown = Eigen::MatrixXd::Zero(m + 1, m + 1);
        grown.topLeftCorner(m, m) = chol_.topLeftCorner(m, m);
        grown.block(m, 0, 1, m) = w.transpose();
        grown(m, m) = std::sqrt(d2);
        chol_ = std::move(grown);
        rows_.push_back(row);
    }

    void remove(int index) {
        rows_.erase(rows_.begin() + index);
        const int m = size();
        Eigen::MatrixXd hia(p_.H.rows(), m);
        for (int i = 0; i < m; ++i) {
            if (i < index) {
                hia.col(i) = hia_.col(i);
            } else {
                hia.col(i) = hia_.col(i + 1);
            }
        }
        hia_ = std::move(hia);
        rebuild_factor();
    }

    // Consolidated solve of the equality-constrained problem on the working
    // rows, with one refinement pass on the coupled KKT system. Run once at
    // termination, it clears the roundoff accumulated along the path.
    void polish(const Eigen::VectorXd& g, const Eigen::VectorXd& b_full, Eigen::VectorXd& x,
                Eigen::VectorXd& lambda) {
        const int m = size();
        if (m == 0) {
            x = -hfac_.solve(g);
            lambda.resize(0);
            return;
        }
        rebuild_factor();
        const auto L = chol_.topLeftCorner(m, m).triangularView<Eigen::Lower>();
        auto solve_s = [&](const Eigen::VectorXd& rhs) -> Eigen::VectorXd {
            return L.transpose().solve(L.solve(rhs));
        };
        auto a_row = [&](int i) { return p_.A.row(rows_[static_cast<size_t>(i)]); };

        const Eigen::VectorXd hg = hfac_.solve(g);
        Eigen::VectorXd rhs(m);
        for (int i = 0; i < m; ++i) {
            rhs(i) = -a_row(i).dot(hg) - b_full(rows_[static_cast<size_t>(i)]);
        }
        lambda = solve_s(rhs);
        x = -hg - hia_.leftCols(m) * lambda;

        // Refinement on the coupled system.
        Eigen::VectorXd r1 = p_.H * x + g;
        Eigen::VectorXd r2(m);
        for (int i = 0; i < m; ++i) {
            r1 += a_row(i).transpose() * lambda(i);
            r2(i) = a_row(i).dot(x) - b_full(rows_[static_cast<size_t>(i)]);
        }
        const Eigen::VectorXd t = hfac_.solve(r1);
        Eigen::VectorXd at(m);
        for (int i = 0; i < m; ++i) {
            at(i) = a_row(i).dot(t);
        }
        const Eigen::VectorXd dl = solve_s(r2 - at);
        Eigen::VectorXd corr = r1;
        for (int i = 0; i < m; ++i) {
            corr += a_row(i).transpose() * dl(i);
        }
        x -= hfac_.solve(corr);
        lambda += dl;
    }

    // Solves the equality-constrained subproblem at the current point:
    //   p = argmin 1/2 p'Hp + c'p  s.t.  A_w p = 0,
    // returning the step and the multipliers of the working rows.
    void step_direction(const Eigen::VectorXd& c, Eigen::VectorXd& step,
                        Eigen::VectorXd& lambda) const {
        Eigen::VectorXd hc = hfac_.solve(c);
        const int m = size();
        if (m == 0) {
            step = -hc;
            lambda.resize(0);
            return;
        }
        Eigen::VectorXd rhs(m);
        for (int i = 0; i < m; ++i) {
            rhs(i) = -p_.A.row(rows_[static_cast<size_t>(i)]).dot(hc);
        }
        const auto L = chol_.topLeftCorner(m, m).triangularView<Eigen::Lower>();
        lambda = L.transpose().solve(L.solve(rhs));
        step = -hc - hia_.leftCols(m) * lambda;
    }

private:
    void rebuild_factor() {
        const int m = size();
        Eigen::MatrixXd S(m, m);
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j <= i; ++j) {
                S(i, j) = p_.A.row(rows_[static_cast<size_t>(i)]).dot(hia_.col(j));
                S(j, i) = S(i, j);
            }
        }
        Eigen::LLT<Eigen::MatrixXd> llt(S);
        if (llt.info() != Eigen::Success) {
            S.diagonal().array() += 1e-12 * std::max(1.0, S.diagonal().maxCoeff());
            llt.compute(S);
            ridge_applied_ = true;
            if (llt.info() != Eigen::Success) {
                throw std::runtime_error("solve_qp: singular working-set system");
            }
        }
        chol_ = llt.matrixL();
    }

    const QpProblem& p_;
    const QpFactorization& hfac_;
    std::vector<int> rows_;
    Eigen::MatrixXd hia_{0, 0};
    Eigen::MatrixXd chol_{0, 0};
    bool ridge_applied_ = false;
};

double max_violation(const QpProblem& p, const Eigen::VectorXd& x) {
    if (p.A.rows() == 0) return 0.0;
    return ((p.A * x - p.b).array()).maxCoeff();
}

// Finds a feasible start: zero, the unconstrained optimum, or an H-norm
// projection onto the violated rows taken as equalities. The projection loop
// converges immediately for the box-on-Dx constraints this solver serves.
Eigen::VectorXd feasible_start(const QpProblem& p, const QpFactorization& hfac,
                               const QpOptions& opts) {
    const long n = p.H.rows();
    if (opts.warm_start != nullptr && opts.warm_start->size() == n &&
        max_violation(p, *opts.warm_start) <= opts.feas_tol) {
        return *opts.warm_start;
    }
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    if (max_violation(p, x) <= opts.feas_tol) {
        return x;
    }
    x = -hfac.solve(p.g);
    if (max_violation(p, x) <= opts.feas_tol) {
        return x;
    }

    // Quick certificate for directly contradictory parallel rows. Quadratic in
    // the row count, so only attempted for modest constraint blocks.
    for (long i = 0; p.A.rows() <= 256 && i < p.A.rows(); ++i) {
        for (long j = i + 1; j < p.A.rows(); ++j) {
            const double ni = p.A.row(i).norm();
            const double nj = p.A.row(j).norm();
            if (ni == 0.0 || nj == 0.0) continue;
            if ((p.A.row(i) / ni + p.A.row(j) / nj).norm() < 1e-12 &&
                p.b(i) / ni + p.b(j) / nj < -opts.feas_tol) {
                throw QpInfeasible("solve_qp: contradictory constraint rows",
                                   {static_cast<int>(i), static_cast<int>(j)});
            }
        }
    }

    for (int pass = 0; pass < 32; ++pass) {
        std::vector<int> violated;
        for (long i = 0; i < p.A.rows(); ++i) {
            if (p.A.row(i) * x - p.b(i) > opts.feas_tol) {
                violated.push_back(static_cast<int>(i));
            }
        }
        if (violated.empty()) {
            return x;
        }
        const int m = static_cast<int>(violated.size());
        Eigen::MatrixXd Av(m, n);
        Eigen::VectorXd resid(m);
        for (int i = 0; i < m; ++i) {
            Av.row(i) = p.A.row(violated[static_cast<size_t>(i)]);
            resid(i) = Av.row(i) * x - p.b(violated[static_cast<size_t>(i)]);
        }
        // x <- x - H^{-1} Av' (Av H^{-1} Av')^{-1} resid
        Eigen::MatrixXd HiAt = hfac.llt.solve(Av.transpose());
        Eigen::MatrixXd S = Av * HiAt;
        S.diagonal().array() += 1e-14 * std::max(1.0, S.diagonal().maxCoeff());
        x -= HiAt * S.ldlt().solve(resid);
    }
    throw QpInfeasible("solve_qp: no feasible point found", {});
}

}  // namespace

QpFactorization::QpFactorization(const Eigen::MatrixXd& Hmat) : H(Hmat), llt(Hmat) {
    if (llt.info() != Eigen::Success) {
        throw std::invalid_argument("QpFactorization: cost matrix is not positive definite");
    }
}

Eigen::VectorXd QpFactorization::solve(const Eigen::VectorXd& rhs) const {
    Eigen::VectorXd x = llt.solve(rhs);
    x += llt.solve(rhs - H * x);
    return x;
}

Eigen::VectorXd solve_unconstrained(const QpProblem& p) {
    if (p.H.rows() != p.H.cols() || p.H.rows() != p.g.size()) {
        throw std::invalid_argument("solve_unconstrained: dimension mismatch");
    }
    QpFactorization f(p.H);
    return -f.solve(p.g);
}

QpSolution solve_qp(const QpProblem& p, const QpOptions& opts) {
    QpFactorization f(p.H);
    return solve_qp(p, f, opts);
}

QpSolution solve_qp(const QpProblem& p, const QpFactorization& hfac, const QpOptions& opts) {
    const long n = p.H.rows();
    const long m_total = p.A.rows();
    if (p.g.size() != n || p.b.size() != m_total || (m_total > 0 && p.A.cols() != n)) {
        throw std::invalid_argument("solve_qp: dimension mismatch");
    }

    QpSolution sol;
    Eigen::VectorXd x = feasible_start(p, hfac, opts);
    WorkingSet ws(p, hfac);

    const int max_iter = opts.max_iterations > 0
                             ? opts.max_iterations
                             : 64 + 8 * static_cast<int>(m_total);
    Eigen::VectorXd step, lambda;
    for (int iter = 1; iter <= max_iter; ++iter) {
        sol.iterations = iter;
        const Eigen::VectorXd c = p.H * x + p.g;
        ws.step_direction(c, step, lambda);

        bool at_subproblem_optimum =
            step.lpNorm<Eigen::Infinity>() <= opts.step_tol * std::max(1.0, x.norm());
        if (!at_subproblem_optimum) {
            // Ratio test against rows not in the working set; ties resolved by
            // lowest row index for determinism.
            double alpha = 1.0;
            int blocker = -1;
            for (long i = 0; i < m_total; ++i) {
                if (ws.contains(static_cast<int>(i))) continue;
                const double advance = p.A.row(i).dot(step);
                if (advance <= opts.feas_tol) continue;
                const double slack = p.b(i) - p.A.row(i).dot(x);
                const double ai = slack / advance;
                if (ai < alpha - 1e-14) {
                    alpha = ai;
                    blocker = static_cast<int>(i);
                }
            }
            x += std::max(0.0, std::min(1.0, alpha)) * step;
            if (blocker >= 0) {
                ws.add(blocker);
                continue;
            }
            // Full step: x now solves the working-set subproblem and lambda is
            // its multiplier, so the dual check below applies directly. This
            // avoids stalling on step-norm noise for ill-conditioned costs.
            at_subproblem_optimum = true;
        }

        if (at_subproblem_optimum) {
            int worst = -1;
            double worst_val = -opts.dual_tol;
            for (int i = 0; i < ws.size(); ++i) {
                if (lambda(i) < worst_val) {
                    worst_val = lambda(i);
                    worst = i;
                }
            }
            if (worst < 0) {
                ws.polish(p.g, p.b, x, lambda);
                sol.x = x;
                sol.lambdas = Eigen::VectorXd::Zero(m_total);
                for (int i = 0; i < ws.size(); ++i) {
                    sol.lambdas(ws.rows()[static_cast<size_t>(i)]) = std::max(0.0, lambda(i));
                }
                sol.active_set = ws.rows();
                std::sort(sol.active_set.begin(), sol.active_set.end());
                sol.ridge_applied = ws.ridge_applied();
                sol.kkt_residual = kkt_residual(p, sol);
                return sol;
            }
            ws.remove(worst);
        }
    }
    throw std::runtime_error("solve_qp: iteration cap exceeded");
}

double kkt_residual(const QpProblem& p, const QpSolution& sol) {
    const long m_total = p.A.rows();
    Eigen::VectorXd stat = p.H * sol.x + p.g;
    if (m_total > 0 && sol.lambdas.size() == m_total) {
        stat += p.A.transpose() * sol.lambdas;
    }
    double r = stat.lpNorm<Eigen::Infinity>();
    for (long i = 0; i < m_total; ++i) {
        const double slack = p.A.row(i).dot(sol.x) - p.b(i);
        r = std::max(r, slack);  // primal violation
        if (sol.lambdas.size() == m_total) {
            r = std::max(r, -sol.lambdas(i));                      // dual feasibility
            r = std::max(r, std::abs(sol.lambdas(i) * slack));     // complementarity
        }
    }
    return r;
}

void dump_qp_problem(const QpProblem& p, const std::string& path) {
    nlohmann::json j;
    auto mat = [](const Eigen::MatrixXd& m) {
        std::vector<std::vector<double>> rows;
        for (long i = 0; i < m.rows(); ++i) {
            rows.emplace_back(m.row(i).begin(), m.row(i).end());
        }
        return rows;
    };
    j["H"] = mat(p.H);
    j["g"] = std::vector<double>(p.g.begin(), p.g.end());
    j["A"] = mat(p.A);
    j["b"] = std::vector<double>(p.b.begin(), p.b.end());
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("dump_qp_problem: cannot open " + path);
    }
    out << j.dump();
}

QpProblem load_qp_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("load_qp_problem: cannot open " + path);
    }
    nlohmann::json j;
    in >> j;
    auto mat = [](const nlohmann::json& rows) {
        const long r = static_cast<long>(rows.size());
        const long c = r > 0 ? static_cast<long>(rows[0].size()) : 0;
        Eigen::MatrixXd m(r, c);
        for (long i = 0; i < r; ++i) {
            for (long k = 0; k < c; ++k) {
                m(i, k) = rows[static_cast<size_t>(i)][static_cast<size_t>(k)].get<double>();
            }
        }
        return m;
    };
    QpProblem p;
    p.H = mat(j.at("H"));
    const std::vector<double> gv = j.at("g").get<std::vector<double>>();
    p.g = Eigen::Map<const Eigen::VectorXd>(gv.data(), static_cast<long>(gv.size()));
    p.A = mat(j.at("A"));
    const std::vector<double> bv = j.at("b").get<std::vector<double>>();
    p.b = Eigen::Map<const Eigen::VectorXd>(bv.data(), static_cast<long>(bv.size()));
    if (p.A.rows() == 0) {
        p.A.resize(0, p.H.cols());
    }
    return p;
}

}  // namespace l1ilc


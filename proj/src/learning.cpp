#include "l1ilc/learning.hpp"

#include <cmath>
#include <stdexcept>

#include "l1ilc/kernels.hpp"

namespace l1ilc {

void IlcWeights::validate() const {
    if (q <= 0.0) throw std::invalid_argument("IlcWeights: q must be positive");
    if (r_w < 0.0 || s_w < 0.0) throw std::invalid_argument("IlcWeights: r_w, s_w must be >= 0");
    if (eta <= 0.0 || eps <= 0.0) throw std::invalid_argument("IlcWeights: eta, eps must be positive");
}

void Constraints::validate() const {
    if (D.rows() != ddr_low.size() || D.rows() != ddr_hi.size() ||
        D.rows() != d_nominal.size()) {
        throw std::invalid_argument("Constraints: row count mismatch");
    }
    for (long i = 0; i < ddr_low.size(); ++i) {
        if (!(ddr_low(i) < ddr_hi(i))) {
            throw std::invalid_argument("Constraints: ddr_low must be elementwise below ddr_hi");
        }
    }
}

Constraints make_acceleration_constraints(int N, double dt, int n_axes, double lo, double hi,
                                          const Eigen::VectorXd& r_nominal) {
    Constraints c;
    c.D = second_difference_matrix_interleaved(N, dt, n_axes);
    if (r_nominal.size() != c.D.cols()) {
        throw std::invalid_argument("make_acceleration_constraints: nominal input length mismatch");
    }
    const long rows = c.D.rows();
    c.ddr_low = Eigen::VectorXd::Constant(rows, lo);
    c.ddr_hi = Eigen::VectorXd::Constant(rows, hi);
    c.d_nominal = c.D * r_nominal;
    c.validate();

    // The nominal trajectory itself must respect the physical bounds,
    // otherwise no deviation can restore feasibility at those samples.
    for (long i = 0; i < rows; ++i) {
        if (c.d_nominal(i) < lo || c.d_nominal(i) > hi) {
            throw std::invalid_argument(
                "make_acceleration_constraints: nominal trajectory violates acceleration bounds");
        }
    }
    return c;
}

LearningState make_initial_state(const LiftedSystem& sys, double p0) {
    if (p0 < 0.0) {
        throw std::invalid_argument("make_initial_state: p0 must be >= 0");
    }
    LearningState st;
    st.r_bar = Eigen::VectorXd::Zero(sys.input_dim());
    st.d_hat = Eigen::VectorXd::Zero(sys.output_dim());
    st.p_cov = Eigen::VectorXd::Constant(sys.output_dim(), p0);
    st.iteration = 0;
    st.model_id = sys.model_id;
    return st;
}

void kalman_update(LearningState& state, const LiftedSystem& sys, const IlcWeights& w,
                   const Eigen::VectorXd& y_dev) {
    w.validate();
    if (y_dev.size() != sys.output_dim()) {
        throw std::invalid_argument("kalman_update: measurement length mismatch");
    }
    if (!y_dev.allFinite()) {
        throw std::invalid_argument("kalman_update: non-finite measurement");
    }
    if (state.r_bar.size() != sys.input_dim() || state.d_hat.size() != sys.output_dim()) {
        throw std::invalid_argument("kalman_update: state/system dimension mismatch");
    }

    // Identity state transition and identity measurement map keep a diagonal
    // covariance diagonal, so the filter reduces to elementwise updates.
    const Eigen::VectorXd prediction = kernels::matvec(sys.F, state.r_bar) + state.d_hat;
    for (long i = 0; i < state.d_hat.size(); ++i) {
        const double p_prior = state.p_cov(i) + w.eta;
        const double gain = p_prior / (p_prior + w.eps);
        state.d_hat(i) += gain * (y_dev(i) - prediction(i));
        state.p_cov(i) = (1.0 - gain) * p_prior;
    }
}

IlcPlan make_ilc_plan(const LiftedSystem& sys, const IlcWeights& w, const Constraints& cons) {
    w.validate();
    cons.validate();
    if (cons.D.cols() != sys.input_dim()) {
        throw std::invalid_argument("make_ilc_plan: constraint/system dimension mismatch");
    }

    IlcPlan plan;
    plan.W = Eigen::MatrixXd::Zero(sys.input_dim(), sys.input_dim());
    if (w.s_w > 0.0) {
        plan.W = w.s_w * (cons.D.transpose() * cons.D);
    }
    plan.W.diagonal().array() += w.r_w;
    const bool tri =
        Eigen::MatrixXd(sys.F.triangularView<Eigen::StrictlyUpper>()).cwiseAbs().maxCoeff() == 0.0;
    plan.H = kernels::gram(sys.F, w.q, &plan.W, tri);

    const long m = cons.D.rows();
    plan.A_ineq.resize(2 * m, sys.input_dim());
    plan.A_ineq.topRows(m) = cons.D;
    plan.A_ineq.bottomRows(m) = -cons.D;
    plan.b_ineq.resize(2 * m);
    plan.b_ineq.head(m) = cons.ddr_hi - cons.d_nominal;
    plan.b_ineq.tail(m) = cons.d_nominal - cons.ddr_low;

    plan.q = w.q;
    plan.hfac = std::make_shared<QpFactorization>(plan.H);
    return plan;
}

QpSolution ilc_update(LearningState& state, const LiftedSystem& sys, const IlcWeights& w,
                      const Constraints& cons) {
    return ilc_update(state, sys, make_ilc_plan(sys, w, cons));
}

QpSolution ilc_update(LearningState& state, const LiftedSystem& sys, const IlcPlan& plan) {
    if (state.d_hat.size() != sys.output_dim()) {
        throw std::invalid_argument("ilc_update: state/system dimension mismatch");
    }
    QpProblem qp;
    qp.H = plan.H;
    qp.g = plan.q * kernels::matvec_transpose(sys.F, state.d_hat);
    qp.A = plan.A_ineq;
    qp.b = plan.b_ineq;

    QpSolution sol = solve_qp(qp, *plan.hfac);
    state.r_bar = sol.x;
    state.iteration += 1;
    return sol;
}

}  // namespace l1ilc

#include "l1ilc/lifted.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "l1ilc/state_space.hpp"

namespace l1ilc {

namespace {

void verify_full_row_rank(const LiftedSystem& sys) {
    const Eigen::MatrixXd& F = sys.F;
    if (sys.n_in == sys.n_out) {
        // Lower block triangular and square: full rank iff every diagonal
        // block is invertible. Blocks are C B(k-1), checked via their
        // determinant magnitude.
        for (int k = 0; k < sys.samples; ++k) {
            const Eigen::MatrixXd blk =
                F.block(static_cast<long>(k) * sys.n_out, static_cast<long>(k) * sys.n_in,
                        sys.n_out, sys.n_in);
            if (std::abs(blk.determinant()) < 1e-300) {
                throw std::invalid_argument(
                    "build_lifted: rank-deficient lifted map (zero diagonal block at step " +
                    std::to_string(k) + ")");
            }
        }
        return;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(F.transpose());
    if (qr.rank() < F.rows()) {
        throw std::invalid_argument("build_lifted: lifted map does not have full row rank");
    }
}

}  // namespace

LiftedSystem build_lifted(const std::vector<Eigen::MatrixXd>& A_seq,
                          const std::vector<Eigen::MatrixXd>& B_seq,
                          const Eigen::MatrixXd& C_out, int N, double dt) {
    if (N < 1) {
        throw std::invalid_argument("build_lifted: N >= 1 required");
    }
    if (static_cast<int>(A_seq.size()) < N || static_cast<int>(B_seq.size()) < N) {
        throw std::invalid_argument("build_lifted: need N state and input matrices");
    }
    const long n_x = A_seq[0].rows();
    const int n_in = static_cast<int>(B_seq[0].cols());
    const int n_out = static_cast<int>(C_out.rows());
    if (C_out.cols() != n_x) {
        throw std::invalid_argument("build_lifted: C dimension mismatch");
    }
    for (int k = 0; k < N; ++k) {
        if (A_seq[static_cast<size_t>(k)].rows() != n_x ||
            A_seq[static_cast<size_t>(k)].cols() != n_x ||
            B_seq[static_cast<size_t>(k)].rows() != n_x ||
            B_seq[static_cast<size_t>(k)].cols() != n_in) {
            throw std::invalid_argument("build_lifted: inconsistent matrix dimensions");
        }
    }

    LiftedSystem sys;
    sys.samples = N;
    sys.dt = dt;
    sys.n_in = n_in;
    sys.n_out = n_out;
    sys.F = Eigen::MatrixXd::Zero(static_cast<long>(N) * n_out, static_cast<long>(N) * n_in);

    // Column block l carries the influence of r(l): C B(l) on the diagonal,
    // then propagated through A(l+1), A(l+2), ...
    for (int l = 0; l < N; ++l) {
        Eigen::MatrixXd reach = B_seq[static_cast<size_t>(l)];
        for (int k = l + 1; k <= N; ++k) {
            sys.F.block(static_cast<long>(k - 1) * n_out, static_cast<long>(l) * n_in,
                        n_out, n_in) = C_out * reach;
            if (k < N) {
                reach = A_seq[static_cast<size_t>(k)] * reach;
            }
        }
    }
    verify_full_row_rank(sys);
    return sys;
}

LiftedSystem build_lifted(const Eigen::MatrixXd& Ad, const Eigen::MatrixXd& Bd,
                          const Eigen::MatrixXd& C_out, int N, double dt) {
    std::vector<Eigen::MatrixXd> A_seq(static_cast<size_t>(N), Ad);
    std::vector<Eigen::MatrixXd> B_seq(static_cast<size_t>(N), Bd);
    return build_lifted(A_seq, B_seq, C_out, N, dt);
}

Eigen::MatrixXd second_difference_matrix(int N, double dt) {
    if (N < 3) {
        throw std::invalid_argument("second_difference_matrix: N >= 3 required");
    }
    if (dt <= 0.0) {
        throw std::invalid_argument("second_difference_matrix: dt must be positive");
    }
    const double w = 1.0 / (dt * dt);
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(N - 2, N);
    for (int k = 0; k < N - 2; ++k) {
        D(k, k) = w;
        D(k, k + 1) = -2.0 * w;
        D(k, k + 2) = w;
    }
    return D;
}

Eigen::MatrixXd second_difference_matrix_interleaved(int N, double dt, int n_axes) {
    if (n_axes < 1) {
        throw std::invalid_argument("second_difference_matrix_interleaved: n_axes >= 1");
    }
    const Eigen::MatrixXd D1 = second_difference_matrix(N, dt);
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(static_cast<long>(N - 2) * n_axes,
                                              static_cast<long>(N) * n_axes);
    for (int k = 0; k < N - 2; ++k) {
        for (int c = 0; c < 3; ++c) {
            for (int a = 0; a < n_axes; ++a) {
                D(static_cast<long>(k) * n_axes + a,
                  static_cast<long>(k + c) * n_axes + a) = D1(k, k + c);
            }
        }
    }
    return D;
}

double tracking_error(const Eigen::MatrixXd& r2, const Eigen::MatrixXd& y2) {
    if (r2.rows() != y2.rows() || r2.cols() != y2.cols()) {
        throw std::invalid_argument("tracking_error: trace dimensions differ");
    }
    if (r2.cols() == 0) {
        throw std::invalid_argument("tracking_error: empty traces");
    }
    double acc = 0.0;
    for (long i = 0; i < r2.cols(); ++i) {
        acc += (r2.col(i) - y2.col(i)).norm();
    }
    return acc / static_cast<double>(r2.cols());
}

LiftedModel build_reference_model(const std::vector<double>& m_axes,
                                  const std::vector<double>& k_axes, double dt, int N) {
    if (m_axes.empty() || m_axes.size() != k_axes.size()) {
        throw std::invalid_argument("build_reference_model: need matching m and K lists");
    }
    const int n_axes = static_cast<int>(m_axes.size());
    const long n_x = 2L * n_axes;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n_x, n_x);
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n_x, n_axes);
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n_axes, n_x);
    for (int a = 0; a < n_axes; ++a) {
        const double m = m_axes[static_cast<size_t>(a)];
        const double k = k_axes[static_cast<size_t>(a)];
        if (m <= 0.0 || k <= 0.0) {
            throw std::invalid_argument("build_reference_model: m and K must be positive");
        }
        A(2 * a, 2 * a + 1) = 1.0;
        A(2 * a + 1, 2 * a) = -k * m;
        A(2 * a + 1, 2 * a + 1) = -m;
        B(2 * a + 1, a) = k * m;
        C(a, 2 * a) = 1.0;
    }

    LiftedModel model;
    std::tie(model.Ad, model.Bd) = discretize_zoh(A, B, dt);
    model.C = C;
    model.lifted = build_lifted(model.Ad, model.Bd, C, N, dt);

    std::ostringstream id;
    id << "l1ref;m=";
    for (int a = 0; a < n_axes; ++a) id << (a ? "," : "") << m_axes[static_cast<size_t>(a)];
    id << ";k=";
    for (int a = 0; a < n_axes; ++a) id << (a ? "," : "") << k_axes[static_cast<size_t>(a)];
    id << ";dt=" << dt << ";n=" << N;
    model.lifted.model_id = id.str();
    return model;
}

LiftedModel build_baseline_model(const std::vector<RationalTF>& plant_axes,
                                 double gain_d, double gain_p, double gain_i,
                                 double dt, int N, const std::string& model_id) {
    if (plant_axes.empty()) {
        throw std::invalid_argument("build_baseline_model: need at least one axis plant");
    }
    const int n_axes = static_cast<int>(plant_axes.size());
    const bool has_integrator = gain_i != 0.0;

    // Per-axis closed loop of u = gd*(r2dot - y1) + gp*(r2 - y2) + gi*Int(r2 - y2)
    // around y1 = A(s) u, y2' = y1. States: [plant states, y2, (error integral)].
    std::vector<Eigen::MatrixXd> Acl(static_cast<size_t>(n_axes));
    std::vector<Eigen::MatrixXd> Bcl(static_cast<size_t>(n_axes));  // [r2, r2dot]
    std::vector<long> offsets(static_cast<size_t>(n_axes) + 1, 0);
    for (int a = 0; a < n_axes; ++a) {
        const StateSpace p = to_state_space(plant_axes[static_cast<size_t>(a)]);
        if (p.D(0, 0) != 0.0) {
            throw std::invalid_argument("build_baseline_model: plant must be strictly proper");
        }
        const long np = p.order();
        const long nx = np + 1 + (has_integrator ? 1 : 0);
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(nx, nx);
        Eigen::MatrixXd B = Eigen::MatrixXd::Zero(nx, 2);
        A.topLeftCorner(np, np) = p.A - p.B * gain_d * p.C;
        A.block(0, np, np, 1) = -p.B * gain_p;
        A.block(np, 0, 1, np) = p.C;
        B.block(0, 0, np, 1) = p.B * gain_p;
        B.block(0, 1, np, 1) = p.B * gain_d;
        if (has_integrator) {
            A.block(0, np + 1, np, 1) = p.B * gain_i;
            A(np + 1, np) = -1.0;
            B(np + 1, 0) = 1.0;
        }
        Acl[static_cast<size_t>(a)] = std::move(A);
        Bcl[static_cast<size_t>(a)] = std::move(B);
        offsets[static_cast<size_t>(a) + 1] = offsets[static_cast<size_t>(a)] + nx;
    }

    const long n_x = offsets.back();
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n_x, n_x);
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n_x, 2L * n_axes);
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n_axes, n_x);
    for (int a = 0; a < n_axes; ++a) {
        const long off = offsets[static_cast<size_t>(a)];
        const long nx = offsets[static_cast<size_t>(a) + 1] - off;
        A.block(off, off, nx, nx) = Acl[static_cast<size_t>(a)];
        B.block(off, 2L * a, nx, 2) = Bcl[static_cast<size_t>(a)];
        const long np = nx - 1 - (has_integrator ? 1 : 0);
        C(a, off + np) = 1.0;  // y2 state
    }

    auto [Ad, Bd] = discretize_zoh(A, B, dt);
    // Split the discretized input matrix into the r2 and r2dot channels.
    Eigen::MatrixXd Bd_r(n_x, n_axes), Bd_rd(n_x, n_axes);
    for (int a = 0; a < n_axes; ++a) {
        Bd_r.col(a) = Bd.col(2L * a);
        Bd_rd.col(a) = Bd.col(2L * a + 1);
    }

    const LiftedSystem F_r = build_lifted(Ad, Bd_r, C, N, dt);
    const LiftedSystem F_rd = build_lifted(Ad, Bd_rd, C, N, dt);

    LiftedModel model;
    model.Ad = Ad;
    model.Bd = Bd_r;
    model.C = C;
    model.lifted = F_r;
    // Fold the derivative channel back onto the input with a causal backward
    // difference: r2dot(l) ~= (r(l) - r(l-1))/dt, r(-1) taken as zero since the
    // lifted map acts on deviations. D1 is bidiagonal, so column c of F_rd*D1
    // is (F_rd.col(c) - F_rd.col(c + n_axes)) / dt.
    const long dim = model.lifted.input_dim();
    for (long c = 0; c < dim; ++c) {
        model.lifted.F.col(c) += F_rd.F.col(c) / dt;
        if (c + n_axes < dim) {
            model.lifted.F.col(c) -= F_rd.F.col(c + n_axes) / dt;
        }
    }
    verify_full_row_rank(model.lifted);
    model.lifted.model_id = model_id;
    return model;
}

ReferenceModelInput reference_model_input(const LiftedModel& model,
                                          const Eigen::VectorXd& y_star,
                                          const Eigen::VectorXd& x0) {
    const LiftedSystem& sys = model.lifted;
    if (sys.n_in != sys.n_out) {
        throw std::invalid_argument("reference_model_input: lifted map must be square");
    }
    if (y_star.size() != sys.output_dim()) {
        throw std::invalid_argument("reference_model_input: y* length mismatch");
    }
    if (x0.size() != model.Ad.rows()) {
        throw std::invalid_argument("reference_model_input: x0 length mismatch");
    }
    for (int k = 0; k < sys.samples; ++k) {
        const Eigen::MatrixXd blk =
            sys.F.block(static_cast<long>(k) * sys.n_out, static_cast<long>(k) * sys.n_in,
                        sys.n_out, sys.n_in);
        if (std::abs(blk.determinant()) < 1e-300) {
            throw std::invalid_argument("reference_model_input: singular lifted map");
        }
    }

    ReferenceModelInput out;
    out.d_0.resize(sys.output_dim());
    Eigen::VectorXd x = x0;
    for (int k = 1; k <= sys.samples; ++k) {
        x = model.Ad * x;
        out.d_0.segment(static_cast<long>(k - 1) * sys.n_out, sys.n_out) = model.C * x;
    }
    // Axis-decoupled models make F elementwise lower triangular; fall back to a
    // full factorization when in-step coupling populates the diagonal blocks.
    const bool elementwise_tri =
        Eigen::MatrixXd(sys.F.triangularView<Eigen::StrictlyUpper>()).cwiseAbs().maxCoeff() == 0.0;
    const Eigen::VectorXd rhs = y_star - out.d_0;
    out.r_2_1 = elementwise_tri ? sys.F.triangularView<Eigen::Lower>().solve(rhs).eval()
                                : sys.F.partialPivLu().solve(rhs).eval();
    out.d_1 = sys.F * (out.r_2_1 - y_star);
    return out;
}

Eigen::VectorXd interleave(const Eigen::MatrixXd& axis_major) {
    const long n_axes = axis_major.rows();
    const long N = axis_major.cols();
    Eigen::VectorXd v(n_axes * N);
    for (long k = 0; k < N; ++k) {
        for (long a = 0; a < n_axes; ++a) {
            v(k * n_axes + a) = axis_major(a, k);
        }
    }
    return v;
}

Eigen::MatrixXd deinterleave(const Eigen::VectorXd& lifted, int n_axes) {
    if (n_axes < 1 || lifted.size() % n_axes != 0) {
        throw std::invalid_argument("deinterleave: length not divisible by axis count");
    }
    const long N = lifted.size() / n_axes;
    Eigen::MatrixXd m(n_axes, N);
    for (long k = 0; k < N; ++k) {
        for (long a = 0; a < n_axes; ++a) {
            m(a, k) = lifted(k * n_axes + a);
        }
    }
    return m;
}

}  // namespace l1ilc

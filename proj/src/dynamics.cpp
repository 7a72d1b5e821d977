#include "omstirap/dynamics.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace omstirap {

namespace {

SparseMatrix to_sparse(const Matrix& m) {
    SparseMatrix s = m.sparseView(cplx(0.0), 0.0);
    s.makeCompressed();
    return s;
}

void check_same_space(const HilbertSpace& a, const HilbertSpace& b, const char* who) {
    if (!(a == b)) throw Error(ErrorKind::invalid_dimension, std::string(who) + ": space mismatch");
}

} // namespace

// --------------------------- LindbladModel ----------------------------------

LindbladModel::LindbladModel(HilbertSpace space, Operator h0, std::vector<CollapseTerm> collapse)
    : LindbladModel(std::move(space), std::move(h0), {}, {}, std::move(collapse)) {}

LindbladModel::LindbladModel(HilbertSpace space, Operator h0, std::vector<Operator> drive_ops,
                             CoefficientFn coefficients, std::vector<CollapseTerm> collapse)
    : space_(std::move(space)),
      h0_(std::move(h0)),
      drive_ops_(std::move(drive_ops)),
      coefficients_(std::move(coefficients)),
      collapse_(std::move(collapse)) {
    check_same_space(space_, h0_.space(), "LindbladModel");
    for (const auto& op : drive_ops_) check_same_space(space_, op.space(), "LindbladModel");
    for (const auto& c : collapse_) {
        check_same_space(space_, c.op.space(), "LindbladModel");
        if (!(c.rate >= 0.0)) throw Error(ErrorKind::invalid_argument, "LindbladModel: collapse rate must be >= 0");
    }
    if (!drive_ops_.empty() && !coefficients_) {
        throw Error(ErrorKind::invalid_argument, "LindbladModel: drive operators need a coefficient function");
    }
    build_sparse();
}

void LindbladModel::build_sparse() {
    const auto n = space_.total_dim();
    Matrix damping = Matrix::Zero(n, n);
    for (const auto& c : collapse_) {
        if (c.rate == 0.0) continue;
        damping += c.rate * (c.op.matrix().adjoint() * c.op.matrix());
        jump_.push_back(to_sparse(std::sqrt(c.rate) * c.op.matrix()));
        jump_adj_.push_back(to_sparse(std::sqrt(c.rate) * c.op.matrix().adjoint()));
    }
    const Matrix base = h0_.matrix() - 0.5 * I_UNIT * damping;

    Eigen::MatrixXd mask = base.cwiseAbs();
    for (const auto& op : drive_ops_) mask += op.matrix().cwiseAbs() + op.matrix().adjoint().cwiseAbs();

    std::vector<Eigen::Triplet<cplx>> trip;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (mask(i, j) != 0.0) trip.emplace_back(i, j, cplx(1.0));
        }
    }
    pattern_.resize(n, n);
    pattern_.setFromTriplets(trip.begin(), trip.end());
    pattern_.makeCompressed();

    auto aligned = [&](const Matrix& m) {
        std::vector<cplx> v;
        v.reserve(pattern_.nonZeros());
        for (Eigen::Index r = 0; r < pattern_.outerSize(); ++r) {
            for (SparseMatrix::InnerIterator it(pattern_, r); it; ++it) v.push_back(m(it.row(), it.col()));
        }
        return v;
    };
    base_values_ = aligned(base);
    for (const auto& op : drive_ops_) {
        drive_values_.push_back(aligned(op.matrix()));
        drive_adj_values_.push_back(aligned(op.matrix().adjoint()));
    }
}

Operator LindbladModel::hamiltonian(double t) const {
    Matrix h = h0_.matrix();
    if (!drive_ops_.empty()) {
        std::vector<cplx> coef;
        coefficients_(t, coef);
        for (std::size_t k = 0; k < drive_ops_.size(); ++k) {
            h += coef[k] * drive_ops_[k].matrix() + std::conj(coef[k]) * drive_ops_[k].matrix().adjoint();
        }
    }
    return Operator(space_, std::move(h));
}

LindbladModel LindbladModel::frozen_at(double t) const {
    return LindbladModel(space_, hamiltonian(t), collapse_);
}

LindbladModel::Workspace LindbladModel::make_workspace() const {
    Workspace ws;
    ws.heff = pattern_;
    ws.coef.resize(drive_ops_.size());
    const auto n = space_.total_dim();
    ws.tmp.resize(n, n);
    ws.tmp2.resize(n, n);
    return ws;
}

void LindbladModel::rhs(double t, const Matrix& rho, Matrix& out, Workspace& ws) const {
    const auto nnz = static_cast<std::size_t>(pattern_.nonZeros());
    cplx* values = ws.heff.valuePtr();
    std::copy(base_values_.begin(), base_values_.end(), values);
    if (!drive_ops_.empty()) {
        coefficients_(t, ws.coef);
        for (std::size_t k = 0; k < drive_ops_.size(); ++k) {
            const cplx c = ws.coef[k];
            const cplx cc = std::conj(c);
            const auto& p = drive_values_[k];
            const auto& q = drive_adj_values_[k];
            for (std::size_t i = 0; i < nnz; ++i) values[i] += c * p[i] + cc * q[i];
        }
    }
    // d rho = -i Heff rho + i rho Heff^dag + sum J rho J^dag
    ws.tmp.noalias() = ws.heff * rho;
    ws.tmp2.noalias() = ws.heff * rho.adjoint();
    out.noalias() = -I_UNIT * ws.tmp;
    out.noalias() += I_UNIT * ws.tmp2.adjoint();
    for (std::size_t k = 0; k < jump_.size(); ++k) {
        ws.tmp.noalias() = jump_[k] * rho;
        out.noalias() += ws.tmp * jump_adj_[k];
    }
}

std::vector<CollapseTerm> standard_collapse_terms(const SystemParams& params, const HilbertSpace& space) {
    std::vector<CollapseTerm> out;
    if (params.kappa > 0.0) out.push_back({annihilation(space, cavity), params.kappa, "kappa a"});
    const double gamma[2] = {params.gamma1, params.gamma2};
    const double omega[2] = {params.omega1, params.omega2};
    for (int i = 0; i < 2; ++i) {
        if (gamma[i] <= 0.0) continue;
        const double nbar = bose_occupancy(omega[i], params.temperature);
        const Operator b = annihilation(space, static_cast<std::size_t>(mech1 + i));
        const std::string idx = std::to_string(i + 1);
        out.push_back({b, gamma[i] * (nbar + 1.0), "gamma" + idx + " b" + idx});
        if (nbar > 0.0) out.push_back({b.adjoint(), gamma[i] * nbar, "gamma" + idx + " b" + idx + "^dag"});
    }
    return out;
}

LindbladModel make_lindblad_model(const HamiltonianSpec& spec) {
    spec.validate();
    auto ops = coupling_operators(spec);
    auto fn = [spec](double t, std::vector<cplx>& out) { out = coupling_coefficients(spec, t); };
    return LindbladModel(spec.space, Operator::zero(spec.space), std::move(ops), fn,
                         standard_collapse_terms(spec.params, spec.space));
}

Matrix lindblad_rhs(const LindbladModel& model, double t, const Matrix& rho) {
    const auto n = model.space().total_dim();
    if (rho.rows() != n || rho.cols() != n) throw Error(ErrorKind::invalid_dimension, "lindblad_rhs: space mismatch");
    auto ws = model.make_workspace();
    Matrix out(n, n);
    model.rhs(t, rho, out, ws);
    return out;
}

Matrix lindblad_rhs(const LindbladModel& model, double t, const DensityMatrix& rho) {
    check_same_space(model.space(), rho.space(), "lindblad_rhs");
    return lindblad_rhs(model, t, rho.matrix());
}

// --------------------------- Integrator -------------------------------------

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9;
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561, A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247, A64 = 49.0 / 176,
                 A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784, B6 = 11.0 / 84;
constexpr double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920, E5 = -17253.0 / 339200,
                 E6 = 22.0 / 525, E7 = -1.0 / 40;

double error_norm(const Matrix& err, const Matrix& y0, const Matrix& y1, double rtol, double atol) {
    double sum = 0.0;
    const auto n = err.size();
    for (Eigen::Index i = 0; i < n; ++i) {
        const double sc = atol + rtol * std::max(std::abs(y0(i)), std::abs(y1(i)));
        const double r = std::abs(err(i)) / sc;
        sum += r * r;
    }
    return std::sqrt(sum / static_cast<double>(n));
}

void validate_config(const IntegratorConfig& c) {
    if (!(c.rel_tol > 0.0) || !(c.abs_tol > 0.0)) throw Error(ErrorKind::invalid_argument, "evolve: tolerances must be > 0");
    if (c.sample_times.empty()) throw Error(ErrorKind::invalid_argument, "evolve: no sample times");
    for (std::size_t i = 1; i < c.sample_times.size(); ++i) {
        if (!(c.sample_times[i] > c.sample_times[i - 1])) {
            throw Error(ErrorKind::invalid_argument, "evolve: sample times must be strictly increasing");
        }
    }
}

} // namespace

Trajectory evolve(const LindbladModel& model, const DensityMatrix& rho0, const IntegratorConfig& config,
                  const SampleObserver& observer) {
    check_same_space(model.space(), rho0.space(), "evolve");
    validate_config(config);

    const auto& times = config.sample_times;
    const double rtol = config.rel_tol, atol = config.abs_tol;
    const double hmax = config.max_step > 0.0 ? config.max_step : std::numeric_limits<double>::infinity();
    const HilbertSpace& space = model.space();
    const auto n = space.total_dim();

    Trajectory traj;
    auto record = [&](std::size_t idx, double t, const Matrix& y) {
        DensityMatrix rho = [&] {
            try {
                return DensityMatrix(space, y, SAMPLE_TOLERANCES);
            } catch (const Error& e) {
                throw IntegrationError(ErrorKind::diverged, std::string("evolve: sampled state invalid: ") + e.what(), t);
            }
        }();
        traj.times.push_back(t);
        if (observer) observer(idx, t, rho);
        if (config.keep_states) traj.states.push_back(std::move(rho));
    };

    auto ws = model.make_workspace();
    Matrix y = rho0.matrix();
    double t = times.front();
    record(0, t, y);
    if (times.size() == 1) return traj;

    Matrix k1(n, n), k2(n, n), k3(n, n), k4(n, n), k5(n, n), k6(n, n), k7(n, n), ys(n, n), ynew(n, n), err(n, n);
    model.rhs(t, y, k1, ws);

    // Initial step from the local scale of y and its derivative.
    double h;
    {
        double d0 = 0.0, d1 = 0.0;
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            const double sc = atol + rtol * std::abs(y(i));
            d0 += std::norm(y(i)) / (sc * sc);
            d1 += std::norm(k1(i)) / (sc * sc);
        }
        d0 = std::sqrt(d0 / static_cast<double>(y.size()));
        d1 = std::sqrt(d1 / static_cast<double>(y.size()));
        const double span = times.back() - times.front();
        h = (d1 <= 1e-5 * d0 || d1 == 0.0) ? span : 0.01 * d0 / d1;
        h = std::min({h, hmax, span});
    }

    std::size_t steps = 0;
    for (std::size_t next = 1; next < times.size(); ++next) {
        const double target = times[next];
        while (t < target) {
            if (steps++ > config.max_steps) {
                throw IntegrationError(ErrorKind::stiffness, "evolve: step budget exhausted", t);
            }
            double step = std::min(h, hmax);
            bool landing = false;
            if (t + step >= target - 1e-12 * std::abs(target - t)) {
                step = target - t;
                landing = true;
            }
            if (!(step > 16.0 * std::numeric_limits<double>::epsilon() * std::max(1e-300, std::abs(t)))) {
                std::ostringstream os;
                os << "evolve: step size underflow at t = " << t;
                throw IntegrationError(ErrorKind::stiffness, os.str(), t);
            }

            ys = y + step * (A21 * k1);
            model.rhs(t + C2 * step, ys, k2, ws);
            ys = y + step * (A31 * k1 + A32 * k2);
            model.rhs(t + C3 * step, ys, k3, ws);
            ys = y + step * (A41 * k1 + A42 * k2 + A43 * k3);
            model.rhs(t + C4 * step, ys, k4, ws);
            ys = y + step * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4);
            model.rhs(t + C5 * step, ys, k5, ws);
            ys = y + step * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5);
            model.rhs(t + step, ys, k6, ws);
            ynew = y + step * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6);
            model.rhs(t + step, ynew, k7, ws);
            err = step * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7);

            const double e = error_norm(err, y, ynew, rtol, atol);
            if (!std::isfinite(e) || e > 1.0) {
                ++traj.rejected_steps;
                const double fac = std::isfinite(e) ? std::max(0.2, 0.9 * std::pow(e, -0.2)) : 0.2;
                h = step * fac;
                continue;
            }

            ++traj.accepted_steps;
            const double t_old = t;
            t = landing ? target : t + step;
            y = 0.5 * (ynew + ynew.adjoint());
            std::swap(k1, k7);
            if (const double drift = std::abs(y.trace().real() - 1.0); drift > 1e-4) {
                std::ostringstream os;
                os << "evolve: trace drift " << drift << " at t = " << t;
                throw IntegrationError(ErrorKind::diverged, os.str(), t_old);
            }
            const double fac = e == 0.0 ? 10.0 : std::clamp(0.9 * std::pow(e, -0.2), 0.2, 10.0);
            // A landing step may be artificially short; do not let it shrink h.
            h = landing ? std::max(h, step * fac) : step * fac;
        }
        record(next, t, y);
    }
    return traj;
}

// --------------------------- Oracle -----------------------------------------

Matrix liouvillian(const LindbladModel& model, double t) {
    const auto n = model.space().total_dim();
    const Matrix id = Matrix::Identity(n, n);
    Matrix heff = model.hamiltonian(t).matrix();
    for (const auto& c : model.collapse_terms()) heff -= 0.5 * I_UNIT * c.rate * (c.op.matrix().adjoint() * c.op.matrix());
    Matrix l = -I_UNIT * kron(id, heff) + I_UNIT * kron(heff.conjugate(), id);
    for (const auto& c : model.collapse_terms()) l += c.rate * kron(c.op.matrix().conjugate(), c.op.matrix());
    return l;
}

DensityMatrix propagator_oracle(const LindbladModel& model, double t, const DensityMatrix& rho0, double dt) {
    check_same_space(model.space(), rho0.space(), "propagator_oracle");
    const auto n = model.space().total_dim();
    if (n * n > 4096) throw Error(ErrorKind::oracle_too_large, "propagator_oracle: total_dim^2 exceeds 4096");
    const Matrix l = liouvillian(model, t);
    const Matrix prop = (l * dt).exp();
    const Vector v = Eigen::Map<const Vector>(rho0.matrix().data(), n * n);
    const Vector w = prop * v;
    Matrix rho = Eigen::Map<const Matrix>(w.data(), n, n);
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return DensityMatrix(model.space(), std::move(rho), SAMPLE_TOLERANCES);
}

void add_expectation(Trajectory& trajectory, const std::string& label, const Operator& op) {
    std::vector<double> series;
    series.reserve(trajectory.states.size());
    for (const auto& s : trajectory.states) series.push_back(expectation(op, s).real());
    trajectory.observables[label] = std::move(series);
}

} // namespace omstirap

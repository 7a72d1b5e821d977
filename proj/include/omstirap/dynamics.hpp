// dynamics.hpp: Lindblad generator, adaptive integration, and a propagator oracle

#pragma once

#include "omstirap/hilbert.hpp"
#include "omstirap/model.hpp"

#include <Eigen/Sparse>

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace omstirap {

using SparseMatrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

struct CollapseTerm {
    Operator op;
    double rate = 0.0;
    std::string label;
};

// H(t) = h0 + sum_k [c_k(t) A_k + conj(c_k(t)) A_k^dag], plus collapse terms.
class LindbladModel {
public:
    using CoefficientFn = std::function<void(double t, std::vector<cplx>& out)>;

    LindbladModel(HilbertSpace space, Operator h0, std::vector<CollapseTerm> collapse);
    LindbladModel(HilbertSpace space, Operator h0, std::vector<Operator> drive_ops, CoefficientFn coefficients,
                  std::vector<CollapseTerm> collapse);

    const HilbertSpace& space() const noexcept { return space_; }
    const std::vector<CollapseTerm>& collapse_terms() const noexcept { return collapse_; }
    std::size_t drive_count() const noexcept { return drive_ops_.size(); }

    Operator hamiltonian(double t) const;
    // Same model with H held at its value at t.
    LindbladModel frozen_at(double t) const;

    // Scratch buffers for the allocation-free right-hand side.
    struct Workspace {
        std::vector<cplx> coef;
        SparseMatrix heff;
        Matrix tmp, tmp2;
    };
    Workspace make_workspace() const;
    void rhs(double t, const Matrix& rho, Matrix& out, Workspace& ws) const;

private:
    void build_sparse();

    HilbertSpace space_;
    Operator h0_;
    std::vector<Operator> drive_ops_;
    CoefficientFn coefficients_;
    std::vector<CollapseTerm> collapse_;

    // Effective Hamiltonian pattern: values = base + sum_k c_k P_k + conj(c_k) Q_k.
    SparseMatrix pattern_;
    std::vector<cplx> base_values_;
    std::vector<std::vector<cplx>> drive_values_;
    std::vector<std::vector<cplx>> drive_adj_values_;
    std::vector<SparseMatrix> jump_;       // sqrt(rate) C
    std::vector<SparseMatrix> jump_adj_;   // sqrt(rate) C^dag
};

// kappa on a; gamma_i (nbar_i + 1) on b_i; gamma_i nbar_i on b_i^dag, with
// nbar_i = bose_occupancy(omega_i, T). Zero-rate channels are omitted.
std::vector<CollapseTerm> standard_collapse_terms(const SystemParams& params, const HilbertSpace& space);

LindbladModel make_lindblad_model(const HamiltonianSpec& spec);

Matrix lindblad_rhs(const LindbladModel& model, double t, const Matrix& rho);
Matrix lindblad_rhs(const LindbladModel& model, double t, const DensityMatrix& rho);

struct IntegratorConfig {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    double max_step = 0.0;   // <= 0: unlimited
    std::vector<double> sample_times;
    bool keep_states = true;
    std::size_t max_steps = 50'000'000;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<DensityMatrix> states;
    std::map<std::string, std::vector<double>> observables;
    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;
};

// Called at each sample time with the validated state.
using SampleObserver = std::function<void(std::size_t index, double t, const DensityMatrix& rho)>;

// Dormand-Prince 5(4) with FSAL and step clipping onto sample times.
Trajectory evolve(const LindbladModel& model, const DensityMatrix& rho0, const IntegratorConfig& config,
                  const SampleObserver& observer = {});

// Explicit Liouvillian (column-stacked vec convention) of the model frozen at t.
Matrix liouvillian(const LindbladModel& model, double t);

// exp(L dt) applied to rho0 with L frozen at t; total_dim^2 must not exceed 4096.
DensityMatrix propagator_oracle(const LindbladModel& model, double t, const DensityMatrix& rho0, double dt);

void add_expectation(Trajectory& trajectory, const std::string& label, const Operator& op);

} // namespace omstirap

#pragma once

#include <atomic>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "vtwalk/expansion.hpp"

namespace vtwalk {

using StateVector = Eigen::VectorXcd;

// One diffusion block: the reflection I - 2|psi><psi| on the subspace spanned
// by a vertex and its children, or the identity when the vertex is marked.
struct DiffusionBlock {
    std::uint32_t owner = 0;
    bool marked = false;
    std::vector<std::uint32_t> support; // owner first, then children
    Eigen::VectorXd psi;                // unit vector over support
};

// Eigenphases theta_k of the walk step with eigenvalue e^{2 i theta_k}, and
// the squared overlap of each eigenspace with the root state. Entries are
// aggregated per distinct phase and sorted by phase.
struct EigenSystem {
    std::vector<double> phases; // in (-pi/2, pi/2]
    std::vector<double> masses; // |alpha_k|^2, sums to 1

    std::size_t size() const { return phases.size(); }
};

// The walk step U = R_B R_A over the expanded-tree vertex basis. R_A applies
// diffusion at even levels, R_B at odd levels plus +1 on the root. Immutable
// after construction; the query counter charges 4 oracle queries per U.
class WalkOperator {
public:
    explicit WalkOperator(const ExpandedTree& expanded);

    std::size_t dim() const { return dim_; }

    StateVector apply_RA(const StateVector& state) const;
    StateVector apply_RB(const StateVector& state) const;

    // One walk step R_B(R_A(state)); adds 4 to the query counter.
    StateVector apply_U(const StateVector& state) const;

    // Same map without query accounting (used where queries are charged at
    // the circuit level, e.g. one controlled-U^{2^j} ladder per estimation).
    StateVector apply_U_uncounted(const StateVector& state) const;

    std::uint64_t queries() const { return queries_.load(); }
    void charge_queries(std::uint64_t q) const { queries_.fetch_add(q); }
    void reset_queries() const { queries_.store(0); }

    std::size_t dense_cap() const { return dense_cap_; }
    void set_dense_cap(std::size_t cap) { dense_cap_ = cap; }

    Eigen::MatrixXd dense_RA() const;
    Eigen::MatrixXd dense_RB() const;
    Eigen::MatrixXd dense_U() const; // errors above the dense cap

    EigenSystem eigensystem() const; // dense path, errors above the cap

    const std::vector<DiffusionBlock>& a_blocks() const { return a_blocks_; }
    const std::vector<DiffusionBlock>& b_blocks() const { return b_blocks_; }

    WalkOperator(const WalkOperator& other);
    WalkOperator& operator=(const WalkOperator& other);

private:
    std::size_t dim_ = 0;
    std::vector<DiffusionBlock> a_blocks_;
    std::vector<DiffusionBlock> b_blocks_;
    std::size_t dense_cap_ = 4096;
    mutable std::atomic<std::uint64_t> queries_{0};
};

WalkOperator build_walk(const ExpandedTree& expanded);

// Path eigenvector of a marked vertex m: (-1)^{l(x)} / sqrt(w_x) on the
// root-to-m path, zero elsewhere. Unnormalized; a 1-eigenvector of both
// reflections.
StateVector phi_m(const ExpandedTree& expanded, std::uint32_t m);

// The all-vertex witness sqrt(w_x / w_r)|x>; in an unmarked tree it is
// annihilated by the +1 projector of R_A and projects onto |r> under R_B.
StateVector eta(const ExpandedTree& expanded);

// Phase spectrum of a real orthogonal matrix together with the spectral
// measure of `ref`. Eigenvalues are e^{2 i theta}; the basis is computed from
// the commuting symmetric/skew parts so eigenspace masses stay orthonormal
// even on degenerate spectra.
EigenSystem unitary_phase_spectrum(const Eigen::MatrixXd& U, const Eigen::VectorXd& ref);

// sqrt of the spectral mass within |theta| <= eps.
double p_eps_norm(const EigenSystem& eigs, double eps);

// Plot-ready dump: one "theta,mass" row per distinct phase.
std::string spectrum_to_csv(const EigenSystem& eigs);

} // namespace vtwalk

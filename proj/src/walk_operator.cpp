#include "vtwalk/walk_operator.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>

namespace vtwalk {

namespace {

constexpr double kPi = 3.14159265358979323846;

DiffusionBlock make_block(const ExpandedTree& expanded, std::uint32_t owner) {
    const ExpandedVertex& x = expanded.vertices[owner];
    DiffusionBlock block;
    block.owner = owner;
    block.marked = x.marked;
    block.support.push_back(owner);
    for (std::uint32_t c : expanded.children[owner])
        block.support.push_back(c);
    if (!block.marked) {
        block.psi.resize(static_cast<Eigen::Index>(block.support.size()));
        for (std::size_t i = 0; i < block.support.size(); ++i)
            block.psi[static_cast<Eigen::Index>(i)] =
                std::sqrt(expanded.vertices[block.support[i]].weight);
        block.psi.normalize();
    }
    return block;
}

void apply_block(const DiffusionBlock& block, StateVector& state) {
    if (block.marked)
        return;
    std::complex<double> dot = 0.0;
    for (std::size_t i = 0; i < block.support.size(); ++i)
        dot += block.psi[static_cast<Eigen::Index>(i)] * state[block.support[i]];
    dot *= 2.0;
    for (std::size_t i = 0; i < block.support.size(); ++i)
        state[block.support[i]] -= dot * block.psi[static_cast<Eigen::Index>(i)];
}

void stamp_block(const DiffusionBlock& block, Eigen::MatrixXd& m) {
    if (block.marked)
        return;
    for (std::size_t i = 0; i < block.support.size(); ++i)
        for (std::size_t j = 0; j < block.support.size(); ++j)
            m(block.support[i], block.support[j]) -=
                2.0 * block.psi[static_cast<Eigen::Index>(i)] *
                block.psi[static_cast<Eigen::Index>(j)];
}

} // namespace

WalkOperator::WalkOperator(const ExpandedTree& expanded) {
    if (expanded.size() < 2)
        fail(ErrorKind::EmptyTree, "walk needs at least one expanded edge");
    dim_ = expanded.size();
    for (const ExpandedVertex& x : expanded.vertices) {
        // Every vertex owns one diffusion block; even levels go to R_A, odd
        // to R_B. The root is level 0, so R_B leaves it fixed.
        DiffusionBlock block = make_block(expanded, x.id);
        if (x.level % 2 == 0)
            a_blocks_.push_back(std::move(block));
        else
            b_blocks_.push_back(std::move(block));
    }
}

WalkOperator::WalkOperator(const WalkOperator& other)
    : dim_(other.dim_), a_blocks_(other.a_blocks_), b_blocks_(other.b_blocks_),
      dense_cap_(other.dense_cap_), queries_(other.queries_.load()) {}

WalkOperator& WalkOperator::operator=(const WalkOperator& other) {
    dim_ = other.dim_;
    a_blocks_ = other.a_blocks_;
    b_blocks_ = other.b_blocks_;
    dense_cap_ = other.dense_cap_;
    queries_.store(other.queries_.load());
    return *this;
}

StateVector WalkOperator::apply_RA(const StateVector& state) const {
    if (static_cast<std::size_t>(state.size()) != dim_)
        fail(ErrorKind::DimensionMismatch, "state dimension does not match the walk");
    StateVector out = state;
    for (const DiffusionBlock& block : a_blocks_)
        apply_block(block, out);
    return out;
}

StateVector WalkOperator::apply_RB(const StateVector& state) const {
    if (static_cast<std::size_t>(state.size()) != dim_)
        fail(ErrorKind::DimensionMismatch, "state dimension does not match the walk");
    StateVector out = state;
    for (const DiffusionBlock& block : b_blocks_)
        apply_block(block, out);
    return out;
}

StateVector WalkOperator::apply_U(const StateVector& state) const {
    StateVector out = apply_U_uncounted(state);
    queries_.fetch_add(4);
    return out;
}

StateVector WalkOperator::apply_U_uncounted(const StateVector& state) const {
    return apply_RB(apply_RA(state));
}

Eigen::MatrixXd WalkOperator::dense_RA() const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(dim_, dim_);
    for (const DiffusionBlock& block : a_blocks_)
        stamp_block(block, m);
    return m;
}

Eigen::MatrixXd WalkOperator::dense_RB() const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(dim_, dim_);
    for (const DiffusionBlock& block : b_blocks_)
        stamp_block(block, m);
    return m;
}

Eigen::MatrixXd WalkOperator::dense_U() const {
    if (dim_ > dense_cap_)
        fail(ErrorKind::DimensionTooLarge,
             "dense step operator needs dimension <= " + std::to_string(dense_cap_) +
                 ", got " + std::to_string(dim_));
    return dense_RB() * dense_RA();
}

EigenSystem WalkOperator::eigensystem() const {
    Eigen::MatrixXd u = dense_U();
    Eigen::VectorXd root = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim_));
    root[0] = 1.0;
    return unitary_phase_spectrum(u, root);
}

WalkOperator build_walk(const ExpandedTree& expanded) {
    return WalkOperator(expanded);
}

StateVector phi_m(const ExpandedTree& expanded, std::uint32_t m) {
    if (m >= expanded.size())
        fail(ErrorKind::UnknownVertex, "expanded vertex " + std::to_string(m) + " out of range");
    if (!expanded.vertices[m].marked)
        fail(ErrorKind::NotMarked, "vertex " + std::to_string(m) + " is not marked");

    StateVector v = StateVector::Zero(static_cast<Eigen::Index>(expanded.size()));
    std::uint32_t x = m;
    while (true) {
        const ExpandedVertex& ev = expanded.vertices[x];
        double sign = ev.level % 2 == 0 ? 1.0 : -1.0;
        v[x] = sign / std::sqrt(ev.weight);
        if (ev.is_root())
            break;
        x = *ev.parent;
    }
    return v;
}

StateVector eta(const ExpandedTree& expanded) {
    StateVector v(static_cast<Eigen::Index>(expanded.size()));
    for (const ExpandedVertex& x : expanded.vertices)
        v[x.id] = std::sqrt(x.weight / expanded.root_weight);
    return v;
}

namespace {

double fold_phase(std::complex<double> lambda) {
    double theta = std::arg(lambda) / 2.0;
    // e^{2i theta} identifies theta up to pi; keep (-pi/2, pi/2] with the
    // lambda = -1 tie on +pi/2.
    if (theta <= -kPi / 2.0 + 1e-12)
        theta += kPi;
    return theta;
}

struct PhaseMass {
    double phase;
    double mass;
};

} // namespace

EigenSystem unitary_phase_spectrum(const Eigen::MatrixXd& U, const Eigen::VectorXd& ref) {
    const Eigen::Index n = U.rows();
    if (U.cols() != n || ref.size() != n)
        fail(ErrorKind::DimensionMismatch, "operator and reference state disagree in dimension");

    // The symmetric and skew parts of an orthogonal U commute, so we can
    // diagonalize the symmetric part first and split each cos-degenerate
    // cluster by the skew part. Both stages are self-adjoint solves, which
    // keeps the combined eigenbasis orthonormal even on degenerate spectra;
    // a direct nonsymmetric solve does not guarantee that.
    Eigen::MatrixXd cos_part = (U + U.transpose()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> cos_solver(cos_part);
    if (cos_solver.info() != Eigen::Success)
        fail(ErrorKind::NumericalFailure, "symmetric-part eigendecomposition failed");
    const Eigen::VectorXd& cos_vals = cos_solver.eigenvalues();
    const Eigen::MatrixXd& q = cos_solver.eigenvectors();

    std::vector<PhaseMass> raw;
    raw.reserve(static_cast<std::size_t>(n));

    constexpr double cluster_gap = 1e-10;
    Eigen::Index lo = 0;
    while (lo < n) {
        Eigen::Index hi = lo + 1;
        while (hi < n && cos_vals[hi] - cos_vals[hi - 1] <= cluster_gap)
            ++hi;
        const Eigen::Index m = hi - lo;
        Eigen::Ref<const Eigen::MatrixXd> basis = q.middleCols(lo, m);

        if (m == 1) {
            // Isolated cos value: a real eigenvector of U itself.
            Eigen::VectorXd v = basis.col(0);
            double lambda = v.dot(U * v);
            double mass = v.dot(ref);
            raw.push_back({fold_phase({lambda, 0.0}), mass * mass});
        } else {
            Eigen::MatrixXd restricted = basis.transpose() * U * basis;
            Eigen::MatrixXd skew = (restricted - restricted.transpose()) / 2.0;
            Eigen::MatrixXcd herm =
                std::complex<double>(0.0, 1.0) * skew.cast<std::complex<double>>();
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> sin_solver(herm);
            if (sin_solver.info() != Eigen::Success)
                fail(ErrorKind::NumericalFailure, "skew-part eigendecomposition failed");
            Eigen::MatrixXcd vecs = basis * sin_solver.eigenvectors();
            for (Eigen::Index j = 0; j < m; ++j) {
                Eigen::VectorXcd v = vecs.col(j);
                std::complex<double> lambda = v.dot(U * v); // Eigen dot conjugates v
                std::complex<double> alpha = v.dot(ref.cast<std::complex<double>>());
                raw.push_back({fold_phase(lambda), std::norm(alpha)});
            }
        }
        lo = hi;
    }

    std::sort(raw.begin(), raw.end(),
              [](const PhaseMass& a, const PhaseMass& b) { return a.phase < b.phase; });

    // Aggregate per distinct phase: mass-weighted mean keeps kernel sums
    // first-order exact when exactly-degenerate phases differ by rounding.
    constexpr double phase_gap = 1e-9;
    EigenSystem out;
    std::size_t i = 0;
    while (i < raw.size()) {
        std::size_t j = i + 1;
        while (j < raw.size() && raw[j].phase - raw[j - 1].phase <= phase_gap)
            ++j;
        double mass = 0.0, weighted = 0.0, plain = 0.0;
        for (std::size_t k = i; k < j; ++k) {
            mass += raw[k].mass;
            weighted += raw[k].mass * raw[k].phase;
            plain += raw[k].phase;
        }
        double phase = mass > 0.0 ? weighted / mass : plain / double(j - i);
        out.phases.push_back(phase);
        out.masses.push_back(mass);
        i = j;
    }
    return out;
}

double p_eps_norm(const EigenSystem& eigs, double eps) {
    double mass = 0.0;
    for (std::size_t k = 0; k < eigs.phases.size(); ++k)
        if (std::abs(eigs.phases[k]) <= eps)
            mass += eigs.masses[k];
    return std::sqrt(mass);
}

std::string spectrum_to_csv(const EigenSystem& eigs) {
    std::string out = "# vtwalk spectrum v1\ntheta,mass\n";
    char buf[80];
    for (std::size_t k = 0; k < eigs.phases.size(); ++k) {
        std::snprintf(buf, sizeof(buf), "%.12g,%.12g\n", eigs.phases[k], eigs.masses[k]);
        out += buf;
    }
    return out;
}

} // namespace vtwalk

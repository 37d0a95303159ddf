#include "vtwalk/detection.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <vector>

#include <json.hpp>

namespace vtwalk {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool is_pow2(std::uint64_t m) { return m != 0 && (m & (m - 1)) == 0; }

std::uint32_t log2_pow2(std::uint64_t m) {
    std::uint32_t s = 0;
    while ((std::uint64_t(1) << s) < m)
        ++s;
    return s;
}

// In-place radix-2 transform a[k] <- sum_j a[j] e^{-2 pi i jk / M}.
void dft_forward(std::vector<std::complex<double>>& a) {
    const std::size_t m = a.size();
    for (std::size_t i = 1, j = 0; i < m; ++i) {
        std::size_t bit = m >> 1;
        for (; j & bit; bit >>= 1)
            j ^= bit;
        j ^= bit;
        if (i < j)
            std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= m; len <<= 1) {
        const double angle = -2.0 * kPi / double(len);
        const std::complex<double> root(std::cos(angle), std::sin(angle));
        for (std::size_t i = 0; i < m; i += len) {
            std::complex<double> w = 1.0;
            for (std::size_t k = 0; k < len / 2; ++k) {
                std::complex<double> u = a[i + k];
                std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= root;
            }
        }
    }
}

} // namespace

PrecisionPlan plan_precision(std::uint64_t T, std::uint32_t D, int reps) {
    if (T < 1 || D < 1)
        fail(ErrorKind::InvalidParams, "precision plan needs T >= 1 and D >= 1");
    if (reps < 1)
        fail(ErrorKind::InvalidParams, "repetition count must be positive");
    if (reps % 2 == 0)
        ++reps;

    PrecisionPlan plan;
    plan.epsilon = 1.0 / (std::sqrt(8.0) * std::sqrt(1.0 + double(D) * double(T)));
    const double m_min = kPi * std::sqrt(2.0) / plan.epsilon;
    if (m_min > 9e18)
        fail(ErrorKind::NumericalFailure, "controlled-U budget exceeds 64-bit range");
    plan.M = 1;
    while (double(plan.M) < m_min)
        plan.M <<= 1;
    plan.s = log2_pow2(plan.M);
    plan.reps = reps;
    plan.accept_threshold = (3 * reps + 7) / 8;
    return plan;
}

double qpe_kernel(double phi, std::uint64_t M) {
    const double half = phi / 2.0;
    const double denom = std::sin(half);
    if (denom == 0.0)
        return 1.0;
    const double num = std::sin(double(M) * half);
    const double scaled = num / (double(M) * denom);
    return scaled * scaled;
}

double qpe_accept_prob(const EigenSystem& eigs, std::uint64_t M) {
    if (!is_pow2(M))
        fail(ErrorKind::InvalidParams, "controlled-U budget must be a power of two");
    double p = 0.0;
    for (std::size_t k = 0; k < eigs.phases.size(); ++k)
        p += eigs.masses[k] * qpe_kernel(2.0 * eigs.phases[k], M);
    return p;
}

double statevector_qpe(const WalkOperator& walk, std::uint64_t M) {
    if (!is_pow2(M))
        fail(ErrorKind::InvalidParams, "controlled-U budget must be a power of two");
    const std::size_t dim = walk.dim();
    if (M * dim > (std::uint64_t(1) << 16))
        fail(ErrorKind::DimensionTooLarge, "register+system space exceeds 2^16 amplitudes");
    if (M == 1)
        return 1.0; // empty phase register, the all-zero outcome is certain

    // Controlled powers: branch j of the register holds U^j |r> / sqrt(M).
    std::vector<StateVector> branches(M);
    StateVector cur = StateVector::Zero(static_cast<Eigen::Index>(dim));
    cur[0] = 1.0 / std::sqrt(double(M));
    for (std::uint64_t j = 0; j < M; ++j) {
        branches[j] = cur;
        if (j + 1 < M)
            cur = walk.apply_U_uncounted(cur);
    }
    walk.charge_queries(4 * (M - 1));

    // Inverse Fourier transform over the register axis; the measured value
    // 0^s keeps the k = 0 row.
    double p0 = 0.0;
    std::vector<std::complex<double>> column(M);
    for (std::size_t x = 0; x < dim; ++x) {
        for (std::uint64_t j = 0; j < M; ++j)
            column[j] = branches[j][static_cast<Eigen::Index>(x)];
        dft_forward(column);
        p0 += std::norm(column[0] / std::sqrt(double(M)));
    }
    return p0;
}

namespace {

DetectionDiagnostics make_diagnostics(const ExpandedTree& expanded, const EigenSystem* eigs,
                                      double epsilon) {
    DetectionDiagnostics diag;
    diag.expanded_size = expanded.size();
    diag.eta_norm = eta(expanded).norm();
    diag.overlap = 0.0;
    diag.phi_norm_sq = std::numeric_limits<double>::quiet_NaN();
    for (const ExpandedVertex& x : expanded.vertices) {
        if (!x.marked)
            continue;
        StateVector phi = phi_m(expanded, x.id);
        double overlap = std::abs(phi[0]) / phi.norm();
        if (overlap > diag.overlap) {
            diag.overlap = overlap;
            diag.phi_norm_sq = phi.squaredNorm();
        }
    }
    if (eigs != nullptr) {
        diag.p_eps_norm = p_eps_norm(*eigs, epsilon);
        double zero_mass = 0.0;
        for (std::size_t k = 0; k < eigs->phases.size(); ++k)
            if (std::abs(eigs->phases[k]) <= 1e-12)
                zero_mass += eigs->masses[k];
        diag.zero_phase_mass = zero_mass;
        diag.distinct_phases = eigs->size();
    } else {
        diag.p_eps_norm = std::numeric_limits<double>::quiet_NaN();
        diag.zero_phase_mass = std::numeric_limits<double>::quiet_NaN();
        diag.distinct_phases = 0;
    }
    return diag;
}

} // namespace

DetectionReport detect(const ComputationTree& tree, WeightScheme scheme,
                       std::optional<PrecisionPlan> plan, const DetectOptions& options) {
    DetectionReport report;
    report.scheme = scheme;

    if (tree.n == 0) {
        // Root-only instance: no transitions to walk over, resolve directly.
        report.verdict = tree.vertices[0].marked;
        report.accept_prob_single = report.verdict ? 1.0 : 0.0;
        report.queries = 0;
        report.classical_short_circuit = true;
        report.plan = PrecisionPlan{0.0, 1, 0, plan ? plan->reps : 15,
                                    plan ? plan->accept_threshold : 6};
        report.diagnostics.expanded_size = 1;
        return report;
    }

    ExpandedTree expanded = expand(tree, scheme);
    // ExponentialBlocks pads first; the plan is drawn from the tree the walk
    // actually runs on.
    const std::uint64_t T = expanded.source.total_work;
    const std::uint32_t D = expanded.source.depth;
    report.plan = plan.has_value() ? *plan : plan_precision(T, D, options.reps);
    if (!is_pow2(report.plan.M) || report.plan.reps < 1)
        fail(ErrorKind::InvalidParams, "detection plan needs a power-of-two M and reps >= 1");
    report.queries =
        std::uint64_t(report.plan.reps) * 4 * (report.plan.M - 1);

    if (expanded.size() > options.dense_cap) {
        if (!options.bound_only_fallback)
            fail(ErrorKind::DimensionTooLarge,
                 "expanded tree has " + std::to_string(expanded.size()) +
                     " vertices, dense cap is " + std::to_string(options.dense_cap));
        report.exact = false;
        report.verdict = brute_force_has_marked(tree);
        report.classical_short_circuit = true;
        report.accept_prob_single = std::numeric_limits<double>::quiet_NaN();
        report.diagnostics = make_diagnostics(expanded, nullptr, report.plan.epsilon);
        return report;
    }

    WalkOperator walk = build_walk(expanded);
    walk.set_dense_cap(options.dense_cap);
    EigenSystem eigs = walk.eigensystem();
    report.accept_prob_single = qpe_accept_prob(eigs, report.plan.M);
    report.diagnostics = make_diagnostics(expanded, &eigs, report.plan.epsilon);
    report.spectrum = std::move(eigs);

    if (options.sample) {
        std::mt19937_64 rng(options.seed);
        int hits = 0;
        for (int i = 0; i < report.plan.reps; ++i) {
            double u = double(rng() >> 11) * 0x1.0p-53;
            if (u < report.accept_prob_single)
                ++hits;
        }
        report.verdict = hits >= report.plan.accept_threshold;
    } else {
        // Exact mode: the majority verdict a sampling run would converge to.
        report.verdict = report.accept_prob_single * report.plan.reps >=
                         double(report.plan.accept_threshold);
    }
    return report;
}

std::string report_to_json(const DetectionReport& report, int indent) {
    nlohmann::json doc;
    doc["verdict"] = report.verdict;
    doc["accept_prob_single"] = report.accept_prob_single;
    doc["queries"] = report.queries;
    doc["exact"] = report.exact;
    doc["classical_short_circuit"] = report.classical_short_circuit;
    doc["scheme"] = scheme_name(report.scheme);
    doc["plan"] = {{"epsilon", report.plan.epsilon}, {"M", report.plan.M},
                   {"s", report.plan.s},             {"reps", report.plan.reps},
                   {"accept_threshold", report.plan.accept_threshold}};
    doc["diagnostics"] = {{"p_eps_norm", report.diagnostics.p_eps_norm},
                          {"eta_norm", report.diagnostics.eta_norm},
                          {"overlap", report.diagnostics.overlap},
                          {"phi_norm_sq", report.diagnostics.phi_norm_sq},
                          {"zero_phase_mass", report.diagnostics.zero_phase_mass},
                          {"expanded_size", report.diagnostics.expanded_size},
                          {"distinct_phases", report.diagnostics.distinct_phases}};
    return doc.dump(indent) + "\n";
}

} // namespace vtwalk

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "vtwalk/walk_operator.hpp"

namespace vtwalk {

// Phase-estimation schedule. epsilon is fixed so that the unmarked-case
// leakage ||P_eps |r>||^2 is at most 1/8, and M so that the estimation kernel
// at phases beyond epsilon contributes at most another 1/8.
struct PrecisionPlan {
    double epsilon = 0.0;
    std::uint64_t M = 1;           // controlled-U budget per run, power of two
    std::uint32_t s = 0;           // phase-register bits, M = 2^s
    int reps = 15;                 // majority repetitions, odd
    int accept_threshold = 6;      // accept when >= threshold of reps land on 0^s
};

PrecisionPlan plan_precision(std::uint64_t T, std::uint32_t D, int reps = 15);

struct DetectionDiagnostics {
    double p_eps_norm = 0.0;   // sqrt of spectral mass within the plan epsilon
    double eta_norm = 0.0;     // sqrt(1 + D * weight_sum / w_r scaling)
    double overlap = 0.0;      // best |<r|phi_m>| / ||phi_m|| over marked vertices
    double phi_norm_sq = 0.0;  // ||phi_m||^2 of that vertex
    double zero_phase_mass = 0.0;
    std::size_t expanded_size = 0;
    std::size_t distinct_phases = 0;
};

struct DetectionReport {
    bool verdict = false;
    double accept_prob_single = 0.0; // per-repetition probability of 0^s
    std::uint64_t queries = 0;       // reps * 4 * (M - 1)
    bool exact = true;               // false when only bounds were computed
    bool classical_short_circuit = false;
    PrecisionPlan plan;
    WeightScheme scheme = WeightScheme::KnownTimes;
    DetectionDiagnostics diagnostics;
    EigenSystem spectrum; // populated on the exact path
};

std::string report_to_json(const DetectionReport& report, int indent = 2);

// Probability that phase estimation with M controlled applications measures
// the all-zero register, given the spectral measure of the start state:
// sum_k mass_k * F_M(2 theta_k) with F_M(phi) = sin^2(M phi/2) / (M^2 sin^2(phi/2)).
double qpe_accept_prob(const EigenSystem& eigs, std::uint64_t M);

// Estimation kernel F_M evaluated at one phase (phi = 2 theta).
double qpe_kernel(double phi, std::uint64_t M);

// Independent oracle: explicit statevector simulation of phase estimation on
// the (M * dim)-dimensional register+system space. Builds the controlled
// power ladder state, applies the inverse Fourier transform over the register
// and returns the probability of the all-zero outcome. Charges 4(M-1) queries.
double statevector_qpe(const WalkOperator& walk, std::uint64_t M);

struct DetectOptions {
    bool sample = false;         // draw reps Bernoulli trials instead of exact mode
    std::uint64_t seed = 0;
    std::size_t dense_cap = 4096;
    bool bound_only_fallback = false; // report plan/queries without spectra when too large
    int reps = 15;                    // majority repetitions when no plan is given
};

// Algorithm: run phase estimation on the walk from |r> and accept on the
// all-zero phase register. Exact mode computes the acceptance probability
// from the eigensystem; verdict is the majority outcome.
DetectionReport detect(const ComputationTree& tree, WeightScheme scheme,
                       std::optional<PrecisionPlan> plan = std::nullopt,
                       const DetectOptions& options = {});

} // namespace vtwalk

#include "vtwalk/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <future>
#include <ostream>
#include <random>
#include <sstream>

#include "vtwalk/expansion.hpp"

namespace vtwalk {

const char* family_name(Family family) {
    switch (family) {
    case Family::Star: return "star";
    case Family::RandomTree: return "random_tree";
    case Family::DnC: return "dnc";
    case Family::Bomb: return "bomb";
    case Family::P3LCost: return "p3l_cost";
    }
    return "?";
}

std::optional<Family> family_from_name(const std::string& name) {
    if (name == "star") return Family::Star;
    if (name == "random_tree") return Family::RandomTree;
    if (name == "dnc") return Family::DnC;
    if (name == "bomb") return Family::Bomb;
    if (name == "p3l_cost") return Family::P3LCost;
    return std::nullopt;
}

ComputationTree gen_star(const std::vector<std::uint32_t>& times,
                         const std::vector<std::size_t>& marked_items) {
    if (times.empty())
        fail(ErrorKind::InvalidParams, "star needs at least one item");
    std::vector<TreeEdge> edges;
    for (std::uint32_t t : times)
        edges.push_back(TreeEdge{0, t, false});
    for (std::size_t item : marked_items) {
        if (item < 1 || item > times.size())
            fail(ErrorKind::InvalidParams, "marked item " + std::to_string(item) + " out of range");
        edges[item - 1].marked = true;
    }
    return build_tree(edges);
}

ComputationTree gen_random_tree(std::size_t n, std::uint32_t t_max,
                                std::size_t mark_count, std::uint64_t seed) {
    if (n == 0 || t_max == 0)
        fail(ErrorKind::InvalidParams, "random tree needs n >= 1 and t_max >= 1");
    std::mt19937_64 rng(seed);

    std::vector<CompVertex> verts;
    verts.push_back(CompVertex{0, std::nullopt, 0, false});
    for (std::size_t i = 1; i <= n; ++i) {
        CompVertex v;
        v.id = static_cast<VertexId>(i);
        v.parent = static_cast<VertexId>(rng() % i);
        v.time = 1;
        while (v.time < t_max && (rng() & 1))
            ++v.time;
        verts.push_back(v);
    }

    std::vector<bool> has_child(n + 1, false);
    for (std::size_t i = 1; i <= n; ++i)
        has_child[*verts[i].parent] = true;
    std::vector<std::size_t> leaves;
    for (std::size_t i = 1; i <= n; ++i)
        if (!has_child[i])
            leaves.push_back(i);

    mark_count = std::min(mark_count, leaves.size());
    for (std::size_t j = 0; j < mark_count; ++j) {
        std::size_t pick = j + rng() % (leaves.size() - j);
        std::swap(leaves[j], leaves[pick]);
        verts[leaves[j]].marked = true;
    }
    return assemble_tree(std::move(verts));
}

namespace {

struct Instance {
    std::string id;
    ComputationTree tree;
    double predicted = 0.0;
};

double detection_bound(const ComputationTree& tree, WeightScheme scheme) {
    const double td = double(tree.total_work) * tree.depth;
    if (scheme == WeightScheme::ExponentialBlocks)
        return std::sqrt(td * std::max(1.0, std::log2(double(tree.t_max))));
    return std::sqrt(td);
}

std::vector<Instance> make_instances(const SweepConfig& config) {
    std::vector<Instance> out;
    std::size_t idx = 0;
    for (std::uint64_t g : config.grid) {
        Instance inst;
        switch (config.family) {
        case Family::Star: {
            std::vector<std::uint32_t> times(config.star_items, static_cast<std::uint32_t>(g));
            std::vector<std::size_t> marks;
            for (std::size_t i = 1; i <= std::min(config.marked, times.size()); ++i)
                marks.push_back(i);
            inst.tree = gen_star(times, marks);
            inst.id = "star_t" + std::to_string(g);
            inst.predicted = detection_bound(inst.tree, config.scheme);
            break;
        }
        case Family::RandomTree: {
            inst.tree = gen_random_tree(g, config.t_max, config.marked, config.seed + idx);
            inst.id = "rnd_n" + std::to_string(g) + "_s" + std::to_string(config.seed + idx);
            inst.predicted = detection_bound(inst.tree, config.scheme);
            break;
        }
        case Family::DnC: {
            DnCSpec spec;
            spec.a = config.dnc_a;
            spec.b = config.dnc_b;
            spec.n = g;
            spec.t_aux = config.dnc_aux;
            if (config.marked > 0) {
                std::uint64_t leaves = 1;
                for (std::uint32_t i = 0; i < spec.levels(); ++i)
                    leaves *= spec.a;
                spec.leaf_marks.assign(leaves, false);
                for (std::size_t i = 0; i < std::min<std::uint64_t>(config.marked, leaves); ++i)
                    spec.leaf_marks[i] = true;
            }
            inst.tree = dnc_tree(spec);
            inst.id = "dnc_n" + std::to_string(g);
            inst.predicted =
                dnc_recurrence(spec) * std::sqrt(std::max(1.0, std::log2(double(g))));
            break;
        }
        case Family::Bomb: {
            std::mt19937_64 rng(config.seed + idx);
            BombSpec spec;
            for (std::uint64_t i = 0; i < g; ++i)
                spec.gaps.push_back(1 + rng() % config.bomb_gap_max);
            inst.tree = bomb_line_tree(spec);
            inst.id = "bomb_G" + std::to_string(g);
            inst.predicted = bomb_bounds(spec).walk_bound;
            break;
        }
        case Family::P3LCost: {
            inst.tree = p3l_cost_tree(g, config.p3l_r);
            auto summary = p3l_cost_summary(g, config.p3l_r);
            inst.id = "p3l_n" + std::to_string(g);
            inst.predicted = double(g) * summary.level_band;
            break;
        }
        }
        out.push_back(std::move(inst));
        ++idx;
    }
    return out;
}

ResultRow run_instance(const Instance& inst, const SweepConfig& config) {
    ResultRow row;
    row.instance_id = inst.id;
    row.n = inst.tree.n;
    row.depth = inst.tree.depth;
    row.total_work = inst.tree.total_work;
    row.t_max = inst.tree.t_max;
    row.scheme = config.scheme;
    row.marked = brute_force_has_marked(inst.tree);
    row.predicted_bound = inst.predicted;
    try {
        DetectOptions options;
        options.dense_cap = config.dense_cap;
        options.bound_only_fallback = true;
        options.reps = config.reps;
        auto start = std::chrono::steady_clock::now();
        DetectionReport report = detect(inst.tree, config.scheme, std::nullopt, options);
        auto stop = std::chrono::steady_clock::now();
        row.queries = report.queries;
        if (report.exact)
            row.accept_prob = report.accept_prob_single;
        if (config.timing)
            row.wall_time_ms =
                std::chrono::duration<double, std::milli>(stop - start).count();
    } catch (const Error& e) {
        row.error = e.what();
        std::replace(row.error.begin(), row.error.end(), ',', ';');
    }
    return row;
}

std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

} // namespace

std::vector<ResultRow> run_sweep(const SweepConfig& config) {
    const std::vector<Instance> instances = make_instances(config);
    std::vector<std::future<ResultRow>> futures;
    futures.reserve(instances.size());
    for (const Instance& inst : instances)
        futures.push_back(std::async(std::launch::async,
                                     [&inst, &config] { return run_instance(inst, config); }));
    std::vector<ResultRow> rows;
    rows.reserve(instances.size());
    for (auto& f : futures)
        rows.push_back(f.get());
    return rows;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        return std::numeric_limits<double>::quiet_NaN();
    const double n = double(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log2(x[i]);
        const double ly = std::log2(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::string sweep_to_csv(const std::vector<ResultRow>& rows) {
    std::ostringstream out;
    out << "# vtwalk sweep v1\n";
    out << "instance_id,n,D,T,t_max,scheme,marked,accept_prob,queries,predicted_bound,"
           "wall_time_ms,error\n";
    std::vector<double> td, queries;
    double max_ratio = 0.0;
    for (const ResultRow& row : rows) {
        out << row.instance_id << ',' << row.n << ',' << row.depth << ',' << row.total_work
            << ',' << row.t_max << ',' << scheme_name(row.scheme) << ','
            << (row.marked ? "true" : "false") << ',';
        if (row.accept_prob.has_value())
            out << fmt_double(*row.accept_prob);
        out << ',' << row.queries << ',' << fmt_double(row.predicted_bound) << ',';
        if (row.wall_time_ms.has_value())
            out << fmt_double(*row.wall_time_ms);
        out << ',' << row.error << '\n';
        if (row.error.empty() && row.queries > 0 && row.total_work > 0 && row.depth > 0) {
            td.push_back(double(row.total_work) * row.depth);
            queries.push_back(double(row.queries));
            if (row.predicted_bound > 0)
                max_ratio = std::max(max_ratio, double(row.queries) / row.predicted_bound);
        }
    }
    out << "# loglog_slope_queries_vs_TD = " << fmt_double(loglog_slope(td, queries)) << '\n';
    out << "# max_queries_over_bound = " << fmt_double(max_ratio) << '\n';
    return out.str();
}

std::string run_sweep_csv(const SweepConfig& config) {
    if (config.grid.empty()) {
        std::ostringstream out;
        out << "# vtwalk sweep v1\n";
        out << "instance_id,n,D,T,t_max,scheme,marked,accept_prob,queries,predicted_bound,"
               "wall_time_ms,error\n";
        return out.str();
    }
    return sweep_to_csv(run_sweep(config));
}

PathRW path_rw(WeightScheme scheme, std::uint64_t t) {
    if (t == 0)
        fail(ErrorKind::InvalidParams, "path length must be positive");
    PathRW rw;
    switch (scheme) {
    case WeightScheme::KnownTimes:
        rw.resistance = 1.0;
        rw.weight = double(t) * double(t);
        break;
    case WeightScheme::ExponentialBlocks: {
        std::uint64_t covered = 0;
        for (std::uint64_t block = 1;; block <<= 1) {
            covered += block;
            rw.resistance += 1.0;
            rw.weight += double(block) * double(block);
            if (covered >= t)
                break;
        }
        break;
    }
    case WeightScheme::LinearRamp:
        for (std::uint64_t j = 1; j <= t; ++j)
            rw.resistance += 1.0 / double(j);
        rw.weight = double(t) * double(t + 1) / 2.0;
        break;
    case WeightScheme::Unit:
        rw.resistance = double(t);
        rw.weight = double(t);
        break;
    }
    return rw;
}

std::string weights_table_csv(const std::vector<std::uint64_t>& t_values) {
    std::ostringstream out;
    out << "# vtwalk weights v1\n";
    out << "scheme,t,R,W,R_over_log2t,R_over_lnt,W_over_t2\n";
    const WeightScheme schemes[] = {WeightScheme::KnownTimes, WeightScheme::ExponentialBlocks,
                                    WeightScheme::LinearRamp, WeightScheme::Unit};
    for (WeightScheme scheme : schemes) {
        for (std::uint64_t t : t_values) {
            PathRW rw = path_rw(scheme, t);
            out << scheme_name(scheme) << ',' << t << ',' << fmt_double(rw.resistance) << ','
                << fmt_double(rw.weight) << ',';
            if (t > 1)
                out << fmt_double(rw.resistance / std::log2(double(t)));
            out << ',';
            if (t > 1)
                out << fmt_double(rw.resistance / std::log(double(t)));
            out << ',' << fmt_double(rw.weight / (double(t) * double(t))) << '\n';
        }
    }
    return out.str();
}

namespace {

struct Checker {
    std::ostream& out;
    int failures = 0;

    void operator()(const std::string& name, bool ok, double measured, double bound) {
        out << (ok ? "PASS" : "FAIL") << "  " << name << "  measured=" << measured
            << " bound=" << bound << "\n";
        if (!ok)
            ++failures;
    }
};

// 20 deterministic marked/unmarked desk instances (n <= 25, t_v <= 6).
ComputationTree suite_tree(std::size_t i, bool marked) {
    const std::size_t n = 5 + (i % 21);
    const std::size_t marks = marked ? 1 + i % 3 : 0;
    return gen_random_tree(n, 6, marks, 0xBEEF00 + i);
}

void corrupt_weight(ExpandedTree& expanded) {
    if (expanded.size() > 1)
        expanded.vertices[1].weight *= 2.0;
}

int verify_eigenvector(Checker& check, const VerifyOptions& options) {
    for (std::size_t i = 0; i < 20; ++i) {
        ComputationTree tree = suite_tree(i, true);
        ExpandedTree expanded = expand(tree, WeightScheme::KnownTimes);
        WalkOperator walk = build_walk(expanded);
        ExpandedTree probe = expanded;
        if (options.inject_fault)
            corrupt_weight(probe); // walk and witness now disagree
        const std::string tag = "tree" + std::to_string(i);
        for (const ExpandedVertex& x : probe.vertices) {
            if (!x.marked)
                continue;
            StateVector phi = phi_m(probe, x.id);
            double ra = (walk.apply_RA(phi) - phi).norm();
            double rb = (walk.apply_RB(phi) - phi).norm();
            check("eigenvector/RA_residual/" + tag, ra <= 1e-10, ra, 1e-10);
            check("eigenvector/RB_residual/" + tag, rb <= 1e-10, rb, 1e-10);
            double overlap = std::abs(phi[0]) / phi.norm();
            double bound = 1.0 / std::sqrt(2.0) - 1e-12;
            check("eigenvector/root_overlap/" + tag, overlap >= bound, overlap, bound);
            double norm_sq = phi.squaredNorm();
            double cap = 2.0 * probe.source.depth + 1e-9;
            check("eigenvector/phi_norm/" + tag, norm_sq <= cap, norm_sq, cap);
        }
    }
    return 0;
}

int verify_esgl(Checker& check, const VerifyOptions& options) {
    const double eps_grid[] = {0.01, 0.05, 0.1, 0.2};
    for (std::size_t i = 0; i < 20; ++i) {
        ComputationTree tree = suite_tree(i, false);
        ExpandedTree expanded = expand(tree, WeightScheme::KnownTimes);
        WalkOperator walk = build_walk(expanded);
        ExpandedTree probe = expanded;
        if (options.inject_fault)
            corrupt_weight(probe);
        const std::string tag = "tree" + std::to_string(i);

        StateVector eta_vec = eta(probe);
        double ra = (walk.apply_RA(eta_vec) + eta_vec).norm();
        check("esgl/RA_eta/" + tag, ra <= 1e-10, ra, 1e-10);
        StateVector reflected = -eta_vec;
        reflected[0] += 2.0;
        double rb = (walk.apply_RB(eta_vec) - reflected).norm();
        check("esgl/RB_eta/" + tag, rb <= 1e-10, rb, 1e-10);

        EigenSystem eigs = walk.eigensystem();
        const double eta_norm = eta_vec.norm();
        for (double eps : eps_grid) {
            double lhs = p_eps_norm(eigs, eps);
            double rhs = eps * eta_norm + 1e-9;
            check("esgl/p_eps/" + tag + "/eps" + fmt_double(eps), lhs <= rhs, lhs, rhs);
        }
    }
    return 0;
}

int verify_detection(Checker& check, const VerifyOptions& options) {
    DetectOptions detect_options;
    detect_options.dense_cap = options.dense_cap;
    const WeightScheme schemes[] = {WeightScheme::KnownTimes, WeightScheme::ExponentialBlocks};
    for (std::size_t i = 0; i < 26; ++i) {
        for (bool marked : {true, false}) {
            ComputationTree tree = suite_tree(i, marked);
            for (WeightScheme scheme : schemes) {
                DetectionReport report = detect(tree, scheme, std::nullopt, detect_options);
                std::string tag = std::string("tree") + std::to_string(i) +
                                  (marked ? "marked/" : "unmarked/") + scheme_name(scheme);
                if (marked)
                    check("detection/complete/" + tag,
                          report.accept_prob_single >= 0.5 - 1e-9,
                          report.accept_prob_single, 0.5 - 1e-9);
                else
                    check("detection/sound/" + tag,
                          report.accept_prob_single <= 0.25 + 1e-9,
                          report.accept_prob_single, 0.25 + 1e-9);
                bool agrees = report.verdict == brute_force_has_marked(tree);
                check("detection/verdict/" + tag, agrees, agrees ? 1 : 0, 1);
            }
        }
    }

    // cross-check the spectral model against the explicit register simulation
    for (std::size_t i = 0; i < 10; ++i) {
        ComputationTree tree = gen_random_tree(2 + i % 5, 3, i % 2, 0xA11CE + i);
        ExpandedTree expanded = expand(tree, WeightScheme::KnownTimes);
        WalkOperator walk = build_walk(expanded);
        std::uint64_t m_budget = 16;
        while (m_budget * expanded.size() > (1u << 16))
            m_budget >>= 1;
        double spectral = qpe_accept_prob(walk.eigensystem(), m_budget);
        double simulated = statevector_qpe(walk, m_budget);
        double diff = std::abs(spectral - simulated);
        check("detection/oracle_agreement/tree" + std::to_string(i), diff <= 1e-8, diff, 1e-8);
    }

    // query accounting: k steps cost exactly 4k
    {
        ComputationTree tree = gen_random_tree(6, 3, 1, 42);
        ExpandedTree expanded = expand(tree, WeightScheme::KnownTimes);
        WalkOperator walk = build_walk(expanded);
        StateVector v = StateVector::Zero(static_cast<Eigen::Index>(walk.dim()));
        v[0] = 1.0;
        for (int k = 0; k < 7; ++k)
            v = walk.apply_U(v);
        check("detection/query_accounting", walk.queries() == 28, double(walk.queries()), 28);
    }
    return 0;
}

int verify_applications(Checker& check, const VerifyOptions&) {
    // vts: detection verdict equals OR of the solution bits
    for (unsigned pattern = 0; pattern < 8; ++pattern) {
        VTSInstance inst;
        inst.times = {1, 2, 3};
        inst.solutions = {bool(pattern & 1), bool(pattern & 2), bool(pattern & 4)};
        DetectionReport report = detect(vts_star(inst), WeightScheme::KnownTimes);
        bool expected = pattern != 0;
        check("applications/vts_or/pattern" + std::to_string(pattern),
              report.verdict == expected, report.verdict, expected);
    }

    // grouping preserves the verdict
    {
        VTSInstance inst;
        inst.times = {3, 5, 8};
        inst.solutions = {false, true, false};
        for (std::uint32_t k : {1u, 2u, 4u}) {
            VTSInstance grouped = vts_group_steps(inst, k);
            DetectionReport report = detect(vts_star(grouped), WeightScheme::KnownTimes);
            check("applications/vts_grouped_k" + std::to_string(k), report.verdict, 1, 1);
        }
    }

    // dnc: sqrt of the tree work never exceeds the recurrence value
    for (std::uint32_t a : {1u, 2u, 3u}) {
        for (std::uint64_t n : {2ull, 8ull, 64ull, 1024ull}) {
            for (auto kind : {AuxCost::Kind::Linear, AuxCost::Kind::Quadratic,
                              AuxCost::Kind::SqrtCeil}) {
                DnCSpec spec;
                spec.a = a;
                spec.b = 2;
                spec.n = n;
                spec.t_aux.kind = kind;
                double lhs = std::sqrt(double(dnc_tree(spec).total_work));
                double rhs = dnc_recurrence(spec);
                std::string tag = "applications/dnc_a" + std::to_string(a) + "_n" +
                                  std::to_string(n) + "_" + spec.t_aux.name();
                check(tag, lhs <= rhs + 1e-9, lhs, rhs);
            }
        }
    }

    // bomb: Cauchy-Schwarz on seeded gap vectors, equality on equal gaps
    std::mt19937_64 rng(0xB0B);
    for (int i = 0; i < 100; ++i) {
        BombSpec spec;
        std::size_t g = 1 + rng() % 12;
        for (std::size_t j = 0; j < g; ++j)
            spec.gaps.push_back(1 + rng() % 100);
        BombBounds bounds = bomb_bounds(spec);
        check("applications/bomb_cs/" + std::to_string(i),
              bounds.step_sum <= bounds.cauchy_rhs + 1e-12, bounds.step_sum, bounds.cauchy_rhs);
    }
    {
        BombSpec spec;
        spec.gaps = {16, 16, 16, 16};
        BombBounds bounds = bomb_bounds(spec);
        double gap = std::abs(bounds.step_sum - bounds.cauchy_rhs);
        check("applications/bomb_cs_equality", gap <= 1e-12, gap, 1e-12);
    }

    // p3l: planted concurrent triples and tangent families in general position
    for (int i = 0; i < 100; ++i) {
        std::mt19937_64 seed_rng(0x9E0 + i);
        const std::size_t n = 5 + seed_rng() % 36;
        std::vector<Line> lines;
        // tangents to y = x^2 at distinct abscissas: no three concurrent
        std::vector<long long> ts;
        while (ts.size() < n) {
            long long t = static_cast<long long>(seed_rng() % 2001) - 1000;
            if (std::find(ts.begin(), ts.end(), t) == ts.end())
                ts.push_back(t);
        }
        for (long long t : ts)
            lines.push_back(Line{2 * t, -1, t * t});
        bool negative = p3l_bruteforce(make_line_set(lines));
        check("applications/p3l_negative/" + std::to_string(i), !negative, negative, 0);

        // plant a common point via three pencil lines
        long long px = static_cast<long long>(seed_rng() % 201) - 100;
        long long py = static_cast<long long>(seed_rng() % 201) - 100;
        std::vector<Line> planted = lines;
        int added = 0;
        for (long long slope = 1; added < 3; ++slope) {
            Line cand{slope, 1, slope * px + py};
            Line norm = normalize_line(cand);
            if (std::find(planted.begin(), planted.end(), norm) == planted.end()) {
                planted.push_back(norm);
                ++added;
            }
        }
        bool positive = p3l_bruteforce(make_line_set(planted));
        check("applications/p3l_positive/" + std::to_string(i), positive, positive, 1);
    }

    // p3l cost model: every cutting level contributes about n^2
    for (std::uint32_t k = 1; k <= 8; ++k) {
        auto summary = p3l_cost_summary(std::uint64_t(1) << k, 2);
        double lo = 0.8 * summary.level_band;
        double hi = 1.2 * summary.level_band;
        bool ok = summary.ratio_to_n >= lo && summary.ratio_to_n <= hi;
        check("applications/p3l_band/n2e" + std::to_string(k), ok, summary.ratio_to_n, hi);
    }
    return 0;
}

} // namespace

int run_verify(const std::string& suite, std::ostream& out, const VerifyOptions& options) {
    Checker check{out};
    bool known = false;
    if (suite == "eigenvector" || suite == "all") {
        verify_eigenvector(check, options);
        known = true;
    }
    if (suite == "esgl" || suite == "all") {
        verify_esgl(check, options);
        known = true;
    }
    if (suite == "detection" || suite == "all") {
        verify_detection(check, options);
        known = true;
    }
    if (suite == "applications" || suite == "all") {
        verify_applications(check, options);
        known = true;
    }
    if (!known)
        fail(ErrorKind::InvalidParams, "unknown suite: " + suite);
    if (check.failures == 0)
        out << "ALL CHECKS PASSED\n";
    else
        out << "FAILED CHECKS: " << check.failures << "\n";
    return check.failures;
}

} // namespace vtwalk

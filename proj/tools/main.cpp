#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vtwalk/applications.hpp"
#include "vtwalk/detection.hpp"
#include "vtwalk/experiments.hpp"
#include "vtwalk/expansion.hpp"
#include "vtwalk/tree_model.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailure = 1;
constexpr int kExitInputError = 2;
constexpr int kExitResourceCap = 3;

int exit_code_for(const vtwalk::Error& e) {
    return e.kind() == vtwalk::ErrorKind::DimensionTooLarge ? kExitResourceCap : kExitInputError;
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        vtwalk::fail(vtwalk::ErrorKind::InvalidParams, "cannot open output file " + path);
    out << content;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        vtwalk::fail(vtwalk::ErrorKind::ParseError, "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::size_t dense_cap_from_env() {
    if (const char* env = std::getenv("VTWALK_DIM_CAP")) {
        char* end = nullptr;
        unsigned long long cap = std::strtoull(env, &end, 10);
        if (end != env && cap > 0)
            return static_cast<std::size_t>(cap);
    }
    return 4096;
}

vtwalk::WeightScheme parse_scheme(const std::string& name) {
    auto scheme = vtwalk::scheme_from_name(name);
    if (!scheme)
        vtwalk::fail(vtwalk::ErrorKind::InvalidParams,
                     "unknown scheme " + name + " (known|expblocks|linear|unit)");
    return *scheme;
}

vtwalk::AuxCost parse_aux(const std::string& name) {
    vtwalk::AuxCost aux;
    if (name == "linear")
        aux.kind = vtwalk::AuxCost::Kind::Linear;
    else if (name == "quadratic")
        aux.kind = vtwalk::AuxCost::Kind::Quadratic;
    else if (name == "sqrt")
        aux.kind = vtwalk::AuxCost::Kind::SqrtCeil;
    else
        vtwalk::fail(vtwalk::ErrorKind::InvalidParams,
                     "unknown aux cost " + name + " (linear|quadratic|sqrt)");
    return aux;
}

struct GenArgs {
    std::string family = "star";
    std::string spec_file; // JSON application spec overrides the family knobs
    std::vector<std::uint32_t> times;
    // star: 1-based solution items; other families: first value = leaf count
    std::vector<std::size_t> marked;
    std::size_t n = 10;
    std::uint32_t t_max = 4;
    std::uint64_t seed = 0;
    std::uint32_t a = 2, b = 2;
    std::string taux = "linear";
    std::vector<std::uint64_t> gaps;
    std::uint32_t r = 2;
    std::string out;
};

int run_gen(const GenArgs& args) {
    using namespace vtwalk;
    if (!args.spec_file.empty()) {
        write_output(args.out, tree_to_json(tree_from_spec_json(read_file(args.spec_file))));
        return kExitOk;
    }
    const std::size_t mark_count = args.marked.empty() ? 0 : args.marked.front();
    ComputationTree tree;
    auto family = family_from_name(args.family);
    if (!family)
        fail(ErrorKind::InvalidParams, "unknown family " + args.family);
    switch (*family) {
    case Family::Star:
        tree = gen_star(args.times.empty() ? std::vector<std::uint32_t>{1, 2} : args.times,
                        args.marked);
        break;
    case Family::RandomTree:
        tree = gen_random_tree(args.n, args.t_max, mark_count, args.seed);
        break;
    case Family::DnC: {
        DnCSpec spec;
        spec.a = args.a;
        spec.b = args.b;
        spec.n = args.n;
        spec.t_aux = parse_aux(args.taux);
        if (mark_count > 0) {
            std::uint64_t leaves = 1;
            for (std::uint32_t i = 0; i < spec.levels(); ++i)
                leaves *= spec.a;
            spec.leaf_marks.assign(leaves, false);
            for (std::size_t i = 0; i < std::min<std::uint64_t>(mark_count, leaves); ++i)
                spec.leaf_marks[i] = true;
        }
        tree = dnc_tree(spec);
        break;
    }
    case Family::Bomb: {
        BombSpec spec;
        spec.gaps = args.gaps;
        if (spec.gaps.empty())
            fail(ErrorKind::InvalidParams, "bomb family needs --gaps");
        tree = bomb_line_tree(spec);
        break;
    }
    case Family::P3LCost:
        tree = p3l_cost_tree(args.n, args.r);
        break;
    }
    write_output(args.out, tree_to_json(tree));
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"vtwalk: exact simulator for quantum-walk search on computation trees"};
    app.require_subcommand(1);

    GenArgs gen_args;
    auto* gen = app.add_subcommand("gen", "generate an instance file");
    gen->add_option("--family", gen_args.family, "star|random_tree|dnc|bomb|p3l_cost");
    gen->add_option("--spec", gen_args.spec_file, "JSON application spec (vts|dnc|bomb)");
    gen->add_option("--times", gen_args.times, "star: per-item times")->delimiter(',');
    gen->add_option("--marked", gen_args.marked,
                    "star: 1-based solution items; otherwise marked leaf count")
        ->delimiter(',');
    gen->add_option("--n", gen_args.n, "random_tree/dnc/p3l_cost size");
    gen->add_option("--tmax", gen_args.t_max, "random_tree time cap");
    gen->add_option("--seed", gen_args.seed, "generator seed");
    gen->add_option("--a", gen_args.a, "dnc branching");
    gen->add_option("--b", gen_args.b, "dnc shrink factor");
    gen->add_option("--taux", gen_args.taux, "dnc aux cost: linear|quadratic|sqrt");
    gen->add_option("--gaps", gen_args.gaps, "bomb: gap lengths")->delimiter(',');
    gen->add_option("--r", gen_args.r, "p3l cutting parameter");
    gen->add_option("--out", gen_args.out, "output file (default stdout)");

    std::string detect_file, detect_scheme = "known", spectrum_out;
    int detect_reps = 15;
    bool detect_sample = false, matrix_free = false;
    std::uint64_t detect_seed = 0;
    auto* det = app.add_subcommand("detect", "run marked-vertex detection on an instance");
    det->add_option("file", detect_file, "instance JSON")->required();
    det->add_option("--scheme", detect_scheme, "known|expblocks|linear|unit");
    det->add_option("--reps", detect_reps, "majority repetitions");
    det->add_flag("--sample", detect_sample, "sample repetitions instead of exact mode");
    det->add_option("--seed", detect_seed, "sampling seed");
    det->add_flag("--matrix-free", matrix_free,
                  "fall back to bound-only reporting above the dense cap");
    det->add_option("--spectrum", spectrum_out, "dump the phase spectrum CSV to a file");

    vtwalk::SweepConfig sweep_config;
    std::string sweep_family = "star", sweep_scheme = "known", sweep_taux = "linear";
    std::string sweep_out;
    auto* sweep = app.add_subcommand("sweep", "run a family sweep and emit CSV");
    sweep->add_option("--family", sweep_family, "star|random_tree|dnc|bomb|p3l_cost");
    sweep->add_option("--grid", sweep_config.grid, "size grid")->delimiter(',');
    sweep->add_option("--scheme", sweep_scheme, "known|expblocks|linear|unit");
    sweep->add_option("--seed", sweep_config.seed, "instance seed");
    sweep->add_option("--reps", sweep_config.reps, "majority repetitions");
    sweep->add_option("--items", sweep_config.star_items, "star: item count");
    sweep->add_option("--marked", sweep_config.marked, "marked leaves per instance");
    sweep->add_option("--tmax", sweep_config.t_max, "random_tree time cap");
    sweep->add_option("--a", sweep_config.dnc_a, "dnc branching");
    sweep->add_option("--b", sweep_config.dnc_b, "dnc shrink factor");
    sweep->add_option("--taux", sweep_taux, "dnc aux cost");
    sweep->add_option("--gap-max", sweep_config.bomb_gap_max, "bomb gap cap");
    sweep->add_option("--r", sweep_config.p3l_r, "p3l cutting parameter");
    sweep->add_flag("--timing", sweep_config.timing, "fill the wall_time column");
    sweep->add_option("--out", sweep_out, "output file (default stdout)");

    std::vector<std::uint64_t> weights_t{5, 65536};
    std::string weights_out;
    auto* weights = app.add_subcommand("weights", "resistance/weight table per scheme");
    weights->add_option("--t", weights_t, "path lengths")->delimiter(',');
    weights->add_option("--out", weights_out, "output file (default stdout)");

    std::string verify_suite = "all";
    bool inject_fault = false;
    auto* verify = app.add_subcommand("verify", "run invariant suites");
    verify->add_option("suite", verify_suite, "eigenvector|esgl|detection|applications|all");
    verify->add_flag("--inject-fault", inject_fault, "negative control: corrupt a weight")
        ->group(""); // hidden
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitInputError;
    }

    try {
        if (gen->parsed())
            return run_gen(gen_args);

        if (det->parsed()) {
            vtwalk::ComputationTree tree = vtwalk::tree_from_json(read_file(detect_file));
            vtwalk::DetectOptions options;
            options.sample = detect_sample;
            options.seed = detect_seed;
            options.dense_cap = dense_cap_from_env();
            options.bound_only_fallback = matrix_free;
            options.reps = detect_reps;
            vtwalk::DetectionReport report =
                vtwalk::detect(tree, parse_scheme(detect_scheme), std::nullopt, options);
            std::cout << vtwalk::report_to_json(report);
            if (!spectrum_out.empty() && report.exact)
                write_output(spectrum_out, vtwalk::spectrum_to_csv(report.spectrum));
            return kExitOk;
        }

        if (sweep->parsed()) {
            auto family = vtwalk::family_from_name(sweep_family);
            if (!family)
                vtwalk::fail(vtwalk::ErrorKind::InvalidParams, "unknown family " + sweep_family);
            sweep_config.family = *family;
            sweep_config.scheme = parse_scheme(sweep_scheme);
            sweep_config.dnc_aux = parse_aux(sweep_taux);
            sweep_config.dense_cap = dense_cap_from_env();
            write_output(sweep_out, vtwalk::run_sweep_csv(sweep_config));
            return kExitOk;
        }

        if (weights->parsed()) {
            write_output(weights_out, vtwalk::weights_table_csv(weights_t));
            return kExitOk;
        }

        if (verify->parsed()) {
            vtwalk::VerifyOptions options;
            options.inject_fault = inject_fault;
            options.dense_cap = dense_cap_from_env();
            int failures = vtwalk::run_verify(verify_suite, std::cout, options);
            return failures == 0 ? kExitOk : kExitVerifyFailure;
        }
    } catch (const vtwalk::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitOk;
}

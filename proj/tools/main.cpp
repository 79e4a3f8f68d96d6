#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "io.hpp"
#include "orcs/bound.hpp"
#include "orcs/metrics.hpp"
#include "orcs/path.hpp"
#include "orcs/solver.hpp"
#include "orcs/synth.hpp"
#include "orcs/topdown.hpp"

namespace {

using namespace orcs;
using cli::fmt;

class Stopwatch {
public:
    double ms() const {
        return std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_ =
        std::chrono::steady_clock::now();
};

Weights build_weights(const std::string& token, int n) {
    if (token == "uniform") return Weights::uniform(n);
    if (token == "sqrt") return Weights::sqrt_scheme(n);
    if (token.rfind("power:", 0) == 0)
        return Weights::power(n, std::stod(token.substr(6)));
    throw std::runtime_error("unknown weight scheme '" + token +
                             "' (expected uniform, sqrt, or power:<alpha>)");
}

double parse_gamma(const std::string& token) {
    size_t used = 0;
    const double v = std::stod(token, &used);
    if (used != token.size())
        throw std::runtime_error("cannot parse offset cost '" + token + "'");
    if (v < 0.0) throw std::runtime_error("offset cost must be >= 0");
    return v;
}

double half_fit(const Mat& x, const Segmentation& seg,
                const OutlierAssignment& z) {
    Mat resid = x;
    for (const auto& [i, zi] : z.entries()) resid.row(i) -= zi.transpose();
    const int n = static_cast<int>(x.rows());
    for (size_t s = 0; s < seg.starts.size(); ++s) {
        const int lo = seg.starts[s];
        const int hi = s + 1 < seg.starts.size() ? seg.starts[s + 1] : n;
        resid.middleRows(lo, hi - lo).rowwise() -=
            seg.centroids[s].transpose();
    }
    return 0.5 * resid.squaredNorm();
}

struct SegmentArgs {
    std::string input, out, algo = "orcs", weights = "uniform";
    std::string gamma = "inf";
    bool header = false;
    double lambda = 1.0;
    int q = 2, k = 2, m = 0, threads = 1;
    double tol = 1e-8;
    int max_iter = 10000, alt_max_iter = 500;
    bool has_lambda = false, has_gamma = false, has_k = false, has_m = false;
};

int run_segment(const SegmentArgs& a) {
    Stopwatch watch;
    const Mat data = cli::read_csv(a.input, a.header);
    const Sequence x(data);
    const int n = x.size();

    cli::ResultDoc doc;
    if (a.algo == "orcs") {
        if (!a.has_lambda || !a.has_gamma)
            throw std::runtime_error("--algo orcs requires --lambda and --gamma");
        SolverConfig cfg;
        cfg.lambda = a.lambda;
        cfg.gamma = parse_gamma(a.gamma);
        cfg.q = a.q;
        cfg.weights = build_weights(a.weights, n);
        cfg.tol = a.tol;
        cfg.max_iter = a.max_iter;
        cfg.alt_max_iter = a.alt_max_iter;
        const OrcsSolution sol = solve_orcs(x, cfg);
        doc.boundaries = sol.segmentation.boundaries();
        doc.outliers = sol.outliers.indices();
        doc.objective = sol.objective;
        doc.converged = sol.converged;
        doc.segments = sol.segmentation.segments();
    } else if (a.algo == "td" || a.algo == "wtd") {
        if (!a.has_k || !a.has_m)
            throw std::runtime_error("--algo " + a.algo +
                                     " requires --k and --m");
        const Weights w = a.algo == "wtd" ? Weights::sqrt_scheme(n)
                                          : build_weights(a.weights, n);
        const TopDownResult res = td_orcs(x, a.k, a.m, w);
        doc.boundaries = res.segmentation.boundaries();
        doc.outliers = res.outliers.indices();
        doc.objective = half_fit(data, res.segmentation, res.outliers);
        doc.converged = res.converged;
        doc.segments = res.segmentation.segments();
    } else if (a.algo == "bu") {
        if (!a.has_k) throw std::runtime_error("--algo bu requires --k");
        const Segmentation seg = bottom_up(x, a.k);
        doc.boundaries = seg.boundaries();
        doc.objective = half_fit(data, seg, {});
        doc.converged = true;
        doc.segments = seg.segments();
    } else {
        throw std::runtime_error("unknown --algo '" + a.algo +
                                 "' (expected orcs, td, wtd, or bu)");
    }
    cli::write_result_json(a.out, doc);

    cli::Manifest man;
    man.command = "segment";
    man.config = {{"input", a.input},
                  {"algo", a.algo},
                  {"header", a.header ? "true" : "false"},
                  {"weights", a.algo == "wtd" ? "sqrt" : a.weights},
                  {"threads", std::to_string(a.threads)}};
    if (a.algo == "orcs") {
        man.config.emplace_back("lambda", fmt(a.lambda));
        man.config.emplace_back("gamma", a.gamma);
        man.config.emplace_back("q", std::to_string(a.q));
        man.config.emplace_back("tol", fmt(a.tol));
    } else {
        man.config.emplace_back("k", std::to_string(a.k));
        if (a.algo != "bu") man.config.emplace_back("m", std::to_string(a.m));
    }
    man.input_digest = cli::fnv1a64_file(a.input);
    man.wall_ms = watch.ms();
    cli::write_manifest(a.out, man);
    return doc.converged ? 0 : 3;
}

struct PathArgs {
    std::string input, out, hist, grid = "35x35", weights = "uniform";
    bool header = false;
    int q = 2, threads = 1;
    double tol = 1e-8;
    int max_iter = 10000, alt_max_iter = 500;
};

int run_path(const PathArgs& a) {
    Stopwatch watch;
    const Mat data = cli::read_csv(a.input, a.header);
    const Sequence x(data);

    const size_t cross = a.grid.find('x');
    if (cross == std::string::npos)
        throw std::runtime_error("--grid expects <gammas>x<lambdas>, e.g. 35x35");
    SweepOptions opts;
    opts.gamma_count = std::stoi(a.grid.substr(0, cross));
    opts.lambda_count = std::stoi(a.grid.substr(cross + 1));
    opts.base.q = a.q;
    opts.base.tol = a.tol;
    opts.base.max_iter = a.max_iter;
    opts.base.alt_max_iter = a.alt_max_iter;
    opts.base.weights = build_weights(a.weights, x.size());
    opts.threads = a.threads;

    const PathGrid grid = sweep(x, opts);

    std::string csv = "gamma,lambda,segments,outliers,objective,status\n";
    for (size_t col = 0; col < grid.cells.size(); ++col)
        for (const PathCell& cell : grid.cells[col]) {
            csv += fmt(cell.gamma) + "," + fmt(cell.lambda) + "," +
                   std::to_string(cell.segments) + "," +
                   std::to_string(cell.outliers) + "," + fmt(cell.objective) +
                   "," + (cell.converged ? "ok" : "noconv") + "\n";
        }
    std::ofstream(a.out, std::ios::binary) << csv;

    std::map<int, int> histogram;
    for (const auto& column : grid.cells)
        for (const PathCell& cell : column) ++histogram[cell.outliers];
    const std::string hist_path =
        a.hist.empty() ? a.out + ".hist.csv" : a.hist;
    std::string hist_csv = "count,cells\n";
    for (const auto& [count, cells] : histogram)
        hist_csv += std::to_string(count) + "," + std::to_string(cells) + "\n";
    std::ofstream(hist_path, std::ios::binary) << hist_csv;

    cli::Manifest man;
    man.command = "path";
    man.config = {{"input", a.input},
                  {"grid", a.grid},
                  {"weights", a.weights},
                  {"q", std::to_string(a.q)},
                  {"threads", std::to_string(a.threads)}};
    man.input_digest = cli::fnv1a64_file(a.input);
    man.wall_ms = watch.ms();
    cli::write_manifest(a.out, man);
    cli::write_manifest(hist_path, man);

    const std::optional<int> estimate = estimate_outlier_count(grid);
    std::cout << "estimated_outliers: "
              << (estimate ? std::to_string(*estimate) : std::string("none"))
              << "\n";
    return 0;
}

struct SynthArgs {
    std::string spec, out, truth;
    std::string noise = "none", outliers = "none";
    int k = 2, len = 50, d = 1;
    double jump = 1.0;
    std::uint64_t seed = 0;
    bool has_spec = false, has_seed = false;
};

int run_synth(const SynthArgs& a) {
    Stopwatch watch;
    SynthSpec spec;
    if (a.has_spec) {
        spec = cli::read_synth_spec(a.spec);
    } else {
        spec = staircase_spec(a.k, a.len, a.d, a.jump, a.seed);
        auto split = [](const std::string& token, const std::string& what) {
            std::vector<double> vals;
            const size_t colon = token.find(':');
            if (colon == std::string::npos)
                throw std::runtime_error("cannot parse " + what + " '" + token + "'");
            std::string rest = token.substr(colon + 1);
            size_t pos = 0;
            while (pos <= rest.size()) {
                const size_t comma = rest.find(',', pos);
                const std::string cell =
                    rest.substr(pos, comma == std::string::npos ? std::string::npos
                                                                : comma - pos);
                vals.push_back(std::stod(cell));
                if (comma == std::string::npos) break;
                pos = comma + 1;
            }
            return vals;
        };
        if (a.noise.rfind("uniform:", 0) == 0) {
            spec.noise.kind = NoiseSpec::Kind::Uniform;
            spec.noise.bound = split(a.noise, "--noise")[0];
        } else if (a.noise.rfind("tgauss:", 0) == 0) {
            const auto vals = split(a.noise, "--noise");
            if (vals.size() != 2)
                throw std::runtime_error("--noise tgauss needs sigma,clip");
            spec.noise.kind = NoiseSpec::Kind::TruncatedGaussian;
            spec.noise.sigma = vals[0];
            spec.noise.clip = vals[1];
        } else if (a.noise != "none") {
            throw std::runtime_error("unknown --noise '" + a.noise + "'");
        }
        if (a.outliers.rfind("spike:", 0) == 0) {
            const auto vals = split(a.outliers, "--outliers");
            if (vals.size() != 2)
                throw std::runtime_error("--outliers spike needs count,amplitude");
            spec.outliers.kind = OutlierSpec::Kind::Spike;
            spec.outliers.count = static_cast<int>(vals[0]);
            spec.outliers.amplitude = vals[1];
        } else if (a.outliers.rfind("replace:", 0) == 0) {
            const auto vals = split(a.outliers, "--outliers");
            if (vals.size() != 2)
                throw std::runtime_error("--outliers replace needs count,spread");
            spec.outliers.kind = OutlierSpec::Kind::Replace;
            spec.outliers.count = static_cast<int>(vals[0]);
            spec.outliers.spread = vals[1];
        } else if (a.outliers != "none") {
            throw std::runtime_error("unknown --outliers '" + a.outliers + "'");
        }
    }
    if (a.has_seed) spec.seed = a.seed;

    const SynthResult result = generate(spec);
    cli::write_csv(a.out, result.x.mat());
    cli::write_truth_json(a.truth, result.truth.boundaries(),
                          result.true_outliers);

    cli::Manifest man;
    man.command = "synth";
    man.config = {{"noise", a.noise},
                  {"outliers", a.outliers},
                  {"segments", std::to_string(result.truth.segments())},
                  {"samples", std::to_string(result.x.size())}};
    if (a.has_spec) man.config.emplace_back("spec", a.spec);
    man.input_digest =
        a.has_spec ? cli::fnv1a64_file(a.spec) : std::string("none");
    man.seed = spec.seed;
    man.wall_ms = watch.ms();
    cli::write_manifest(a.out, man);
    cli::write_manifest(a.truth, man);
    return 0;
}

struct EvalArgs {
    std::string detected, truth, out;
    int tol = 0;
};

int run_eval(const EvalArgs& a) {
    Stopwatch watch;
    const std::vector<int> detected = cli::read_boundaries_json(a.detected);
    const std::vector<int> truth = cli::read_boundaries_json(a.truth);

    const MatchReport report = match_boundaries(detected, truth, a.tol);
    const double p = report.precision(), r = report.recall();
    const std::optional<double> rm = r_measure(p, r);
    const double f = f_measure(p, r);
    const double err = mean_boundary_error(detected, truth);

    std::string json = "{\n";
    json += "  \"tp\": " + std::to_string(report.tp) + ",\n";
    json += "  \"fp\": " + std::to_string(report.fp) + ",\n";
    json += "  \"fn\": " + std::to_string(report.fn) + ",\n";
    json += "  \"precision\": " + fmt(p) + ",\n";
    json += "  \"recall\": " + fmt(r) + ",\n";
    json += "  \"f_measure\": " + fmt(f) + ",\n";
    json += "  \"r_measure\": " + (rm ? fmt(*rm) : std::string("null")) + ",\n";
    json += "  \"mean_error\": " +
            (std::isfinite(err) ? fmt(err) : std::string("null")) + "\n";
    json += "}\n";
    std::cout << json;

    if (!a.out.empty()) {
        std::ofstream(a.out, std::ios::binary) << json;
        cli::Manifest man;
        man.command = "eval";
        man.config = {{"detected", a.detected},
                      {"truth", a.truth},
                      {"tol", std::to_string(a.tol)}};
        man.input_digest = cli::fnv1a64_file(a.detected);
        man.wall_ms = watch.ms();
        cli::write_manifest(a.out, man);
    }
    return 0;
}

struct BoundArgs {
    std::string out, weights = "uniform";
    int n = 100, n1 = 50;
    double dmu = 2.0, bound = 2.0, delta = 0.05;
    int trials = 10000;
    std::uint64_t seed = 0;
};

int run_bound(const BoundArgs& a) {
    Stopwatch watch;
    if (a.bound < a.dmu)
        throw std::runtime_error(
            "--bound must be >= --dmu (the data range covers the mean gap)");

    SynthSpec spec;
    spec.segment_means.resize(2, 1);
    spec.segment_means << -0.5 * a.dmu, 0.5 * a.dmu;
    spec.segment_lengths = {a.n1, a.n - a.n1};
    const double extent = 0.5 * (a.bound - a.dmu);
    if (extent > 0.0) {
        spec.noise.kind = NoiseSpec::Kind::Uniform;
        spec.noise.bound = extent;
    }
    spec.seed = a.seed;

    BoundParams params;
    params.n = a.n;
    params.n1 = a.n1;
    params.delta_mu = a.dmu;
    params.data_bound = a.bound;
    params.delta = a.delta;

    const Weights w = build_weights(a.weights, a.n);
    const SplitErrorCurve curve =
        empirical_split_error(spec, params, w, a.trials, a.seed);

    std::string csv = "m,empirical_p,bound_simple,bound_bminus,bound_bplus\n";
    for (size_t i = 0; i < curve.ms.size(); ++i)
        csv += std::to_string(curve.ms[i]) + "," + fmt(curve.empirical_p[i]) +
               "," + fmt(curve.bound_simple[i]) + "," +
               fmt(curve.bound_minus[i]) + "," + fmt(curve.bound_plus[i]) +
               "\n";
    std::ofstream(a.out, std::ios::binary) << csv;

    std::cout << "m0: " << fmt(curve.m0_value) << "\n";
    std::cout << "p_exceed_m0: " << fmt(curve.p_exceed_m0) << "\n";

    cli::Manifest man;
    man.command = "bound";
    man.config = {{"n", std::to_string(a.n)},
                  {"n1", std::to_string(a.n1)},
                  {"dmu", fmt(a.dmu)},
                  {"bound", fmt(a.bound)},
                  {"delta", fmt(a.delta)},
                  {"trials", std::to_string(a.trials)},
                  {"weights", a.weights}};
    man.seed = a.seed;
    man.wall_ms = watch.ms();
    cli::write_manifest(a.out, man);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Outlier-robust convex segmentation of multivariate sequences"};
    app.require_subcommand(1);

    SegmentArgs seg;
    CLI::App* seg_cmd = app.add_subcommand(
        "segment", "Segment a sequence and write a result document");
    seg_cmd->add_option("--input", seg.input, "input CSV, one row per sample")
        ->required();
    seg_cmd->add_flag("--header", seg.header, "skip the first CSV row");
    seg_cmd->add_option("--algo", seg.algo, "orcs | td | wtd | bu");
    auto* lam = seg_cmd->add_option("--lambda", seg.lambda, "fusion strength");
    auto* gam = seg_cmd->add_option("--gamma", seg.gamma,
                                    "offset cost (number or 'inf')");
    seg_cmd->add_option("--q", seg.q, "offset norm, 1 or 2");
    seg_cmd->add_option("--weights", seg.weights,
                        "uniform | sqrt | power:<alpha>");
    auto* kopt = seg_cmd->add_option("--k", seg.k, "segment count");
    auto* mopt = seg_cmd->add_option("--m", seg.m, "outlier budget");
    seg_cmd->add_option("--tol", seg.tol, "convergence tolerance");
    seg_cmd->add_option("--max-iter", seg.max_iter, "inner iteration cap");
    seg_cmd->add_option("--alt-max-iter", seg.alt_max_iter,
                        "alternation cap");
    seg_cmd->add_option("--threads", seg.threads, "worker threads");
    seg_cmd->add_option("--out", seg.out, "result JSON path")->required();

    PathArgs path;
    CLI::App* path_cmd = app.add_subcommand(
        "path", "Sweep a (gamma, lambda) grid and write the grid CSV");
    path_cmd->add_option("--input", path.input, "input CSV")->required();
    path_cmd->add_flag("--header", path.header, "skip the first CSV row");
    path_cmd->add_option("--grid", path.grid, "grid size <gammas>x<lambdas>");
    path_cmd->add_option("--q", path.q, "offset norm, 1 or 2");
    path_cmd->add_option("--weights", path.weights,
                         "uniform | sqrt | power:<alpha>");
    path_cmd->add_option("--tol", path.tol, "convergence tolerance");
    path_cmd->add_option("--max-iter", path.max_iter, "inner iteration cap");
    path_cmd->add_option("--alt-max-iter", path.alt_max_iter,
                         "alternation cap");
    path_cmd->add_option("--threads", path.threads, "worker threads");
    path_cmd->add_option("--out", path.out, "grid CSV path")->required();
    path_cmd->add_option("--hist", path.hist,
                         "histogram CSV path (default <out>.hist.csv)");

    SynthArgs synth;
    CLI::App* synth_cmd = app.add_subcommand(
        "synth", "Generate synthetic data with known ground truth");
    auto* spec_opt =
        synth_cmd->add_option("--spec", synth.spec, "full spec JSON");
    synth_cmd->add_option("--k", synth.k, "segment count");
    synth_cmd->add_option("--len", synth.len, "samples per segment");
    synth_cmd->add_option("--d", synth.d, "feature dimension");
    synth_cmd->add_option("--jump", synth.jump, "boundary jump norm");
    synth_cmd->add_option("--noise", synth.noise,
                          "none | uniform:<bound> | tgauss:<sigma>,<clip>");
    synth_cmd->add_option(
        "--outliers", synth.outliers,
        "none | spike:<count>,<amplitude> | replace:<count>,<spread>");
    auto* seed_opt = synth_cmd->add_option("--seed", synth.seed, "RNG seed");
    synth_cmd->add_option("--out", synth.out, "data CSV path")->required();
    synth_cmd->add_option("--truth", synth.truth, "truth JSON path")
        ->required();

    EvalArgs eval;
    CLI::App* eval_cmd = app.add_subcommand(
        "eval", "Score detected boundaries against ground truth");
    eval_cmd->add_option("--detected", eval.detected,
                         "result or truth JSON with detected boundaries")
        ->required();
    eval_cmd->add_option("--truth", eval.truth, "truth JSON")->required();
    eval_cmd->add_option("--tol", eval.tol, "match tolerance in samples");
    eval_cmd->add_option("--out", eval.out, "also write the scores here");

    BoundArgs bound;
    CLI::App* bound_cmd = app.add_subcommand(
        "bound", "Detection-error bound curve with Monte Carlo comparison");
    bound_cmd->add_option("--n", bound.n, "sequence length")->required();
    bound_cmd->add_option("--n1", bound.n1, "true boundary position")
        ->required();
    bound_cmd->add_option("--dmu", bound.dmu, "mean gap")->required();
    bound_cmd->add_option("--bound", bound.bound, "data range width")
        ->required();
    bound_cmd->add_option("--delta", bound.delta, "target failure probability");
    bound_cmd->add_option("--trials", bound.trials, "Monte Carlo trials");
    bound_cmd->add_option("--seed", bound.seed, "RNG seed");
    bound_cmd->add_option("--weights", bound.weights,
                          "uniform | sqrt | power:<alpha>");
    bound_cmd->add_option("--out", bound.out, "bound-curve CSV path")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    seg.has_lambda = lam->count() > 0;
    seg.has_gamma = gam->count() > 0;
    seg.has_k = kopt->count() > 0;
    seg.has_m = mopt->count() > 0;
    synth.has_spec = spec_opt->count() > 0;
    synth.has_seed = seed_opt->count() > 0;

    try {
        if (seg_cmd->parsed()) return run_segment(seg);
        if (path_cmd->parsed()) return run_path(path);
        if (synth_cmd->parsed()) return run_synth(synth);
        if (eval_cmd->parsed()) return run_eval(eval);
        if (bound_cmd->parsed()) return run_bound(bound);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

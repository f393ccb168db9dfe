#include "phl/commands.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>
#include <sstream>

#include "phl/devmap.hpp"
#include "phl/frenet.hpp"
#include "phl/gauss.hpp"
#include "phl/harmseq.hpp"
#include "phl/immersion.hpp"
#include "phl/parallel.hpp"
#include "phl/report_io.hpp"
#include "phl/solver.hpp"

namespace phl {

using nlohmann::json;

namespace {

RunConfig load(const CommandOptions& options) {
    if (options.config.empty()) throw ConfigError("--config: required");
    RunConfig cfg = load_config(options.config);
    if (options.tol) {
        cfg.solver.tol = *options.tol;
        cfg.validate();
    }
    return cfg;
}

bool all_constant(const RunConfig& cfg) {
    return std::all_of(cfg.higgs.gammas.begin(), cfg.higgs.gammas.end(),
                       [](const GammaSpec& g) { return g.kind == GammaSpec::Kind::constant; });
}

std::vector<std::complex<double>> constant_gammas(const RunConfig& cfg) {
    if (!all_constant(cfg)) throw ConfigError("higgs.gamma: this field needs constant gammas");
    std::vector<std::complex<double>> out;
    for (const auto& g : cfg.higgs.gammas) out.push_back(g.value);
    return out;
}

json complex_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

json bicomplex_json(const BiComplex& z) {
    return {{"plus", complex_json(z.plus)}, {"minus", complex_json(z.minus)}};
}

ConnectionField connection(const RunConfig& cfg, const std::filesystem::path& out_dir, bool corrupt) {
    return ConnectionField(make_field(cfg, out_dir), Corruption{corrupt});
}

MetricSolution read_solution(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    const auto path = out_dir / "u.csv";
    if (!std::filesystem::exists(path)) throw IoError("missing solver output " + path.string() + " (run solve first)");
    const Eigen::MatrixXd stacked = read_csv(path);
    const int n = cfg.domain.n;
    const int m = cfg.higgs.m;
    if (stacked.rows() != static_cast<Eigen::Index>(m) * n || stacked.cols() != n) {
        throw IoError(path.string() + ": shape does not match the config (" + std::to_string(m * n) + " x " +
                      std::to_string(n) + " expected)");
    }
    MetricSolution sol;
    for (int i = 0; i < m; ++i) sol.u.push_back(stacked.middleRows(static_cast<Eigen::Index>(i) * n, n));
    return sol;
}

struct Check {
    std::string name;
    double value = 0.0;
    double limit = 0.0;
    bool pass = false;
    std::string note;
};

json check_json(const Check& c) {
    json j = {{"name", c.name}, {"value", c.value}, {"limit", c.limit}, {"pass", c.pass}};
    if (!c.note.empty()) j["note"] = c.note;
    return j;
}

Check below(std::string name, double value, double limit) {
    return {std::move(name), value, limit, std::isfinite(value) && value < limit, {}};
}

// Rows of the immersion table and the maxima used by verify.
struct ImmersionSummary {
    std::vector<std::vector<double>> rows;
    double sigma_defect = 0.0;
    double conformality = 0.0;
    double metric_error = 0.0;
    double harmonic = 0.0;
    double drift = 0.0;
};

ImmersionSummary immersion_summary(const ConnectionField& conn, const RunConfig& cfg) {
    TransportOptions opts;
    opts.step = cfg.transport.step;
    // Vertices every 10 steps so the samples cover the whole path.
    std::vector<std::complex<double>> path{cfg.transport.path.front()};
    for (std::size_t k = 1; k < cfg.transport.path.size(); ++k) {
        const auto a = cfg.transport.path[k - 1];
        const auto b = cfg.transport.path[k];
        const int pieces = std::max(1, static_cast<int>(std::ceil(std::abs(b - a) / (10.0 * opts.step))));
        for (int p = 1; p <= pieces; ++p) path.push_back(a + (b - a) * (static_cast<double>(p) / pieces));
    }
    const FrameField frames = transport_frame(conn, path, initial_frame(conn.m()), opts);
    const std::size_t stride = std::max<std::size_t>(1, frames.frames.size() / 400);
    const auto samples = immerse(conn, frames, cfg.transport.step, stride);
    ImmersionSummary s;
    s.drift = frames.max_step_drift;
    for (const auto& smp : samples) {
        const double conf = smp.q_z_zbar.max_abs();
        const double metric = std::max(std::abs(smp.q_z_z.plus - smp.h1), std::abs(smp.q_z_z.minus - smp.h1));
        s.rows.push_back({smp.point.real(), smp.point.imag(), smp.h1, smp.sigma_defect, conf, metric,
                          smp.harmonic_tangential});
        s.sigma_defect = std::max(s.sigma_defect, smp.sigma_defect);
        s.conformality = std::max(s.conformality, conf);
        s.metric_error = std::max(s.metric_error, metric);
        s.harmonic = std::max(s.harmonic, smp.harmonic_tangential);
    }
    return s;
}

// Sorted {h_i, 1 / h_i, 1} against the eigenvalues of the gauged Gauss lift at the centre.
double eigenvalue_mismatch(const ConnectionField& conn, std::complex<double> centre, json* detail = nullptr) {
    const FieldSample sample = conn.field().sample(centre.real(), centre.imag());
    const Eigen::VectorXd ev =
        symmetric_point(gauss_lift(initial_frame(conn.m()), holomorphic_gauge(sample.h))).eigenvalues();
    std::vector<double> expected{1.0};
    for (const double h : sample.h) {
        expected.push_back(h);
        expected.push_back(1.0 / h);
    }
    std::sort(expected.begin(), expected.end());
    double worst = 0.0;
    for (std::size_t k = 0; k < expected.size(); ++k) {
        worst = std::max(worst, std::abs(ev(static_cast<Eigen::Index>(k)) - expected[k]));
    }
    if (detail) {
        (*detail)["eigenvalues"] = std::vector<double>(ev.data(), ev.data() + ev.size());
        (*detail)["expected"] = expected;
    }
    return worst;
}

}  // namespace

std::filesystem::path output_dir(const RunConfig& config, const CommandOptions& options) {
    if (options.out) return *options.out;
    const std::filesystem::path out(config.report.out);
    return out.is_absolute() ? out : config.base_dir / out;
}

std::shared_ptr<const HiggsField> make_field(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    const auto top = [&] {
        const auto& g = cfg.higgs.gammas.back();
        if (g.kind != GammaSpec::Kind::constant) throw ConfigError("higgs.gamma" + std::to_string(cfg.higgs.m) +
                                                                   ": this field needs a constant top entry");
        return g.value;
    };
    switch (cfg.geometry.field) {
        case FieldKind::constant:
            return std::make_shared<ConstantField>(ConstantField::from_gammas(constant_gammas(cfg)));
        case FieldKind::chart:
            return std::make_shared<ChartField>(cfg.higgs.m, top(), cfg.geometry.chart_a);
        case FieldKind::fuchsian:
            return std::make_shared<FuchsianField>(cfg.higgs.m);
        case FieldKind::split:
            return std::make_shared<SplitField>(top());
        case FieldKind::solved:
            break;
    }
    const MetricSolution sol = read_solution(cfg, out_dir);
    const HiggsData data = build_higgs(cfg);
    if (all_constant(cfg)) {
        std::vector<double> h;
        bool uniform = true;
        for (const auto& u : sol.u) {
            uniform = uniform && (u.maxCoeff() - u.minCoeff()) <= 1e-12;
            h.push_back(std::exp(u(0, 0)));
        }
        // Trigonometric interpolation of a constant is the constant; skip the O(n^2) evaluation.
        if (uniform) return std::make_shared<ConstantField>(std::move(h), constant_gammas(cfg));
    }
    const SpectralOps ops(build_grid(cfg));
    return std::make_shared<TorusField>(sol, data, ops);
}

int cmd_solve(const CommandOptions& options, std::ostream& log) {
    const RunConfig cfg = load(options);
    const HiggsData data = build_higgs(cfg);
    const int m = cfg.higgs.m;
    json report = {{"m", m}, {"n", cfg.domain.n}, {"backend", to_string(cfg.solver.backend)}};
    if (m >= 2) {
        const Stability st = stability_classify(m, cfg.higgs.genus, cfg.higgs.degree, data.gamma_vanishes(m),
                                                data.gamma_vanishes(m - 1));
        report["stability"] = to_string(st);
        if (st == Stability::unstable || st == Stability::empty) {
            std::ostringstream msg;
            msg << "stability: (m, g, d) = (" << m << ", " << cfg.higgs.genus << ", " << cfg.higgs.degree
                << ") with gamma_" << m << (data.gamma_vanishes(m) ? " = 0" : " != 0") << " is " << to_string(st)
                << "; no solution of the Hitchin system exists for these data";
            throw ConfigError(msg.str());
        }
    }
    const auto out_dir = output_dir(cfg, options);
    ensure_directory(out_dir);

    MetricSolution sol;
    SolveLog solve_log;
    const SpectralOps ops(build_grid(cfg));
    if (all_constant(cfg)) {
        std::vector<double> mags;
        for (const auto& g : cfg.higgs.gammas) mags.push_back(std::abs(g.value));
        sol = MetricSolution::constant(cfg.domain.n, solve_constant(m, mags));
        solve_log.converged = true;
        solve_log.residual_history.push_back(max_abs(hitchin_residual(sol, data, ops, cfg.solver.backend)));
        solve_log.diagnostic = "constant data: closed-form solution";
        report["branch"] = "constant";
    } else {
        SolveOptions sopts;
        sopts.tol = cfg.solver.tol;
        sopts.max_iter = cfg.solver.max_iter;
        sopts.backend = cfg.solver.backend;
        try {
            SolveResult res = solve_pde(data, ops, sopts);
            sol = std::move(res.solution);
            solve_log = std::move(res.log);
        } catch (const std::runtime_error& e) {
            report["converged"] = false;
            report["diagnostic"] = e.what();
            write_json(out_dir / "convergence.json", report);
            log << "solve: " << e.what() << '\n';
            return exit_not_converged;
        }
        report["branch"] = "pde";
    }
    const int n = cfg.domain.n;
    Eigen::MatrixXd stacked(static_cast<Eigen::Index>(m) * n, n);
    for (int i = 0; i < m; ++i) stacked.middleRows(static_cast<Eigen::Index>(i) * n, n) = sol.u[i];
    write_csv(out_dir / "u.csv", stacked);

    report["converged"] = solve_log.converged;
    report["iterations"] = solve_log.iterations;
    report["residual_history"] = solve_log.residual_history;
    report["damping_halvings"] = solve_log.damping_halvings;
    report["residual"] = solve_log.residual_history.empty() ? 0.0 : solve_log.residual_history.back();
    report["tol"] = cfg.solver.tol;
    report["diagnostic"] = solve_log.diagnostic;
    write_json(out_dir / "convergence.json", report);
    log << "solve: " << (solve_log.converged ? "converged" : "not converged") << ", residual "
        << format_double(report["residual"].get<double>()) << ", output " << (out_dir / "u.csv").string() << '\n';
    return solve_log.converged ? exit_ok : exit_not_converged;
}

int cmd_verify(const CommandOptions& options, std::ostream& log) {
    const RunConfig cfg = load(options);
    const auto out_dir = output_dir(cfg, options);
    const ConnectionField conn = connection(cfg, out_dir, options.corrupt);
    const int m = conn.m();
    const auto centre = cfg.transport.centre;
    std::vector<Check> checks;

    if (cfg.geometry.field == FieldKind::solved) {
        const MetricSolution sol = read_solution(cfg, out_dir);
        const HiggsData data = build_higgs(cfg);
        const SpectralOps ops(build_grid(cfg));
        checks.push_back(below("hitchin_residual", max_abs(hitchin_residual(sol, data, ops, cfg.solver.backend)),
                               std::max(10.0 * cfg.solver.tol, 1e-12)));
        const MonotonicityReport mono = monotonicity_report(sol, data, ops);
        checks.push_back({"chain_bounded", mono.chain_max.empty() ? 0.0 : mono.chain_max.front(), 1.0,
                          mono.chain_bounded, "max of the first chain norm"});
        checks.push_back({"chain_ordered", 0.0, 0.0, mono.chain_ordered, {}});
    }

    const ImmersionSummary imm = immersion_summary(conn, cfg);
    checks.push_back(below("sigma_on_quadric", imm.sigma_defect, 1e-8));
    checks.push_back(below("immersion_conformal", imm.conformality, 1e-6));
    checks.push_back(below("induced_metric", imm.metric_error, 1e-5));
    checks.push_back(below("harmonic_tangential", imm.harmonic, 1e-5));
    checks.push_back(below("holonomy_path_independence",
                           holonomy_invariance(conn, cfg.transport.path.front(), cfg.transport.path.back()), 1e-8));

    const FrenetReport fr = frenet_verify(conn, centre);
    checks.push_back({"frenet_gram", fr.gram_min, 0.0, fr.gram_ok, "signed smallest Gram eigenvalue"});
    checks.push_back({"frenet_block_angle", fr.angle_max, FrenetOptions{}.tol_angle, fr.angle_ok, {}});
    checks.push_back({"frenet_omega_isotropic", fr.omega_max, FrenetOptions{}.tol_omega, fr.omega_ok, {}});
    checks.push_back({"frenet_tridiagonal", fr.offblock_max, FrenetOptions{}.tol_tridiagonal, fr.tridiagonal_ok, {}});
    checks.push_back({"frenet_conformal", fr.conformality_max, FrenetOptions{}.tol_conformal, fr.conformal_ok, {}});

    const HarmonicSequence seq = build_sequence(conn, centre);
    const OrderReport order = isotropic_order(seq);
    checks.push_back({"isotropic_order", static_cast<double>(order.order), 2.0 * m, order.order == 2 * m,
                      "expected 2m"});
    if (order.order == 2 * m) {
        const DifferentialReport diff = extract_differential(seq, conn);
        checks.push_back(below("differential_mismatch", diff.q_mismatch, 1e-5));
        checks.push_back(below("differential_holomorphic", diff.holomorphy_residual, 1e-5));
    } else {
        checks.push_back({"differential_mismatch", NAN, 1e-5, false, "isotropic order differs from 2m"});
        checks.push_back({"differential_holomorphic", NAN, 1e-5, false, "isotropic order differs from 2m"});
    }

    const MinimalityReport mini = minimality_report(conn, {centre});
    checks.push_back(below("gauss_conformality", mini.conformality, 1e-5));
    checks.push_back(below("gauss_tension", mini.tension, 1e-4));
    checks.push_back(below("gauss_eigenvalues", eigenvalue_mismatch(conn, centre), 1e-8));

    json report = {{"field", conn.field().name()}, {"m", m}, {"corrupt", options.corrupt}};
    json entries = json::array();
    int failed = 0;
    for (const auto& c : checks) {
        entries.push_back(check_json(c));
        if (!c.pass) ++failed;
        log << (c.pass ? "PASS " : "FAIL ") << c.name << ' ' << format_double(c.value) << '\n';
    }
    report["checks"] = entries;
    report["failed"] = failed;
    report["all_pass"] = failed == 0;
    ensure_directory(out_dir);
    write_json(out_dir / "verify.json", report);
    log << "verify: " << checks.size() - static_cast<std::size_t>(failed) << "/" << checks.size() << " checks pass\n";
    return failed == 0 ? exit_ok : exit_check_failed;
}

int cmd_immerse(const CommandOptions& options, std::ostream& log) {
    const RunConfig cfg = load(options);
    const auto out_dir = output_dir(cfg, options);
    const ConnectionField conn = connection(cfg, out_dir, options.corrupt);
    const ImmersionSummary imm = immersion_summary(conn, cfg);
    ensure_directory(out_dir);
    write_table(out_dir / "immersion.csv",
                {"x", "y", "h1", "sigma_defect", "q_z_zbar", "metric_error", "harmonic_tangential"}, imm.rows);
    const json report = {{"field", conn.field().name()},
                         {"samples", imm.rows.size()},
                         {"sigma_defect", imm.sigma_defect},
                         {"conformality", imm.conformality},
                         {"metric_error", imm.metric_error},
                         {"harmonic_tangential", imm.harmonic},
                         {"max_step_drift", imm.drift}};
    write_json(out_dir / "immersion.json", report);
    log << "immerse: " << imm.rows.size() << " samples, max |q(sigma, sigma) + 1| = " << format_double(imm.sigma_defect)
        << '\n';
    return exit_ok;
}

int cmd_seq(const CommandOptions& options, std::ostream& log) {
    const RunConfig cfg = load(options);
    const auto out_dir = output_dir(cfg, options);
    const ConnectionField conn = connection(cfg, out_dir, options.corrupt);
    const int m = conn.m();
    const HarmonicSequence seq = build_sequence(conn, cfg.transport.centre);
    const OrderReport order = isotropic_order(seq);
    json report = {{"field", conn.field().name()},
                   {"m", m},
                   {"order", order.order},
                   {"capped", order.capped},
                   {"first_nonzero", order.first_nonzero},
                   {"scale", order.scale}};
    json pairings = json::array();
    for (int total = 2; total <= seq.depth + 1; ++total) {
        for (int alpha = 1; alpha < total; ++alpha) {
            const int beta = total - alpha;
            if (alpha > seq.depth || beta > seq.depth) continue;
            pairings.push_back({{"alpha", alpha}, {"beta", beta}, {"max_abs", max_abs(eta_pairing(seq, alpha, beta))}});
        }
    }
    report["pairings"] = pairings;
    ensure_directory(out_dir);
    if (order.order == 2 * m) {
        const DifferentialReport diff = extract_differential(seq, conn);
        report["q_centre"] = complex_json(diff.q_centre);
        report["eta_mid_centre"] = bicomplex_json(diff.eta_mid_centre);
        report["q_mismatch"] = diff.q_mismatch;
        report["holomorphy_residual"] = diff.holomorphy_residual;
        report["sign_alternation"] = diff.sign_alternation;
        std::vector<std::vector<double>> rows;
        for (int j = -diff.top.half; j <= diff.top.half; ++j) {
            for (int i = -diff.top.half; i <= diff.top.half; ++i) {
                const BiComplex& v = diff.top.at(i, j);
                const auto z = seq.centre + seq.spacing * std::complex<double>(i, j);
                rows.push_back({z.real(), z.imag(), v.plus.real(), v.plus.imag(), v.minus.real(), v.minus.imag()});
            }
        }
        write_table(out_dir / "eta_top.csv", {"x", "y", "plus_re", "plus_im", "minus_re", "minus_im"}, rows);
    }
    write_json(out_dir / "sequence.json", report);
    log << "seq: isotropic order " << order.order << (order.capped ? " (lower bound)" : "") << ", expected " << 2 * m
        << '\n';
    return exit_ok;
}

int cmd_gauss(const CommandOptions& options, std::ostream& log) {
    const RunConfig cfg = load(options);
    const auto out_dir = output_dir(cfg, options);
    const ConnectionField conn = connection(cfg, out_dir, options.corrupt);
    const MinimalityReport mini = minimality_report(conn, {cfg.transport.centre});
    json report = {{"field", conn.field().name()},
                   {"conformality", mini.conformality},
                   {"tension", mini.tension},
                   {"conformality_order", mini.conformality_order},
                   {"tension_order", mini.tension_order}};
    json levels = json::array();
    for (const auto& l : mini.levels) {
        levels.push_back({{"step", l.step}, {"conformality", l.conformality}, {"tension", l.tension}});
    }
    report["levels"] = levels;
    json eig;
    report["eigenvalue_mismatch"] = eigenvalue_mismatch(conn, cfg.transport.centre, &eig);
    report["base_point"] = eig;
    report["subspace_defect"] = gauss_subspace_defect(initial_frame(conn.m()));
    ensure_directory(out_dir);
    write_json(out_dir / "gauss.json", report);
    log << "gauss: conformality " << format_double(mini.conformality) << ", tension " << format_double(mini.tension)
        << '\n';
    return exit_ok;
}

int cmd_devmap(const CommandOptions& options, std::ostream& log) {
    const RunConfig cfg = load(options);
    if (cfg.higgs.m != 1) throw ConfigError("higgs.m: devmap needs m = 1");
    const auto out_dir = output_dir(cfg, options);
    ensure_directory(out_dir);

    const auto points = grid_samples(cfg.devmap.per_axis, cfg.devmap.radius);
    std::vector<std::vector<double>> rows(points.size());
    std::vector<GWStatus> status(points.size());
    std::vector<double> det(points.size()), period(points.size());
    parallel_for(0, points.size(), [&](std::size_t k) {
        const UTPoint& pt = points[k];
        const FlagPoint flag = dev(pt).normalized();
        status[k] = gw_membership(flag);
        det[k] = std::abs(transversality_det(pt));
        period[k] = flag.distance(dev({pt.p, pt.alpha + std::numbers::pi}));
        rows[k] = {pt.p(0), pt.p(1), pt.p(2), pt.alpha, flag.line(0), flag.line(1), flag.line(2),
                   flag.functional(0), flag.functional(1), flag.functional(2), status[k].member ? 1.0 : 0.0};
    });
    write_table(out_dir / "devmap_samples.csv",
                {"p0", "p1", "p2", "alpha", "line0", "line1", "line2", "functional0", "functional1", "functional2",
                 "member"},
                rows);
    const auto members = static_cast<std::size_t>(
        std::count_if(status.begin(), status.end(), [](const GWStatus& s) { return s.member; }));
    const double min_det = *std::min_element(det.begin(), det.end());
    const double max_period = *std::max_element(period.begin(), period.end());
    bool ok = members == points.size();
    json report = {{"samples", points.size()},
                   {"members", members},
                   {"member_fraction", static_cast<double>(members) / static_cast<double>(points.size())},
                   {"min_abs_transversality_det", min_det},
                   {"max_periodicity_defect", max_period}};
    log << "devmap: " << members << "/" << points.size() << " samples in the domain, min |det| "
        << format_double(min_det) << '\n';
    if (options.check_anchor) {
        const AnchorReport anchor = anchor_check();
        const bool pass = anchor.section_error < 1e-12 && anchor.flag_error < 1e-12;
        report["anchor"] = {{"section_error", anchor.section_error}, {"flag_error", anchor.flag_error}, {"pass", pass}};
        log << "devmap: anchor " << (pass ? "holds" : "FAILS") << ", error " << format_double(anchor.section_error)
            << '\n';
        ok = ok && pass;
    }
    if (options.probe_injectivity) {
        const auto samples = halton_samples(*options.probe_injectivity, cfg.devmap.radius);
        const CollisionReport col = injectivity_probe(samples);
        report["injectivity"] = {{"samples", col.samples}, {"collisions", col.collisions}, {"identified", col.identified}};
        log << "devmap: " << col.collisions << " collisions among " << col.samples << " samples\n";
        ok = ok && col.collisions == 0;
    }
    report["pass"] = ok;
    write_json(out_dir / "devmap.json", report);
    return ok ? exit_ok : exit_check_failed;
}

json moduli_json(int m, int genus, int degree) {
    const ModuliReport rep = moduli_dimensions(m, genus, degree);
    const bool empty = rep.status == ModuliReport::Status::empty;
    return {{"m", m},
            {"genus", genus},
            {"degree", degree},
            {"status", empty ? "empty" : "stratum"},
            {"bundle_rank", rep.bundle_rank},
            {"base_dim", rep.base_dim},
            {"total_dim", rep.total_dim},
            {"cover_cardinality", rep.cover_cardinality},
            {"cover_note", rep.cover_note}};
}

int cmd_moduli(const CommandOptions& options, std::ostream& log) {
    const json doc = moduli_json(options.m, options.genus, options.degree);
    if (options.json) {
        log << doc.dump() << '\n';
        return exit_ok;
    }
    log << "moduli (m, g, d) = (" << options.m << ", " << options.genus << ", " << options.degree << "): ";
    if (doc["status"] == "empty") {
        log << "empty\n";
    } else {
        log << "rank " << doc["bundle_rank"].get<long>() << " over a base of dimension " << doc["base_dim"].get<long>()
            << ", total " << doc["total_dim"].get<long>() << '\n';
        if (!doc["cover_note"].get<std::string>().empty()) log << "  " << doc["cover_note"].get<std::string>() << '\n';
    }
    return exit_ok;
}

int run_command(const std::string& name, const CommandOptions& options, std::ostream& log, std::ostream& err) {
    try {
        if (name == "solve") return cmd_solve(options, log);
        if (name == "verify") return cmd_verify(options, log);
        if (name == "immerse") return cmd_immerse(options, log);
        if (name == "seq") return cmd_seq(options, log);
        if (name == "gauss") return cmd_gauss(options, log);
        if (name == "devmap") return cmd_devmap(options, log);
        if (name == "moduli") return cmd_moduli(options, log);
        err << "error: unknown command '" << name << "'\n";
        return exit_validation;
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << '\n';
        return exit_io;
    } catch (const std::invalid_argument& e) {
        err << "invalid input: " << e.what() << '\n';
        return exit_validation;
    } catch (const std::runtime_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_check_failed;
    }
}

}  // namespace phl

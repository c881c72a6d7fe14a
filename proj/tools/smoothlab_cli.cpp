// Command-line front end. Exit codes: 0 success, 2 invalid input, 3 budget exceeded.

#include "smoothlab/config.hpp"
#include "smoothlab/errors.hpp"
#include "smoothlab/experiments.hpp"
#include "smoothlab/gap.hpp"
#include "smoothlab/lo_concentration.hpp"
#include "smoothlab/witness_geometry.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

using namespace smoothlab;

namespace {

struct Globals {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::optional<unsigned> threads;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw ValidationError("cannot write '" + path + "'");
    return f;
}

std::string stem_of(const std::string& path) {
    const std::string ext = ".csv";
    if (path.size() > ext.size() && path.compare(path.size() - ext.size(), ext.size(), ext) == 0) {
        return path.substr(0, path.size() - ext.size());
    }
    return path;
}

// Experiment options are kept as strings and applied with set_config_value, so
// the command line and the config file share one parser.
struct ExperimentOptions {
    std::map<std::string, std::string> values;

    void attach(CLI::App* app, std::initializer_list<const char*> keys) {
        for (const char* k : keys) {
            std::string flag = std::string("--") + k;
            for (auto& c : flag) {
                if (c == '_') c = '-';
            }
            app->add_option(flag, values[k], std::string("override config key '") + k + "'");
        }
    }

    ExperimentConfig build(const Globals& g, const std::string& kind) const {
        ExperimentConfig cfg = g.config.empty() ? ExperimentConfig{} : load_config(g.config, kind);
        cfg.kind = kind;
        for (const auto& [k, v] : values) {
            if (!v.empty()) set_config_value(cfg, k, v);
        }
        if (g.seed) cfg.seed = *g.seed;
        if (g.threads) cfg.threads = *g.threads;
        if (!g.out.empty()) cfg.out = g.out;
        cfg.validate();
        return cfg;
    }
};

void emit_curve(const CurveResult& r) {
    if (r.config.out.empty()) {
        write_curve_csv(std::cout, r);
        return;
    }
    const auto stem = stem_of(r.config.out);
    auto records = open_out(r.config.out);
    write_records_csv(records, r);
    auto curve = open_out(stem + ".curve.csv");
    write_curve_csv(curve, r);
    auto json = open_out(stem + ".json");
    json << summary_json(r);
}

std::vector<std::int64_t> parse_int_list(const std::string& s) {
    std::vector<std::int64_t> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        std::istringstream one(item);
        long long v;
        std::string rest;
        if (!(one >> v) || (one >> rest)) throw ValidationError("expected a comma-separated integer list, got '" + s + "'");
        out.push_back(v);
    }
    if (out.empty()) throw ValidationError("empty integer list");
    return out;
}

// Witness file: first line "B <b>", then the integer coordinates.
WitnessVector load_witness(const std::string& path) {
    std::istringstream in(read_file(path));
    std::string word;
    int b = 0;
    if (!(in >> word >> b) || word != "B") throw ValidationError("witness file must start with 'B <exponent>'");
    WitnessVector w;
    w.b_exponent = b;
    long long x;
    while (in >> x) w.w.push_back(x);
    if (!in.eof()) throw ValidationError("witness coordinates must be integers");
    if (w.w.empty()) throw ValidationError("witness file has no coordinates");
    long double sq = 0;
    for (auto e : w.w) sq += static_cast<long double>(e) * e;
    w.norm = static_cast<double>(std::sqrt(sq));
    return w;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"smoothlab: condition numbers of randomly perturbed matrices"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--config", g.config, "experiment config file");
    app.add_option("--seed", g.seed, "master seed");
    app.add_option("--out", g.out, "output path (CSV; summaries go next to it)");
    app.add_option("--threads", g.threads, "worker threads (0 = all cores)");

    const auto curve_keys = {"n", "trials", "noise", "matrix", "mask", "B", "C", "x_min", "x_max", "x_points"};
    ExperimentOptions tail_opts, cond_opts, frozen_opts, ge_opts, minors_opts;
    auto* tail = app.add_subcommand("tail", "P(|(M+N)^-1| >= x) on a log grid");
    tail_opts.attach(tail, curve_keys);
    auto* cond = app.add_subcommand("cond-tail", "P(kappa(M+N) >= n^B) for each B");
    cond_opts.attach(cond, curve_keys);
    cond_opts.attach(cond, {"baseline"});
    auto* frozen = app.add_subcommand("frozen", "cond-tail with noise-free entries, against the unmasked run");
    frozen_opts.attach(frozen, curve_keys);
    auto* ge = app.add_subcommand("ge-check", "Gaussian elimination error against exact rational solves");
    ge_opts.attach(ge, {"n", "trials", "noise", "matrix", "C", "precision", "well_conditioned"});
    auto* minors = app.add_subcommand("minors", "condition numbers of all leading minors");
    minors_opts.attach(minors, {"n", "trials", "noise", "matrix", "mask", "B", "C"});

    auto* sing = app.add_subcommand("singularity", "exact P(det = 0) by enumeration");
    std::size_t sing_n = 2;
    std::string sing_law = "bernoulli";
    sing->add_option("--n", sing_n, "matrix size (<= 5)");
    sing->add_option("--noise", sing_law, "entry law");

    auto* lo = app.add_subcommand("lo-check", "exact concentration against the Fourier bound");
    std::string lo_law = "bernoulli", lo_weights;
    double lo_mu = 0, lo_A = 2;
    bool lo_inverse = false;
    InverseSearchParams inv;
    lo->add_option("--noise", lo_law, "law of every coordinate");
    lo->add_option("--weights", lo_weights, "comma-separated integer weights")->required();
    lo->add_option("--mu", lo_mu, "mu for the Fourier bound (default: from the law's certificate)");
    lo->add_flag("--inverse", lo_inverse, "also run the inverse search (n <= 16)");
    lo->add_option("--A", lo_A, "concentration exponent for the inverse search");
    lo->add_option("--rank-cap", inv.rank_cap, "largest progression rank (1 or 2)");
    lo->add_option("--volume-cap", inv.volume_cap, "largest progression volume");
    lo->add_option("--except-cap", inv.except_cap, "entries allowed outside the progression");

    auto* gv = app.add_subcommand("gap-verify", "check the four discretization clauses");
    std::string gv_gap, gv_result;
    std::int64_t gv_R0 = 0, gv_S = 0;
    gv->add_option("--gap", gv_gap, "progression file")->required();
    gv->add_option("--result", gv_result, "discretization file to verify");
    gv->add_option("--R0", gv_R0, "construct a rank-1 discretization at this scale instead");
    gv->add_option("--S", gv_S, "separation factor for --R0");

    auto* net_cmd = app.add_subcommand("net", "greedy epsilon-net on the unit sphere");
    std::size_t net_l = 3;
    double net_eps = 0.5;
    std::uint64_t net_patience = 200'000;
    net_cmd->add_option("--dim", net_l, "ambient dimension l");
    net_cmd->add_option("--eps", net_eps, "separation / covering radius");
    net_cmd->add_option("--patience", net_patience, "rejection streak that ends the construction");

    auto* cls = app.add_subcommand("classify", "classify a witness vector");
    std::string cls_file, cls_law = "bernoulli";
    double cls_A = 1;
    cls->add_option("--witness", cls_file, "witness file ('B <b>' then coordinates)")->required();
    cls->add_option("--noise", cls_law, "law of every row entry");
    cls->add_option("--A", cls_A, "concentration exponent");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (tail->parsed()) {
            emit_curve(tail_curve(tail_opts.build(g, "tail")));
        } else if (cond->parsed()) {
            emit_curve(condition_tail(cond_opts.build(g, "cond-tail")));
        } else if (frozen->parsed()) {
            emit_curve(frozen_entries_experiment(frozen_opts.build(g, "frozen")));
        } else if (ge->parsed()) {
            const auto r = ge_error_experiment(ge_opts.build(g, "ge-check"));
            if (r.config.out.empty()) {
                std::cout << summary_json(r);
            } else {
                auto f = open_out(r.config.out);
                write_ge_csv(f, r);
                open_out(stem_of(r.config.out) + ".json") << summary_json(r);
            }
        } else if (minors->parsed()) {
            const auto r = minors_experiment(minors_opts.build(g, "minors"));
            if (r.config.out.empty()) {
                std::cout << summary_json(r);
            } else {
                auto f = open_out(r.config.out);
                write_minors_csv(f, r);
                open_out(stem_of(r.config.out) + ".json") << summary_json(r);
            }
        } else if (sing->parsed()) {
            const auto law = make_standard(sing_law);
            const auto r = singularity_probability(sing_n, law, g.threads.value_or(1));
            if (g.out.empty()) {
                write_singularity_csv(std::cout, sing_n, law, r);
            } else {
                auto f = open_out(g.out);
                write_singularity_csv(f, sing_n, law, r);
                open_out(stem_of(g.out) + ".json") << summary_json(sing_n, law, r);
            }
        } else if (lo->parsed()) {
            const auto law = make_standard(lo_law);
            const auto w = parse_int_list(lo_weights);
            const auto q = ConcentrationQuery::iid(law, w.size());
            const WeightVector v(w);
            const auto exact = exact_concentration(q, v);
            double mu = lo_mu;
            std::int64_t k = 1;
            if (mu == 0) {
                const auto cert = certificate_from_symmetric(law);
                mu = cert.mu;
                k = cert.k;
            }
            ConcentrationQuery fq = q;
            fq.multipliers.assign(w.size(), k);
            const auto bound = fourier_bound(fq, v, mu);
            std::cout << "exact_concentration," << format_double(static_cast<double>(exact.sup)) << "\n";
            if (exact.exact_sup) std::cout << "exact_rational," << to_string(*exact.exact_sup) << "\n";
            std::cout << "argmax," << exact.argmax << "\n";
            std::cout << "mu," << format_double(mu) << "\nmultiplier," << k << "\n";
            std::cout << "fourier_bound," << format_double(static_cast<double>(bound)) << "\n";
            std::cout << "dominated," << (exact.sup <= bound + 1e-12L ? "true" : "false") << "\n";
            if (lo_inverse) {
                inv.mu = mu;
                inv.A = lo_A;
                const auto r = inverse_lo_search(w, inv);
                const char* status = r.status == InverseStatus::found           ? "found"
                                     : r.status == InverseStatus::none_found ? "none_found"
                                                                             : "not_triggered";
                std::cout << "inverse_status," << status << "\n";
                if (r.status == InverseStatus::found) {
                    std::cout << "inverse_s," << r.s << "\n" << format_gap(r.gap);
                    std::cout << "excluded," << r.excluded.size() << "\n";
                }
                for (const auto& line : r.counterexample_log) std::cerr << "counterexample candidate: " << line << "\n";
            }
        } else if (gv->parsed()) {
            const auto p = parse_gap(read_file(gv_gap));
            DiscretizationResult r;
            if (!gv_result.empty()) {
                r = parse_discretization(read_file(gv_result));
            } else {
                if (gv_R0 < 1 || gv_S < 1) throw ValidationError("gap-verify needs --result, or --R0 and --S");
                r = discretize_rank1(p, gv_R0, gv_S);
                std::cout << format_discretization(r);
            }
            const auto c = verify_discretization(p, r);
            auto b = [](bool x) { return x ? "true" : "false"; };
            std::cout << "scale," << b(c.scale) << "\nsmallness," << b(c.smallness) << "\nsparseness,"
                      << b(c.sparseness) << "\ncovering," << b(c.covering) << "\n";
        } else if (net_cmd->parsed()) {
            const auto net = greedy_net(net_l, net_eps, g.seed.value_or(1), net_patience);
            std::ostringstream o;
            o << "# smoothlab net v1 dim=" << net.dimension << " eps=" << format_double(net.epsilon)
              << " points=" << net.points.size() << " coverage=" << format_double(net.coverage.estimate) << "\n";
            for (std::size_t j = 0; j < net_l; ++j) o << (j ? "," : "") << "x" << j;
            o << "\n";
            for (const auto& p : net.points) {
                for (std::size_t j = 0; j < p.size(); ++j) o << (j ? "," : "") << format_double(p[j]);
                o << "\n";
            }
            if (g.out.empty()) {
                std::cout << o.str();
            } else {
                open_out(g.out) << o.str();
            }
        } else if (cls->parsed()) {
            const auto w = load_witness(cls_file);
            const auto law = make_standard(cls_law);
            std::vector<ConcentrationQuery> rows(w.w.size(), ConcentrationQuery::iid(law, w.w.size()));
            const auto c = classify_witness(w, rows, cls_A);
            std::cout << "class," << to_string(c.cls) << "\n";
            std::cout << "concentration," << format_double(static_cast<double>(c.richness.sup)) << "\n";
            std::cout << "threshold," << format_double(c.richness.threshold) << "\n";
            std::cout << "large_coordinates," << c.large_count << "\n";
        }
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ResourceError& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

// Command-line front end: algebra export, field construction, residual
// verification, gauge moves, the quantum layer, difference-operator checks,
// and the regression corpus driver. Exit codes: 0 pass, 1 residual failure,
// 2 input error.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "dynr/errors.hpp"
#include "dynr/serial.hpp"

using namespace dynr;

namespace {

double env_tol(const char* name, double dflt) {
    const char* v = std::getenv(name);
    if (!v) return dflt;
    try {
        return std::stod(v);
    } catch (const std::exception&) {
        throw SchemaError(std::string(name) + ": malformed tolerance override");
    }
}

double pick_tol(double flag_val, const char* env_name, double dflt) {
    if (flag_val >= 0) return flag_val;
    return env_tol(env_name, dflt);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Json parse_file(const std::string& path, std::string* raw = nullptr) {
    std::string data = slurp(path);
    if (raw) *raw = data;
    Json j = Json::parse(data, nullptr, false);
    if (j.is_discarded()) throw SchemaError(path + ": invalid JSON");
    return j;
}

void emit(const Json& j, const std::string& out) {
    std::string s = j.dump(2) + "\n";
    if (out.empty()) {
        std::cout << s;
    } else {
        std::ofstream f(out);
        if (!f) throw SchemaError("cannot write file: " + out);
        f << s;
    }
}

std::vector<int> parse_ints(const std::string& s) {
    std::vector<int> out;
    if (s.empty()) return out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        try {
            out.push_back(std::stoi(item));
        } catch (const std::exception&) {
            throw SchemaError("malformed integer list: '" + s + "'");
        }
    return out;
}

std::vector<double> parse_doubles(const std::string& s) {
    std::vector<double> out;
    if (s.empty()) return out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw SchemaError("malformed number list: '" + s + "'");
        }
    return out;
}

RatVec parse_rats(const std::string& s) {
    RatVec out;
    if (s.empty()) return out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(rat_from_string(item, "argument"));
    return out;
}

std::map<int, int> parse_pairs(const std::string& s) {
    std::map<int, int> out;
    if (s.empty()) return out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto colon = item.find(':');
        if (colon == std::string::npos)
            throw SchemaError("malformed map entry (want i:j): '" + item + "'");
        try {
            out[std::stoi(item.substr(0, colon))] = std::stoi(item.substr(colon + 1));
        } catch (const std::exception&) {
            throw SchemaError("malformed map entry: '" + item + "'");
        }
    }
    return out;
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

RunManifest make_manifest(const std::string& command, std::uint64_t seed) {
    RunManifest m;
    m.command = command;
    m.seed = seed;
    return m;
}

int emit_report(const ResidualReport& rep, RunManifest man, const std::string& out) {
    man.tolerances[rep.check] = rep.tolerance;
    man.verdicts[rep.check] = rep.pass ? "pass" : "fail";
    Json j = report_to_json(rep);
    j["manifest"] = manifest_to_json(man);
    emit(j, out);
    return rep.pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"dynamical r-matrix and R-matrix toolkit"};
    app.require_subcommand(1);
    int rc = 0;

    // ---- algebra ----
    auto* alg_cmd = app.add_subcommand("algebra", "export the algebra structure as JSON");
    std::string alg_desc, alg_out;
    alg_cmd->add_option("descriptor", alg_desc, "gl(m,n) or sl(m,n)")->required();
    alg_cmd->add_option("--out", alg_out, "output file (default stdout)");
    alg_cmd->callback([&]() {
        Superalgebra g = algebra_from_descriptor(alg_desc);
        emit(algebra_to_json(g), alg_out);
        rc = 0;
    });

    // ---- rmatrix build ----
    auto* rmx = app.add_subcommand("rmatrix", "construct dynamical r-matrices");
    rmx->require_subcommand(1);
    auto* build = rmx->add_subcommand("build", "build a field from a constructor family");
    std::string b_desc, b_family, b_subset = "-", b_eps = "1", b_branch = "minus";
    std::string b_nu, b_g1, b_g2, b_tau, b_l = "-", b_out;
    build->add_option("descriptor", b_desc, "gl(m,n) or sl(m,n)")->required();
    build->add_option("--family", b_family, "zero | nonzero | triple")->required();
    build->add_option("--subset", b_subset,
                      "simple-root indices spanning X (default: all roots)");
    build->add_option("--eps", b_eps, "coupling constant (rational, nonzero family)");
    build->add_option("--branch", b_branch, "plus | minus | canonical");
    build->add_option("--nu", b_nu, "shift vector, one rational per Cartan coordinate");
    build->add_option("--g1", b_g1, "triple: first simple-root subset");
    build->add_option("--g2", b_g2, "triple: second simple-root subset");
    build->add_option("--tau", b_tau, "triple: bijection as i:j pairs");
    build->add_option("--l", b_l, "triple: dynamical coordinates (default: all)");
    build->add_option("--out", b_out, "output file (default stdout)");
    build->callback([&]() {
        Superalgebra g = algebra_from_descriptor(b_desc);
        RootSet X = (b_subset == "-") ? full_root_set(g)
                                      : span_closure(g, parse_ints(b_subset));
        TwoForm D = zero_two_form(g.H);
        RatVec nu = parse_rats(b_nu);
        const RatVec* nup = nu.empty() ? nullptr : &nu;
        RField r;
        if (b_family == "zero") {
            r = zero_coupling_r(g, X, D, nup);
        } else if (b_family == "nonzero") {
            Rat eps = rat_from_string(b_eps, "--eps");
            BranchSigns br;
            if (b_branch == "plus")
                br = plus_branch(g);
            else if (b_branch == "minus")
                br = minus_branch(g);
            else if (b_branch == "canonical")
                br = canonical_branch(g);
            else
                throw SchemaError("--branch must be plus, minus or canonical");
            r = nonzero_coupling_r(g, X, D, nup, eps, br);
        } else if (b_family == "triple") {
            Triple t;
            if (b_g1.empty() && b_g2.empty() && b_tau.empty()) {
                for (int i = 0; i < g.N - 1; ++i) {
                    t.g1.push_back(i);
                    t.g2.push_back(i);
                    t.tau[i] = i;
                }
            } else {
                t.g1 = parse_ints(b_g1);
                t.g2 = parse_ints(b_g2);
                t.tau = parse_pairs(b_tau);
            }
            std::vector<int> l;
            if (b_l == "-") {
                for (int i = 0; i < g.H; ++i) l.push_back(i);
            } else {
                l = parse_ints(b_l);
            }
            auto sol = admissible_r00(g, l, t);
            r = triple_r(g, l, t, sol.particular);
        } else {
            throw SchemaError("--family must be zero, nonzero or triple");
        }
        emit(rfield_to_json(g, r), b_out);
        rc = 0;
    });

    // ---- verify ----
    auto* ver = app.add_subcommand("verify", "residual checks on a stored field");
    std::string v_check, v_file, v_out, v_subspace = "-";
    int v_samples = 20;
    std::uint64_t v_seed = 1;
    double v_tol = -1.0;
    ver->add_option("check", v_check, "cdybe | unitarity | invariance | lskew | cybe")
        ->required();
    ver->add_option("file", v_file, "field JSON")->required();
    ver->add_option("--samples", v_samples, "number of sample points");
    ver->add_option("--seed", v_seed, "sampling seed");
    ver->add_option("--tol", v_tol, "tolerance (else env override, else default)");
    ver->add_option("--subspace", v_subspace,
                    "invariance: Cartan coordinates (default: all)");
    ver->add_option("--out", v_out, "report file (default stdout)");
    ver->callback([&]() {
        std::string raw;
        auto [g, r] = rfield_from_json(parse_file(v_file, &raw));
        RunManifest man = make_manifest("verify " + v_check + " " + v_file, v_seed);
        man.input_hashes[v_file] = hash_hex(raw);
        ResidualReport rep;
        if (v_check == "cdybe") {
            rep = cdybe_residual(g, r, v_samples, v_seed,
                                 pick_tol(v_tol, "DYNR_TOL_CDYBE", 1e-9));
        } else if (v_check == "unitarity") {
            rep = unitarity_residual(g, r, r.eps, v_samples, v_seed,
                                     pick_tol(v_tol, "DYNR_TOL_UNITARITY", 1e-12));
        } else if (v_check == "invariance") {
            std::vector<int> sub;
            if (v_subspace == "-") {
                for (int i = 0; i < g.H; ++i) sub.push_back(i);
            } else {
                sub = parse_ints(v_subspace);
            }
            rep = invariance_residual(g, r, sub, v_samples, v_seed,
                                      pick_tol(v_tol, "DYNR_TOL_INVARIANCE", 1e-12));
        } else if (v_check == "lskew") {
            rep = l_skew_residual(g, r, v_samples, v_seed,
                                  pick_tol(v_tol, "DYNR_TOL_LSKEW", 1e-12));
        } else if (v_check == "cybe") {
            rep = cybe_residual(g, r.terms, v_samples, v_seed,
                                pick_tol(v_tol, "DYNR_TOL_CYBE", 1e-9));
        } else {
            throw SchemaError("unknown check: '" + v_check + "'");
        }
        rc = emit_report(rep, man, v_out);
    });

    // ---- gauge apply ----
    auto* gauge = app.add_subcommand("gauge", "gauge moves on a stored field");
    gauge->require_subcommand(1);
    auto* gapply = gauge->add_subcommand("apply", "apply one gauge transformation");
    std::string ga_file, ga_translate, ga_twoform, ga_weyl, ga_out;
    bool ga_inverse = false;
    gapply->add_option("file", ga_file, "field JSON")->required();
    gapply->add_option("--translate", ga_translate, "shift vector (rationals)");
    gapply->add_option("--two-form", ga_twoform, "constant form entry as i,j,c");
    gapply->add_option("--weyl", ga_weyl, "vector-index permutation");
    gapply->add_flag("--inverse", ga_inverse, "apply the inverse move");
    gapply->add_option("--out", ga_out, "output file (default stdout)");
    gapply->callback([&]() {
        auto [g, r] = rfield_from_json(parse_file(ga_file));
        int given = (!ga_translate.empty()) + (!ga_twoform.empty()) + (!ga_weyl.empty());
        if (given != 1)
            throw SchemaError("give exactly one of --translate, --two-form, --weyl");
        GaugeTransform t;
        if (!ga_translate.empty()) {
            t = translate_by(parse_rats(ga_translate));
        } else if (!ga_twoform.empty()) {
            RatVec v = parse_rats(ga_twoform);
            if (v.size() != 3)
                throw SchemaError("--two-form wants i,j,c");
            int i = (int)v[0].convert_to<long>(), j = (int)v[1].convert_to<long>();
            if (i < 0 || i >= g.H || j < 0 || j >= g.H || i == j)
                throw SchemaError("--two-form indices out of range");
            RatMat D = rzeros(g.H, g.H);
            D[i][j] = v[2];
            D[j][i] = -v[2];
            t = two_form_shift(const_two_form(D));
        } else {
            t = weyl_rotate(parse_ints(ga_weyl));
        }
        if (ga_inverse) t = gauge_inverse(t);
        RField out = gauge_apply(g, r, t);
        emit(rfield_to_json(g, out), ga_out);
        rc = 0;
    });

    // ---- quantum ----
    auto* quantum = app.add_subcommand("quantum", "R-matrix layer on the vector representation");
    quantum->require_subcommand(1);

    auto* qq = quantum->add_subcommand("qdybe", "quantum dynamical Yang-Baxter residual");
    std::string qq_file, qq_out;
    double qq_gamma = 1e-2, qq_tol = -1.0;
    int qq_samples = 3;
    std::uint64_t qq_seed = 5;
    qq->add_option("file", qq_file, "R-matrix JSON")->required();
    qq->add_option("--gamma", qq_gamma, "shift step");
    qq->add_option("--samples", qq_samples, "number of sample points");
    qq->add_option("--seed", qq_seed, "sampling seed");
    qq->add_option("--tol", qq_tol, "tolerance");
    qq->add_option("--out", qq_out, "report file (default stdout)");
    qq->callback([&]() {
        std::string raw;
        DynRSpec spec = dynr_from_json(parse_file(qq_file, &raw));
        Superalgebra g = build_algebra(spec.family == "gl" ? AlgKind::gl : AlgKind::sl,
                                       spec.m, spec.n);
        std::vector<Expr> guards;
        for (const auto* grid : {&spec.alpha, &spec.beta, &spec.dense})
            for (const auto& row : *grid)
                for (const auto& e : row) collect_pole_args(e, guards);
        std::mt19937_64 rng(qq_seed);
        std::vector<std::vector<double>> lams;
        for (int k = 0; k < qq_samples; ++k)
            lams.push_back(sample_lambda(rng, g.H, guards));
        auto rep = qdybe_residual(g, dynr_fun(g, spec), qq_gamma, lams,
                                  pick_tol(qq_tol, "DYNR_TOL_QDYBE", 1e-12));
        RunManifest man = make_manifest("quantum qdybe " + qq_file, qq_seed);
        man.input_hashes[qq_file] = hash_hex(raw);
        rc = emit_report(rep, man, qq_out);
    });

    auto* qh = quantum->add_subcommand("hecke", "super Hecke condition check");
    std::string qh_file, qh_out, qh_lambda;
    double qh_q = 1.0, qh_tol = -1.0;
    qh->add_option("file", qh_file, "R-matrix JSON")->required();
    qh->add_option("--q", qh_q, "Hecke parameter")->required();
    qh->add_option("--tol", qh_tol, "tolerance");
    qh->add_option("--lambda", qh_lambda, "evaluation point (default all ones)");
    qh->add_option("--out", qh_out, "report file (default stdout)");
    qh->callback([&]() {
        std::string raw;
        DynRSpec spec = dynr_from_json(parse_file(qh_file, &raw));
        Superalgebra g = build_algebra(spec.family == "gl" ? AlgKind::gl : AlgKind::sl,
                                       spec.m, spec.n);
        std::vector<double> lam = parse_doubles(qh_lambda);
        if (lam.empty()) lam.assign(g.H, 1.0);
        if ((int)lam.size() != g.H)
            throw SchemaError("--lambda wants one value per Cartan coordinate");
        Mat R = dynr_fun(g, spec)(lam);
        auto rep = hecke_check(g, R, qh_q, pick_tol(qh_tol, "DYNR_TOL_HECKE", 1e-9));
        RunManifest man = make_manifest("quantum hecke " + qh_file, 0);
        man.input_hashes[qh_file] = hash_hex(raw);
        man.verdicts["hecke"] = rep.ok ? "pass" : "fail";
        Json j = hecke_to_json(rep);
        j["manifest"] = manifest_to_json(man);
        emit(j, qh_out);
        rc = rep.ok ? 0 : 1;
    });

    auto* qs = quantum->add_subcommand("slope", "semiclassical residual decay of a field");
    std::string qs_file, qs_out;
    int qs_samples = 3;
    std::uint64_t qs_seed = 5;
    qs->add_option("file", qs_file, "field JSON")->required();
    qs->add_option("--samples", qs_samples, "lambda points per step");
    qs->add_option("--seed", qs_seed, "sampling seed");
    qs->add_option("--out", qs_out, "report file (default stdout)");
    qs->callback([&]() {
        std::string raw;
        auto [g, r] = rfield_from_json(parse_file(qs_file, &raw));
        auto rep = semiclassical_slope(g, r, qs_samples, qs_seed);
        bool ok = rep.inconclusive ||
                  (rep.normalized_slope >= 1.9 && rep.normalized_slope <= 2.1);
        RunManifest man = make_manifest("quantum slope " + qs_file, qs_seed);
        man.input_hashes[qs_file] = hash_hex(raw);
        man.verdicts["slope"] = ok ? "pass" : "fail";
        Json j = slope_to_json(rep);
        j["manifest"] = manifest_to_json(man);
        emit(j, qs_out);
        rc = ok ? 0 : 1;
    });

    // ---- hopfoid ----
    auto* hop = app.add_subcommand("hopfoid", "difference-operator representation checks");
    hop->require_subcommand(1);

    auto* hr = hop->add_subcommand("rll", "exchange-relation residual for the L-operator");
    std::string hr_file, hr_out;
    int hr_samples = 3;
    std::uint64_t hr_seed = 1;
    double hr_tol = -1.0;
    hr->add_option("file", hr_file, "R-matrix JSON")->required();
    hr->add_option("--samples", hr_samples, "sample points");
    hr->add_option("--seed", hr_seed, "sampling seed");
    hr->add_option("--tol", hr_tol, "tolerance");
    hr->add_option("--out", hr_out, "report file (default stdout)");
    hr->callback([&]() {
        std::string raw;
        DynRSpec spec = dynr_from_json(parse_file(hr_file, &raw));
        Superalgebra g = build_algebra(spec.family == "gl" ? AlgKind::gl : AlgKind::sl,
                                       spec.m, spec.n);
        Calibration cal = calibrate_convention();
        double tol = pick_tol(hr_tol, "DYNR_TOL_RLL", 1e-12);
        double res = rll_residual(g, dynr_fun(g, spec), cal.idxmode, cal.shiftmode,
                                  SignRule::Koszul, hr_samples, hr_seed);
        RunManifest man = make_manifest("hopfoid rll " + hr_file, hr_seed);
        man.input_hashes[hr_file] = hash_hex(raw);
        man.tolerances["rll"] = tol;
        man.verdicts["rll"] = (res <= tol) ? "pass" : "fail";
        Json j;
        j["check"] = "rll";
        j["max_residual"] = res;
        j["tolerance"] = tol;
        j["pass"] = res <= tol;
        j["convention"] = std::string(1, cal.idxmode) + "," + std::string(1, cal.shiftmode);
        j["manifest"] = manifest_to_json(man);
        emit(j, hr_out);
        rc = (res <= tol) ? 0 : 1;
    });

    auto* hc = hop->add_subcommand("calibrate", "select the L-operator convention");
    std::string hc_file, hc_out;
    hc->add_option("file", hc_file, "R-matrix JSON")->required();
    hc->add_option("--out", hc_out, "report file (default stdout)");
    hc->callback([&]() {
        std::string raw;
        DynRSpec spec = dynr_from_json(parse_file(hc_file, &raw));
        Superalgebra g = build_algebra(spec.family == "gl" ? AlgKind::gl : AlgKind::sl,
                                       spec.m, spec.n);
        Calibration cal = calibrate_convention();
        double res = rll_residual(g, dynr_fun(g, spec), cal.idxmode, cal.shiftmode);
        Json j;
        j["idxmode"] = std::string(1, cal.idxmode);
        j["shiftmode"] = std::string(1, cal.shiftmode);
        j["log"] = cal.log;
        j["input_rll_residual"] = res;
        RunManifest man = make_manifest("hopfoid calibrate " + hc_file, 0);
        man.input_hashes[hc_file] = hash_hex(raw);
        man.verdicts["calibrate"] =
            std::string(1, cal.idxmode) + "," + std::string(1, cal.shiftmode);
        j["manifest"] = manifest_to_json(man);
        emit(j, hc_out);
        rc = 0;
    });

    // ---- corpus ----
    auto* corpus = app.add_subcommand("corpus", "regression corpus");
    corpus->require_subcommand(1);
    auto* crun = corpus->add_subcommand("run", "run all constructor cells");
    std::string c_algs = "sl(2),sl(2,1),gl(2,1),sl(3,1)", c_out;
    std::uint64_t c_seed = 1;
    crun->add_option("--algebras", c_algs, "comma-separated descriptors");
    crun->add_option("--seed", c_seed, "master seed");
    crun->add_option("--out", c_out, "summary JSON file (default stdout)");
    crun->callback([&]() {
        CorpusConfig cfg;
        cfg.algebras = split_csv(c_algs);
        cfg.master_seed = c_seed;
        Json summary = corpus_run(cfg);
        std::cout << corpus_summary_text(summary);
        emit(summary, c_out);
        bool allok = true;
        for (const auto& row : summary.at("cells")) {
            std::string st = row.at("status").get<std::string>();
            if (st != "pass" && st.rfind("skipped", 0) != 0) allok = false;
        }
        rc = allok ? 0 : 1;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const SchemaError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return rc;
}

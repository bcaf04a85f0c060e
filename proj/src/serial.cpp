#include "dynr/serial.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>

#include "dynr/errors.hpp"

namespace dynr {

std::string rat_str(const Rat& x) { return x.str(); }

Rat rat_from_string(const std::string& s, const std::string& path) {
    bool ok = !s.empty();
    std::size_t i = (s[0] == '-') ? 1 : 0;
    bool digits = false, slash = false, denom = false;
    for (; ok && i < s.size(); ++i) {
        char c = s[i];
        if (std::isdigit((unsigned char)c)) {
            (slash ? denom : digits) = true;
        } else if (c == '/' && !slash && digits) {
            slash = true;
        } else {
            ok = false;
        }
    }
    ok = ok && digits && (!slash || denom);
    if (!ok) throw SchemaError(path + ": malformed rational '" + s + "'");
    Rat r(s);
    return r;
}

Json expr_to_json(const Expr& e) {
    using T = LambdaNode::Tag;
    Json j;
    switch (e->tag) {
        case T::Const:
            j["t"] = "const";
            j["c"] = rat_str(e->c);
            return j;
        case T::Lin: {
            j["t"] = "lin";
            Json w = Json::array();
            for (const auto& x : e->w) w.push_back(rat_str(x));
            j["w"] = w;
            j["b"] = rat_str(e->b);
            return j;
        }
        case T::Add:
            j["t"] = "add";
            j["a"] = expr_to_json(e->a);
            j["b"] = expr_to_json(e->d);
            return j;
        case T::Mul:
            j["t"] = "mul";
            j["a"] = expr_to_json(e->a);
            j["b"] = expr_to_json(e->d);
            return j;
        case T::Scale:
            j["t"] = "scale";
            j["c"] = rat_str(e->c);
            j["a"] = expr_to_json(e->a);
            return j;
        case T::Recip:
            j["t"] = "recip";
            j["a"] = expr_to_json(e->a);
            return j;
        case T::Coth:
            j["t"] = "coth";
            j["a"] = expr_to_json(e->a);
            return j;
        case T::Exp:
            j["t"] = "exp";
            j["a"] = expr_to_json(e->a);
            return j;
    }
    throw SchemaError("unknown expression node");  // unreachable
}

namespace {

const Json& need(const Json& j, const char* key, const std::string& path) {
    if (!j.is_object()) throw SchemaError(path + ": expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw SchemaError(path + "/" + key + ": missing");
    return *it;
}

int need_int(const Json& j, const char* key, const std::string& path) {
    const Json& v = need(j, key, path);
    if (!v.is_number_integer())
        throw SchemaError(path + "/" + key + ": expected an integer");
    return v.get<int>();
}

std::string need_str(const Json& j, const char* key, const std::string& path) {
    const Json& v = need(j, key, path);
    if (!v.is_string()) throw SchemaError(path + "/" + key + ": expected a string");
    return v.get<std::string>();
}

const Json& need_arr(const Json& j, const char* key, const std::string& path) {
    const Json& v = need(j, key, path);
    if (!v.is_array()) throw SchemaError(path + "/" + key + ": expected an array");
    return v;
}

// Every linear node must carry exactly dim weights, or evaluation would
// index out of the sampled coordinate vector.
void check_expr_dim(const Expr& e, int dim, const std::string& path) {
    using T = LambdaNode::Tag;
    switch (e->tag) {
        case T::Const:
            return;
        case T::Lin:
            if ((int)e->w.size() != dim)
                throw SchemaError(path + ": linear form has " +
                                  std::to_string(e->w.size()) + " weights, expected " +
                                  std::to_string(dim));
            return;
        case T::Add:
        case T::Mul:
            check_expr_dim(e->a, dim, path + "/a");
            check_expr_dim(e->d, dim, path + "/b");
            return;
        default:
            check_expr_dim(e->a, dim, path + "/a");
            return;
    }
}

} // namespace

Expr expr_from_json(const Json& j, const std::string& path) {
    std::string t = need_str(j, "t", path);
    if (t == "const") return cst(rat_from_string(need_str(j, "c", path), path + "/c"));
    if (t == "lin") {
        const Json& wj = need_arr(j, "w", path);
        RatVec w;
        for (std::size_t i = 0; i < wj.size(); ++i) {
            if (!wj[i].is_string())
                throw SchemaError(path + "/w/" + std::to_string(i) + ": expected a string");
            w.push_back(rat_from_string(wj[i].get<std::string>(),
                                        path + "/w/" + std::to_string(i)));
        }
        return lin(w, rat_from_string(need_str(j, "b", path), path + "/b"));
    }
    if (t == "add")
        return add(expr_from_json(need(j, "a", path), path + "/a"),
                   expr_from_json(need(j, "b", path), path + "/b"));
    if (t == "mul")
        return mul(expr_from_json(need(j, "a", path), path + "/a"),
                   expr_from_json(need(j, "b", path), path + "/b"));
    if (t == "scale")
        return scale(rat_from_string(need_str(j, "c", path), path + "/c"),
                     expr_from_json(need(j, "a", path), path + "/a"));
    if (t == "recip") return recip_of(expr_from_json(need(j, "a", path), path + "/a"));
    if (t == "coth") return coth_of(expr_from_json(need(j, "a", path), path + "/a"));
    if (t == "exp") return exp_of(expr_from_json(need(j, "a", path), path + "/a"));
    throw SchemaError(path + "/t: unknown node kind '" + t + "'");
}

Superalgebra algebra_from_descriptor(const std::string& desc) {
    std::string s = desc;
    s.erase(std::remove_if(s.begin(), s.end(),
                           [](unsigned char c) { return std::isspace(c); }),
            s.end());
    AlgKind kind;
    if (s.rfind("gl(", 0) == 0)
        kind = AlgKind::gl;
    else if (s.rfind("sl(", 0) == 0)
        kind = AlgKind::sl;
    else
        throw SchemaError("algebra descriptor must look like gl(m,n) or sl(m,n): '" +
                          desc + "'");
    if (s.back() != ')')
        throw SchemaError("algebra descriptor missing ')': '" + desc + "'");
    std::string body = s.substr(3, s.size() - 4);
    int m = 0, n = 0;
    std::size_t comma = body.find(',');
    try {
        if (comma == std::string::npos) {
            m = std::stoi(body);
            n = 0;
        } else {
            m = std::stoi(body.substr(0, comma));
            n = std::stoi(body.substr(comma + 1));
        }
    } catch (const std::exception&) {
        throw SchemaError("algebra descriptor has malformed sizes: '" + desc + "'");
    }
    if (m < 1 || n < 0 || m + n < 2)
        throw SchemaError("algebra sizes out of range: '" + desc + "'");
    return build_algebra(kind, m, n);
}

std::string descriptor_of(const Superalgebra& g) { return alg_name(g); }

Json algebra_to_json(const Superalgebra& g) {
    Json j;
    j["descriptor"] = alg_name(g);
    j["family"] = (g.kind == AlgKind::gl) ? "gl" : "sl";
    j["m"] = g.m;
    j["n"] = g.n;
    j["dim"] = g.dim;
    j["cartan_dim"] = g.H;
    j["degenerate_form"] = g.degenerate;
    j["basis_labels"] = g.names;
    j["parity"] = g.parity;
    j["vparity"] = g.vparity;
    j["cartan_idx"] = g.cartan_idx;
    auto mat_json = [](const RatMat& M) {
        Json rows = Json::array();
        for (const auto& row : M) {
            Json r = Json::array();
            for (const auto& x : row) r.push_back(rat_str(x));
            rows.push_back(r);
        }
        return rows;
    };
    j["gram"] = mat_json(g.gram);
    j["gram_cartan"] = mat_json(g.gram_h);
    Json sc = Json::array();
    for (int a = 0; a < g.dim; ++a)
        for (int b = 0; b < g.dim; ++b) {
            const SparseVec& br = g.bracket(a, b);
            if (br.empty()) continue;
            Json row;
            row["i"] = a;
            row["j"] = b;
            Json terms = Json::array();
            for (const auto& [k, c] : br) {
                Json t;
                t["k"] = k;
                t["c"] = rat_str(c);
                terms.push_back(t);
            }
            row["terms"] = terms;
            sc.push_back(row);
        }
    j["structure_constants"] = sc;
    Json roots = Json::array();
    for (const auto& rt : g.roots) {
        Json r;
        r["label"] = Json::array({rt.label.first, rt.label.second});
        r["parity"] = rt.parity;
        r["positive"] = rt.positive;
        r["evec"] = rt.evec;
        Json vec = Json::array();
        for (const auto& x : rt.vec) vec.push_back(rat_str(x));
        r["vec"] = vec;
        r["coef"] = rat_str(g.root_coef.at(rt.label));
        roots.push_back(r);
    }
    j["roots"] = roots;
    return j;
}

Json rfield_to_json(const Superalgebra& g, const RField& r) {
    Json j;
    Json alg;
    alg["family"] = (g.kind == AlgKind::gl) ? "gl" : "sl";
    alg["m"] = g.m;
    alg["n"] = g.n;
    alg["vparity"] = g.vparity;
    j["algebra"] = alg;
    j["l"] = r.l_idx;
    Json terms = Json::array();
    for (const auto& [key, v] : r.terms) {
        Json t;
        t["i"] = key.first;
        t["j"] = key.second;
        t["coeff"] = expr_to_json(v);
        terms.push_back(t);
    }
    j["terms"] = terms;
    Json meta;
    meta["constructor"] = r.constructor;
    meta["eps"] = rat_str(r.eps);
    meta["version"] = kVersion;
    j["metadata"] = meta;
    return j;
}

std::pair<Superalgebra, RField> rfield_from_json(const Json& j) {
    const Json& aj = need(j, "algebra", "");
    std::string family = need_str(aj, "family", "/algebra");
    if (family != "gl" && family != "sl")
        throw SchemaError("/algebra/family: must be 'gl' or 'sl'");
    int m = need_int(aj, "m", "/algebra");
    int n = need_int(aj, "n", "/algebra");
    if (m < 1 || n < 0 || m + n < 2)
        throw SchemaError("/algebra: sizes out of range");
    Superalgebra g = build_algebra(family == "gl" ? AlgKind::gl : AlgKind::sl, m, n);
    const Json& vp = need_arr(aj, "vparity", "/algebra");
    if ((int)vp.size() != g.N)
        throw SchemaError("/algebra/vparity: expected " + std::to_string(g.N) +
                          " entries");
    for (int k = 0; k < g.N; ++k) {
        if (!vp[k].is_number_integer() || vp[k].get<int>() != g.vparity[k])
            throw SchemaError("/algebra/vparity/" + std::to_string(k) +
                              ": inconsistent with the declared sizes");
    }
    RField r;
    r.algebra = alg_name(g);
    const Json& lj = need_arr(j, "l", "");
    int prev = -1;
    for (std::size_t i = 0; i < lj.size(); ++i) {
        std::string p = "/l/" + std::to_string(i);
        if (!lj[i].is_number_integer()) throw SchemaError(p + ": expected an integer");
        int v = lj[i].get<int>();
        if (v < 0 || v >= g.H) throw SchemaError(p + ": coordinate out of range");
        if (v <= prev) throw SchemaError(p + ": coordinates must be strictly increasing");
        prev = v;
        r.l_idx.push_back(v);
    }
    const Json& tj = need_arr(j, "terms", "");
    for (std::size_t t = 0; t < tj.size(); ++t) {
        std::string p = "/terms/" + std::to_string(t);
        int i = need_int(tj[t], "i", p);
        int jj = need_int(tj[t], "j", p);
        if (i < 0 || i >= g.dim) throw SchemaError(p + "/i: basis index out of range");
        if (jj < 0 || jj >= g.dim) throw SchemaError(p + "/j: basis index out of range");
        Expr e = expr_from_json(need(tj[t], "coeff", p), p + "/coeff");
        check_expr_dim(e, g.H, p + "/coeff");
        if (r.terms.count({i, jj}))
            throw SchemaError(p + ": duplicate term key (" + std::to_string(i) + "," +
                              std::to_string(jj) + ")");
        r.terms[{i, jj}] = e;
    }
    if (j.contains("metadata")) {
        const Json& mj = j.at("metadata");
        if (mj.contains("constructor") && mj.at("constructor").is_string())
            r.constructor = mj.at("constructor").get<std::string>();
        if (mj.contains("eps") && mj.at("eps").is_string())
            r.eps = rat_from_string(mj.at("eps").get<std::string>(), "/metadata/eps");
    }
    return {std::move(g), std::move(r)};
}

Json dynr_to_json(const DynRSpec& R) {
    Json j;
    j["family"] = R.family;
    j["m"] = R.m;
    j["n"] = R.n;
    j["kind"] = R.kind;
    auto grid_json = [](const std::vector<std::vector<Expr>>& G) {
        Json rows = Json::array();
        for (const auto& row : G) {
            Json r = Json::array();
            for (const auto& e : row) r.push_back(expr_to_json(e));
            rows.push_back(r);
        }
        return rows;
    };
    if (R.kind == "template") {
        j["alpha"] = grid_json(R.alpha);
        j["beta"] = grid_json(R.beta);
    } else {
        j["entries"] = grid_json(R.dense);
    }
    return j;
}

namespace {

std::vector<std::vector<Expr>> grid_from_json(const Json& j, const char* key,
                                              int rows, int cols, int dim) {
    const Json& gj = need_arr(j, key, "");
    std::string base = std::string("/") + key;
    if ((int)gj.size() != rows)
        throw SchemaError(base + ": expected " + std::to_string(rows) + " rows");
    std::vector<std::vector<Expr>> out(rows);
    for (int r = 0; r < rows; ++r) {
        if (!gj[r].is_array() || (int)gj[r].size() != cols)
            throw SchemaError(base + "/" + std::to_string(r) + ": expected " +
                              std::to_string(cols) + " entries");
        for (int c = 0; c < cols; ++c) {
            std::string p = base + "/" + std::to_string(r) + "/" + std::to_string(c);
            Expr e = expr_from_json(gj[r][c], p);
            check_expr_dim(e, dim, p);
            out[r].push_back(std::move(e));
        }
    }
    return out;
}

} // namespace

DynRSpec dynr_from_json(const Json& j) {
    DynRSpec R;
    if (j.contains("family")) R.family = need_str(j, "family", "");
    if (R.family != "gl" && R.family != "sl")
        throw SchemaError("/family: must be 'gl' or 'sl'");
    R.m = need_int(j, "m", "");
    R.n = need_int(j, "n", "");
    if (R.m < 1 || R.n < 0 || R.m + R.n < 2)
        throw SchemaError("/m: sizes out of range");
    int N = R.m + R.n;
    int H = (R.family == "gl") ? N : N - 1;
    R.kind = need_str(j, "kind", "");
    if (R.kind == "template") {
        R.alpha = grid_from_json(j, "alpha", N, N, H);
        R.beta = grid_from_json(j, "beta", N, N, H);
    } else if (R.kind == "dense") {
        R.dense = grid_from_json(j, "entries", N * N, N * N, H);
    } else {
        throw SchemaError("/kind: must be 'template' or 'dense'");
    }
    return R;
}

RFun dynr_fun(const Superalgebra& g, const DynRSpec& R) {
    int N = g.N;
    if (N != R.m + R.n) throw DomainError("R-matrix size does not match the algebra");
    const Superalgebra* gp = &g;
    if (R.kind == "template") {
        auto alpha = R.alpha;
        auto beta = R.beta;
        return [gp, alpha, beta, N](const std::vector<double>& lam) {
            Mat A(N, N), B(N, N);
            for (int a = 0; a < N; ++a)
                for (int b = 0; b < N; ++b) {
                    A(a, b) = evaluate(alpha[a][b], lam);
                    B(a, b) = evaluate(beta[a][b], lam);
                }
            return template_R(*gp, A, B);
        };
    }
    auto dense = R.dense;
    return [dense, N](const std::vector<double>& lam) {
        Mat M(N * N, N * N);
        for (int a = 0; a < N * N; ++a)
            for (int b = 0; b < N * N; ++b) M(a, b) = evaluate(dense[a][b], lam);
        return M;
    };
}

Json report_to_json(const ResidualReport& rep) {
    Json j;
    j["check"] = rep.check;
    j["max_residual"] = rep.max_residual;
    j["n_requested"] = rep.n_requested;
    j["n_evaluated"] = rep.n_evaluated;
    j["tolerance"] = rep.tolerance;
    j["pass"] = rep.pass;
    j["per_sample"] = rep.per_sample;
    return j;
}

Json hecke_to_json(const HeckeReport& rep) {
    Json j;
    j["ok"] = rep.ok;
    Json blocks = Json::array();
    for (const auto& b : rep.blocks) {
        Json bj;
        bj["kind"] = b.kind;
        bj["a"] = b.a;
        bj["b"] = b.b;
        Json evs = Json::array();
        for (const auto& e : b.eigenvalues)
            evs.push_back(Json::array({e.real(), e.imag()}));
        bj["eigenvalues"] = evs;
        bj["expected"] = b.expected;
        bj["ok"] = b.ok;
        blocks.push_back(bj);
    }
    j["blocks"] = blocks;
    return j;
}

Json slope_to_json(const SlopeReport& rep) {
    Json j;
    j["gammas"] = rep.gammas;
    j["residuals"] = rep.residuals;
    j["raw_slope"] = rep.raw_slope;
    j["normalized_slope"] = rep.normalized_slope;
    j["intercept"] = rep.intercept;
    j["inconclusive"] = rep.inconclusive;
    return j;
}

Json manifest_to_json(const RunManifest& m) {
    Json j;
    j["command"] = m.command;
    j["seed"] = m.seed;
    j["tolerances"] = m.tolerances;
    j["input_hashes"] = m.input_hashes;
    j["version"] = m.version;
    j["verdicts"] = m.verdicts;
    return j;
}

namespace {

std::uint64_t fnv1a(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace

std::string hash_hex(const std::string& data) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", (unsigned long long)fnv1a(data));
    return buf;
}

std::uint64_t derive_seed(std::uint64_t master, const std::string& tag) {
    return fnv1a(tag + "#" + std::to_string(master));
}

namespace {

Json quantiles(const ResidualReport& rep) {
    Json j;
    std::vector<double> s = rep.per_sample;
    std::sort(s.begin(), s.end());
    j["min"] = s.empty() ? 0.0 : s.front();
    j["median"] = s.empty() ? 0.0 : s[s.size() / 2];
    j["max"] = rep.max_residual;
    j["samples"] = rep.n_evaluated;
    j["pass"] = rep.pass;
    return j;
}

} // namespace

Json corpus_run(const CorpusConfig& cfg) {
    Json out;
    out["master_seed"] = cfg.master_seed;
    out["version"] = kVersion;
    Json cells = Json::array();
    const char* cell_names[] = {"zero_coupling", "nonzero_coupling", "triple"};
    for (const auto& desc : cfg.algebras) {
        Superalgebra g(AlgKind::gl, 1, 1);
        bool built = false;
        std::string build_err;
        try {
            g = algebra_from_descriptor(desc);
            built = true;
        } catch (const std::exception& e) {
            build_err = e.what();
        }
        for (const char* cell : cell_names) {
            Json row;
            row["algebra"] = desc;
            row["cell"] = cell;
            if (!built) {
                row["status"] = "error: " + build_err;
                cells.push_back(row);
                continue;
            }
            if (g.degenerate) {
                row["status"] = "skipped: degenerate form";
                cells.push_back(row);
                continue;
            }
            std::uint64_t seed = derive_seed(cfg.master_seed, desc + "|" + cell);
            try {
                RField r;
                Rat eps(0);
                std::string c(cell);
                if (c == "zero_coupling") {
                    r = zero_coupling_r(g, full_root_set(g), zero_two_form(g.H));
                } else if (c == "nonzero_coupling") {
                    eps = 1;
                    r = nonzero_coupling_r(g, full_root_set(g), zero_two_form(g.H),
                                           nullptr, eps, minus_branch(g));
                } else {
                    Triple t;
                    for (int i = 0; i < g.N - 1; ++i) {
                        t.g1.push_back(i);
                        t.g2.push_back(i);
                        t.tau[i] = i;
                    }
                    std::vector<int> l(g.H);
                    for (int i = 0; i < g.H; ++i) l[i] = i;
                    auto sol = admissible_r00(g, l, t);
                    r = triple_r(g, l, t, sol.particular);
                }
                auto cd = cdybe_residual(g, r, 20, seed);
                row["cdybe"] = quantiles(cd);
                bool ok = cd.pass;
                if (c == "triple") {
                    auto ls = l_skew_residual(g, r, 10, seed + 1);
                    row["l_skew"] = quantiles(ls);
                    ok = ok && ls.pass;
                } else {
                    auto un = unitarity_residual(g, r, eps, 10, seed + 1);
                    row["unitarity"] = quantiles(un);
                    ok = ok && un.pass;
                }
                row["status"] = ok ? "pass" : "fail";
            } catch (const std::exception& e) {
                row["status"] = std::string("error: ") + e.what();
            }
            cells.push_back(row);
        }
    }
    out["cells"] = cells;
    return out;
}

std::string corpus_summary_text(const Json& summary) {
    std::string out;
    char buf[256];
    std::snprintf(buf, sizeof(buf), "corpus summary (seed %llu, version %s)\n",
                  (unsigned long long)summary.at("master_seed").get<std::uint64_t>(),
                  summary.at("version").get<std::string>().c_str());
    out += buf;
    std::snprintf(buf, sizeof(buf), "%-10s %-18s %-12s %-12s %s\n", "algebra", "cell",
                  "cdybe_max", "extra_max", "status");
    out += buf;
    for (const auto& row : summary.at("cells")) {
        std::string cdybe = "-", extra = "-";
        if (row.contains("cdybe")) {
            std::snprintf(buf, sizeof(buf), "%.3e", row.at("cdybe").at("max").get<double>());
            cdybe = buf;
        }
        for (const char* k : {"unitarity", "l_skew"}) {
            if (row.contains(k)) {
                std::snprintf(buf, sizeof(buf), "%.3e", row.at(k).at("max").get<double>());
                extra = buf;
            }
        }
        std::snprintf(buf, sizeof(buf), "%-10s %-18s %-12s %-12s %s\n",
                      row.at("algebra").get<std::string>().c_str(),
                      row.at("cell").get<std::string>().c_str(), cdybe.c_str(),
                      extra.c_str(), row.at("status").get<std::string>().c_str());
        out += buf;
    }
    return out;
}

} // namespace dynr

#include "dynr/lambdafn.hpp"

#include <cstdlib>

namespace dynr {

double evaluate(const Expr& e, const std::vector<double>& lam) {
    using T = LambdaNode::Tag;
    switch (e->tag) {
        case T::Const:
            return to_double(e->c);
        case T::Lin: {
            double s = to_double(e->b);
            for (size_t i = 0; i < e->w.size() && i < lam.size(); ++i)
                if (e->w[i] != 0) s += to_double(e->w[i]) * lam[i];
            return s;
        }
        case T::Add:
            return evaluate(e->a, lam) + evaluate(e->d, lam);
        case T::Mul:
            return evaluate(e->a, lam) * evaluate(e->d, lam);
        case T::Scale:
            return to_double(e->c) * evaluate(e->a, lam);
        case T::Recip: {
            double v = evaluate(e->a, lam);
            if (std::abs(v) < kPoleGuard) throw PoleProximity("reciprocal argument near zero");
            return 1.0 / v;
        }
        case T::Coth: {
            double v = evaluate(e->a, lam);
            if (std::abs(v) < kPoleGuard) throw PoleProximity("coth argument near zero");
            return 1.0 / std::tanh(v);
        }
        case T::Exp:
            return std::exp(evaluate(e->a, lam));
    }
    return 0.0;  // unreachable
}

Expr differentiate(const Expr& e, int i) {
    using T = LambdaNode::Tag;
    switch (e->tag) {
        case T::Const:
            return cst(Rat(0));
        case T::Lin:
            return cst(i < (int)e->w.size() ? e->w[i] : Rat(0));
        case T::Add:
            return add(differentiate(e->a, i), differentiate(e->d, i));
        case T::Mul:
            return add(mul(differentiate(e->a, i), e->d), mul(e->a, differentiate(e->d, i)));
        case T::Scale:
            return scale(e->c, differentiate(e->a, i));
        case T::Recip: {
            Expr d = differentiate(e->a, i);
            return neg(mul(d, mul(recip_of(e->a), recip_of(e->a))));
        }
        case T::Coth: {
            Expr d = differentiate(e->a, i);
            Expr cc = coth_of(e->a);
            return mul(d, add(cst(Rat(1)), neg(mul(cc, cc))));
        }
        case T::Exp:
            return mul(differentiate(e->a, i), e);
    }
    return cst(Rat(0));  // unreachable
}

Expr shift_arg(const Expr& e, const RatVec& nu) {
    using T = LambdaNode::Tag;
    switch (e->tag) {
        case T::Const:
            return e;
        case T::Lin: {
            Rat b = e->b;
            for (size_t i = 0; i < e->w.size() && i < nu.size(); ++i) b -= e->w[i] * nu[i];
            return lin(e->w, b);
        }
        case T::Add:
            return add(shift_arg(e->a, nu), shift_arg(e->d, nu));
        case T::Mul:
            return mul(shift_arg(e->a, nu), shift_arg(e->d, nu));
        case T::Scale:
            return scale(e->c, shift_arg(e->a, nu));
        case T::Recip:
            return recip_of(shift_arg(e->a, nu));
        case T::Coth:
            return coth_of(shift_arg(e->a, nu));
        case T::Exp:
            return exp_of(shift_arg(e->a, nu));
    }
    return e;  // unreachable
}

Expr linmap_arg(const Expr& e, const RatMat& M) {
    using T = LambdaNode::Tag;
    switch (e->tag) {
        case T::Const:
            return e;
        case T::Lin: {
            size_t H = M.empty() ? e->w.size() : M[0].size();
            RatVec w(H, Rat(0));
            for (size_t j = 0; j < e->w.size() && j < M.size(); ++j)
                for (size_t t = 0; t < H; ++t) w[t] += e->w[j] * M[j][t];
            return lin(w, e->b);
        }
        case T::Add:
            return add(linmap_arg(e->a, M), linmap_arg(e->d, M));
        case T::Mul:
            return mul(linmap_arg(e->a, M), linmap_arg(e->d, M));
        case T::Scale:
            return scale(e->c, linmap_arg(e->a, M));
        case T::Recip:
            return recip_of(linmap_arg(e->a, M));
        case T::Coth:
            return coth_of(linmap_arg(e->a, M));
        case T::Exp:
            return exp_of(linmap_arg(e->a, M));
    }
    return e;  // unreachable
}

std::vector<double> sample_lambda(std::mt19937_64& rng, int dim,
                                  const std::vector<Expr>& guards, double guard_tol) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
        std::vector<double> lam(dim);
        for (int i = 0; i < dim; ++i) lam[i] = uniform_sample(rng);
        bool ok = true;
        for (const auto& g : guards) {
            double v;
            try {
                v = evaluate(g, lam);
            } catch (const PoleProximity&) {
                ok = false;
                break;
            }
            if (std::abs(v) < guard_tol) {
                ok = false;
                break;
            }
        }
        if (ok) return lam;
    }
    throw PoleProximity("could not sample away from the guarded poles");
}

void collect_pole_args(const Expr& e, std::vector<Expr>& out) {
    using T = LambdaNode::Tag;
    switch (e->tag) {
        case T::Const:
        case T::Lin:
            return;
        case T::Add:
        case T::Mul:
            collect_pole_args(e->a, out);
            collect_pole_args(e->d, out);
            return;
        case T::Scale:
        case T::Exp:
            collect_pole_args(e->a, out);
            return;
        case T::Recip:
        case T::Coth:
            out.push_back(e->a);
            collect_pole_args(e->a, out);
            return;
    }
}

} // namespace dynr

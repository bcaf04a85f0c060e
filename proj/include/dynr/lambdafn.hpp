#pragma once
#include <cmath>
#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "dynr/rational.hpp"

namespace dynr {

// Coefficient functions of the dynamical parameter: a small expression tree
// over exact rational scalars. Linear forms carry a full-length weight vector
// over the Cartan coordinates plus an offset: value = sum w_i lambda_i + b.
struct LambdaNode;
using Expr = std::shared_ptr<const LambdaNode>;

struct LambdaNode {
    enum class Tag { Const, Lin, Add, Mul, Scale, Recip, Coth, Exp };
    Tag tag;
    Rat c;        // Const value, or Scale factor
    RatVec w;     // Lin weights
    Rat b;        // Lin offset
    Expr a, d;    // children (a only for unary)
};

inline Expr cst(const Rat& x) {
    auto n = std::make_shared<LambdaNode>();
    n->tag = LambdaNode::Tag::Const;
    n->c = x;
    return n;
}

inline bool is_const(const Expr& e) { return e->tag == LambdaNode::Tag::Const; }
inline bool is_zero(const Expr& e) { return is_const(e) && e->c == 0; }

inline Expr lin(const RatVec& w, const Rat& b = Rat(0)) {
    bool allz = true;
    for (const auto& x : w)
        if (x != 0) { allz = false; break; }
    if (allz) return cst(b);
    auto n = std::make_shared<LambdaNode>();
    n->tag = LambdaNode::Tag::Lin;
    n->w = w;
    n->b = b;
    return n;
}

inline Expr add(const Expr& a, const Expr& b) {
    if (is_zero(a)) return b;
    if (is_zero(b)) return a;
    if (is_const(a) && is_const(b)) return cst(a->c + b->c);
    auto ta = a->tag, tb = b->tag;
    using T = LambdaNode::Tag;
    if (ta == T::Lin && tb == T::Lin && a->w.size() == b->w.size()) {
        RatVec w(a->w.size());
        for (size_t i = 0; i < w.size(); ++i) w[i] = a->w[i] + b->w[i];
        return lin(w, a->b + b->b);
    }
    if (ta == T::Lin && tb == T::Const) return lin(a->w, a->b + b->c);
    if (ta == T::Const && tb == T::Lin) return lin(b->w, b->b + a->c);
    auto n = std::make_shared<LambdaNode>();
    n->tag = T::Add;
    n->a = a;
    n->d = b;
    return n;
}

inline Expr scale(const Rat& c, const Expr& a) {
    using T = LambdaNode::Tag;
    if (c == 0 || is_zero(a)) return cst(Rat(0));
    if (is_const(a)) return cst(c * a->c);
    if (a->tag == T::Lin) {
        RatVec w(a->w.size());
        for (size_t i = 0; i < w.size(); ++i) w[i] = c * a->w[i];
        return lin(w, c * a->b);
    }
    if (a->tag == T::Scale) return scale(c * a->c, a->a);
    if (c == 1) return a;
    auto n = std::make_shared<LambdaNode>();
    n->tag = T::Scale;
    n->c = c;
    n->a = a;
    return n;
}

inline Expr neg(const Expr& a) { return scale(Rat(-1), a); }

inline Expr mul(const Expr& a, const Expr& b) {
    if (is_zero(a) || is_zero(b)) return cst(Rat(0));
    if (is_const(a)) return scale(a->c, b);
    if (is_const(b)) return scale(b->c, a);
    auto n = std::make_shared<LambdaNode>();
    n->tag = LambdaNode::Tag::Mul;
    n->a = a;
    n->d = b;
    return n;
}

inline Expr recip_of(const Expr& a) {
    auto n = std::make_shared<LambdaNode>();
    n->tag = LambdaNode::Tag::Recip;
    n->a = a;
    return n;
}

inline Expr coth_of(const Expr& a) {
    auto n = std::make_shared<LambdaNode>();
    n->tag = LambdaNode::Tag::Coth;
    n->a = a;
    return n;
}

inline Expr exp_of(const Expr& a) {
    auto n = std::make_shared<LambdaNode>();
    n->tag = LambdaNode::Tag::Exp;
    n->a = a;
    return n;
}

// Distance below which a reciprocal / coth argument counts as sitting on a pole.
inline constexpr double kPoleGuard = 1e-9;

double evaluate(const Expr& e, const std::vector<double>& lam);

// Exact partial derivative with respect to lambda_i.
Expr differentiate(const Expr& e, int i);

// f(lambda) -> f(lambda - nu).
Expr shift_arg(const Expr& e, const RatVec& nu);

// f(lambda) -> f(M lambda) for the coordinate change (M lambda)_j = sum_t M_jt lambda_t.
Expr linmap_arg(const Expr& e, const RatMat& M);

// Portable uniform double in [-2, 2] from a mt19937_64 draw.
inline double uniform_sample(std::mt19937_64& rng) {
    return (double)(rng() >> 11) * (4.0 / 9007199254740992.0) - 2.0;
}

// Draw lambda uniformly from [-2,2]^dim, resampling (bounded) until every
// guard expression evaluates at distance > guard_tol from zero.
std::vector<double> sample_lambda(std::mt19937_64& rng, int dim,
                                  const std::vector<Expr>& guards,
                                  double guard_tol = 1e-3);

// Collect the arguments of every Recip/Coth subexpression: the loci where the
// function has poles. Used to steer sampling away from singular hyperplanes.
void collect_pole_args(const Expr& e, std::vector<Expr>& out);

} // namespace dynr

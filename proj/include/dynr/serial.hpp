#pragma once
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dynr/dynrep.hpp"
#include "dynr/quantum.hpp"
#include "dynr/rfield.hpp"
#include "dynr/verify.hpp"

namespace dynr {

inline constexpr const char* kVersion = "0.1.0";

// Insertion-ordered JSON keeps artifact bytes stable across runs.
using Json = nlohmann::ordered_json;

std::string rat_str(const Rat& x);
Rat rat_from_string(const std::string& s, const std::string& path);

Json expr_to_json(const Expr& e);
Expr expr_from_json(const Json& j, const std::string& path);

// "gl(2,1)", "sl(3)", "sl(3,1)" ...
Superalgebra algebra_from_descriptor(const std::string& desc);
std::string descriptor_of(const Superalgebra& g);

// Full structural export: basis labels, parities, structure constants as
// rational strings, Gram matrices, Cartan indices, root datum.
Json algebra_to_json(const Superalgebra& g);

Json rfield_to_json(const Superalgebra& g, const RField& r);
// Rebuilds the algebra from the embedded descriptor and cross-checks the
// recorded parities; throws SchemaError naming the offending path.
std::pair<Superalgebra, RField> rfield_from_json(const Json& j);

// A quantum R-matrix file: either the zero-weight template (alpha, beta
// grids) or a dense N^2 x N^2 entry grid, entries as coefficient ASTs.
struct DynRSpec {
    std::string family = "gl";
    int m = 1, n = 0;
    std::string kind;  // "template" | "dense"
    std::vector<std::vector<Expr>> alpha, beta;  // template: N x N
    std::vector<std::vector<Expr>> dense;        // dense: N^2 x N^2
};

Json dynr_to_json(const DynRSpec& R);
DynRSpec dynr_from_json(const Json& j);
// Evaluating closure over the entries.
RFun dynr_fun(const Superalgebra& g, const DynRSpec& R);

Json report_to_json(const ResidualReport& rep);
Json hecke_to_json(const HeckeReport& rep);
Json slope_to_json(const SlopeReport& rep);

struct RunManifest {
    std::string command;
    std::uint64_t seed = 0;
    std::map<std::string, double> tolerances;
    std::map<std::string, std::string> input_hashes;
    std::string version = kVersion;
    std::map<std::string, std::string> verdicts;
};

Json manifest_to_json(const RunManifest& m);

std::string hash_hex(const std::string& data);
std::uint64_t derive_seed(std::uint64_t master, const std::string& tag);

struct CorpusConfig {
    std::vector<std::string> algebras;
    std::uint64_t master_seed = 1;
};

// Run every constructor cell on every listed algebra: pass/fail matrix with
// residual quantiles. Per-cell failures are recorded and the run continues;
// degenerate-form algebras are flagged and skipped. Deterministic per seed.
Json corpus_run(const CorpusConfig& cfg);
// Fixed-format text rendering of the summary (byte-stable).
std::string corpus_summary_text(const Json& summary);

} // namespace dynr

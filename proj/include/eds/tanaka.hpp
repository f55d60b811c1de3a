#pragma once

#include "eds/prolong.hpp"

namespace eds {

// ---- derived flag of a Pfaffian system at a point ----

struct DerivedFlag {
    // dims of D, del D, del^2 D, ... until stable or full
    std::vector<int> dims;
    // annihilator bases, row spaces in coframe coordinates; entry j spans the
    // annihilator of the j-th derived system
    std::vector<Eigen::MatrixXd> annihilators;
    bool unstable = false;
    bool full() const { return !annihilators.empty() && annihilators.back().rows() == 0; }
};

// small_growth brackets each stage against D only (the growth flag); with
// small_growth = false every pair inside the stage is bracketed (full derived
// iteration).  The growth flag is the one that distinguishes the strata; the
// full iteration fills the tangent space at every point of these charts.
DerivedFlag derived_flag(const PfaffianChart& pc, const Eigen::VectorXd& point,
                         bool small_growth = true, double tol = 1e-9);

// ---- graded nilpotent symbol at a point ----

struct SymbolAlgebra {
    std::vector<std::string> labels;  // gens then comps
    std::vector<int> levels;          // same order, negative
    int corank = 0;                   // generator count; targets of brackets
    // per generator target: n x n matrix of structure constants over the frame
    std::vector<Eigen::MatrixXd> c;
    std::vector<int> graded_dims;  // dims of g_{-1}, g_{-2}, ...
    int depth() const { return static_cast<int>(graded_dims.size()); }
    double constant(int target, int alpha, int beta) const { return c[target](alpha, beta); }
    bool level_matched(int target, int alpha, int beta) const {
        return levels[target] == levels[alpha] + levels[beta];
    }
};

// canonical level assignment of a 9-dim model chart: transversal -4, contact
// pair -3, remaining generators -2, complement -1
std::vector<int> canonical_levels(const PfaffianChart& pc);

SymbolAlgebra symbol_algebra(const PfaffianChart& pc, const Eigen::VectorXd& point,
                             const std::vector<int>& levels);

// image dimension of [g_{-1}, g_{-j}] inside g_{-j-1} for j = 1..depth-1
std::vector<int> bracket_image_dims(const SymbolAlgebra& s, double tol = 1e-9);
// whether each level g_{-j-1} is spanned by those images
std::vector<bool> generating_condition(const SymbolAlgebra& s, double tol = 1e-9);
// rank of the pairing g_{-1} x g_{-(depth-1)} -> g_{-depth} when the top is a line
int top_pairing_rank(const SymbolAlgebra& s, double tol = 1e-9);
// worst graded Jacobi identity residual over all frame triples
double jacobi_residual(const SymbolAlgebra& s);

// ---- reference nilpotent algebras ----

struct RefSymbol {
    PdeClass cls = PdeClass::Hyperbolic;
    int m = 0;                 // 0, 1, 2: which singularity layer
    std::string chart_id;      // prolonged model chart carrying it
    double u = 0.0, v = 0.0;   // fiber point of that chart
    // entries [a, b] = out with unit coefficient, in the listed order
    std::vector<std::array<std::string, 3>> brackets;
};

// m = 0,1,2; parabolic has all three, hyperbolic all three, elliptic 0 and 2
RefSymbol reference_symbol(PdeClass cls, int m);
std::vector<int> reference_layers(PdeClass cls);  // valid m values

struct SymbolComparison {
    bool support_match = false;   // nonzero constants exactly where listed
    bool unit_scale = false;      // matched entries all have coefficient +-1
    std::vector<int> graded_dims;
    std::vector<int> image_dims;
    std::vector<bool> generating;
    int pairing_rank = 0;
    double jacobi = 0.0;
    bool reference_match = false;  // support and the invariant fingerprint agree
};

SymbolComparison compare_symbol(const SymbolAlgebra& s, const RefSymbol& ref, double tol = 1e-9);

} // namespace eds

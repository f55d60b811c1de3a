#pragma once

#include "eds/forms.hpp"
#include "eds/linalg.hpp"

#include <memory>

namespace eds {

enum class PdeClass { Hyperbolic, Parabolic, Elliptic, Degenerate, NonRegular };
std::string pde_class_name(PdeClass c);

struct OffSurface : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonRegularPoint : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct FrameError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// second-order scalar equation F(x,y,z,p,q,r,s,t) = 0
class Pde {
public:
    Pde(std::string name, Expr F);
    const std::string& name() const { return name_; }
    const Expr& F() const { return F_; }
    const Expr& dF(const std::string& coord) const;
    Form differential() const;  // dF as a 1-form on the 8-dim chart
    bool exact_evaluable() const;

private:
    std::string name_;
    Expr F_;
    mutable std::map<std::string, Expr> grad_;
};

Chart j2_chart();                        // (x,y,z,p,q,r,s,t)
std::vector<Form> contact_system_j2();   // dz-p dx-q dy, dp-r dx-s dy, dq-s dx-t dy
Pde model_pde(PdeClass c);               // s, r, r+t

struct ClassifyResult {
    PdeClass cls = PdeClass::Degenerate;
    double delta = 0.0;        // F_r F_t - F_s^2/4
    double grad_norm = 0.0;    // |(F_r, F_s, F_t)|
    bool exact = false;
    Rational delta_exact;      // meaningful iff exact
    bool near_threshold = false;
};

ClassifyResult classify_point(const Pde& pde, const Env& w, double tol = 1e-9,
                              double tol_surface = 1e-9);
ClassifyResult classify_point_exact(const Pde& pde, const ExactEnv& w);

// A local description of a Pfaffian system: generators cut the plane field,
// complement completes them to a coframe.
struct PfaffianChart {
    std::string id;
    Chart chart;
    std::vector<Form> generators;
    std::vector<std::string> gen_labels;
    std::vector<Form> complement;
    std::vector<std::string> comp_labels;

    int dim() const { return chart.dim(); }
    int corank() const { return static_cast<int>(generators.size()); }
    int find_comp(const std::string& label) const;
};

// flat 7-dim models of the three classes, with closed structure coframes
PfaffianChart model_surface_chart(PdeClass c);

struct DistributionSample {
    std::shared_ptr<const PfaffianChart> source;
    Eigen::VectorXd point;                   // source chart coordinates
    Eigen::MatrixXd basis;                   // n x 4, columns span the plane field
    Eigen::MatrixXd gen_covectors;           // corank x n
    std::vector<Eigen::Matrix4d> curvature;  // d(gen_i) restricted to basis
    bool rank_unstable = false;
};

DistributionSample sample_chart(std::shared_ptr<const PfaffianChart> pc,
                                const Eigen::VectorXd& point, double tol = 1e-9);

// plane field cut out on {F = 0} by the contact system, sampled at w
DistributionSample induced_distribution(const Pde& pde, const Env& w, double tol = 1e-9);

struct Rank4Type {
    PdeClass cls = PdeClass::Degenerate;
    PencilCoeffs coeffs{0, 0, 0};  // of the norm-scaled active pair
    double disc = 0.0;
    int active[2] = {-1, -1};      // generator indices of the working pair
    bool near_threshold = false;
};

Rank4Type rank4_type(const DistributionSample& s, double tol = 1e-9);

struct AdaptedFrame {
    PdeClass cls = PdeClass::Degenerate;
    Eigen::MatrixXd frame;     // n x 4 columns: X_w1, X_w2, X_p1, X_p2
    Eigen::RowVectorXd theta0, theta1, theta2;  // ambient covectors
    Eigen::Matrix4d n1, n2;    // d(theta_i) in the frame basis
    double residual = 0.0;     // worst deviation from the target patterns
};

// normalizes the active curvature pair to the flat pattern of its class:
//   hyperbolic: n1 = w1^p1,          n2 = w2^p2
//   parabolic:  n1 = w2^p1,          n2 = w1^p1 + w2^p2
//   elliptic:   n1 = w1^p1 + w2^p2,  n2 = w1^p2 - w2^p1
AdaptedFrame adapted_coframe(const DistributionSample& s, double tol = 1e-9);

// common kernel dimension of all restricted curvature forms
int cauchy_characteristic_dim(const DistributionSample& s, double tol = 1e-9);

// dimension of span{curvature_i} inside antisymmetric 4x4 matrices;
// the first derived system has rank 4 + this
int curvature_span_rank(const DistributionSample& s, double tol = 1e-9);

// target patterns for pattern-matching tests and fiber tables
Eigen::Matrix4d pattern_n1(PdeClass c);
Eigen::Matrix4d pattern_n2(PdeClass c);

} // namespace eds

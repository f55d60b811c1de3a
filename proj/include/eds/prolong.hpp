#pragma once

#include "eds/contact.hpp"

#include <random>

namespace eds {

// ---- fiber of integral 2-planes over a point of the equation manifold ----

// Chart of the plane Grassmannian: planes transverse to span(X_c, X_d), written
// as graphs over span(X_a, X_b).  Indices refer to the 4 adapted frame labels.
// Parameters ("p11","p12","p21","p22") mean: on the plane, the covector labeled
// c restricts to p11*A + p12*B and the one labeled d to p21*A + p22*B.
struct FiberChart {
    std::string id;  // "I".."VI"
    int a, b, c, d;
    std::vector<std::string> labels;  // the 4 frame labels of the class
    bool empty = false;
    Chart pchart;
    Expr f1, f2;  // integral-plane equations; for empty charts one is a nonzero constant
};

// hand-checked tables for the three classes, charts I..VI in pair order
// (01, 02, 03, 12, 13, 23)
std::vector<FiberChart> reference_fiber_charts(PdeClass cls);

// same content recomputed from the flat curvature patterns; f's agree with the
// reference up to a unit constant per entry
FiberChart derive_fiber_chart(PdeClass cls, int pair_index);

// indices (into the 6) of the subfamily that already covers the whole fiber
std::vector<int> covering_subatlas(PdeClass cls);

// plane basis [u1 u2] in the frame-label coordinates
Eigen::Matrix<double, 4, 2> plane_of_chart_point(const FiberChart& fc, const Eigen::Matrix2d& p);
bool plane_in_chart(const Eigen::Matrix<double, 4, 2>& E, const FiberChart& fc, double tol = 1e-9);
Eigen::Matrix2d chart_params_of_plane(const Eigen::Matrix<double, 4, 2>& E, const FiberChart& fc,
                                      double tol = 1e-9);
Eigen::Matrix2d fiber_transition(const FiberChart& from, const Eigen::Matrix2d& pfrom,
                                 const FiberChart& to, double tol = 1e-9);

// random point of {f1 = f2 = 0} in a non-empty chart
Eigen::Matrix2d sample_on_variety(const FiberChart& fc, PdeClass cls, std::mt19937_64& rng);

// Plucker coordinates of a plane, tuple order (01,02,03,12,13,23)
Eigen::Matrix<double, 6, 1> plucker_of_plane(const Eigen::Matrix<double, 4, 2>& E);

// ---- fiber as a quadric: intersection form on the kernel web ----

enum class FiberTopology { Torus, Sphere, PinchedTorus, Other };
std::string fiber_topology_name(FiberTopology t);
FiberTopology expected_topology(PdeClass cls);

struct FiberReport {
    FiberTopology topology = FiberTopology::Other;
    Signature sig;
    Eigen::MatrixXd W;  // 6 x 4: plane constraints' common kernel inside wedge^2
    Eigen::MatrixXd Q;  // 4 x 4 symmetric: Klein form restricted to W
    std::vector<Eigen::Matrix<double, 6, 1>> singular_dirs;
    std::string note;
};

FiberReport fiber_topology(const DistributionSample& s, double tol = 1e-9);

// ---- sampled verification of the fiber surface ----

struct MeshReport {
    double euler_cover = 0.0, euler_quotient = 0.0;
    int components_cover = 0, components_quotient = 0;
    int singular_pairs = 0;
    long vertices = 0, triangles = 0;
    int subdivisions = 0;
};

// marches the zero set of Q over a subdivided 3-sphere triangulation;
// min_cells asks for at least that many tetrahedra
MeshReport fiber_mesh_oracle(const Eigen::MatrixXd& Q, long min_cells = 100000,
                             uint64_t seed = 42);

// ---- prolonged spaces over the flat models ----

enum class Stratum { S0, S1, S2 };
std::string stratum_name(Stratum s);

// 9-dim canonical Pfaffian systems over the models; supported chart ids:
// hyperbolic "I","III","VI"; parabolic "I","VI"; elliptic "I","VI".
// Fiber coordinates are (u1, v1).
PfaffianChart prolonged_model_chart(PdeClass cls, const std::string& fiber_chart_id);

// stratum of a point of such a chart by its fiber coordinates
Stratum prolonged_chart_stratum(PdeClass cls, const std::string& fiber_chart_id, double u,
                                double v, double tol = 1e-9);

// one graph-chart prolongation step; requires the complement of pc to be an
// adapted coframe of the class (checked numerically); adds (u<level>, v<level>)
PfaffianChart prolong_rank4(const PfaffianChart& pc, PdeClass cls, int level);

// ---- the full prolongation space over the 8-dim second-order chart ----

// charts "xy","xt","yr","rs","rt","st"; 12 coordinates, 6 generators
PfaffianChart sigma_j2_chart(const std::string& which);
std::vector<std::string> sigma_j2_chart_names();

// model solution spaces inside those charts, 9 coordinates, 5 generators:
// hyperbolic "xy","xt","rt"; parabolic "xy","st"; elliptic "xy","rs"
PfaffianChart embedded_model_chart(PdeClass cls, const std::string& which);
std::vector<std::string> embedded_model_chart_names(PdeClass cls);

// coordinate images embedding the 9-dim chart into the matching 12-dim chart
std::vector<Expr> embedded_model_images(PdeClass cls, const std::string& which);
std::string embedded_model_parent(PdeClass cls, const std::string& which);

Stratum embedded_stratum(PdeClass cls, const std::string& which, const Env& pt,
                         double tol = 1e-9);

} // namespace eds

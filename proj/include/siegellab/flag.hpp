// Grassmannian geometry through the Pluecker embedding: exact rational
// subspaces (HNF-canonical, saturated) with primitive Pluecker vectors and
// heights, real cone vectors with the (v+, u-) chart, the diagonal flow a(y),
// the approximation regions E, E+, F, Q and the flow cell decomposition, plus
// complete rational-point enumeration for the supported models.
#pragma once

#include "siegellab/errors.hpp"
#include "siegellab/intmat.hpp"
#include "siegellab/rng.hpp"

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace siegellab::flag {

struct GrassmannModel {
    int ell = 1, n = 2;

    static GrassmannModel make(int ell, int n);

    int d() const { return ell * (n - ell); }
    int dim_V() const;
    double beta() const { return double(n) / double(d()); }
    std::pair<long long, long long> beta_rational() const;   // reduced n / (ell(n-ell))
    bool operator==(const GrassmannModel&) const = default;
};

// Column subsets of size ell in lexicographic order; Pluecker coordinates are
// indexed by these subsets throughout.
const std::vector<std::vector<int>>& subsets(int n, int ell);
int subset_index(int n, int ell, const std::vector<int>& sorted_subset);

// Exact ell x ell minors in lexicographic column-subset order.
std::vector<intmat::Int> plucker_embed(const intmat::IMat& rows);

struct RationalSubspace {
    GrassmannModel model;
    intmat::IMat basis_hnf;              // ell x n, canonical HNF of the saturation
    std::vector<intmat::Int> plucker;    // primitive, first nonzero positive
    double height = 0.0;

    // Saturates the row space, canonicalizes, and checks the Pluecker vector
    // is primitive and satisfies the quadratic relations (exact, Gr(2,4)).
    static RationalSubspace from_rows(const GrassmannModel& model, const intmat::IMat& rows);
};

double height(const RationalSubspace& v);

struct FlagPoint {
    GrassmannModel model;
    Eigen::MatrixXd frame;               // ell x n, orthonormal rows
    Eigen::VectorXd plucker() const;     // unit vector
};

struct ConeVector {
    GrassmannModel model;
    Eigen::VectorXd plucker;

    double vplus() const { return plucker[0]; }                 // signed e_chi coordinate
    static ConeVector from_rows(const GrassmannModel& model, const Eigen::MatrixXd& rows);
    // s * plucker([ I | u ]) for the d-dimensional chart matrix u (ell x (n-ell)).
    static ConeVector from_chart(const GrassmannModel& model, const Eigen::MatrixXd& u, double s);
};

// Spherical-projective distance arccos(|<u,w>| / (||u|| ||w||)), range [0, pi/2].
// Small angles are evaluated through the orthogonal component (asin branch) so
// thresholds down to ~1e-12 stay meaningful.
double distance_plucker(const Eigen::VectorXd& a, const Eigen::VectorXd& b);
double distance(const FlagPoint& a, const FlagPoint& b);
double distance(const ConeVector& a, const ConeVector& b);
double distance_to_base(const ConeVector& v);                   // d(x0, [v])

struct ConeCoords {
    double vplus = 0.0;
    Eigen::MatrixXd uminus;              // ell x (n-ell)
    double uminus_norm = 0.0;            // Frobenius
};

// Chart coordinates at the base point; throws validation_error("outside chart")
// when the top minor vanishes.
ConeCoords cone_coords(const ConeVector& v);

// a(y) = diag(y^{-(n-ell)/n} I_ell, y^{ell/n} I_{n-ell}); det = 1.
Eigen::MatrixXd diag_flow(const GrassmannModel& model, double y);
// induced diagonal action on V_chi, as the vector of per-coordinate factors
Eigen::VectorXd diag_flow_on_V(const GrassmannModel& model, double y);
ConeVector flow(const ConeVector& v, double y);

// exterior power matrix: action of g on V_chi by ell x ell minors
Eigen::MatrixXd exterior_power(const Eigen::MatrixXd& g, int ell);

struct RegionSpec {
    enum class Kind { E, Eplus, F, Q };
    Kind kind = Kind::F;
    GrassmannModel model;
    double T = 1.0;
    double c = 1.0;
    int ell_index = 1;
    double C0 = 8.0;

    static RegionSpec E(const GrassmannModel& m, double T, double c = 1.0);
    static RegionSpec Eplus(const GrassmannModel& m, double T, double c);
    static RegionSpec F(const GrassmannModel& m, double c);
    static RegionSpec Q(const GrassmannModel& m, int ell_index, double C0 = 8.0);
};

// Exact predicate with the boundary conventions of the definitions:
//   E:  d(x0,[v]) < c ||v||^-beta,      1 <= ||v||  < T
//   E+: ||u_v|| < c ||v+||^-beta,       1 <= ||v+|| < cT
//   F:  ||u_v|| < c ||v+||^-beta,       1 <= ||v+|| < e
//   Q:  ||v|| <= C0 * ell_index
bool region_contains(const RegionSpec& spec, const ConeVector& v);

// The unique i >= 0 with a(y_i) v in F_c, y_i = e^(beta i); nullopt outside E+.
std::optional<int> cell_index(const GrassmannModel& model, double c, const ConeVector& v);

// (1 + C0 l^-beta)^-(1+beta), the sandwich constant c-hat_l.
double sandwich_c_hat(const GrassmannModel& model, int ell_index, double C0 = 8.0);

// Complete duplicate-free enumeration of rational points of height < T.
// Supported: (1,n) n <= 6; (n-1,n) n <= 6 via duality; (2,4) via
// shortest-vector/quotient double enumeration with the planar Hermite bound.
std::vector<RationalSubspace> enumerate_rational_points(const GrassmannModel& model, double T);

// Primitive points of P_chi (primitive vectors of V_chi(Z) on the cone) with
// norm < T, both signs. ell = 1: primitive integer vectors; (2,4): primitive
// integer points of the Pluecker quadric.
std::vector<std::vector<intmat::Int>> primitive_cone_points(const GrassmannModel& model, double T);

// sigma_X sample: orthonormalized rows of an iid Gaussian matrix.
FlagPoint sample_uniform_point(const GrassmannModel& model, rng::Stream& stream);

// k_x in SO(n) whose first ell columns span x (a measurable section X -> K).
Eigen::MatrixXd section_rotation(const FlagPoint& x);

struct ConeVolume {
    double value = 0.0;
    bool absolute = false;    // true when the mean-value normalization is pinned
};

// lambda_Xtilde(F_c). Absolute (zeta-normalized) for ell = 1 or ell = n-1;
// otherwise in the relative normalization with the chart constant set to 1.
ConeVolume cone_volume_F(const GrassmannModel& model, double c);
ConeVolume cone_volume_F_mc(const GrassmannModel& model, double c, long long samples,
                            rng::Stream& stream);

// Stress sampler for the region property suites: cone vectors spread over
// E+-like shells of ||v+|| in [1, T), with u-norms straddling the c-threshold.
ConeVector sample_cone_vector(const GrassmannModel& model, rng::Stream& stream, double T, double c);

} // namespace siegellab::flag

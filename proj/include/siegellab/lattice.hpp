// Unimodular lattices and the enumeration kernels built on them: exact
// shortest vectors (Lagrange-Gauss in dim 2, LLL + Fincke-Pohst in dims 3-8),
// primitive-point streams, exact Haar sampling on SL2(R)/SL2(Z), and the
// shortest-vector function lambda_chi on minor lattices.
#pragma once

#include "siegellab/errors.hpp"
#include "siegellab/rng.hpp"

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace siegellab::lattice {

struct PrimitiveVector {
    std::vector<long long> coords;   // gcd 1, nonzero
    double norm = 0.0;
};

class UnimodularLattice {
  public:
    // Column basis of g Z^n; rescaled so |det| = 1. Near-singular input is
    // rejected.
    explicit UnimodularLattice(Eigen::MatrixXd basis);

    int dim() const { return int(basis_.cols()); }
    const Eigen::MatrixXd& basis() const { return basis_; }

    // g * lattice, renormalized.
    UnimodularLattice transformed(const Eigen::MatrixXd& g) const {
        return UnimodularLattice(g * basis_);
    }

  private:
    Eigen::MatrixXd basis_;
};

// Point of the standard modular fundamental domain plus a rotation angle;
// theta runs over [0, pi) since -I acts trivially on lattices.
struct ModularSample {
    double x = 0.0, y = 1.0, theta = 0.0;
    UnimodularLattice lattice() const;
};

// Exact sample of the Haar probability measure on SL2(R)/SL2(Z):
// x has density prop. to (1-x^2)^(-1/2) on [-1/2,1/2] (inverse-CDF arcsine),
// y = sqrt(1-x^2)/u with u uniform (0,1], theta uniform [0, pi).
ModularSample haar_sample_modular(rng::Stream& stream);
UnimodularLattice haar_sample_sl2(rng::Stream& stream);

// LLL reduction (delta = 0.99) of the columns; returns the unimodular column
// transform U with reduced = basis * U.
Eigen::MatrixXd lll_reduce(Eigen::MatrixXd& basis);

// Visits every nonzero integer vector m with ||basis m|| <= radius, both signs.
// Throws resource_guard_error when more than `guard` enumeration candidates
// would be scanned.
void enumerate_in_ball(const Eigen::MatrixXd& basis, double radius,
                       const std::function<void(const std::vector<long long>&,
                                                const Eigen::VectorXd&)>& visit,
                       long long guard = 100'000'000);

// Exact shortest nonzero vector; its integer coordinates are primitive.
std::pair<PrimitiveVector, double> shortest_vector(const UnimodularLattice& lat);

// Streams every primitive integer vector with euclidean norm < T (both signs),
// in deterministic lexicographic order.
void primitive_points_in_ball(int n, double T,
                              const std::function<void(const std::vector<long long>&)>& visit);
std::vector<std::vector<long long>> primitive_points_list(int n, double T);

// Column basis of the exterior-square lattice Lambda^2 (g Z^n), rows and
// columns in lexicographic pair order; |det| = 1 whenever det g = +-1.
Eigen::MatrixXd exterior_square(const Eigen::MatrixXd& basis);

// Shortest-vector length of g V_chi(Z) for the supported models:
// ell = 1 (the lattice itself) and ell = 2 with n in {3, 4}.
double lambda_chi(const UnimodularLattice& lat, int ell);

} // namespace siegellab::lattice

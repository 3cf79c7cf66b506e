// Diophantine counting at the exponent: N_{c,tau}(x,T), the Birkhoff-sum
// identity over the flow cells, ln T slope fits over sigma_X ensembles, and
// the volume-based kappa oracle.
#pragma once

#include "siegellab/flag.hpp"
#include "siegellab/lattice.hpp"
#include "siegellab/rng.hpp"

#include <cstdint>
#include <vector>

namespace siegellab::count {

struct CountQuery {
    flag::GrassmannModel model;
    flag::FlagPoint x;
    double c = 1.0;
    double tau = 0.0;    // approximation exponent
    double T = 1.0;

    void validate() const;
};

// Exact count of {v rational : d(x,v) < c H(v)^-tau, 1 <= H(v) < T}.
// Dispatches to the windowed line scan for (1,n) with tau >= 1 (identical
// acceptance predicate, feasible to T ~ e^12), otherwise enumerates rational
// points directly; refuses when the direct enumeration would be infeasible.
long long count_approximations(const CountQuery& q);

// Direct form: filter enumerate_rational_points by the distance predicate.
long long count_direct(const CountQuery& q);

// Sorted heights of all accepted approximations for a line model (1,n), n<=3.
// One pass at T gives N(x,T') for every T' <= T.
std::vector<double> line_approximation_heights(const flag::GrassmannModel& model,
                                               const Eigen::VectorXd& direction, double c,
                                               double tau, double T);

// Shared acceptance predicate of the counting problem on line models.
bool line_accepts(const Eigen::VectorXd& direction, const Eigen::VectorXd& w, double c,
                  double tau, double T);

// sum_{i=0}^{N-1} S_chi 1_{F_c}(a(y_i) k_x^{-1} Gamma) with y_i = e^{beta i};
// each term enumerates the flowed lattice independently.
long long birkhoff_count(const flag::GrassmannModel& model, const flag::FlagPoint& x, double c,
                         int N);

// #(k_x^{-1} P_chi cap E+_{T,c}) by direct region membership.
long long region_count_eplus(const flag::GrassmannModel& model, const flag::FlagPoint& x,
                             double c, double T);

struct SlopeFit {
    std::vector<std::pair<double, double>> points;   // (ln T, N)
    double slope = 0.0, intercept = 0.0, r2 = 0.0;
};

SlopeFit slope_fit(const std::vector<std::pair<double, double>>& points);

struct EnsembleCurve {
    std::vector<double> ln_grid;
    std::vector<double> mean_counts;                  // ensemble mean per grid point
    std::vector<std::vector<long long>> member_counts;
};

// Ensemble of sigma_X samples, counted at every grid height; deterministic in
// (seed, member index) and safe to shard over workers.
EnsembleCurve ensemble_counts(const flag::GrassmannModel& model, int members, double c,
                              double tau, const std::vector<double>& ln_grid,
                              std::uint64_t seed, int workers = 0);

SlopeFit ensemble_slope_fit(const EnsembleCurve& curve);

struct KappaValue {
    double value = 0.0;
    bool absolute = false;
};

// kappa c^d = [K cap P : K cap L]^{-1} lambda_Xtilde(F_c); absolute in the
// mean-value normalization for ell = 1 or n-1, relative otherwise.
KappaValue kappa_oracle(const flag::GrassmannModel& model, double c);

// [K cap P : K cap L] for the split Grassmann models; always 2 here, since
// SO(n) contains an element preserving the coordinate plane and negating
// e_chi (det -1 on the plane paired with det -1 on the complement).
int compact_stabilizer_index(const flag::GrassmannModel& model);

} // namespace siegellab::count

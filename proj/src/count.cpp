#include "siegellab/count.hpp"

#include "siegellab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace siegellab::count {

void CountQuery::validate() const {
    if (!(c > 0.0)) throw validation_error("count: c > 0 required");
    if (!(tau >= 0.0) || tau > model.beta() + 1.0)
        throw validation_error("count: tau outside [0, beta+1]");
    if (!(T >= 1.0) || !std::isfinite(T)) throw validation_error("count: T >= 1 and finite required");
}

namespace {

// distance from [w] to the line through `u` (unit vector), asin branch for
// small angles: cancellation-free because the perpendicular part is formed
// componentwise before taking norms.
double line_distance(const Eigen::VectorXd& u, const Eigen::VectorXd& w) {
    const double nw = w.norm();
    const double dot = w.dot(u);
    const double c = std::min(1.0, std::abs(dot) / nw);
    if (c < 0.99) return std::acos(c);
    return std::asin(std::min(1.0, (w - dot * u).norm() / nw));
}

} // namespace

bool line_accepts(const Eigen::VectorXd& u, const Eigen::VectorXd& w, double c, double tau,
                  double T) {
    const double h2 = w.squaredNorm();
    if (!(h2 >= 1.0) || !(h2 < T * T)) return false;
    const double h = std::sqrt(h2);
    return line_distance(u, w) < c * std::pow(h, -tau);
}

std::vector<double> line_approximation_heights(const flag::GrassmannModel& model,
                                               const Eigen::VectorXd& direction, double c,
                                               double tau, double T) {
    if (model.ell != 1 || model.n > 3)
        throw validation_error("line_approximation_heights: model must be (1,2) or (1,3)");
    if (!(tau >= 1.0))
        throw validation_error("line_approximation_heights: tau >= 1 required by the window scan");
    const int n = model.n;
    Eigen::VectorXd u = direction / direction.norm();
    std::vector<double> heights;

    auto consider = [&](const Eigen::VectorXd& w) {
        // one representative per line: the accepted side has <w,u> > 0
        // (d < c <= 1.5 < pi/2 keeps the inner product away from zero)
        if (w.dot(u) <= 0.0) return;
        long long g = 0;
        for (int i = 0; i < n; ++i) g = std::gcd(g, std::llabs(llround(w[i])));
        if (g != 1) return;
        if (line_accepts(u, w, c, tau, T)) heights.push_back(w.norm());
    };

    // small ball H <= 3 by brute force (the window scan below assumes H > 3)
    lattice::primitive_points_in_ball(n, std::min(T, 3.0 + 1e-9),
                                      [&](const std::vector<long long>& v) {
                                          Eigen::VectorXd w(n);
                                          for (int i = 0; i < n; ++i) w[i] = double(v[std::size_t(i)]);
                                          if (w.norm() <= 3.0) consider(w);
                                      });

    // windowed scan along the dominant axis: any accepted w with H > 3 has
    // perpendicular part < c H^(1-tau) <= c, so its off-axis coordinates lie
    // within c(1+sqrt(n)) of the ray through u
    int axis = 0;
    for (int i = 1; i < n; ++i)
        if (std::abs(u[i]) > std::abs(u[axis])) axis = i;
    const double sgn = u[axis] > 0 ? 1.0 : -1.0;
    const long long window = llround(std::ceil(c * (1.0 + std::sqrt(double(n))))) + 1;
    std::vector<int> others;
    for (int i = 0; i < n; ++i)
        if (i != axis) others.push_back(i);

    Eigen::VectorXd w(n);
    const long long mmax = llround(std::ceil(T));
    for (long long m = 1; m <= mmax; ++m) {
        const double wi = sgn * double(m);
        if (wi * u[axis] <= 0.0) continue;
        w[axis] = wi;
        const double t = wi / u[axis];
        if (n == 2) {
            const long long c0 = llround(t * u[others[0]]);
            for (long long d0 = -window; d0 <= window; ++d0) {
                w[others[0]] = double(c0 + d0);
                if (w.norm() > 3.0) consider(w);
            }
        } else {
            const long long c0 = llround(t * u[others[0]]);
            const long long c1 = llround(t * u[others[1]]);
            for (long long d0 = -window; d0 <= window; ++d0)
                for (long long d1 = -window; d1 <= window; ++d1) {
                    w[others[0]] = double(c0 + d0);
                    w[others[1]] = double(c1 + d1);
                    if (w.norm() > 3.0) consider(w);
                }
        }
    }
    std::sort(heights.begin(), heights.end());
    return heights;
}

long long count_direct(const CountQuery& q) {
    q.validate();
    // enumeration feasibility: rational points grow like T^n
    if (std::pow(q.T, double(q.model.n)) > 5e8)
        throw resource_guard_error("count_direct: enumeration infeasible at this T");
    const Eigen::VectorXd px = q.x.plucker();
    long long cnt = 0;
    for (const auto& v : flag::enumerate_rational_points(q.model, q.T)) {
        Eigen::VectorXd pv(long(v.plucker.size()));
        for (std::size_t i = 0; i < v.plucker.size(); ++i) pv[long(i)] = double(v.plucker[i]);
        if (q.model.ell == 1) {
            if (line_accepts(px, pv, q.c, q.tau, q.T)) ++cnt;
        } else {
            if (v.height >= 1.0 && v.height < q.T &&
                flag::distance_plucker(px, pv) < q.c * std::pow(v.height, -q.tau))
                ++cnt;
        }
    }
    return cnt;
}

long long count_approximations(const CountQuery& q) {
    q.validate();
    if (q.model.ell == 1 && q.model.n <= 3 && q.tau >= 1.0) {
        Eigen::VectorXd u = q.x.frame.row(0).transpose();
        return (long long)line_approximation_heights(q.model, u, q.c, q.tau, q.T).size();
    }
    return count_direct(q);
}

long long birkhoff_count(const flag::GrassmannModel& model, const flag::FlagPoint& x, double c,
                         int N) {
    if (model.ell != 1 || model.n > 3)
        throw validation_error("birkhoff_count: supported models are (1,2) and (1,3)");
    if (N < 0) throw validation_error("birkhoff_count: N >= 0 required");
    const double beta = model.beta();
    const Eigen::MatrixXd kx = flag::section_rotation(x);
    const flag::RegionSpec f_region = flag::RegionSpec::F(model, c);

    long long total = 0;
    for (int i = 0; i < N; ++i) {
        const double yi = std::exp(beta * double(i));
        const Eigen::MatrixXd g = flag::diag_flow(model, yi) * kx.transpose();
        // F_c is contained in the box |v1| < e, |v_perp| < c; cover it with the
        // scaled ball sum (v1/e)^2 + sum (v_j/c)^2 < n
        Eigen::MatrixXd scale = Eigen::MatrixXd::Zero(model.n, model.n);
        scale(0, 0) = 1.0 / 2.718281828459045;
        for (int j = 1; j < model.n; ++j) scale(j, j) = 1.0 / c;
        lattice::enumerate_in_ball(
            scale * g, std::sqrt(double(model.n)) * (1.0 + 1e-9),
            [&](const std::vector<long long>& m, const Eigen::VectorXd&) {
                long long gg = 0;
                for (long long v : m) gg = std::gcd(gg, v < 0 ? -v : v);
                if (gg != 1) return;
                Eigen::VectorXd mv(model.n);
                for (int j = 0; j < model.n; ++j) mv[j] = double(m[std::size_t(j)]);
                flag::ConeVector cv{model, g * mv};
                if (std::abs(cv.vplus()) < 1.0) return;
                if (flag::region_contains(f_region, cv)) ++total;
            });
    }
    return total;
}

long long region_count_eplus(const flag::GrassmannModel& model, const flag::FlagPoint& x,
                             double c, double T) {
    if (model.ell != 1 || model.n > 3)
        throw validation_error("region_count_eplus: supported models are (1,2) and (1,3)");
    const Eigen::MatrixXd kx = flag::section_rotation(x);
    const Eigen::MatrixXd g = kx.transpose();
    const flag::RegionSpec region = flag::RegionSpec::Eplus(model, T, c);
    // E+ fits in |v1| < cT, |v_perp| < c
    Eigen::MatrixXd scale = Eigen::MatrixXd::Zero(model.n, model.n);
    scale(0, 0) = 1.0 / (c * T);
    for (int j = 1; j < model.n; ++j) scale(j, j) = 1.0 / c;
    long long total = 0;
    lattice::enumerate_in_ball(scale * g, std::sqrt(double(model.n)) * (1.0 + 1e-9),
                               [&](const std::vector<long long>& m, const Eigen::VectorXd&) {
                                   long long gg = 0;
                                   for (long long v : m) gg = std::gcd(gg, v < 0 ? -v : v);
                                   if (gg != 1) return;
                                   Eigen::VectorXd mv(model.n);
                                   for (int j = 0; j < model.n; ++j) mv[j] = double(m[std::size_t(j)]);
                                   flag::ConeVector cv{model, g * mv};
                                   if (flag::region_contains(region, cv)) ++total;
                               });
    return total;
}

SlopeFit slope_fit(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 4) throw validation_error("slope_fit: at least 4 grid points required");
    for (std::size_t i = 1; i < points.size(); ++i)
        if (!(points[i].first > points[i - 1].first))
            throw validation_error("slope_fit: grid must be strictly increasing");
    SlopeFit fit;
    fit.points = points;
    const double n = double(points.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : points) {
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    const double denom = n * sxx - sx * sx;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss_res = 0, ss_tot = 0;
    const double mean = sy / n;
    for (const auto& [x, y] : points) {
        const double e = y - (fit.slope * x + fit.intercept);
        ss_res += e * e;
        ss_tot += (y - mean) * (y - mean);
    }
    fit.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

EnsembleCurve ensemble_counts(const flag::GrassmannModel& model, int members, double c,
                              double tau, const std::vector<double>& ln_grid, std::uint64_t seed,
                              int workers) {
    if (members < 1) throw validation_error("ensemble_counts: members >= 1");
    EnsembleCurve curve;
    curve.ln_grid = ln_grid;
    curve.member_counts.assign(std::size_t(members), std::vector<long long>(ln_grid.size(), 0));
    const double Tmax = std::exp(ln_grid.back());

    util::parallel_for(members, workers, [&](long long k) {
        auto stream = rng::Stream::for_sample(seed, /*tag=*/0x636e7431, std::uint64_t(k));
        const flag::FlagPoint x = flag::sample_uniform_point(model, stream);
        const auto heights =
            line_approximation_heights(model, x.frame.row(0).transpose(), c, tau, Tmax);
        for (std::size_t a = 0; a < ln_grid.size(); ++a) {
            const double t = std::exp(ln_grid[a]);
            curve.member_counts[std::size_t(k)][a] =
                (long long)(std::upper_bound(heights.begin(), heights.end(), t) - heights.begin());
        }
    });

    curve.mean_counts.assign(ln_grid.size(), 0.0);
    for (const auto& row : curve.member_counts)
        for (std::size_t a = 0; a < row.size(); ++a) curve.mean_counts[a] += double(row[a]);
    for (auto& m : curve.mean_counts) m /= double(members);
    return curve;
}

SlopeFit ensemble_slope_fit(const EnsembleCurve& curve) {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t a = 0; a < curve.ln_grid.size(); ++a)
        pts.emplace_back(curve.ln_grid[a], curve.mean_counts[a]);
    return slope_fit(pts);
}

int compact_stabilizer_index(const flag::GrassmannModel&) { return 2; }

KappaValue kappa_oracle(const flag::GrassmannModel& model, double c) {
    const flag::ConeVolume vol = flag::cone_volume_F(model, c);
    return {vol.value / double(compact_stabilizer_index(model)), vol.absolute};
}

} // namespace siegellab::count

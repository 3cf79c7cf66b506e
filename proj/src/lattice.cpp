#include "siegellab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace siegellab::lattice {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

UnimodularLattice::UnimodularLattice(Eigen::MatrixXd basis) : basis_(std::move(basis)) {
    if (basis_.rows() != basis_.cols() || basis_.rows() < 2)
        throw validation_error("lattice basis must be square, dim >= 2");
    const double det = basis_.determinant();
    if (!(std::abs(det) > 1e-12))
        throw validation_error("degenerate lattice basis");
    basis_ *= std::pow(std::abs(det), -1.0 / double(basis_.rows()));
}

UnimodularLattice ModularSample::lattice() const {
    Eigen::Matrix2d shape;
    shape << 1.0, x, 0.0, y;
    Eigen::Matrix2d rot;
    rot << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
    return UnimodularLattice(rot * (shape / std::sqrt(y)));
}

ModularSample haar_sample_modular(rng::Stream& stream) {
    ModularSample s;
    const double u1 = stream.next_unit();
    s.x = std::sin(kPi * (2.0 * u1 - 1.0) / 6.0);
    const double u2 = stream.next_unit_open();
    s.y = std::sqrt(1.0 - s.x * s.x) / u2;
    s.theta = stream.next_unit() * kPi;
    return s;
}

UnimodularLattice haar_sample_sl2(rng::Stream& stream) {
    return haar_sample_modular(stream).lattice();
}

Eigen::MatrixXd lll_reduce(Eigen::MatrixXd& basis) {
    const int n = int(basis.cols());
    Eigen::MatrixXd u = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd gs = basis;                 // Gram-Schmidt vectors
    Eigen::MatrixXd mu = Eigen::MatrixXd::Zero(n, n);
    std::vector<double> norm2(std::size_t(n), 0.0);

    auto update_gs = [&]() {
        for (int i = 0; i < n; ++i) {
            gs.col(i) = basis.col(i);
            for (int j = 0; j < i; ++j) {
                mu(i, j) = basis.col(i).dot(gs.col(j)) / norm2[std::size_t(j)];
                gs.col(i) -= mu(i, j) * gs.col(j);
            }
            norm2[std::size_t(i)] = gs.col(i).squaredNorm();
        }
    };
    update_gs();

    const double delta = 0.99;
    int k = 1;
    int iters = 0;
    while (k < n) {
        if (++iters > 10000 * n * n) break;   // stalls only on pathological input
        for (int j = k - 1; j >= 0; --j) {
            const double m = std::round(mu(k, j));
            if (m != 0.0) {
                basis.col(k) -= m * basis.col(j);
                u.col(k) -= m * u.col(j);
                update_gs();
            }
        }
        if (norm2[std::size_t(k)] >= (delta - mu(k, k - 1) * mu(k, k - 1)) * norm2[std::size_t(k - 1)]) {
            ++k;
        } else {
            basis.col(k).swap(basis.col(k - 1));
            u.col(k).swap(u.col(k - 1));
            update_gs();
            k = std::max(k - 1, 1);
        }
    }
    return u;
}

void enumerate_in_ball(const Eigen::MatrixXd& basis_in, double radius,
                       const std::function<void(const std::vector<long long>&,
                                                const Eigen::VectorXd&)>& visit,
                       long long guard) {
    const int n = int(basis_in.cols());
    Eigen::MatrixXd basis = basis_in;
    Eigen::MatrixXd u = lll_reduce(basis);

    Eigen::MatrixXd gram = basis.transpose() * basis;
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success)
        throw validation_error("enumeration: Gram matrix not positive definite");
    Eigen::MatrixXd r = llt.matrixU();          // gram = r^T r

    //   ||basis x||^2 = sum_i r_ii^2 (x_i + sum_{j>i} (r_ij/r_ii) x_j)^2
    const double r2 = radius * radius * (1.0 + 1e-12);
    std::vector<long long> x(std::size_t(n), 0);
    std::vector<double> partial(std::size_t(n) + 1, 0.0);
    long long visited = 0;

    std::vector<long long> out(std::size_t(n), 0);
    Eigen::VectorXd xe(n);
    auto emit = [&]() {
        for (int i = 0; i < n; ++i) xe[i] = double(x[std::size_t(i)]);
        Eigen::VectorXd m = u * xe;
        for (int i = 0; i < n; ++i) out[std::size_t(i)] = llround(m[i]);
        visit(out, basis_in * m);
        for (auto& c : out) c = -c;
        visit(out, -(basis_in * m));
    };

    // Depth-first over levels n-1 .. 0; level k fixes x_k given x_{k+1..n-1}.
    // Only the half with leading nonzero coordinate positive is walked; emit()
    // produces both signs, so every +-pair is visited exactly once.
    std::function<void(int, bool)> descend_half = [&](int k, bool all_zero_above) {
        double c = 0.0;
        for (int j = k + 1; j < n; ++j) c += r(k, j) / r(k, k) * double(x[std::size_t(j)]);
        const double room = r2 - partial[std::size_t(k) + 1];
        if (room < 0.0) return;
        const double half = std::sqrt(room) / r(k, k);
        long long lo = llround(std::ceil(-c - half - 1e-12));
        long long hi = llround(std::floor(-c + half + 1e-12));
        if (all_zero_above) lo = std::max(lo, 0LL);
        for (long long v = lo; v <= hi; ++v) {
            if (++visited > guard)
                throw resource_guard_error("lattice enumeration guard exceeded");
            const double t = r(k, k) * (double(v) + c);
            const double acc = partial[std::size_t(k) + 1] + t * t;
            if (acc > r2) continue;
            x[std::size_t(k)] = v;
            partial[std::size_t(k)] = acc;
            const bool zeros = all_zero_above && v == 0;
            if (k == 0) {
                if (!zeros) emit();
            } else {
                descend_half(k - 1, zeros);
            }
        }
        x[std::size_t(k)] = 0;
    };
    partial[std::size_t(n)] = 0.0;
    descend_half(n - 1, true);
}

std::pair<PrimitiveVector, double> shortest_vector(const UnimodularLattice& lat) {
    const int n = lat.dim();
    if (n > 8) throw validation_error("shortest_vector supports dim <= 8");

    if (n == 2) {
        // Lagrange-Gauss with exact integer coordinate tracking.
        Eigen::Vector2d b1 = lat.basis().col(0), b2 = lat.basis().col(1);
        long long u11 = 1, u12 = 0, u21 = 0, u22 = 1;   // columns = coords of b1, b2
        if (b1.squaredNorm() > b2.squaredNorm()) {
            std::swap(b1, b2);
            std::swap(u11, u12); std::swap(u21, u22);
        }
        for (int it = 0; it < 256; ++it) {
            const double m = std::round(b1.dot(b2) / b1.squaredNorm());
            if (m != 0.0) {
                b2 -= m * b1;
                u12 -= llround(m) * u11;
                u22 -= llround(m) * u21;
            }
            if (b2.squaredNorm() >= b1.squaredNorm()) break;
            std::swap(b1, b2);
            std::swap(u11, u12); std::swap(u21, u22);
        }
        PrimitiveVector pv;
        pv.coords = {u11, u21};
        pv.norm = b1.norm();
        return {pv, pv.norm};
    }

    Eigen::MatrixXd reduced = lat.basis();
    lll_reduce(reduced);
    double best = reduced.colwise().norm().minCoeff();

    PrimitiveVector pv;
    double best_found = best * (1.0 + 1e-12);
    enumerate_in_ball(lat.basis(), best_found,
                      [&](const std::vector<long long>& m, const Eigen::VectorXd& v) {
                          const double len = v.norm();
                          if (len < best_found - 1e-15 ||
                              (std::abs(len - best_found) <= 1e-15 && pv.coords.empty())) {
                              best_found = std::max(len, 1e-300);
                              pv.coords = m;
                              pv.norm = len;
                          }
                      });
    if (pv.coords.empty()) throw std::logic_error("shortest vector enumeration found nothing");
    return {pv, pv.norm};
}

void primitive_points_in_ball(int n, double T,
                              const std::function<void(const std::vector<long long>&)>& visit) {
    if (n < 2) throw validation_error("primitive_points_in_ball: n >= 2 required");
    if (T < 1.0) return;
    const double t2 = T * T;
    std::vector<long long> v(std::size_t(n), 0);
    std::function<void(int, double, long long)> rec = [&](int k, double acc, long long g) {
        if (k == n) {
            if (g == 1) visit(v);
            return;
        }
        const long long b = llround(std::floor(std::sqrt(std::max(0.0, t2 - acc))));
        for (long long c = -b; c <= b; ++c) {
            const double acc2 = acc + double(c) * double(c);
            if (acc2 >= t2) continue;
            v[std::size_t(k)] = c;
            rec(k + 1, acc2, std::gcd(g, c < 0 ? -c : c));
        }
        v[std::size_t(k)] = 0;
    };
    rec(0, 0.0, 0);
}

std::vector<std::vector<long long>> primitive_points_list(int n, double T) {
    std::vector<std::vector<long long>> out;
    primitive_points_in_ball(n, T, [&](const std::vector<long long>& v) { out.push_back(v); });
    return out;
}

Eigen::MatrixXd exterior_square(const Eigen::MatrixXd& basis) {
    const int n = int(basis.cols());
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    const int m = int(pairs.size());
    Eigen::MatrixXd out(m, m);
    for (int col = 0; col < m; ++col) {
        const auto [p, q] = pairs[std::size_t(col)];
        for (int row = 0; row < m; ++row) {
            const auto [i, j] = pairs[std::size_t(row)];
            out(row, col) = basis(i, p) * basis(j, q) - basis(j, p) * basis(i, q);
        }
    }
    return out;
}

double lambda_chi(const UnimodularLattice& lat, int ell) {
    if (ell == 1) return shortest_vector(lat).second;
    if (ell == 2 && (lat.dim() == 3 || lat.dim() == 4))
        return shortest_vector(UnimodularLattice(exterior_square(lat.basis()))).second;
    throw validation_error("lambda_chi: unsupported model (need ell=1, or ell=2 with n in {3,4})");
}

} // namespace siegellab::lattice

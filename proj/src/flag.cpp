#include "siegellab/flag.hpp"

#include "siegellab/lattice.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <set>

namespace siegellab::flag {

using intmat::IMat;
using intmat::Int;

namespace {
constexpr double kE = 2.718281828459045235360287471352662498;
}

GrassmannModel GrassmannModel::make(int ell, int n) {
    if (ell < 1 || ell >= n || n < 2)
        throw validation_error("GrassmannModel requires 1 <= ell < n");
    if (n > 8) throw validation_error("GrassmannModel supports n <= 8");
    return GrassmannModel{ell, n};
}

int GrassmannModel::dim_V() const {
    long long b = 1;
    for (int i = 0; i < ell; ++i) b = b * (n - i) / (i + 1);
    return int(b);
}

std::pair<long long, long long> GrassmannModel::beta_rational() const {
    long long num = n, den = d();
    long long g = std::gcd(num, den);
    return {num / g, den / g};
}

const std::vector<std::vector<int>>& subsets(int n, int ell) {
    static std::map<std::pair<int, int>, std::vector<std::vector<int>>> cache;
    auto key = std::make_pair(n, ell);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<std::vector<int>> out;
    std::vector<int> s(std::size_t(ell));
    for (int i = 0; i < ell; ++i) s[std::size_t(i)] = i;
    while (true) {
        out.push_back(s);
        int i = ell - 1;
        while (i >= 0 && s[std::size_t(i)] == n - ell + i) --i;
        if (i < 0) break;
        ++s[std::size_t(i)];
        for (int j = i + 1; j < ell; ++j) s[std::size_t(j)] = s[std::size_t(j - 1)] + 1;
    }
    return cache.emplace(key, std::move(out)).first->second;
}

int subset_index(int n, int ell, const std::vector<int>& sorted_subset) {
    const auto& all = subsets(n, ell);
    auto it = std::lower_bound(all.begin(), all.end(), sorted_subset);
    if (it == all.end() || *it != sorted_subset)
        throw validation_error("subset_index: not a valid subset");
    return int(it - all.begin());
}

std::vector<Int> plucker_embed(const IMat& rows) {
    if (intmat::rank(rows) != rows.rows())
        throw validation_error("plucker_embed: matrix rank below ell");
    return intmat::minors(rows);
}

namespace {

// quadratic Pluecker relation check; only Gr(2,4) has a nontrivial one among
// the supported models
bool plucker_relations_hold(const GrassmannModel& m, const std::vector<Int>& p) {
    if (m.ell == 2 && m.n == 4)
        return intmat::mul(p[0], p[5]) - intmat::mul(p[1], p[4]) + intmat::mul(p[2], p[3]) == 0;
    return true;
}

void sign_canonicalize(std::vector<Int>& p) {
    for (Int x : p) {
        if (x > 0) return;
        if (x < 0) {
            for (auto& y : p) y = -y;
            return;
        }
    }
}

double norm_of(const std::vector<Int>& p) {
    double s = 0.0;
    for (Int x : p) s += double(x) * double(x);
    return std::sqrt(s);
}

} // namespace

RationalSubspace RationalSubspace::from_rows(const GrassmannModel& model, const IMat& rows) {
    if (rows.rows() != model.ell || rows.cols() != model.n)
        throw validation_error("RationalSubspace: shape mismatch");
    RationalSubspace v;
    v.model = model;
    v.basis_hnf = intmat::saturate_rowspace(rows);
    if (v.basis_hnf.rows() != model.ell)
        throw validation_error("RationalSubspace: rows do not span rank ell");
    v.plucker = plucker_embed(v.basis_hnf);
    const Int g = intmat::content(v.plucker);
    if (g != 1)
        throw std::logic_error("saturated subspace produced imprimitive Pluecker vector");
    sign_canonicalize(v.plucker);
    if (!plucker_relations_hold(model, v.plucker))
        throw std::logic_error("Pluecker relations violated");
    v.height = norm_of(v.plucker);
    return v;
}

double height(const RationalSubspace& v) { return v.height; }

Eigen::VectorXd FlagPoint::plucker() const {
    ConeVector cv = ConeVector::from_rows(model, frame);
    return cv.plucker;
}

ConeVector ConeVector::from_rows(const GrassmannModel& model, const Eigen::MatrixXd& rows) {
    if (rows.rows() != model.ell || rows.cols() != model.n)
        throw validation_error("ConeVector: shape mismatch");
    const auto& subs = subsets(model.n, model.ell);
    ConeVector v;
    v.model = model;
    v.plucker.resize(long(subs.size()));
    Eigen::MatrixXd block(model.ell, model.ell);
    for (std::size_t s = 0; s < subs.size(); ++s) {
        for (int r = 0; r < model.ell; ++r)
            for (int c = 0; c < model.ell; ++c) block(r, c) = rows(r, subs[s][std::size_t(c)]);
        v.plucker[long(s)] = block.determinant();
    }
    return v;
}

ConeVector ConeVector::from_chart(const GrassmannModel& model, const Eigen::MatrixXd& u, double s) {
    if (u.rows() != model.ell || u.cols() != model.n - model.ell)
        throw validation_error("from_chart: chart matrix shape mismatch");
    Eigen::MatrixXd rows(model.ell, model.n);
    rows << Eigen::MatrixXd::Identity(model.ell, model.ell), u;
    ConeVector v = from_rows(model, rows);
    v.plucker *= s;
    return v;
}

double distance_plucker(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const double na = a.norm(), nb = b.norm();
    if (!(na > 0.0) || !(nb > 0.0)) throw validation_error("distance: zero vector");
    const double dot = a.dot(b) / (na * nb);
    const double c = std::min(1.0, std::abs(dot));
    if (c < 0.99) return std::acos(c);
    // small-angle branch through the orthogonal component
    Eigen::VectorXd perp = a / na - (dot) * (b / nb);
    return std::asin(std::min(1.0, perp.norm()));
}

double distance(const FlagPoint& a, const FlagPoint& b) {
    if (!(a.model == b.model)) throw validation_error("distance: model mismatch");
    return distance_plucker(a.plucker(), b.plucker());
}

double distance(const ConeVector& a, const ConeVector& b) {
    if (!(a.model == b.model)) throw validation_error("distance: model mismatch");
    return distance_plucker(a.plucker, b.plucker);
}

double distance_to_base(const ConeVector& v) {
    const double norm = v.plucker.norm();
    if (!(norm > 0.0)) throw validation_error("distance: zero vector");
    const double c = std::min(1.0, std::abs(v.plucker[0]) / norm);
    if (c < 0.99) return std::acos(c);
    // perpendicular part summed directly (no cancellation at tiny angles)
    const double perp = v.plucker.tail(v.plucker.size() - 1).norm();
    return std::asin(std::min(1.0, perp / norm));
}

ConeCoords cone_coords(const ConeVector& v) {
    const GrassmannModel& m = v.model;
    const double top = v.plucker[0];
    if (std::abs(top) < 1e-12 * (1.0 + v.plucker.norm()))
        throw validation_error("cone_coords: outside chart (vanishing top minor)");
    ConeCoords cc;
    cc.vplus = top;
    cc.uminus.resize(m.ell, m.n - m.ell);
    // row basis M with M1 = top * I: row r, column ell+j carries the minor with
    // column r of the top block replaced by column ell+j; moving that column to
    // its sorted slot costs (ell-1-r) transpositions.
    for (int r = 0; r < m.ell; ++r) {
        std::vector<int> sub;
        for (int i = 0; i < m.ell; ++i)
            if (i != r) sub.push_back(i);
        for (int j = 0; j < m.n - m.ell; ++j) {
            std::vector<int> s = sub;
            s.push_back(m.ell + j);
            const double sign = ((m.ell - 1 - r) % 2 == 0) ? 1.0 : -1.0;
            cc.uminus(r, j) = sign * v.plucker[subset_index(m.n, m.ell, s)] / top;
        }
    }
    cc.uminus_norm = cc.uminus.norm();
    return cc;
}

Eigen::MatrixXd diag_flow(const GrassmannModel& model, double y) {
    if (!(y > 0.0)) throw validation_error("diag_flow: y > 0 required");
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(model.n, model.n);
    const double contract = std::pow(y, -double(model.n - model.ell) / double(model.n));
    const double expand = std::pow(y, double(model.ell) / double(model.n));
    for (int i = 0; i < model.n; ++i) a(i, i) = (i < model.ell) ? contract : expand;
    return a;
}

Eigen::VectorXd diag_flow_on_V(const GrassmannModel& model, double y) {
    const auto& subs = subsets(model.n, model.ell);
    Eigen::VectorXd w(long(subs.size()));
    for (std::size_t s = 0; s < subs.size(); ++s) {
        int small = 0;
        for (int i : subs[s])
            if (i < model.ell) ++small;
        const int big = model.ell - small;
        // exponent of y: (-small (n-ell) + big ell) / n
        const double expo = (-double(small) * (model.n - model.ell) + double(big) * model.ell) /
                            double(model.n);
        w[long(s)] = std::pow(y, expo);
    }
    return w;
}

ConeVector flow(const ConeVector& v, double y) {
    ConeVector out = v;
    out.plucker = diag_flow_on_V(v.model, y).cwiseProduct(v.plucker);
    return out;
}

Eigen::MatrixXd exterior_power(const Eigen::MatrixXd& g, int ell) {
    const int n = int(g.cols());
    const auto& subs = subsets(n, ell);
    const int m = int(subs.size());
    Eigen::MatrixXd out(m, m);
    Eigen::MatrixXd block(ell, ell);
    for (int col = 0; col < m; ++col)
        for (int row = 0; row < m; ++row) {
            for (int r = 0; r < ell; ++r)
                for (int c = 0; c < ell; ++c)
                    block(r, c) = g(subs[std::size_t(row)][std::size_t(r)],
                                    subs[std::size_t(col)][std::size_t(c)]);
            out(row, col) = block.determinant();
        }
    return out;
}

RegionSpec RegionSpec::E(const GrassmannModel& m, double T, double c) {
    if (!(T >= 1.0)) throw validation_error("RegionSpec: T >= 1 required");
    return {Kind::E, m, T, c, 1, 8.0};
}
RegionSpec RegionSpec::Eplus(const GrassmannModel& m, double T, double c) {
    if (!(T >= 1.0)) throw validation_error("RegionSpec: T >= 1 required");
    return {Kind::Eplus, m, T, c, 1, 8.0};
}
RegionSpec RegionSpec::F(const GrassmannModel& m, double c) {
    return {Kind::F, m, 1.0, c, 1, 8.0};
}
RegionSpec RegionSpec::Q(const GrassmannModel& m, int ell_index, double C0) {
    if (ell_index < 1) throw validation_error("RegionSpec: ell_index >= 1 required");
    return {Kind::Q, m, 1.0, 1.0, ell_index, C0};
}

bool region_contains(const RegionSpec& spec, const ConeVector& v) {
    if (!(spec.model == v.model)) throw validation_error("region_contains: model mismatch");
    const double beta = spec.model.beta();
    switch (spec.kind) {
        case RegionSpec::Kind::E: {
            const double norm = v.plucker.norm();
            if (!(norm >= 1.0 && norm < spec.T)) return false;
            return distance_to_base(v) < spec.c * std::pow(norm, -beta);
        }
        case RegionSpec::Kind::Eplus:
        case RegionSpec::Kind::F: {
            const double splus = std::abs(v.vplus());
            const double hi = (spec.kind == RegionSpec::Kind::F) ? kE : spec.c * spec.T;
            if (!(splus >= 1.0 && splus < hi)) return false;
            const ConeCoords cc = cone_coords(v);
            return cc.uminus_norm < spec.c * std::pow(splus, -beta);
        }
        case RegionSpec::Kind::Q:
            return v.plucker.norm() <= spec.C0 * double(spec.ell_index);
    }
    return false;
}

std::optional<int> cell_index(const GrassmannModel& model, double c, const ConeVector& v) {
    const double splus = std::abs(v.vplus());
    if (!(splus >= 1.0)) return std::nullopt;
    {
        const ConeCoords cc = cone_coords(v);
        if (!(cc.uminus_norm < c * std::pow(splus, -model.beta()))) return std::nullopt;
    }
    const double beta = model.beta();
    const int i0 = int(std::floor(std::log(splus)));
    // boundary rounding can push the floor off by one; verify with the flow
    for (int i : {i0, i0 - 1, i0 + 1}) {
        if (i < 0) continue;
        if (region_contains(RegionSpec::F(model, c), flow(v, std::exp(beta * double(i)))))
            return i;
    }
    return std::nullopt;
}

double sandwich_c_hat(const GrassmannModel& model, int ell_index, double C0) {
    const double beta = model.beta();
    return std::pow(1.0 + C0 * std::pow(double(ell_index), -beta), -(1.0 + beta));
}

namespace {

// (1,n): primitive vectors with first nonzero coordinate positive, norm < T.
std::vector<RationalSubspace> enumerate_lines(const GrassmannModel& model, double T) {
    std::vector<RationalSubspace> out;
    const double t2 = T * T;
    std::vector<long long> v(std::size_t(model.n), 0);
    std::function<void(int, double, long long, bool)> rec =
        [&](int k, double acc, long long g, bool lead_zero) {
            if (k == model.n) {
                if (g == 1) {
                    IMat rows(1, model.n);
                    for (int i = 0; i < model.n; ++i) rows(0, i) = v[std::size_t(i)];
                    out.push_back(RationalSubspace::from_rows(model, rows));
                }
                return;
            }
            const long long b = llround(std::floor(std::sqrt(std::max(0.0, t2 - acc))));
            const long long lo = lead_zero ? 0 : -b;   // canonical sign
            for (long long c = lo; c <= b; ++c) {
                const double acc2 = acc + double(c) * double(c);
                if (acc2 >= t2) continue;
                v[std::size_t(k)] = c;
                rec(k + 1, acc2, std::gcd(g, c < 0 ? -c : c), lead_zero && c == 0);
            }
            v[std::size_t(k)] = 0;
        };
    rec(0, 0.0, 0, true);
    return out;
}

// (n-1,n): hyperplanes from primitive normal vectors; H(V) = ||normal||.
std::vector<RationalSubspace> enumerate_hyperplanes(const GrassmannModel& model, double T) {
    GrassmannModel dual = GrassmannModel::make(1, model.n);
    std::vector<RationalSubspace> out;
    for (const auto& line : enumerate_lines(dual, T)) {
        IMat normal(1, model.n);
        for (int i = 0; i < model.n; ++i) normal(0, i) = line.basis_hnf(0, i);
        IMat basis = intmat::kernel_basis(normal);
        RationalSubspace v = RationalSubspace::from_rows(model, basis);
        // duality: |plucker(V)| is the normal up to alternating signs
        Int n2 = 0, p2 = 0;
        for (int i = 0; i < model.n; ++i) n2 = intmat::add(n2, intmat::mul(normal(0, i), normal(0, i)));
        for (Int p : v.plucker) p2 = intmat::add(p2, intmat::mul(p, p));
        if (n2 != p2) throw std::logic_error("hyperplane duality norm mismatch");
        out.push_back(std::move(v));
    }
    return out;
}

// Unimodular completion: integer matrix B, det +-1, with B.row(0) == v1.
IMat complete_primitive_to_basis(const std::vector<Int>& v1) {
    const int n = int(v1.size());
    std::vector<Int> r = v1;
    IMat w(n, n);
    for (int i = 0; i < n; ++i) w(i, i) = 1;
    // column ops on r, tracked as inverse row ops on w
    while (true) {
        int nz = 0, piv = -1;
        for (int j = 0; j < n; ++j)
            if (r[std::size_t(j)] != 0) {
                ++nz;
                if (piv < 0 || std::abs(r[std::size_t(j)]) < std::abs(r[std::size_t(piv)])) piv = j;
            }
        if (nz == 0) throw validation_error("cannot complete zero vector");
        if (nz == 1) {
            if (r[std::size_t(piv)] < 0) {
                r[std::size_t(piv)] = -r[std::size_t(piv)];
                w.negate_row(piv);
            }
            if (piv != 0) {
                std::swap(r[std::size_t(piv)], r[std::size_t(0)]);
                w.swap_rows(piv, 0);
            }
            break;
        }
        for (int j = 0; j < n; ++j) {
            if (j == piv || r[std::size_t(j)] == 0) continue;
            const Int q = r[std::size_t(j)] / r[std::size_t(piv)];
            r[std::size_t(j)] -= q * r[std::size_t(piv)];
            // col_j -= q col_piv on the transform means row_piv += q row_j here
            for (int cidx = 0; cidx < n; ++cidx)
                w(piv, cidx) = intmat::add(w(piv, cidx), intmat::mul(q, w(j, cidx)));
        }
    }
    if (r[0] != 1) throw std::logic_error("completion did not reach gcd one");
    for (int j = 0; j < n; ++j)
        if (w(0, j) != v1[std::size_t(j)]) throw std::logic_error("completion lost v1");
    return w;
}

struct PluckerKey {
    std::array<Int, 6> p;
    bool operator<(const PluckerKey& o) const { return p < o.p; }
};

// (2,4): every saturated plane of covolume H < T has a shortest vector v1 with
// ||v1||^2 <= gamma H (gamma = 2/sqrt(3)) and a second basis vector whose image
// in Z^4 / Z v1 has quotient norm H / ||v1|| < T / ||v1||, so the double scan
// below reaches every plane at least once; duplicates collapse on the
// primitive Pluecker key.
std::vector<RationalSubspace> enumerate_planes_2_4(const GrassmannModel& model, double T) {
    const double gamma = 2.0 / std::sqrt(3.0);
    const double v1cap = gamma * T * (1.0 + 1e-12);
    std::set<PluckerKey> seen;
    std::vector<RationalSubspace> out;

    std::vector<std::vector<long long>> v1s;
    primitive_points_in_ball(4, std::sqrt(v1cap) * (1 + 1e-12), [&](const std::vector<long long>& v) {
        for (long long c : v) {
            if (c > 0) { v1s.push_back(v); return; }   // canonical sign
            if (c < 0) return;
        }
    });

    const std::array<std::pair<int, int>, 6> pairs{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
    for (const auto& v1ll : v1s) {
        std::vector<Int> v1(v1ll.begin(), v1ll.end());
        double n1sq = 0;
        for (Int c : v1) n1sq += double(c) * double(c);
        if (n1sq > v1cap) continue;

        IMat basis = complete_primitive_to_basis(v1);
        // Gram of the projections of rows 1..3 onto v1-perp
        Eigen::Matrix3d gq;
        Eigen::Vector4d v1d;
        for (int i = 0; i < 4; ++i) v1d[i] = double(v1[std::size_t(i)]);
        std::array<Eigen::Vector4d, 3> proj;
        for (int i = 0; i < 3; ++i) {
            Eigen::Vector4d b;
            for (int j = 0; j < 4; ++j) b[j] = double(basis(i + 1, j));
            proj[std::size_t(i)] = b - (b.dot(v1d) / n1sq) * v1d;
        }
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) gq(i, j) = proj[std::size_t(i)].dot(proj[std::size_t(j)]);

        Eigen::LLT<Eigen::Matrix3d> llt(gq);
        Eigen::Matrix3d chol = llt.matrixU();
        const double qradius = T / std::sqrt(n1sq) * (1.0 + 1e-9);

        lattice::enumerate_in_ball(chol, qradius, [&](const std::vector<long long>& cf,
                                                      const Eigen::VectorXd&) {
            std::array<Int, 4> v2{};
            for (int j = 0; j < 4; ++j)
                for (int i = 0; i < 3; ++i)
                    v2[std::size_t(j)] += Int(cf[std::size_t(i)]) * basis(i + 1, j);
            PluckerKey key{};
            for (std::size_t t = 0; t < 6; ++t) {
                auto [i, j] = pairs[t];
                key.p[t] = intmat::sub(intmat::mul(v1[std::size_t(i)], v2[std::size_t(j)]),
                                       intmat::mul(v1[std::size_t(j)], v2[std::size_t(i)]));
            }
            Int g = 0;
            for (Int x : key.p) g = std::gcd(g, x < 0 ? -x : x);
            if (g == 0) return;
            double h2 = 0;
            for (auto& x : key.p) {
                x /= g;
                h2 += double(x) * double(x);
            }
            if (!(h2 < T * T)) return;
            for (auto& x : key.p) {
                if (x > 0) break;
                if (x < 0) {
                    for (auto& y : key.p) y = -y;
                    break;
                }
            }
            if (!seen.insert(key).second) return;
            IMat rows(2, 4);
            for (int j = 0; j < 4; ++j) {
                rows(0, j) = v1[std::size_t(j)];
                rows(1, j) = v2[std::size_t(j)];
            }
            RationalSubspace sub = RationalSubspace::from_rows(model, rows);
            for (std::size_t t = 0; t < 6; ++t)
                if (sub.plucker[t] != key.p[t])
                    throw std::logic_error("plane canonicalization mismatch");
            out.push_back(std::move(sub));
        });
    }
    std::sort(out.begin(), out.end(), [](const RationalSubspace& a, const RationalSubspace& b) {
        return a.plucker < b.plucker;
    });
    return out;
}

} // namespace

std::vector<RationalSubspace> enumerate_rational_points(const GrassmannModel& model, double T) {
    if (!(T >= 1.0)) throw validation_error("enumerate_rational_points: T >= 1 required");
    if (model.ell == 1 && model.n <= 6) return enumerate_lines(model, T);
    if (model.ell == model.n - 1 && model.n <= 6) return enumerate_hyperplanes(model, T);
    if (model.ell == 2 && model.n == 4) return enumerate_planes_2_4(model, T);
    throw validation_error("enumerate_rational_points: unsupported model (" +
                           std::to_string(model.ell) + "," + std::to_string(model.n) + ")");
}

std::vector<std::vector<Int>> primitive_cone_points(const GrassmannModel& model, double T) {
    std::vector<std::vector<Int>> out;
    if (model.ell == 1 || model.ell == model.n - 1) {
        lattice::primitive_points_in_ball(model.dim_V(), T, [&](const std::vector<long long>& v) {
            out.emplace_back(v.begin(), v.end());
        });
        return out;
    }
    if (model.ell == 2 && model.n == 4) {
        // p in Z^6, ||p|| < T, p0 p5 - p1 p4 + p2 p3 = 0, gcd 1
        const double t2 = T * T;
        const long long b = llround(std::ceil(T));
        std::vector<Int> p(6);
        for (p[0] = -b; p[0] <= b; ++p[0]) {
            const double a0 = double(p[0]) * double(p[0]);
            if (a0 >= t2) continue;
            for (p[1] = -b; p[1] <= b; ++p[1]) {
                const double a1 = a0 + double(p[1]) * double(p[1]);
                if (a1 >= t2) continue;
                for (p[2] = -b; p[2] <= b; ++p[2]) {
                    const double a2 = a1 + double(p[2]) * double(p[2]);
                    if (a2 >= t2) continue;
                    for (p[3] = -b; p[3] <= b; ++p[3]) {
                        const double a3 = a2 + double(p[3]) * double(p[3]);
                        if (a3 >= t2) continue;
                        for (p[4] = -b; p[4] <= b; ++p[4]) {
                            const double a4 = a3 + double(p[4]) * double(p[4]);
                            if (a4 >= t2) continue;
                            for (p[5] = -b; p[5] <= b; ++p[5]) {
                                if (a4 + double(p[5]) * double(p[5]) >= t2) continue;
                                if (p[0] * p[5] - p[1] * p[4] + p[2] * p[3] != 0) continue;
                                Int g = 0;
                                for (Int x : p) g = std::gcd(g, x < 0 ? -x : x);
                                if (g == 1) out.push_back(p);
                            }
                        }
                    }
                }
            }
        }
        return out;
    }
    throw validation_error("primitive_cone_points: unsupported model");
}

FlagPoint sample_uniform_point(const GrassmannModel& model, rng::Stream& stream) {
    FlagPoint x;
    x.model = model;
    x.frame.resize(model.ell, model.n);
    while (true) {
        for (int i = 0; i < model.ell; ++i)
            for (int j = 0; j < model.n; ++j) x.frame(i, j) = stream.normal();
        bool ok = true;
        for (int i = 0; i < model.ell && ok; ++i) {
            for (int j = 0; j < i; ++j)
                x.frame.row(i) -= x.frame.row(i).dot(x.frame.row(j)) * x.frame.row(j);
            const double nrm = x.frame.row(i).norm();
            if (nrm < 1e-8) ok = false;
            else x.frame.row(i) /= nrm;
        }
        if (ok) return x;
    }
}

Eigen::MatrixXd section_rotation(const FlagPoint& x) {
    const GrassmannModel& m = x.model;
    if ((x.frame * x.frame.transpose() - Eigen::MatrixXd::Identity(m.ell, m.ell)).norm() > 1e-8)
        throw validation_error("section_rotation: frame rows not orthonormal");
    Eigen::MatrixXd k(m.n, m.n);
    int have = 0;
    for (int i = 0; i < m.ell; ++i) k.col(have++) = x.frame.row(i).transpose();
    for (int seed = 0; seed < m.n && have < m.n; ++seed) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(m.n);
        v[seed] = 1.0;
        for (int j = 0; j < have; ++j) v -= v.dot(k.col(j)) * k.col(j);
        const double nrm = v.norm();
        if (nrm > 1e-8) k.col(have++) = v / nrm;
    }
    if (have < m.n) throw std::logic_error("section_rotation: completion failed");
    if (k.determinant() < 0) k.col(m.n - 1) *= -1.0;
    return k;
}

namespace {

double unit_ball_volume(int d) {
    // V_d = pi^(d/2) / Gamma(d/2 + 1)
    return std::pow(3.14159265358979323846, double(d) / 2.0) / std::tgamma(double(d) / 2.0 + 1.0);
}

double zeta(int n) { return std::riemann_zeta(double(n)); }

double chart_constant(const GrassmannModel& model, bool& absolute) {
    // The chart density of lambda_Xtilde is (const) * s^(n-1) ds du with two
    // sheets; the constant is pinned to 1/zeta(n) by the mean value formula
    // when V_chi(Z) is the full primitive lattice (ell = 1 or n-1).
    if (model.ell == 1 || model.ell == model.n - 1) {
        absolute = true;
        return 1.0 / zeta(model.n);
    }
    absolute = false;
    return 1.0;
}

} // namespace

ConeVolume cone_volume_F(const GrassmannModel& model, double c) {
    bool absolute = false;
    const double C = chart_constant(model, absolute);
    const int d = model.d();
    const double vd = unit_ball_volume(d);
    // fiber volume over s: V_d (c s^-beta)^d; integrate 2 C s^(n-1) * fiber
    // over s in [1, e) by Simpson
    const double beta = model.beta();
    auto f = [&](double s) {
        return 2.0 * C * std::pow(s, double(model.n - 1)) * vd *
               std::pow(c * std::pow(s, -beta), double(d));
    };
    const int steps = 1 << 12;
    const double h = (kE - 1.0) / double(steps);
    double acc = f(1.0) + f(kE);
    for (int i = 1; i < steps; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(1.0 + h * double(i));
    return {acc * h / 3.0, absolute};
}

ConeVolume cone_volume_F_mc(const GrassmannModel& model, double c, long long samples,
                            rng::Stream& stream) {
    bool absolute = false;
    const double C = chart_constant(model, absolute);
    const int d = model.d();
    // hit-or-miss over the chart box [1,e) x [-c,c]^d against the F_c
    // predicate evaluated on actual cone vectors
    const double boxvol = (kE - 1.0) * std::pow(2.0 * c, double(d));
    double acc = 0.0;
    Eigen::MatrixXd u(model.ell, model.n - model.ell);
    const RegionSpec f_region = RegionSpec::F(model, c);
    for (long long k = 0; k < samples; ++k) {
        const double s = stream.uniform(1.0, kE);
        for (int i = 0; i < model.ell; ++i)
            for (int j = 0; j < model.n - model.ell; ++j) u(i, j) = stream.uniform(-c, c);
        const ConeVector v = ConeVector::from_chart(model, u, s);
        if (region_contains(f_region, v)) acc += 2.0 * C * std::pow(s, double(model.n - 1));
    }
    return {acc / double(samples) * boxvol, absolute};
}

ConeVector sample_cone_vector(const GrassmannModel& model, rng::Stream& stream, double T,
                              double c) {
    const double s = std::exp(stream.uniform(0.0, std::log(std::max(T, 1.0 + 1e-9))));
    // u-norm straddles the threshold c s^-beta; direction uniform on the sphere
    const double target = c * std::pow(s, -model.beta()) * stream.uniform(0.0, 1.6);
    Eigen::MatrixXd u(model.ell, model.n - model.ell);
    double nrm = 0.0;
    do {
        for (int i = 0; i < model.ell; ++i)
            for (int j = 0; j < model.n - model.ell; ++j) u(i, j) = stream.normal();
        nrm = u.norm();
    } while (nrm < 1e-12);
    u *= target / nrm;
    const double sign = stream.next_unit() < 0.5 ? -1.0 : 1.0;
    return ConeVector::from_chart(model, u, sign * s);
}

} // namespace siegellab::flag

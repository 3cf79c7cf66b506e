#include "siegellab/rootsys.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace siegellab::rootsys {

using intmat::IMat;
using intmat::Int;

CartanType cartan_type_from_char(char c) {
    switch (c) {
        case 'A': case 'a': return CartanType::A;
        case 'B': case 'b': return CartanType::B;
        case 'C': case 'c': return CartanType::C;
        case 'D': case 'd': return CartanType::D;
        case 'E': case 'e': return CartanType::E;
        case 'F': case 'f': return CartanType::F;
        case 'G': case 'g': return CartanType::G;
        default: throw validation_error(std::string("unknown Cartan type '") + c + "'");
    }
}

int DynkinDiagram::degree(int node) const {
    int d = 0;
    for (const auto& e : edges)
        if (e[0] == node || e[1] == node) ++d;
    return d;
}

bool Root::positive() const {
    for (Int c : coeff)
        if (c < 0) return false;
    return true;
}

int Root::height() const {
    Int h = 0;
    for (Int c : coeff) h += c;
    return int(h);
}

namespace {

void validate_pair(CartanType type, int rank) {
    bool ok = false;
    switch (type) {
        case CartanType::A: ok = rank >= 1; break;
        case CartanType::B: ok = rank >= 2; break;
        case CartanType::C: ok = rank >= 2; break;   // C2 = B2, flagged as alias
        case CartanType::D: ok = rank >= 3; break;   // D3 = A3, flagged as alias
        case CartanType::E: ok = rank >= 6 && rank <= 8; break;
        case CartanType::F: ok = rank == 4; break;
        case CartanType::G: ok = rank == 2; break;
    }
    if (!ok || rank > 9)
        throw validation_error("invalid (type, rank) pair " + std::string(1, char(type)) +
                               std::to_string(rank));
}

IMat make_cartan(CartanType type, int rank) {
    IMat a(rank, rank);
    for (int i = 0; i < rank; ++i) a(i, i) = 2;
    auto simple_link = [&](int i, int j) { a(i, j) = -1; a(j, i) = -1; };
    switch (type) {
        case CartanType::A:
            for (int i = 0; i + 1 < rank; ++i) simple_link(i, i + 1);
            break;
        case CartanType::B:
            for (int i = 0; i + 1 < rank; ++i) simple_link(i, i + 1);
            a(rank - 1, rank - 2) = -2;   // alpha_rank short
            break;
        case CartanType::C:
            for (int i = 0; i + 1 < rank; ++i) simple_link(i, i + 1);
            a(rank - 2, rank - 1) = -2;   // alpha_rank long
            break;
        case CartanType::D:
            // chain 1..rank-2, with both rank-1 and rank attached to rank-2
            for (int i = 0; i < rank - 3; ++i) simple_link(i, i + 1);
            simple_link(rank - 3, rank - 2);
            simple_link(rank - 3, rank - 1);
            break;
        case CartanType::E: {
            // Bourbaki: chain 1-3-4-5-6(-7)(-8), node 2 attached to node 4.
            simple_link(0, 2);
            simple_link(2, 3);
            simple_link(3, 4);
            simple_link(4, 5);
            if (rank >= 7) simple_link(5, 6);
            if (rank == 8) simple_link(6, 7);
            simple_link(1, 3);
            break;
        }
        case CartanType::F:
            simple_link(0, 1);
            simple_link(2, 3);
            a(1, 2) = -2;
            a(2, 1) = -1;
            break;
        case CartanType::G:
            a(0, 1) = -1;
            a(1, 0) = -3;
            break;
    }
    return a;
}

struct RootKey {
    std::vector<Int> v;
    bool operator<(const RootKey& o) const { return v < o.v; }
};

} // namespace

long long classified_weyl_order(CartanType type, int rank) {
    auto fact = [](int n) { long long f = 1; for (int i = 2; i <= n; ++i) f *= i; return f; };
    switch (type) {
        case CartanType::A: return fact(rank + 1);
        case CartanType::B:
        case CartanType::C: return (1LL << rank) * fact(rank);
        case CartanType::D: return (1LL << (rank - 1)) * fact(rank);
        case CartanType::E:
            if (rank == 6) return 51840;
            if (rank == 7) return 2903040;
            return 696729600;
        case CartanType::F: return 1152;
        case CartanType::G: return 12;
    }
    return 0;
}

long long classified_root_count(CartanType type, int rank) {
    switch (type) {
        case CartanType::A: return (long long)rank * (rank + 1);
        case CartanType::B:
        case CartanType::C: return 2LL * rank * rank;
        case CartanType::D: return 2LL * rank * (rank - 1);
        case CartanType::E:
            if (rank == 6) return 72;
            if (rank == 7) return 126;
            return 240;
        case CartanType::F: return 48;
        case CartanType::G: return 12;
    }
    return 0;
}

long long classified_cartan_det(CartanType type, int rank) {
    switch (type) {
        case CartanType::A: return rank + 1;
        case CartanType::B:
        case CartanType::C: return 2;
        case CartanType::D: return 4;
        case CartanType::E: return 9 - rank;
        case CartanType::F:
        case CartanType::G: return 1;
    }
    return 0;
}

int RootDatum::root_index(const std::vector<Int>& coeff) const {
    for (std::size_t i = 0; i < roots.size(); ++i)
        if (roots[i].coeff == coeff) return int(i);
    return -1;
}

IMat RootDatum::refl_on_roots(int i) const {
    const int n = rank();
    IMat m(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) m(r, c) = (r == c) ? 1 : 0;
    for (int c = 0; c < n; ++c) m(i, c) -= diagram.cartan(i, c);
    return m;
}

IMat RootDatum::refl_on_coroots(int i) const {
    const int n = rank();
    IMat m(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) m(r, c) = (r == c) ? 1 : 0;
    for (int c = 0; c < n; ++c) m(i, c) -= diagram.cartan(c, i);
    return m;
}

RootDatum build_root_datum(CartanType type, int rank) {
    validate_pair(type, rank);
    RootDatum datum;
    datum.diagram.type = type;
    datum.diagram.rank = rank;
    datum.diagram.cartan = make_cartan(type, rank);
    datum.diagram.alias_of_larger_family =
        (type == CartanType::D && rank == 3) || (type == CartanType::C && rank == 2);
    for (int i = 0; i < rank; ++i)
        for (int j = i + 1; j < rank; ++j) {
            Int m = datum.diagram.cartan(i, j) * datum.diagram.cartan(j, i);
            if (m != 0) datum.diagram.edges.push_back({i, j, int(m)});
        }

    // Close the simple roots under simple reflections, carrying coroots along:
    // s_j maps the pair (root, coroot) to (s_j root, s_j coroot).
    std::map<RootKey, std::vector<Int>> roots;   // coeff -> coroot coeff
    std::vector<std::vector<Int>> frontier;
    for (int i = 0; i < rank; ++i) {
        std::vector<Int> e(rank, 0);
        e[std::size_t(i)] = 1;
        roots[{e}] = e;
        frontier.push_back(e);
    }
    const auto& cart = datum.diagram.cartan;
    auto refl_root = [&](int j, const std::vector<Int>& v) {
        Int c = 0;
        for (int k = 0; k < rank; ++k) c += cart(j, k) * v[std::size_t(k)];
        auto w = v;
        w[std::size_t(j)] -= c;
        return w;
    };
    auto refl_coroot = [&](int j, const std::vector<Int>& u) {
        Int c = 0;
        for (int k = 0; k < rank; ++k) c += cart(k, j) * u[std::size_t(k)];
        auto w = u;
        w[std::size_t(j)] -= c;
        return w;
    };
    while (!frontier.empty()) {
        std::vector<std::vector<Int>> next;
        for (const auto& v : frontier)
            for (int j = 0; j < rank; ++j) {
                auto v2 = refl_root(j, v);
                if (!roots.count({v2})) {
                    roots[{v2}] = refl_coroot(j, roots[{v}]);
                    next.push_back(v2);
                }
            }
        frontier = std::move(next);
    }
    for (auto& [key, coroot] : roots) datum.roots.push_back({key.v, coroot});
    std::sort(datum.roots.begin(), datum.roots.end(), [](const Root& a, const Root& b) {
        if (a.height() != b.height()) return a.height() < b.height();
        return a.coeff < b.coeff;
    });

    const long long expect = classified_root_count(type, rank);
    if (expect != (long long)datum.roots.size())
        throw std::logic_error("root closure produced wrong count for " +
                               std::string(1, char(type)) + std::to_string(rank));
    if (datum.diagram.cartan_determinant() != classified_cartan_det(type, rank))
        throw std::logic_error("Cartan determinant mismatch");
    datum.weyl_order = classified_weyl_order(type, rank);
    return datum;
}

std::string WeylElement::word_string() const {
    if (word.empty()) return "e";
    std::string s;
    for (std::size_t k = 0; k < word.size(); ++k) {
        if (k) s += ' ';
        s += 's' + std::to_string(word[k] + 1);
    }
    return s;
}

std::vector<WeylElement> enumerate_weyl(const RootDatum& datum, long long cap) {
    if (datum.weyl_order > cap)
        throw resource_guard_error("Weyl enumeration refused: |W| = " +
                                   std::to_string(datum.weyl_order) + " exceeds cap " +
                                   std::to_string(cap));
    const int n = datum.rank();
    std::vector<IMat> s_root(std::size_t(n)), s_coroot(std::size_t(n));
    for (int i = 0; i < n; ++i) {
        s_root[std::size_t(i)] = datum.refl_on_roots(i);
        s_coroot[std::size_t(i)] = datum.refl_on_coroots(i);
    }
    auto matmul = [n](const IMat& a, const IMat& b) {
        IMat c(n, n);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) {
                Int aik = a(i, k);
                if (aik == 0) continue;
                for (int j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
            }
        return c;
    };

    IMat id(n, n);
    for (int i = 0; i < n; ++i) id(i, i) = 1;

    struct Node { IMat m, mc, mc_inv; std::vector<int> word; };
    std::map<std::vector<Int>, std::size_t> seen;
    std::vector<Node> nodes;
    auto key_of = [n](const IMat& m) {
        std::vector<Int> k;
        k.reserve(std::size_t(n) * n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) k.push_back(m(i, j));
        return k;
    };
    nodes.push_back({id, id, id, {}});
    seen[key_of(id)] = 0;
    std::vector<std::size_t> frontier{0};
    while (!frontier.empty()) {
        std::vector<std::size_t> next;
        for (std::size_t idx : frontier)
            for (int j = 0; j < n; ++j) {
                // append: w' = w s_j, so M' = M S_j and (w')^{-1} = s_j w^{-1}
                IMat m2 = matmul(nodes[idx].m, s_root[std::size_t(j)]);
                auto key = key_of(m2);
                if (seen.count(key)) continue;
                Node nd;
                nd.m = std::move(m2);
                nd.mc = matmul(nodes[idx].mc, s_coroot[std::size_t(j)]);
                nd.mc_inv = matmul(s_coroot[std::size_t(j)], nodes[idx].mc_inv);
                nd.word = nodes[idx].word;
                nd.word.push_back(j);
                seen[key] = nodes.size();
                next.push_back(nodes.size());
                nodes.push_back(std::move(nd));
            }
        frontier = std::move(next);
    }
    if ((long long)nodes.size() != datum.weyl_order)
        throw std::logic_error("Weyl closure disagrees with classified order");

    std::sort(nodes.begin(), nodes.end(), [](const Node& a, const Node& b) {
        if (a.word.size() != b.word.size()) return a.word.size() < b.word.size();
        return a.word < b.word;
    });

    std::vector<WeylElement> out;
    out.reserve(nodes.size());
    const int nroots = int(datum.roots.size());
    for (auto& nd : nodes) {
        WeylElement w;
        w.word = std::move(nd.word);
        w.on_roots = std::move(nd.m);
        w.on_coroots = std::move(nd.mc);
        w.on_coroots_inv = std::move(nd.mc_inv);
        w.root_perm.resize(std::size_t(nroots));
        for (int r = 0; r < nroots; ++r) {
            std::vector<Int> img(std::size_t(n), 0);
            for (int i = 0; i < n; ++i) {
                Int acc = 0;
                for (int j = 0; j < n; ++j) acc += w.on_roots(i, j) * datum.roots[std::size_t(r)].coeff[std::size_t(j)];
                img[std::size_t(i)] = acc;
            }
            int t = datum.root_index(img);
            if (t < 0) throw std::logic_error("Weyl element does not permute the root set");
            w.root_perm[std::size_t(r)] = t;
        }
        out.push_back(std::move(w));
    }
    return out;
}

bool is_l1_integrable(const RootDatum& datum, const std::vector<int>& theta) {
    std::set<int> th(theta.begin(), theta.end());
    for (int i : th)
        if (i < 0 || i >= datum.rank()) throw validation_error("theta index out of range");
    return int(th.size()) == datum.rank() - 1;
}

bool is_l1_integrable(const ParabolicChoice& choice) {
    std::vector<int> theta;
    for (int i = 0; i < choice.datum->rank(); ++i)
        if (i != choice.alpha) theta.push_back(i);
    return is_l1_integrable(*choice.datum, theta);
}

bool is_linf_integrable(const ParabolicChoice& choice) {
    return choice.datum->rank() == 1;
}

bool l2_necessary_neighbor_test(const ParabolicChoice& choice) {
    return choice.datum->diagram.degree(choice.alpha) <= 1;
}

namespace {

// Phi_L = {beta > 0} u [theta]: negative roots with zero alpha-coefficient.
bool in_phi_l(const Root& r, int alpha) {
    return r.positive() || r.coeff[std::size_t(alpha)] == 0;
}

} // namespace

L2FullResult l2_necessary_full_test(const ParabolicChoice& choice, long long weyl_cap) {
    const RootDatum& datum = *choice.datum;
    const int n = datum.rank();
    const int alpha = choice.alpha;
    if (alpha < 0 || alpha >= n) throw validation_error("alpha out of range");
    auto weyl = enumerate_weyl(datum, weyl_cap);

    const int nroots = int(datum.roots.size());
    std::vector<char> phi_l(std::size_t(nroots), 0);
    std::vector<int> neg_index(std::size_t(nroots));
    for (int r = 0; r < nroots; ++r) {
        phi_l[std::size_t(r)] = in_phi_l(datum.roots[std::size_t(r)], alpha) ? 1 : 0;
        std::vector<Int> nv = datum.roots[std::size_t(r)].coeff;
        for (auto& x : nv) x = -x;
        neg_index[std::size_t(r)] = datum.root_index(nv);
    }

    for (const auto& w : weyl) {
        // Phi_w = Phi_L cap w(Phi_L): w(Phi_L) = {w.root_perm[r] : r in Phi_L}
        std::vector<char> phi_w(std::size_t(nroots), 0);
        std::vector<char> w_phi_l(std::size_t(nroots), 0);
        for (int r = 0; r < nroots; ++r)
            if (phi_l[std::size_t(r)]) w_phi_l[std::size_t(w.root_perm[std::size_t(r)])] = 1;
        for (int r = 0; r < nroots; ++r) phi_w[std::size_t(r)] = phi_l[std::size_t(r)] && w_phi_l[std::size_t(r)];

        // t_w = ker f1 cap ker f2 with f1 = <pi_alpha, .>, f2 = <w pi_alpha, .>;
        // in coroot coordinates f1 = e_alpha, f2 = row alpha of w^{-1}.
        std::vector<Int> f1(std::size_t(n), 0), f2(std::size_t(n), 0);
        f1[std::size_t(alpha)] = 1;
        for (int j = 0; j < n; ++j) f2[std::size_t(j)] = w.on_coroots_inv(alpha, j);
        IMat functionals = IMat::from_rows({f1, f2});
        const int dim_tw = n - intmat::rank(functionals);

        std::vector<std::vector<Int>> levi_coroots;
        for (int r = 0; r < nroots; ++r) {
            if (!phi_w[std::size_t(r)]) continue;
            int nr = neg_index[std::size_t(r)];
            if (nr < 0 || !phi_w[std::size_t(nr)]) continue;
            const auto& cr = datum.roots[std::size_t(r)].coroot;
            Int p1 = 0, p2 = 0;
            for (int j = 0; j < n; ++j) {
                p1 += f1[std::size_t(j)] * cr[std::size_t(j)];
                p2 += f2[std::size_t(j)] * cr[std::size_t(j)];
            }
            if (p1 != 0 || p2 != 0)
                throw std::logic_error("split L2 model anomaly: Levi coroot outside t_w at w = " +
                                       w.word_string());
            levi_coroots.push_back(cr);
        }
        int levi_rank = levi_coroots.empty() ? 0 : intmat::rank(IMat::from_rows(levi_coroots));
        const int r_w = dim_tw - levi_rank;
        if (r_w < 0) throw std::logic_error("negative character rank");
        if (r_w != 0) return {false, w};
    }
    return {true, std::nullopt};
}

bool reflection_levi_inclusion_check(const ParabolicChoice& choice) {
    const RootDatum& datum = *choice.datum;
    const int n = datum.rank();
    const int alpha = choice.alpha;
    const int nroots = int(datum.roots.size());

    // B(alpha) = {alpha} u neighbors(alpha)
    std::vector<char> in_b(std::size_t(n), 0);
    in_b[std::size_t(alpha)] = 1;
    for (int j = 0; j < n; ++j)
        if (j != alpha && datum.diagram.cartan(alpha, j) != 0) in_b[std::size_t(j)] = 1;

    // s_alpha as a root permutation
    IMat s = datum.refl_on_roots(alpha);
    auto apply = [&](const std::vector<Int>& v) {
        std::vector<Int> img(std::size_t(n), 0);
        for (int i = 0; i < n; ++i) {
            Int acc = 0;
            for (int j = 0; j < n; ++j) acc += s(i, j) * v[std::size_t(j)];
            img[std::size_t(i)] = acc;
        }
        return img;
    };

    for (int r = 0; r < nroots; ++r) {
        const Root& root = datum.roots[std::size_t(r)];
        if (!in_phi_l(root, alpha)) continue;
        int im = datum.root_index(apply(root.coeff));
        if (im < 0 || !in_phi_l(datum.roots[std::size_t(im)], alpha)) continue;
        // root lies in Phi_{s_alpha}; it must lie in Phi(P_{Delta - B(alpha)})
        if (root.positive()) continue;
        bool supp_ok = true;
        for (int j = 0; j < n; ++j)
            if (in_b[std::size_t(j)] && root.coeff[std::size_t(j)] != 0) supp_ok = false;
        if (!supp_ok) return false;
    }
    return true;
}

} // namespace siegellab::rootsys

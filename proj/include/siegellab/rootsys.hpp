// Split root systems, Dynkin diagrams and Weyl groups, plus the combinatorial
// integrability tests attached to a maximal-parabolic choice: L^1 (maximality),
// L^infty (rank one), the L^2 neighbor condition, and the full L^2 character
// scan over the Weyl group.
//
// Conventions: roots are integer vectors in the simple-root basis, coroots in
// the simple-coroot basis, and cartan(i,j) = <alpha_j, alpha_i^vee>, so the
// simple reflection acts on root coordinates by
//   s_i(v) = v - (sum_j cartan(i,j) v_j) e_i.
#pragma once

#include "siegellab/intmat.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace siegellab::rootsys {

enum class CartanType : char { A = 'A', B = 'B', C = 'C', D = 'D', E = 'E', F = 'F', G = 'G' };

CartanType cartan_type_from_char(char c);

struct DynkinDiagram {
    CartanType type;
    int rank = 0;
    intmat::IMat cartan;                       // cartan(i,j) = <alpha_j, alpha_i^vee>
    std::vector<std::array<int, 3>> edges;     // (i, j, bond multiplicity), i < j, 0-based
    bool alias_of_larger_family = false;       // D3 = A3, C2 = B2

    int degree(int node) const;
    intmat::Int cartan_determinant() const { return intmat::det(cartan); }
};

struct Root {
    std::vector<intmat::Int> coeff;    // simple-root basis
    std::vector<intmat::Int> coroot;   // coroot in simple-coroot basis
    bool positive() const;
    int height() const;
};

struct RootDatum {
    DynkinDiagram diagram;
    std::vector<Root> roots;           // canonical order: (height, lex)
    long long weyl_order = 0;          // classified order of W

    int rank() const { return diagram.rank; }
    int root_index(const std::vector<intmat::Int>& coeff) const;   // -1 if absent
    intmat::IMat refl_on_roots(int i) const;
    intmat::IMat refl_on_coroots(int i) const;
};

// Builds the full datum: root set closed under simple reflections, coroots,
// classified Weyl order. Throws validation_error for invalid (type, rank).
RootDatum build_root_datum(CartanType type, int rank);

struct WeylElement {
    std::vector<int> word;             // reduced word (BFS-shortest)
    intmat::IMat on_roots;             // action on root coordinates
    intmat::IMat on_coroots;
    intmat::IMat on_coroots_inv;
    std::vector<int> root_perm;        // datum.roots index permutation

    int length() const { return int(word.size()); }
    std::string word_string() const;   // "s2 s1 s3" (1-based letters), "e" for identity
};

// Full Weyl group in a canonical (length, word-lex) order. Refuses with
// resource_guard_error when the classified order exceeds `cap`.
std::vector<WeylElement> enumerate_weyl(const RootDatum& datum, long long cap = 1'000'000);

long long classified_weyl_order(CartanType type, int rank);
long long classified_root_count(CartanType type, int rank);
long long classified_cartan_det(CartanType type, int rank);

struct ParabolicChoice {
    const RootDatum* datum = nullptr;
    int alpha = 0;                     // 0-based distinguished simple root
};

// Maximality of P_theta: exactly one simple root removed.
bool is_l1_integrable(const RootDatum& datum, const std::vector<int>& theta);
bool is_l1_integrable(const ParabolicChoice& choice);

// Q-rank one.
bool is_linf_integrable(const ParabolicChoice& choice);

// alpha has at most one neighbor in the diagram.
bool l2_necessary_neighbor_test(const ParabolicChoice& choice);

struct L2FullResult {
    bool holds = false;
    std::optional<WeylElement> witness;   // first failing w in canonical order
};

// Scans all w in W. For each w it forms Phi_w = Phi_L cap w(Phi_L), the Levi
// part Phi_w cap -Phi_w, and t_w = ker(pi_alpha) cap w(ker(pi_alpha)) in the
// rational cocharacter space, and requires
//   r_w = dim t_w - dim span{beta^vee : beta Levi} = 0.
// A Levi coroot outside t_w would mean the split model is wrong for the case;
// that surfaces as a diagnostic error instead of being patched over.
L2FullResult l2_necessary_full_test(const ParabolicChoice& choice, long long weyl_cap = 1'000'000);

// Root-set form of the inclusion L cap s_a L s_a^{-1} subset P_{Delta - B(a)}.
bool reflection_levi_inclusion_check(const ParabolicChoice& choice);

} // namespace siegellab::rootsys

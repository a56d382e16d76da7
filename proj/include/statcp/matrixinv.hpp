#pragma once

#include "statcp/model.hpp"

#include <vector>

namespace statcp {

// Symbolic rational templates for the inverse of an n x n matrix of
// variables: b_ij = num_ij / det, where det and every numerator are signed
// sums of entry monomials. Substituting a nonsingular numeric matrix yields
// its exact inverse.
struct MatrixTemplates {
    struct Monomial {
        double sign;                              // +1 / -1
        std::vector<std::pair<int, int>> factors; // entry indices (i, j)
    };
    using Poly = std::vector<Monomial>;

    int n = 0;
    Poly det;
    std::vector<std::vector<Poly>> num; // numerator of b_ij

    static double eval(const Poly& p, const std::vector<std::vector<double>>& a);
};

inline constexpr int kMatrixNMax = 4;
inline constexpr double kDetMin = 1e-12; // |det| >= kDetMin, else infeasible

MatrixTemplates symbolic_inverse(int n);

// Posts B = A^{-1}: for each entry, b_ij * det(A) = num_ij, plus
// det(A)^2 >= kDetMin^2 so singularity is a crisp infeasibility.
// Returns the variable holding det(A).
VarId post_matrix_inversion(Model& m, const std::vector<std::vector<VarId>>& A,
                            const std::vector<std::vector<VarId>>& B,
                            double det_lo = -1e12, double det_hi = 1e12);

} // namespace statcp
